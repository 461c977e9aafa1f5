use alloc::{vec, vec::Vec};
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::C64;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn from_fn<F>(dim: usize, mut f: F) -> Self
    where F: FnMut(usize, usize) -> C64
    {
        let mut data = Vec::with_capacity(dim * dim);
        for n in 0..dim {
            for m in 0..dim {
                data.push(f(n, m));
            }
        }
        Self { dim, data }
    }

    /// Returns `None` unless `data.len() == dim * dim`.
    pub fn from_vec(dim: usize, data: Vec<C64>) -> Option<Self> {
        (data.len() == dim * dim).then_some(Self { dim, data })
    }

    /// `|u><v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        debug_assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |n, m| u[n] * v[m].conj())
    }

    pub fn dim(&self) -> usize { self.dim }

    pub fn as_slice(&self) -> &[C64] { &self.data }

    pub fn row(&self, n: usize) -> &[C64] {
        &self.data[n * self.dim..(n + 1) * self.dim]
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|n| self[(n, n)]).sum()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|n| self[(n, n)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |n, m| self[(m, n)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    /// `max_{n,m} |A_nm - conj(A_mn)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut err: f64 = 0.0;
        for n in 0..self.dim {
            for m in n..self.dim {
                err = err.max((self[(n, m)] - self[(m, n)].conj()).norm());
            }
        }
        err
    }

    /// `sum |A_nm|^2`, which is `Tr A^2` for Hermitian `A`.
    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `A v`.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.dim, v.len(), "dimension mismatch");
        (0..self.dim)
            .map(|n| self.row(n).iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    /// `<u|A|v>`.
    pub fn sandwich(&self, u: &[C64], v: &[C64]) -> C64 {
        let av = self.apply(v);
        u.iter().zip(&av).map(|(a, b)| a.conj() * b).sum()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (n, m): (usize, usize)) -> &C64 {
        &self.data[n * self.dim + m]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (n, m): (usize, usize)) -> &mut C64 {
        &mut self.data[n * self.dim + m]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let d = self.dim;
        let mut out = CMatrix::zeros(d);
        for n in 0..d {
            for k in 0..d {
                let a = self[(n, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for m in 0..d {
                    out.data[n * d + m] += a * rhs[(k, m)];
                }
            }
        }
        out
    }
}

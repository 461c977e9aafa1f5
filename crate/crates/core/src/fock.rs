//! Truncated Fock-space states of the cavity field and the 2x2 atomic state.

use alloc::vec::Vec;

use crate::{
    error::{Error, Result},
    matrix::CMatrix,
    C64,
};

/// Entrywise tolerance on `rho_nm - conj(rho_mn)`.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Field density matrix over `|0>..|N_max>`; entry `(n, m)` is `<n|rho|m>`.
///
/// The trace may fall short of one by the probability that was cut off by the
/// truncation; it is never renormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    rho: CMatrix,
}

impl FieldState {
    /// Wraps a matrix without checking it; see [`FieldState::validate`].
    pub fn from_matrix(rho: CMatrix) -> Self {
        Self { rho }
    }

    pub fn from_ket(ket: &FieldKet) -> Self {
        Self { rho: CMatrix::outer(&ket.amps, &ket.amps) }
    }

    /// `|n><n|`-diagonal state built from populations.
    pub fn from_populations(pops: &[f64]) -> Self {
        let mut rho = CMatrix::zeros(pops.len());
        for (n, p) in pops.iter().enumerate() {
            rho[(n, n)] = C64::new(*p, 0.0);
        }
        Self { rho }
    }

    pub fn dim(&self) -> usize { self.rho.dim() }

    pub fn n_max(&self) -> usize { self.rho.dim() - 1 }

    pub fn matrix(&self) -> &CMatrix { &self.rho }

    pub fn into_matrix(self) -> CMatrix { self.rho }

    #[inline]
    pub fn get(&self, n: usize, m: usize) -> C64 { self.rho[(n, m)] }

    pub fn trace(&self) -> f64 { self.rho.trace().re }

    /// Probability that is missing from the truncated basis, `1 - Tr rho`.
    pub fn leakage(&self) -> f64 { 1.0 - self.trace() }

    /// Photon-number distribution `P_n = rho_nn`.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|n| self.rho[(n, n)].re).collect()
    }

    /// Checks Hermiticity, non-negative diagonal and
    /// `1 - eps_trunc <= Tr rho <= 1 + 1e-12`.
    pub fn validate(&self, eps_trunc: f64) -> Result<()> {
        let herm = self.rho.hermiticity_error();
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidState { reason: "not Hermitian", value: herm });
        }
        if let Some(p) = self.populations().into_iter().find(|p| *p < -1e-12) {
            return Err(Error::InvalidState { reason: "negative population", value: p });
        }
        let tr = self.trace();
        if tr > 1.0 + 1e-12 || tr < 1.0 - eps_trunc {
            return Err(Error::InvalidState { reason: "trace out of range", value: tr });
        }
        Ok(())
    }
}

/// Pure field state as Fock amplitudes `c_n = <n|psi>`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldKet {
    pub amps: Vec<C64>,
}

impl FieldKet {
    pub fn new(amps: Vec<C64>) -> Self {
        Self { amps }
    }

    pub fn dim(&self) -> usize { self.amps.len() }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|<self|other>|^2`.
    pub fn overlap(&self, other: &Self) -> Result<f64> {
        self.inner(other).map(|z| z.norm_sqr())
    }
}

/// Reduced atomic state in the basis `{|e>, |g>}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomState {
    pub ee: f64,
    pub gg: f64,
    /// `<e|rho_a|g>`; the `g`-`e` entry is its conjugate.
    pub eg: C64,
}

impl AtomState {
    pub fn excited() -> Self {
        Self { ee: 1.0, gg: 0.0, eg: C64::new(0.0, 0.0) }
    }

    pub fn ground() -> Self {
        Self { ee: 0.0, gg: 1.0, eg: C64::new(0.0, 0.0) }
    }

    pub fn ge(&self) -> C64 { self.eg.conj() }

    pub fn trace(&self) -> f64 { self.ee + self.gg }

    /// `<sigma_z> = rho_ee - rho_gg`.
    pub fn inversion(&self) -> f64 { self.ee - self.gg }

    /// `1 - Tr rho_a^2`.
    pub fn linear_entropy(&self) -> f64 {
        1.0 - (self.ee * self.ee + self.gg * self.gg + 2.0 * self.eg.norm_sqr())
    }

    pub fn as_matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(2);
        m[(0, 0)] = C64::new(self.ee, 0.0);
        m[(0, 1)] = self.eg;
        m[(1, 0)] = self.ge();
        m[(1, 1)] = C64::new(self.gg, 0.0);
        m
    }

    /// Trace one to 1e-10, populations inside `[-1e-12, 1 + 1e-12]`.
    pub fn validate(&self) -> Result<()> {
        if (self.trace() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState { reason: "atomic trace", value: self.trace() });
        }
        for p in [self.ee, self.gg] {
            if !(-1e-12..=1.0 + 1e-12).contains(&p) {
                return Err(Error::InvalidState { reason: "atomic population", value: p });
            }
        }
        Ok(())
    }
}

//! Husimi Q and Wigner functions of a truncated field state.
//!
//! The Wigner function is evaluated through the displaced-parity series
//!
//! ```text
//! W(beta) = (2/pi) sum_{n,m} (-1)^n rho_nm <m|D(2 beta)|n>
//! ```
//!
//! where the displacement matrix elements are generated from the associated
//! Laguerre three-term recurrence, carried in normalized form with a running
//! log-scale so neither `e^{-|z|^2/2}` nor `L_n^{(k)}(|z|^2)` can overflow or
//! underflow on their own.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_PI, PI};

use crate::{
    error::{Error, Result},
    fock::FieldState,
    math::{cis, ln_factorials},
    matrix::CMatrix,
    C64,
};

/// Imaginary residue tolerated in Q before the input is declared non-Hermitian.
pub const Q_IMAG_TOL: f64 = 1e-12;
/// Imaginary residue tolerated in W before the input is declared non-Hermitian.
pub const W_IMAG_TOL: f64 = 1e-10;
/// Edge magnitude above which a grid is reported as possibly clipping the state.
pub const EDGE_WARN: f64 = 1e-6;
/// Edge magnitude above which a grid is rejected.
pub const EDGE_ERROR: f64 = 1e-3;

// magnitudes below this are flushed to zero
const LN_TINY: f64 = -690.7755278982137; // ln(1e-300)
const RESCALE: f64 = 1e150;
const LN_RESCALE: f64 = 345.38776394910684; // ln(1e150)

/// Associated Laguerre polynomial `L_n^{(a)}(x)` by the three-term recurrence.
pub fn laguerre(n: usize, a: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Fills `out[j] = sqrt(j!/(j+k)!) r^k e^{-r^2/2} L_j^{(k)}(r^2)` for
/// `j = 0..out.len()`.
fn normalized_laguerre_diagonal(k: usize, r: f64, ln_fact: &[f64], out: &mut [f64]) {
    let x = r * r;
    let kf = k as f64;
    let mut log_scale = kf * libm::log(r) - 0.5 * x - 0.5 * ln_fact[k];
    let mut prev = 0.0;
    let mut cur: f64 = 1.0;
    for (j, slot) in out.iter_mut().enumerate() {
        *slot = if cur == 0.0 || log_scale + libm::log(cur.abs()) < LN_TINY {
            0.0
        } else {
            cur * libm::exp(log_scale)
        };
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + kf - x) * cur - libm::sqrt(jf * (jf + kf)) * prev)
            / libm::sqrt((jf + 1.0) * (jf + kf + 1.0));
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += LN_RESCALE;
        }
    }
}

/// All matrix elements `<m|D(z)|n>` for `m, n < dim`, with reusable buffers.
pub struct DisplacementTable {
    dim: usize,
    ln_fact: Vec<f64>,
    scratch: Vec<f64>,
    /// `elems[n * dim + m] = <m|D(z)|n>` (column-major in the usual sense).
    elems: Vec<C64>,
}

impl DisplacementTable {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            ln_fact: ln_factorials(2 * dim),
            scratch: alloc::vec![0.0; dim],
            elems: alloc::vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn dim(&self) -> usize { self.dim }

    pub fn fill(&mut self, z: C64) {
        let d = self.dim;
        self.elems.iter_mut().for_each(|e| *e = C64::new(0.0, 0.0));
        let r = z.norm();
        if r == 0.0 {
            for n in 0..d {
                self.elems[n * d + n] = C64::new(1.0, 0.0);
            }
            return;
        }
        let theta = z.arg();
        for k in 0..d {
            let len = d - k;
            normalized_laguerre_diagonal(k, r, &self.ln_fact, &mut self.scratch[..len]);
            // m >= n: z^k / |z|^k ; m < n: (-z*)^k / |z|^k
            let up = cis(k as f64 * theta);
            let down = if k % 2 == 0 { up.conj() } else { -up.conj() };
            for j in 0..len {
                let f = self.scratch[j];
                self.elems[j * d + j + k] = up * f;
                if k > 0 {
                    self.elems[(j + k) * d + j] = down * f;
                }
            }
        }
    }

    /// `<m|D(z)|n>` from the last [`DisplacementTable::fill`].
    #[inline]
    pub fn get(&self, m: usize, n: usize) -> C64 {
        self.elems[n * self.dim + m]
    }

    /// The whole table as a matrix with entry `(m, n) = <m|D(z)|n>`.
    pub fn to_matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.dim, |m, n| self.get(m, n))
    }
}

/// Single displacement matrix element `<m|D(z)|n>`, `D(z) = exp(z a^+ - z* a)`.
pub fn displacement_element(m: usize, n: usize, z: C64) -> C64 {
    let r = z.norm();
    if r == 0.0 {
        return if m == n { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
    }
    let (lo, k) = if m >= n { (n, m - n) } else { (m, n - m) };
    let ln_fact = ln_factorials(lo + k + 1);
    let mut buf = alloc::vec![0.0; lo + 1];
    normalized_laguerre_diagonal(k, r, &ln_fact, &mut buf);
    let up = cis(k as f64 * z.arg());
    let phase = if m >= n {
        up
    } else if k % 2 == 0 {
        up.conj()
    } else {
        -up.conj()
    };
    phase * buf[lo]
}

/// Reusable evaluator for Q and W of one field state.
pub struct PhaseSpaceEvaluator<'a> {
    rho: &'a FieldState,
    ln_fact: Vec<f64>,
    amps: Vec<C64>,
    table: DisplacementTable,
}

impl<'a> PhaseSpaceEvaluator<'a> {
    pub fn new(rho: &'a FieldState) -> Self {
        let dim = rho.dim();
        Self {
            rho,
            ln_fact: ln_factorials(dim),
            amps: alloc::vec![C64::new(0.0, 0.0); dim],
            table: DisplacementTable::new(dim),
        }
    }

    /// `Q(beta) = <beta|rho|beta> / pi`.
    pub fn q(&mut self, beta: C64) -> Result<f64> {
        let dim = self.rho.dim();
        let r = beta.norm();
        if r == 0.0 {
            return Ok(self.rho.get(0, 0).re * FRAC_1_PI);
        }
        // <n|beta>
        let ln_r = libm::log(r);
        let phi = beta.arg();
        for n in 0..dim {
            let nf = n as f64;
            let mag = libm::exp(-0.5 * r * r + nf * ln_r - 0.5 * self.ln_fact[n]);
            self.amps[n] = cis(nf * phi) * mag;
        }
        let rho = self.rho.matrix();
        let mut acc = C64::new(0.0, 0.0);
        for n in 0..dim {
            let row = rho.row(n);
            let inner: C64 = row.iter().zip(&self.amps).map(|(r, a)| r * a).sum();
            acc += self.amps[n].conj() * inner;
        }
        if acc.im.abs() > Q_IMAG_TOL {
            return Err(Error::ImaginaryResidue { quantity: "Q", residue: acc.im, limit: Q_IMAG_TOL });
        }
        Ok(acc.re * FRAC_1_PI)
    }

    /// `W(beta) = (2/pi) sum_{n,m} (-1)^n rho_nm <m|D(2 beta)|n>`.
    pub fn w(&mut self, beta: C64) -> Result<f64> {
        let dim = self.rho.dim();
        self.table.fill(beta * 2.0);
        let rho = self.rho.matrix();
        let mut acc = C64::new(0.0, 0.0);
        for n in 0..dim {
            let row = rho.row(n);
            let col = &self.table.elems[n * dim..(n + 1) * dim];
            let mut inner = C64::new(0.0, 0.0);
            for m in 0..dim {
                inner += row[m] * col[m];
            }
            if n % 2 == 0 { acc += inner } else { acc -= inner }
        }
        if acc.im.abs() > W_IMAG_TOL {
            return Err(Error::ImaginaryResidue { quantity: "W", residue: acc.im, limit: W_IMAG_TOL });
        }
        Ok(2.0 * FRAC_1_PI * acc.re)
    }

    pub fn eval(&mut self, kind: PhaseSpaceKind, beta: C64) -> Result<f64> {
        match kind {
            PhaseSpaceKind::Q => self.q(beta),
            PhaseSpaceKind::W => self.w(beta),
        }
    }
}

pub fn q_function(rho: &FieldState, beta: C64) -> Result<f64> {
    PhaseSpaceEvaluator::new(rho).q(beta)
}

pub fn wigner(rho: &FieldState, beta: C64) -> Result<f64> {
    PhaseSpaceEvaluator::new(rho).w(beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseSpaceKind {
    Q,
    W,
}

impl PhaseSpaceKind {
    pub fn symbol(self) -> &'static str {
        match self {
            Self::Q => "Q",
            Self::W => "W",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "Q" | "q" => Some(Self::Q),
            "W" | "w" => Some(Self::W),
            _ => None,
        }
    }
}

/// Rectangular sampling of the complex plane; both axes include their
/// endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub n_re: usize,
    pub im_min: f64,
    pub im_max: f64,
    pub n_im: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::square(9.0, 241)
    }
}

impl GridSpec {
    /// `[-half_width, half_width]^2` with `n` points per axis.
    pub fn square(half_width: f64, n: usize) -> Self {
        Self {
            re_min: -half_width,
            re_max: half_width,
            n_re: n,
            im_min: -half_width,
            im_max: half_width,
            n_im: n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max].iter().all(|v| v.is_finite());
        if !finite || self.re_max <= self.re_min || self.im_max <= self.im_min {
            return Err(Error::InvalidParameter { name: "grid", reason: "ranges must be finite and increasing" });
        }
        if self.n_re < 2 || self.n_im < 2 {
            return Err(Error::InvalidParameter { name: "grid", reason: "need at least 2 points per axis" });
        }
        Ok(())
    }

    pub fn d_re(&self) -> f64 { (self.re_max - self.re_min) / (self.n_re - 1) as f64 }
    pub fn d_im(&self) -> f64 { (self.im_max - self.im_min) / (self.n_im - 1) as f64 }
    pub fn re_at(&self, i: usize) -> f64 { self.re_min + self.d_re() * i as f64 }
    pub fn im_at(&self, j: usize) -> f64 { self.im_min + self.d_im() * j as f64 }
    pub fn point(&self, i: usize, j: usize) -> C64 { C64::new(self.re_at(i), self.im_at(j)) }
    pub fn len(&self) -> usize { self.n_re * self.n_im }
    pub fn is_empty(&self) -> bool { self.len() == 0 }
}

/// Grid of Q or W values at one time. `values` has `n_im` rows (ascending
/// imaginary part) of `n_re` entries (ascending real part).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceGrid {
    pub spec: GridSpec,
    pub kind: PhaseSpaceKind,
    pub time: f64,
    pub values: Vec<f64>,
}

/// Outcome of the boundary check on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeStatus {
    Clean,
    /// Non-negligible magnitude on the boundary, but below the error limit.
    Warn(f64),
}

impl PhaseSpaceGrid {
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.spec.n_re + i]
    }

    /// Riemann-sum approximation of the integral over the grid.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.spec.d_re() * self.spec.d_im()
    }

    pub fn max(&self) -> f64 { self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max) }
    pub fn min(&self) -> f64 { self.values.iter().copied().fold(f64::INFINITY, f64::min) }

    /// Largest `|value|` on the boundary of the grid.
    pub fn edge_magnitude(&self) -> f64 {
        let (nr, ni) = (self.spec.n_re, self.spec.n_im);
        let mut edge: f64 = 0.0;
        for i in 0..nr {
            edge = edge.max(self.at(i, 0).abs()).max(self.at(i, ni - 1).abs());
        }
        for j in 0..ni {
            edge = edge.max(self.at(0, j).abs()).max(self.at(nr - 1, j).abs());
        }
        edge
    }

    pub fn check_edges(&self) -> Result<EdgeStatus> {
        let edge = self.edge_magnitude();
        if edge > EDGE_ERROR {
            Err(Error::GridTooSmall { edge, limit: EDGE_ERROR })
        } else if edge > EDGE_WARN {
            Ok(EdgeStatus::Warn(edge))
        } else {
            Ok(EdgeStatus::Clean)
        }
    }

    /// Strict local maxima (8-neighbourhood) with value above
    /// `fraction * max`, sorted by decreasing value.
    pub fn peaks(&self, fraction: f64) -> Vec<(C64, f64)> {
        let (nr, ni) = (self.spec.n_re, self.spec.n_im);
        let floor = fraction * self.max();
        let mut out = Vec::new();
        for j in 1..ni - 1 {
            for i in 1..nr - 1 {
                let v = self.at(i, j);
                if v <= floor {
                    continue;
                }
                let mut is_peak = true;
                'scan: for dj in [-1i64, 0, 1] {
                    for di in [-1i64, 0, 1] {
                        if di == 0 && dj == 0 {
                            continue;
                        }
                        let w = self.at((i as i64 + di) as usize, (j as i64 + dj) as usize);
                        if w >= v {
                            is_peak = false;
                            break 'scan;
                        }
                    }
                }
                if is_peak {
                    out.push((self.spec.point(i, j), v));
                }
            }
        }
        out.sort_by(|a, b| b.1.total_cmp(&a.1));
        out
    }

    /// `sum_grid W(b) (2/pi) e^{-2|beta - b|^2} dA`, which turns a Wigner
    /// grid into the Q function at `beta`.
    pub fn gaussian_smooth_at(&self, beta: C64) -> f64 {
        let spec = &self.spec;
        let mut acc = 0.0;
        for j in 0..spec.n_im {
            for i in 0..spec.n_re {
                let d = spec.point(i, j) - beta;
                acc += self.at(i, j) * libm::exp(-2.0 * d.norm_sqr());
            }
        }
        acc * 2.0 / PI * spec.d_re() * spec.d_im()
    }
}

/// Values of one grid row (fixed imaginary index `j`).
pub fn eval_row(
    eval: &mut PhaseSpaceEvaluator<'_>,
    spec: &GridSpec,
    kind: PhaseSpaceKind,
    j: usize,
) -> Result<Vec<f64>> {
    (0..spec.n_re).map(|i| eval.eval(kind, spec.point(i, j))).collect()
}

/// Serial evaluation of a whole grid.
pub fn grid_eval(rho: &FieldState, spec: &GridSpec, kind: PhaseSpaceKind, time: f64) -> Result<PhaseSpaceGrid> {
    spec.validate()?;
    let mut eval = PhaseSpaceEvaluator::new(rho);
    let mut values = Vec::with_capacity(spec.len());
    for j in 0..spec.n_im {
        values.extend(eval_row(&mut eval, spec, kind, j)?);
    }
    Ok(PhaseSpaceGrid { spec: *spec, kind, time, values })
}

/// `n_frames` times `start + k (end - start) / n_frames`, `k = 0..n_frames`
/// (the end point itself is excluded).
pub fn frame_times(start: f64, end: f64, n_frames: usize) -> Result<Vec<f64>> {
    if n_frames == 0 {
        return Err(Error::InvalidParameter { name: "n_frames", reason: "must be at least 1" });
    }
    if !(start.is_finite() && end.is_finite() && end >= start) {
        return Err(Error::InvalidParameter { name: "t_span", reason: "must be finite and ordered" });
    }
    Ok((0..n_frames).map(|k| start + (end - start) * k as f64 / n_frames as f64).collect())
}

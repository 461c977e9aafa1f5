//! Constructors for every initial field state used in the experiments.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::{
    error::{Error, Result},
    fock::{FieldKet, FieldState},
    math::{cis, ln_factorials},
    matrix::CMatrix,
    C64,
};

/// Smallest fraction of a coherent/mixture/cat state that must survive the
/// truncation.
pub const MIN_KEPT_TRACE: f64 = 0.99;

/// Extra Fock levels added on top of the bare tail criterion.
pub const TRUNCATION_MARGIN: usize = 20;

/// Coherent-state amplitudes `e^{-|a|^2/2} a^n / sqrt(n!)`, n = 0..=n_max,
/// evaluated in log space.
pub fn coherent_ket(alpha: C64, n_max: usize) -> FieldKet {
    let mut amps = Vec::with_capacity(n_max + 1);
    let r = alpha.norm();
    if r == 0.0 {
        amps.push(C64::new(1.0, 0.0));
        amps.resize(n_max + 1, C64::new(0.0, 0.0));
        return FieldKet::new(amps);
    }
    let ln_fact = ln_factorials(n_max);
    let ln_r = libm::log(r);
    let phi = alpha.arg();
    for (n, lf) in ln_fact.iter().enumerate() {
        let nf = n as f64;
        let mag = libm::exp(-0.5 * r * r + nf * ln_r - 0.5 * lf);
        amps.push(cis(nf * phi) * mag);
    }
    FieldKet::new(amps)
}

fn check_kept(n_max: usize, kept: f64) -> Result<()> {
    if kept < MIN_KEPT_TRACE {
        Err(Error::Truncation { n_max, kept, required: MIN_KEPT_TRACE })
    } else {
        Ok(())
    }
}

fn check_n_max(n_max: usize) -> Result<()> {
    if n_max < 1 {
        return Err(Error::InvalidParameter { name: "n_max", reason: "must be at least 1" });
    }
    Ok(())
}

/// `|alpha><alpha|`.
pub fn coherent_state(alpha: C64, n_max: usize) -> Result<FieldState> {
    check_n_max(n_max)?;
    let ket = coherent_ket(alpha, n_max);
    check_kept(n_max, ket.norm_sqr())?;
    Ok(FieldState::from_ket(&ket))
}

/// Equal-weight statistical mixture `(|alpha><alpha| + |-alpha><-alpha|) / 2`.
/// Entries with `n + m` odd are exactly zero.
pub fn mixture_state(alpha: C64, n_max: usize) -> Result<FieldState> {
    check_n_max(n_max)?;
    let ket = coherent_ket(alpha, n_max);
    check_kept(n_max, ket.norm_sqr())?;
    let c = &ket.amps;
    let rho = CMatrix::from_fn(n_max + 1, |n, m| {
        if (n + m) % 2 == 0 { c[n] * c[m].conj() } else { C64::new(0.0, 0.0) }
    });
    Ok(FieldState::from_matrix(rho))
}

/// Superposition `C^{1/2} (|a> + e^{i theta} |-a>)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatSpec {
    amplitude: C64,
    relative_phase: f64,
}

impl CatSpec {
    /// `relative_phase` is reduced into `[0, 2pi)`.
    pub fn new(amplitude: C64, relative_phase: f64) -> Result<Self> {
        if !(amplitude.re.is_finite() && amplitude.im.is_finite() && relative_phase.is_finite()) {
            return Err(Error::InvalidParameter { name: "cat", reason: "must be finite" });
        }
        let spec = Self { amplitude, relative_phase: crate::math::rem_euclid(relative_phase, TAU) };
        spec.normalization()?;
        Ok(spec)
    }

    pub fn amplitude(&self) -> C64 { self.amplitude }

    pub fn relative_phase(&self) -> f64 { self.relative_phase }

    /// `C = 1 / (2 (1 + e^{-2|a|^2} cos theta))`.
    pub fn normalization(&self) -> Result<f64> {
        let denom = 1.0 + libm::exp(-2.0 * self.amplitude.norm_sqr()) * libm::cos(self.relative_phase);
        if denom < 1e-12 {
            return Err(Error::DegenerateCat {
                amplitude: self.amplitude.norm(),
                theta: self.relative_phase,
            });
        }
        Ok(0.5 / denom)
    }

    /// `e^{i theta}`, exact for the even and odd cats.
    fn phase_factor(&self) -> C64 {
        if self.relative_phase == 0.0 {
            C64::new(1.0, 0.0)
        } else if self.relative_phase == PI {
            C64::new(-1.0, 0.0)
        } else {
            cis(self.relative_phase)
        }
    }
}

pub fn cat_ket(spec: &CatSpec, n_max: usize) -> Result<FieldKet> {
    let norm = libm::sqrt(spec.normalization()?);
    let phase = spec.phase_factor();
    let base = coherent_ket(spec.amplitude, n_max);
    let amps = base
        .amps
        .iter()
        .enumerate()
        .map(|(n, c)| {
            // <n|-a> = (-1)^n <n|a>
            let w = if n % 2 == 0 { C64::new(1.0, 0.0) + phase } else { C64::new(1.0, 0.0) - phase };
            c * w * norm
        })
        .collect();
    Ok(FieldKet::new(amps))
}

pub fn cat_state(spec: &CatSpec, n_max: usize) -> Result<FieldState> {
    check_n_max(n_max)?;
    let ket = cat_ket(spec, n_max)?;
    check_kept(n_max, ket.norm_sqr())?;
    Ok(FieldState::from_ket(&ket))
}

/// `|n><n|`.
pub fn fock_state(n: usize, n_max: usize) -> Result<FieldState> {
    check_n_max(n_max)?;
    if n > n_max {
        return Err(Error::InvalidParameter { name: "n", reason: "Fock level exceeds N_max" });
    }
    let mut pops = alloc::vec![0.0; n_max + 1];
    pops[n] = 1.0;
    Ok(FieldState::from_populations(&pops))
}

/// Thermal state with `P_n = nbar^n / (nbar + 1)^(n+1)`. The neglected tail
/// `(nbar / (nbar + 1))^(N_max + 1)` must stay below `eps_trunc`.
pub fn thermal_state(nbar: f64, n_max: usize, eps_trunc: f64) -> Result<FieldState> {
    check_n_max(n_max)?;
    if !(nbar.is_finite() && nbar >= 0.0) {
        return Err(Error::InvalidParameter { name: "nbar", reason: "must be finite and non-negative" });
    }
    let ratio = nbar / (nbar + 1.0);
    let tail = libm::pow(ratio, (n_max + 1) as f64);
    if tail >= eps_trunc {
        return Err(Error::Truncation { n_max, kept: 1.0 - tail, required: 1.0 - eps_trunc });
    }
    let mut p = 1.0 / (nbar + 1.0);
    let pops: Vec<f64> = (0..=n_max)
        .map(|_| {
            let out = p;
            p *= ratio;
            out
        })
        .collect();
    Ok(FieldState::from_populations(&pops))
}

/// What sets the photon-number tail when picking a truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailModel {
    /// Poisson distribution with the given mean `|alpha|^2`.
    Poisson(f64),
    /// Geometric (thermal) distribution with the given mean.
    Geometric(f64),
}

/// Smallest `N` whose neglected tail `sum_{n > N} P_n` is below `eps_trunc`,
/// plus [`TRUNCATION_MARGIN`].
pub fn choose_truncation(model: TailModel, eps_trunc: f64) -> Result<usize> {
    if !(eps_trunc > 0.0 && eps_trunc < 1.0) {
        return Err(Error::InvalidParameter { name: "eps_trunc", reason: "must lie in (0, 1)" });
    }
    let bare = match model {
        TailModel::Poisson(mean) => poisson_cutoff(mean, eps_trunc)?,
        TailModel::Geometric(mean) => geometric_cutoff(mean, eps_trunc)?,
    };
    Ok(bare + TRUNCATION_MARGIN)
}

fn poisson_cutoff(mean: f64, eps: f64) -> Result<usize> {
    if !(mean.is_finite() && mean >= 0.0) {
        return Err(Error::InvalidParameter { name: "mean", reason: "must be finite and non-negative" });
    }
    if mean == 0.0 {
        return Ok(0);
    }
    // past the mean, P_n decreases monotonically; stop once further terms
    // cannot matter against eps
    let ln_mean = libm::log(mean);
    let mut pops = Vec::new();
    let mut ln_fact = 0.0;
    let mut n = 0usize;
    loop {
        if n > 0 {
            ln_fact += libm::log(n as f64);
        }
        let p = libm::exp(-mean + n as f64 * ln_mean - ln_fact);
        pops.push(p);
        if n as f64 > mean && p < eps * 1e-6 {
            break;
        }
        n += 1;
    }
    let mut tail = 0.0;
    let mut cutoff = pops.len() - 1;
    for k in (0..pops.len()).rev() {
        // tail currently holds sum_{n > k}
        if tail >= eps {
            break;
        }
        cutoff = k;
        tail += pops[k];
    }
    Ok(cutoff)
}

fn geometric_cutoff(mean: f64, eps: f64) -> Result<usize> {
    if !(mean.is_finite() && mean >= 0.0) {
        return Err(Error::InvalidParameter { name: "mean", reason: "must be finite and non-negative" });
    }
    if mean == 0.0 {
        return Ok(0);
    }
    let ratio = mean / (mean + 1.0);
    let mut n = 0usize;
    // tail beyond N is ratio^(N+1)
    while libm::pow(ratio, (n + 1) as f64) >= eps {
        n += 1;
    }
    Ok(n)
}

/// Any of the supported initial field preparations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialField {
    Coherent { alpha: C64 },
    Mixture { alpha: C64 },
    Fock { n: usize },
    Thermal { nbar: f64 },
    Cat(CatSpec),
}

impl InitialField {
    pub fn build(&self, n_max: usize, eps_trunc: f64) -> Result<FieldState> {
        match *self {
            Self::Coherent { alpha } => coherent_state(alpha, n_max),
            Self::Mixture { alpha } => mixture_state(alpha, n_max),
            Self::Fock { n } => fock_state(n, n_max),
            Self::Thermal { nbar } => thermal_state(nbar, n_max, eps_trunc),
            Self::Cat(spec) => cat_state(&spec, n_max),
        }
    }

    /// Truncation chosen from the state's photon statistics.
    pub fn auto_truncation(&self, eps_trunc: f64) -> Result<usize> {
        match *self {
            Self::Coherent { alpha } | Self::Mixture { alpha } => {
                choose_truncation(TailModel::Poisson(alpha.norm_sqr()), eps_trunc)
            }
            Self::Cat(spec) => choose_truncation(TailModel::Poisson(spec.amplitude().norm_sqr()), eps_trunc),
            Self::Thermal { nbar } => choose_truncation(TailModel::Geometric(nbar), eps_trunc),
            Self::Fock { n } => Ok(n + TRUNCATION_MARGIN),
        }
    }

    /// Mean photon number of the preparation (before truncation).
    pub fn mean_photon_number(&self) -> f64 {
        match *self {
            Self::Coherent { alpha } | Self::Mixture { alpha } => alpha.norm_sqr(),
            Self::Fock { n } => n as f64,
            Self::Thermal { nbar } => nbar,
            Self::Cat(spec) => {
                let a2 = spec.amplitude().norm_sqr();
                let e = libm::exp(-2.0 * a2);
                let c = libm::cos(spec.relative_phase());
                a2 * (1.0 - e * c) / (1.0 + e * c)
            }
        }
    }
}

//! Scalar diagnostics of the evolved state and their time series.

use alloc::vec::Vec;

use crate::{
    dynamics::{coefficient_table, evolve_atom, evolve_field},
    error::{Error, Result},
    fock::FieldState,
    params::ModelParams,
};

pub use crate::dynamics::photon_distribution;

/// Samples per revival period used when no explicit grid is requested.
pub const DEFAULT_POINTS_PER_REVIVAL: usize = 2000;

/// `W(t) = sum_n P_n (|A_{n+1}|^2 - |B_{n+1}|^2)` for an initially excited atom.
pub fn atomic_inversion(rho0: &FieldState, t: f64, p: &ModelParams) -> f64 {
    let coef = coefficient_table(rho0.n_max(), t, p);
    coef.iter()
        .enumerate()
        .map(|(n, c)| rho0.get(n, n).re * (c.a.norm_sqr() - c.b.norm_sqr()))
        .sum()
}

/// `zeta = 1 - sum_{n,m} |rho_nm|^2`.
pub fn linear_entropy(rho: &FieldState) -> f64 {
    1.0 - rho.matrix().frobenius_sq()
}

/// `sum_n n rho_nn`.
pub fn mean_photon(rho: &FieldState) -> f64 {
    rho.populations().iter().enumerate().map(|(n, p)| n as f64 * p).sum()
}

/// `F = sum_{n,m} ref_mn rho_nm = Tr(ref rho)`.
///
/// This is the Uhlmann fidelity only when one of the two states is pure.
pub fn field_fidelity(reference: &FieldState, rho: &FieldState) -> Result<f64> {
    if reference.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { left: reference.dim(), right: rho.dim() });
    }
    let a = reference.matrix();
    let b = rho.matrix();
    let mut acc = crate::C64::new(0.0, 0.0);
    for n in 0..rho.dim() {
        for m in 0..rho.dim() {
            acc += a[(m, n)] * b[(n, m)];
        }
    }
    if acc.im.abs() > 1e-10 {
        return Err(Error::ImaginaryResidue { quantity: "fidelity", residue: acc.im, limit: 1e-10 });
    }
    Ok(acc.re)
}

/// Observables that can be tracked over time for an initially excited atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    Inversion,
    FieldEntropy,
    AtomEntropy,
    MeanPhoton,
    /// Overlap with the initial field, `Tr(rho0 rho(t))`.
    InitialFidelity,
}

impl Observable {
    pub fn evaluate(self, rho0: &FieldState, t: f64, p: &ModelParams) -> f64 {
        match self {
            Self::Inversion => atomic_inversion(rho0, t, p),
            Self::FieldEntropy => linear_entropy(&evolve_field(rho0, t, p)),
            Self::AtomEntropy => evolve_atom(rho0, t, p).linear_entropy(),
            Self::MeanPhoton => photon_distribution(rho0, t, p)
                .iter()
                .enumerate()
                .map(|(n, pn)| n as f64 * pn)
                .sum(),
            Self::InitialFidelity => {
                // dimensions agree by construction
                field_fidelity(rho0, &evolve_field(rho0, t, p)).unwrap_or(f64::NAN)
            }
        }
    }
}

/// Values sampled on a strictly increasing time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    times: Vec<f64>,
    revival_time: f64,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, revival_time: f64, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::DimensionMismatch { left: times.len(), right: values.len() });
        }
        if times.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(core::cmp::Ordering::Greater)) {
            return Err(Error::InvalidParameter { name: "times", reason: "must be strictly increasing" });
        }
        if !(revival_time.is_finite() && revival_time > 0.0) {
            return Err(Error::InvalidParameter { name: "revival_time", reason: "must be positive" });
        }
        Ok(Self { times, revival_time, values })
    }

    pub fn times(&self) -> &[f64] { &self.times }
    pub fn values(&self) -> &[f64] { &self.values }
    pub fn revival_time(&self) -> f64 { self.revival_time }
    pub fn len(&self) -> usize { self.times.len() }
    pub fn is_empty(&self) -> bool { self.times.is_empty() }

    pub fn normalized_times(&self) -> impl Iterator<Item = f64> + '_ {
        self.times.iter().map(move |t| t / self.revival_time)
    }

    pub fn min(&self) -> f64 { self.values.iter().copied().fold(f64::INFINITY, f64::min) }
    pub fn max(&self) -> f64 { self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max) }
}

/// `n` uniformly spaced times from `start` to `end` inclusive.
pub fn uniform_times(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![start],
        _ => (0..n).map(|k| start + (end - start) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Serial time series of one observable.
pub fn series(
    quantity: Observable,
    rho0: &FieldState,
    p: &ModelParams,
    times: &[f64],
    revival_time: f64,
) -> Result<TimeSeries> {
    let values = times.iter().map(|&t| quantity.evaluate(rho0, t, p)).collect();
    TimeSeries::new(times.to_vec(), revival_time, values)
}

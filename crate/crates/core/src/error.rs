use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },

    #[error("carrier frequencies inconsistent with detuning: omega_eg - omega_0 = {carrier_detuning}, delta = {detuning}")]
    InconsistentCarriers { carrier_detuning: f64, detuning: f64 },

    /// The requested Fock cutoff throws away too much probability.
    #[error("truncation failure: N_max = {n_max} keeps only {kept} of the state (need {required})")]
    Truncation { n_max: usize, kept: f64, required: f64 },

    #[error("invalid state: {reason} ({value:e})")]
    InvalidState { reason: &'static str, value: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("no finite critical detuning for chi=0")]
    NoCriticalDetuning,

    #[error("revival time diverges (Omega^2 - chi * gamma = {delta_bar})")]
    RevivalDiverges { delta_bar: f64 },

    #[error("dispersive limit undefined for zero detuning")]
    DispersiveUndefined,

    #[error("cat state normalization diverges (|amplitude| = {amplitude}, theta = {theta})")]
    DegenerateCat { amplitude: f64, theta: f64 },

    #[error("{quantity} has imaginary residue {residue:e} (limit {limit:e}); input is not Hermitian")]
    ImaginaryResidue {
        quantity: &'static str,
        residue: f64,
        limit: f64,
    },

    #[error("phase-space grid too small: edge magnitude {edge:e} exceeds {limit:e}")]
    GridTooSmall { edge: f64, limit: f64 },
}

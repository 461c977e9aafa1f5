//! Exact rotating-wave dynamics of a two-level atom coupled to a single cavity
//! mode that also carries a Kerr-like medium.
//!
//! Everything here is a pure function of its inputs and works over a truncated
//! Fock basis `|0>..|N_max>`. Units: `hbar = 1`, and rates are expressed in
//! multiples of the atom-field coupling (which [`ModelParams`] fixes to 1 by
//! default).
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the dense
//! Hamiltonian oracle and the command-line front end live in the `kerrcat`
//! crate.
#![no_std]

extern crate alloc;

pub mod dispersive;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod math;
pub mod matrix;
pub mod observables;
pub mod params;
pub mod periodicity;
pub mod phase_space;
pub mod states;

pub use num_complex::Complex64 as C64;

pub use crate::{
    dynamics::{Coefficients, JointState},
    error::{Error, Result},
    fock::{AtomState, FieldKet, FieldState},
    matrix::CMatrix,
    params::ModelParams,
    phase_space::{GridSpec, PhaseSpaceGrid, PhaseSpaceKind},
    states::CatSpec,
};

/// Default Fock truncation used for the `|alpha| = 5` experiments.
pub const DEFAULT_N_MAX: usize = 128;

/// Default bound on the neglected probability tail.
pub const DEFAULT_EPS_TRUNC: f64 = 1e-12;

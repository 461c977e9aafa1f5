//! File formats, the dense-Hamiltonian oracle, run configuration and the
//! command implementations behind the `kerrcat` binary.

pub mod commands;
pub mod config;
pub mod formats;
pub mod oracle;
pub mod parallel;
pub mod validate;

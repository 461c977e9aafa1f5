//! The `validate` suite: oracle equivalence, unitarity, normalization and
//! the large-detuning and mixture analytics, reported one line per check.

use std::fmt;

use kerrcat_core::{
    dispersive::{dispersive_evolve, dispersive_half_revival_cat, dispersive_vs_exact, mixture_cat_identity, quadratic_phase_identity},
    dynamics::{coefficients, evolve_joint},
    periodicity::{critical_detuning_for, revival_time},
    states::coherent_state,
    ModelParams, C64,
};

use crate::oracle::hamiltonian_oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Below,
    Above,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub bound: Bound,
}

impl Check {
    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, bound: Bound::Below }
    }

    pub fn above(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, bound: Bound::Above }
    }

    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::Below => self.value < self.tolerance,
            Bound::Above => self.value > self.tolerance,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.bound {
            Bound::Below => "<",
            Bound::Above => ">",
        };
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} value={:.6e} tol={rel}{:e}", self.name, self.value, self.tolerance)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool { self.checks.iter().all(Check::passed) }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Fixed `(delta, chi, t)` triples for the oracle comparison, spread over
/// signs, Kerr strengths and times.
pub const ORACLE_CASES: [(f64, f64, f64); 10] = [
    (1.3, 0.07, 3.0),
    (0.0, 0.0, 5.0),
    (-2.4, 0.31, 1.7),
    (4.8, 0.1, 7.5),
    (0.45, 0.4, 2.2),
    (-0.8, 0.02, 9.1),
    (3.3, 0.55, 0.6),
    (9.9, 0.05, 4.4),
    (-6.1, 0.18, 6.3),
    (0.2, 0.25, 8.0),
];

pub fn oracle_deviation(n_max: usize, alpha: C64) -> Result<f64, Box<dyn std::error::Error + Send + Sync>> {
    let rho0 = coherent_state(alpha, n_max)?;
    let mut worst: f64 = 0.0;
    for &(d, c, t) in &ORACLE_CASES {
        let p = ModelParams::new(d, c)?;
        let dense = hamiltonian_oracle(&rho0, t, &p)?;
        worst = worst.max(dense.max_abs_diff(&evolve_joint(&rho0, t, &p)));
    }
    Ok(worst)
}

pub fn run_suite(oracle_n_max: usize) -> Result<Report, Box<dyn std::error::Error + Send + Sync>> {
    let mut checks = Vec::new();
    checks.push(Check::below(
        format!("oracle-equivalence n_max={oracle_n_max} alpha=2"),
        oracle_deviation(oracle_n_max, C64::new(2.0, 0.0))?,
        1e-8,
    ));

    let chi = 0.1;
    let p = ModelParams::new(critical_detuning_for(1.0, chi)?, chi)?;
    let tr = revival_time(&p, 25.0)?;
    let mut unitarity: f64 = 0.0;
    for k in 0..100 {
        let t = tr * k as f64 / 99.0;
        for n in 0..=128 {
            unitarity = unitarity.max((coefficients(n, t, &p).unitarity() - 1.0).abs());
        }
    }
    checks.push(Check::below("unitarity |A|^2+|B|^2-1", unitarity, 1e-13));

    let rho0 = coherent_state(C64::new(5.0, 0.0), 128)?;
    let (mut leak, mut herm): (f64, f64) = (0.0, 0.0);
    for k in 0..=20 {
        let joint = evolve_joint(&rho0, tr * k as f64 / 10.0, &p);
        leak = leak.max(rho0.trace() - joint.trace());
        herm = herm.max(joint.hermiticity_error());
    }
    checks.push(Check::below("trace leakage alpha=5 n_max=128", leak, 1e-10));
    checks.push(Check::below("hermiticity of evolved blocks", herm, 1e-12));

    let identity = (0..=200).map(|n| {
        let (l, r) = quadratic_phase_identity(n);
        (l - r).norm()
    });
    checks.push(Check::below("quadratic phase identity n<=200", identity.fold(0.0, f64::max), 1e-14));

    let pd = ModelParams::new(49.98, 0.01)?;
    let alpha = C64::new(5.0, 0.0);
    let half = std::f64::consts::PI / (2.0 * pd.kerr());
    let evolved = dispersive_evolve(alpha, half, &pd, 128)?;
    let closed = dispersive_half_revival_cat(alpha, &pd, 128)?;
    checks.push(Check::above("dispersive cat two-term overlap", evolved.overlap(&closed)?, 1.0 - 1e-10));
    let tr_d = revival_time(&pd, 25.0)?;
    checks.push(Check::above("dispersive vs exact fidelity at t_r/2", dispersive_vs_exact(alpha, &pd, 0.5 * tr_d, 128)?, 0.97));

    let a = C64::new(0.0, 5.0);
    let zero = mixture_cat_identity(a, 0.0, 128)?.max(mixture_cat_identity(a, std::f64::consts::PI, 128)?);
    checks.push(Check::below("mixture identity at theta in {0, pi}", zero, 1e-12));
    checks.push(Check::above(
        "mixture identity at theta=pi/2",
        mixture_cat_identity(a, std::f64::consts::FRAC_PI_2, 128)?,
        0.1,
    ));
    Ok(Report { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_formatting() {
        let c = Check::below("x", 2e-9, 1e-8);
        assert!(c.passed());
        assert_eq!(c.to_string(), "PASS x value=2.000000e-9 tol=<1e-8");
        assert!(!Check::above("y", 0.5, 0.97).passed());
    }
}

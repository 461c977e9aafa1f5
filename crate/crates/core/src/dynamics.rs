//! Closed-form evolution of the atom-field state with the atom initially
//! excited.
//!
//! In the interaction picture every manifold `{|e,n>, |g,n+1>}` evolves
//! independently:
//!
//! ```text
//! U |e,n> = E_{n+1} (A_{n+1} |e,n> - B_{n+1} |g,n+1>)
//! E_{n+1} = exp(-i chi n^2 t)
//! A_{n+1} = cos(R t / 2) - i gamma sin(R t / 2) / R
//! B_{n+1} = 2 i Omega sqrt(n+1) sin(R t / 2) / R
//! ```
//!
//! with `gamma = delta - 2 chi n` and generalized Rabi frequency
//! `R = sqrt(gamma^2 + 4 Omega^2 (n+1))`.
//!
//! Sums are cut at `N_max`: the `|g, N_max+1>` component is dropped and shows
//! up as trace leakage, never renormalized away.

use alloc::vec::Vec;

use crate::{
    fock::{AtomState, FieldState},
    math::cis,
    matrix::CMatrix,
    params::ModelParams,
    C64,
};

/// `gamma_{n+1} = delta - 2 chi n`.
#[inline]
pub fn gamma(n: usize, p: &ModelParams) -> f64 {
    gamma_continuous(n as f64, p)
}

#[inline]
pub fn gamma_continuous(n: f64, p: &ModelParams) -> f64 {
    p.detuning() - 2.0 * p.kerr() * n
}

/// Generalized Rabi frequency `Omega_{n+1}`.
#[inline]
pub fn rabi_frequency(n: usize, p: &ModelParams) -> f64 {
    rabi_frequency_continuous(n as f64, p)
}

/// [`rabi_frequency`] with the photon number treated as a real variable.
#[inline]
pub fn rabi_frequency_continuous(n: f64, p: &ModelParams) -> f64 {
    let g = gamma_continuous(n, p);
    let w = p.coupling();
    libm::sqrt(g * g + 4.0 * w * w * (n + 1.0))
}

/// Evolution coefficients of the manifold with `n` photons plus an excited
/// atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub n: usize,
    /// `E_{n+1}`
    pub kerr_phase: C64,
    /// `A_{n+1}`
    pub a: C64,
    /// `B_{n+1}`
    pub b: C64,
    /// `Omega_{n+1}`
    pub rabi: f64,
    /// `gamma_{n+1}`
    pub gamma: f64,
}

impl Coefficients {
    /// `|A|^2 + |B|^2`, one for any `n` and `t`.
    pub fn unitarity(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }

    /// Amplitude that stays in `|e,n>`: `E A`.
    #[inline]
    pub fn stay(&self) -> C64 { self.kerr_phase * self.a }

    /// Amplitude that moves to `|g,n+1>` up to the sign: `E B`.
    #[inline]
    pub fn emit(&self) -> C64 { self.kerr_phase * self.b }
}

pub fn coefficients(n: usize, t: f64, p: &ModelParams) -> Coefficients {
    let nf = n as f64;
    let g = gamma(n, p);
    let rabi = rabi_frequency(n, p);
    let half = 0.5 * rabi * t;
    let (s, c) = (libm::sin(half), libm::cos(half));
    Coefficients {
        n,
        kerr_phase: cis(-p.kerr() * nf * nf * t),
        a: C64::new(c, -g * s / rabi),
        b: C64::new(0.0, 2.0 * p.coupling() * libm::sqrt(nf + 1.0) * s / rabi),
        rabi,
        gamma: g,
    }
}

/// Coefficients for `n = 0..=n_max`.
pub fn coefficient_table(n_max: usize, t: f64, p: &ModelParams) -> Vec<Coefficients> {
    (0..=n_max).map(|n| coefficients(n, t, p)).collect()
}

/// Evolved reduced field state, entry by entry:
///
/// ```text
/// rho_nm(t) = E_{n+1} E*_{m+1} [ rho_nm A_{n+1} A*_{m+1}
///             + rho_{n-1,m-1} e^{2 i chi (n-m) t} B_n B*_m ]
/// ```
///
/// The second term is absent when `n = 0` or `m = 0`.
pub fn evolve_field(rho0: &FieldState, t: f64, p: &ModelParams) -> FieldState {
    let dim = rho0.dim();
    let coef = coefficient_table(dim - 1, t, p);
    let chi = p.kerr();
    let rho = CMatrix::from_fn(dim, |n, m| {
        let (cn, cm) = (&coef[n], &coef[m]);
        let mut z = rho0.get(n, m) * cn.a * cm.a.conj();
        if n > 0 && m > 0 {
            let (bn, bm) = (&coef[n - 1], &coef[m - 1]);
            let shift = cis(2.0 * chi * (n as f64 - m as f64) * t);
            z += rho0.get(n - 1, m - 1) * shift * bn.b * bm.b.conj();
        }
        z * cn.kerr_phase * cm.kerr_phase.conj()
    });
    FieldState::from_matrix(rho)
}

/// Reduced atomic state for an initially excited atom.
pub fn evolve_atom(rho0: &FieldState, t: f64, p: &ModelParams) -> AtomState {
    let dim = rho0.dim();
    let coef = coefficient_table(dim - 1, t, p);
    let chi = p.kerr();
    let mut ee = 0.0;
    let mut gg = 0.0;
    for (n, c) in coef.iter().enumerate() {
        let pn = rho0.get(n, n).re;
        ee += pn * c.a.norm_sqr();
        // |g, N_max+1> is outside the basis
        if n + 1 < dim {
            gg += pn * c.b.norm_sqr();
        }
    }
    let mut eg = C64::new(0.0, 0.0);
    for n in 0..dim.saturating_sub(1) {
        let phase = cis(-chi * (2 * n + 1) as f64 * t);
        eg -= rho0.get(n + 1, n) * phase * coef[n + 1].a * coef[n].b.conj();
    }
    AtomState { ee, gg, eg }
}

/// The four field-space blocks of the joint atom-field density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub ee: CMatrix,
    pub eg: CMatrix,
    pub ge: CMatrix,
    pub gg: CMatrix,
}

impl JointState {
    /// `|e><e| (x) rho0`.
    pub fn excited(rho0: &FieldState) -> Self {
        let dim = rho0.dim();
        Self {
            ee: rho0.matrix().clone(),
            eg: CMatrix::zeros(dim),
            ge: CMatrix::zeros(dim),
            gg: CMatrix::zeros(dim),
        }
    }

    pub fn dim(&self) -> usize { self.ee.dim() }

    pub fn trace(&self) -> f64 {
        self.ee.trace().re + self.gg.trace().re
    }

    /// Trace over the atom.
    pub fn field(&self) -> FieldState {
        FieldState::from_matrix(&self.ee + &self.gg)
    }

    /// Trace over the field.
    pub fn atom(&self) -> AtomState {
        AtomState {
            ee: self.ee.trace().re,
            gg: self.gg.trace().re,
            eg: self.eg.trace(),
        }
    }

    /// Largest entrywise deviation across the four blocks.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.ee
            .max_abs_diff(&other.ee)
            .max(self.eg.max_abs_diff(&other.eg))
            .max(self.ge.max_abs_diff(&other.ge))
            .max(self.gg.max_abs_diff(&other.gg))
    }

    /// Largest of the diagonal-block Hermiticity errors and
    /// `|rho_ge - rho_eg^dagger|`.
    pub fn hermiticity_error(&self) -> f64 {
        self.ee
            .hermiticity_error()
            .max(self.gg.hermiticity_error())
            .max(self.ge.max_abs_diff(&self.eg.adjoint()))
    }
}

/// Joint state for an initially excited atom and field `rho0`.
pub fn evolve_joint(rho0: &FieldState, t: f64, p: &ModelParams) -> JointState {
    let dim = rho0.dim();
    let coef = coefficient_table(dim - 1, t, p);
    let stay: Vec<C64> = coef.iter().map(Coefficients::stay).collect();
    let emit: Vec<C64> = coef.iter().map(Coefficients::emit).collect();

    let ee = CMatrix::from_fn(dim, |n, m| rho0.get(n, m) * stay[n] * stay[m].conj());
    // |n><m+1| <- -rho_nm E_{n+1} E*_{m+1} A_{n+1} B*_{m+1}
    let eg = CMatrix::from_fn(dim, |n, m1| {
        if m1 == 0 {
            return C64::new(0.0, 0.0);
        }
        let m = m1 - 1;
        -rho0.get(n, m) * stay[n] * emit[m].conj()
    });
    let ge = CMatrix::from_fn(dim, |n1, m| {
        if n1 == 0 {
            return C64::new(0.0, 0.0);
        }
        let n = n1 - 1;
        -rho0.get(n, m) * emit[n] * stay[m].conj()
    });
    let gg = CMatrix::from_fn(dim, |n1, m1| {
        if n1 == 0 || m1 == 0 {
            return C64::new(0.0, 0.0);
        }
        let (n, m) = (n1 - 1, m1 - 1);
        rho0.get(n, m) * emit[n] * emit[m].conj()
    });
    JointState { ee, eg, ge, gg }
}

/// Photon-number distribution `P_n(t) = P_n |A_{n+1}|^2 + P_{n-1} |B_n|^2`.
pub fn photon_distribution(rho0: &FieldState, t: f64, p: &ModelParams) -> Vec<f64> {
    let dim = rho0.dim();
    let coef = coefficient_table(dim - 1, t, p);
    let pops = rho0.populations();
    (0..dim)
        .map(|n| {
            let mut pn = pops[n] * coef[n].a.norm_sqr();
            if n > 0 {
                pn += pops[n - 1] * coef[n - 1].b.norm_sqr();
            }
            pn
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{coherent_state, fock_state, mixture_state};
    use core::f64::consts::PI;

    fn params(d: f64, chi: f64) -> ModelParams {
        ModelParams::new(d, chi).unwrap()
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(0, &params(1.7, 0.3)), 1.7);
        assert!((gamma(1, &params(4.8, 0.1)) - 4.6).abs() < 1e-15);
        for n in 0..10 {
            assert_eq!(gamma(n, &params(0.0, 0.0)), 0.0);
        }
    }

    #[test]
    fn rabi_frequency_examples() {
        assert_eq!(rabi_frequency(0, &params(0.0, 0.0)), 2.0);
        let p = params(4.8, 0.1);
        assert!((rabi_frequency(0, &p) - 5.2).abs() < 1e-12);
        assert!((rabi_frequency(25, &p) - 10.2).abs() < 1e-12);
        // direct evaluation of sqrt(gamma^2 + 4 * 26)
        let g = 4.8 - 2.0 * 0.1 * 25.0;
        assert!((rabi_frequency(25, &p) - libm::sqrt(g * g + 104.0)).abs() < 1e-14);
    }

    #[test]
    fn coefficients_at_zero_time_are_identity() {
        let p = params(1.3, 0.07);
        for n in 0..20 {
            let c = coefficients(n, 0.0, &p);
            assert_eq!(c.kerr_phase, C64::new(1.0, 0.0));
            assert_eq!(c.a, C64::new(1.0, 0.0));
            assert_eq!(c.b.norm(), 0.0);
        }
    }

    #[test]
    fn resonant_half_rabi_flop() {
        let c = coefficients(0, PI / 2.0, &params(0.0, 0.0));
        assert!(c.a.norm() < 1e-15);
        assert!((c.b.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unitarity_and_unit_kerr_phase() {
        let p = params(4.8, 0.1);
        let tr = PI / 0.1;
        for k in 0..100 {
            let t = tr * k as f64 / 99.0;
            for n in 0..=128 {
                let c = coefficients(n, t, &p);
                assert!((c.unitarity() - 1.0).abs() < 1e-13);
                assert!((c.kerr_phase.norm() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn field_at_zero_time_is_initial_state() {
        let rho0 = coherent_state(C64::new(2.0, 0.5), 30).unwrap();
        let rho = evolve_field(&rho0, 0.0, &params(1.3, 0.07));
        assert!(rho.matrix().max_abs_diff(rho0.matrix()) < 1e-14);
        let atom = evolve_atom(&rho0, 0.0, &params(1.3, 0.07));
        assert!((atom.ee - 1.0).abs() < 1e-14 && atom.gg == 0.0 && atom.eg == C64::new(0.0, 0.0));
        let joint = evolve_joint(&rho0, 0.0, &params(1.3, 0.07));
        assert!(joint.max_abs_diff(&JointState::excited(&rho0)) < 1e-15);
    }

    #[test]
    fn joint_partial_traces_reproduce_reduced_states() {
        let p = params(1.3, 0.07);
        let rho0 = coherent_state(C64::new(1.5, -0.8), 40).unwrap();
        for &t in &[0.3, 2.0, 7.7, 31.0] {
            let joint = evolve_joint(&rho0, t, &p);
            let field = evolve_field(&rho0, t, &p);
            let atom = evolve_atom(&rho0, t, &p);
            assert!(joint.field().matrix().max_abs_diff(field.matrix()) < 1e-12);
            let ja = joint.atom();
            assert!((ja.ee - atom.ee).abs() < 1e-12);
            assert!((ja.gg - atom.gg).abs() < 1e-12);
            assert!((ja.eg - atom.eg).norm() < 1e-12);
            assert!(joint.hermiticity_error() < 1e-12);
            assert!((joint.trace() - rho0.trace()).abs() < 1e-12);
        }
    }

    #[test]
    fn mixture_has_no_atomic_coherence() {
        let p = params(4.8, 0.1);
        let rho0 = mixture_state(C64::new(5.0, 0.0), 128).unwrap();
        for k in 0..50 {
            let a = evolve_atom(&rho0, 0.7 * k as f64, &p);
            assert_eq!(a.eg, C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn leakage_is_top_level_emission() {
        let p = params(0.0, 0.0);
        let rho0 = fock_state(10, 10).unwrap();
        let t = 0.4;
        let field = evolve_field(&rho0, t, &p);
        let c = coefficients(10, t, &p);
        assert!((field.leakage() - c.b.norm_sqr()).abs() < 1e-14);
    }

    #[test]
    fn photon_distribution_matches_evolved_diagonal() {
        let p = params(2.1, 0.2);
        let rho0 = coherent_state(C64::new(3.0, 1.0), 60).unwrap();
        let t = 4.2;
        let dist = photon_distribution(&rho0, t, &p);
        let field = evolve_field(&rho0, t, &p);
        for (n, pn) in dist.iter().enumerate() {
            assert!((pn - field.get(n, n).re).abs() < 1e-14);
        }
    }
}

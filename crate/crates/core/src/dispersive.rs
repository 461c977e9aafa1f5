//! Dressed states, the effective large-detuning evolution, and the
//! mixture-versus-cat identity. These are closed-form cross-checks on the
//! exact pipeline in [`crate::dynamics`].

use core::f64::consts::{FRAC_PI_2, PI};

use crate::{
    dynamics::{evolve_field, gamma, rabi_frequency},
    error::{Error, Result},
    fock::{FieldKet, FieldState},
    math::{cis, quarter_turns},
    params::ModelParams,
    states::{cat_state, coherent_ket, CatSpec},
    C64,
};

/// Minimum populated-level probability considered "relevant" for the
/// dispersive validity flag.
pub const RELEVANT_POPULATION: f64 = 1e-6;
/// Required ratio `|delta| / omega_{n+1}` for every relevant level.
pub const DISPERSIVE_RATIO: f64 = 5.0;

/// Dressed eigenpair of the manifold `{|e,n>, |g,n+1>}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedPair {
    pub n: usize,
    pub sin_theta: f64,
    pub cos_theta: f64,
    pub energy_plus: f64,
    pub energy_minus: f64,
    /// Large-detuning approximations of the two energies.
    pub energy_plus_dispersive: f64,
    pub energy_minus_dispersive: f64,
}

impl DressedPair {
    /// `|+,n> = sin |e,n> + cos |g,n+1>` as `(e, g)` components.
    pub fn plus(&self) -> [f64; 2] { [self.sin_theta, self.cos_theta] }

    /// `|-,n> = -cos |e,n> + sin |g,n+1>`.
    pub fn minus(&self) -> [f64; 2] { [-self.cos_theta, self.sin_theta] }

    /// Largest absolute gap between exact and dispersive energies.
    pub fn dispersive_gap(&self) -> f64 {
        (self.energy_plus - self.energy_plus_dispersive)
            .abs()
            .max((self.energy_minus - self.energy_minus_dispersive).abs())
    }
}

/// `omega_{n+1} = 2 Omega sqrt(n+1)`.
pub fn vacuum_splitting(n: usize, p: &ModelParams) -> f64 {
    2.0 * p.coupling() * libm::sqrt(n as f64 + 1.0)
}

pub fn dressed_states(n: usize, p: &ModelParams) -> DressedPair {
    let nf = n as f64;
    let g = gamma(n, p);
    let rabi = rabi_frequency(n, p);
    let w = vacuum_splitting(n, p);
    // R - gamma without cancellation when gamma >> w
    let r_minus_g = if g > 0.0 { w * w / (rabi + g) } else { rabi - g };
    let norm = libm::hypot(r_minus_g, w);
    let w0 = p.cavity_frequency();
    let chi = p.kerr();
    let base = w0 * (nf + 0.5) + chi * nf * nf;
    let d = p.detuning().abs();
    let coupling_sq = p.coupling() * p.coupling();
    let shift = if d > 0.0 { coupling_sq / d * (nf + 1.0) } else { f64::NAN };
    DressedPair {
        n,
        sin_theta: w / norm,
        cos_theta: r_minus_g / norm,
        energy_plus: base + 0.5 * rabi,
        energy_minus: base - 0.5 * rabi,
        energy_plus_dispersive: w0 * (nf + 0.5) + 0.5 * d + chi * nf * (nf - 1.0) + shift,
        energy_minus_dispersive: w0 * (nf + 0.5) - 0.5 * d + chi * nf * (nf + 1.0) - shift,
    }
}

/// `true` when every level with population above [`RELEVANT_POPULATION`]
/// satisfies `|delta| > 5 omega_{n+1}`.
pub fn is_deep_dispersive(rho0: &FieldState, p: &ModelParams) -> bool {
    rho0.populations()
        .iter()
        .enumerate()
        .filter(|(_, pn)| **pn > RELEVANT_POPULATION)
        .all(|(n, _)| p.detuning().abs() > DISPERSIVE_RATIO * vacuum_splitting(n, p))
}

/// Field state of an initially excited atom and coherent field under the
/// effective large-detuning evolution:
/// `c_n exp(-i chi n^2 t) exp(i chi n t) exp(-i (Omega^2/delta) n t)`.
/// The n-independent global phase is dropped.
pub fn dispersive_evolve(alpha: C64, t: f64, p: &ModelParams, n_max: usize) -> Result<FieldKet> {
    if p.detuning() == 0.0 {
        return Err(Error::DispersiveUndefined);
    }
    let chi = p.kerr();
    let stark = p.coupling() * p.coupling() / p.detuning();
    let mut ket = coherent_ket(alpha, n_max);
    for (n, c) in ket.amps.iter_mut().enumerate() {
        let nf = n as f64;
        *c *= cis(-chi * nf * nf * t + chi * nf * t - stark * nf * t);
    }
    Ok(ket)
}

/// Closed two-term form of the dispersive state at `t_r / 2 = pi / (2 chi)`:
/// `(|-i a'> - i |i a'>) / sqrt(2)` with `a' = a exp(-i (pi/2) Omega^2/(delta chi))`,
/// up to a global phase.
pub fn dispersive_half_revival_cat(alpha: C64, p: &ModelParams, n_max: usize) -> Result<FieldKet> {
    if p.detuning() == 0.0 {
        return Err(Error::DispersiveUndefined);
    }
    if p.kerr() <= 0.0 {
        return Err(Error::NoCriticalDetuning);
    }
    let rot = cis(-FRAC_PI_2 * p.coupling() * p.coupling() / (p.detuning() * p.kerr()));
    let a = alpha * rot;
    let i = C64::new(0.0, 1.0);
    let left = coherent_ket(-i * a, n_max);
    let right = coherent_ket(i * a, n_max);
    let s = libm::sqrt(0.5);
    let amps = left.amps.iter().zip(&right.amps).map(|(l, r)| (l - i * r) * s).collect();
    Ok(FieldKet::new(amps))
}

/// `e^{-i pi n^2 / 2}` and `(1 + i)(e^{-i pi n} - i) / 2`, both with the
/// phase reduced exactly before evaluation.
pub fn quadratic_phase_identity(n: u64) -> (C64, C64) {
    let lhs = quarter_turns(((n % 4) * (n % 4)) as i64);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let rhs = C64::new(0.5, 0.5) * (C64::new(sign, 0.0) - C64::new(0.0, 1.0));
    (lhs, rhs)
}

/// Fidelity of the dispersive pure state with the exact evolved field.
pub fn dispersive_vs_exact(alpha: C64, p: &ModelParams, t: f64, n_max: usize) -> Result<f64> {
    let ket = dispersive_evolve(alpha, t, p, n_max)?;
    let rho0 = crate::states::coherent_state(alpha, n_max)?;
    let exact = evolve_field(&rho0, t, p);
    Ok(exact.matrix().sandwich(&ket.amps, &ket.amps).re)
}

/// Hilbert-Schmidt distance between `(cat(a, theta) + cat(-a, -theta)) / 2`
/// and `(cat(a, theta) + cat(a, -theta)) / 2`; zero only for even and odd cats.
pub fn mixture_cat_identity(amplitude: C64, theta: f64, n_max: usize) -> Result<f64> {
    if amplitude.norm() == 0.0 {
        return Err(Error::InvalidParameter { name: "amplitude", reason: "must be nonzero" });
    }
    let a = cat_state(&CatSpec::new(amplitude, theta)?, n_max)?;
    let b = cat_state(&CatSpec::new(-amplitude, -theta)?, n_max)?;
    let c = cat_state(&CatSpec::new(amplitude, -theta)?, n_max)?;
    let half = C64::new(0.5, 0.0);
    let rho = (a.matrix() + b.matrix()).scale(half);
    let rho_prime = (a.matrix() + c.matrix()).scale(half);
    Ok(libm::sqrt((&rho - &rho_prime).frobenius_sq()))
}

/// Phase by which the dispersive evolution rotates the coherent amplitude
/// over one revival, `pi Omega^2 / (delta chi)` reduced to `(-pi, pi]`.
pub fn revival_rotation(p: &ModelParams) -> Result<f64> {
    if p.detuning() == 0.0 {
        return Err(Error::DispersiveUndefined);
    }
    if p.kerr() <= 0.0 {
        return Err(Error::NoCriticalDetuning);
    }
    let raw = PI * p.coupling() * p.coupling() / (p.detuning() * p.kerr());
    let r = crate::math::rem_euclid(raw, 2.0 * PI);
    Ok(if r > PI { r - 2.0 * PI } else { r })
}

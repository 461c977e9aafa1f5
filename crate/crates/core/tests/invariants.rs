use proptest::prelude::*;

use kerrcat_core::{
    dispersive::dressed_states,
    dynamics::{coefficients, evolve_atom, evolve_field, evolve_joint, rabi_frequency},
    observables::TimeSeries,
    periodicity::{critical_detuning, rabi_derivatives},
    phase_space::{q_function, wigner},
    states::{cat_state, coherent_state, mixture_state, CatSpec},
    FieldState, ModelParams, C64,
};
use std::f64::consts::{FRAC_1_PI, PI};

fn amplitude(max: f64) -> impl Strategy<Value = C64> {
    (0.0..max, 0.0..2.0 * PI).prop_map(|(r, phi)| C64::from_polar(r, phi))
}

fn params() -> impl Strategy<Value = ModelParams> {
    (-10.0..10.0f64, 0.0..0.6f64).prop_map(|(d, c)| ModelParams::new(d, c).unwrap())
}

fn check_field(rho: &FieldState, eps: f64) -> Result<(), TestCaseError> {
    prop_assert!(rho.matrix().hermiticity_error() <= 1e-12);
    let tr = rho.trace();
    prop_assert!(tr >= 1.0 - eps && tr <= 1.0 + 1e-12, "trace {}", tr);
    for n in 0..rho.dim() {
        prop_assert!(rho.get(n, n).im == 0.0 || rho.get(n, n).im.abs() < 1e-15);
        prop_assert!(rho.get(n, n).re >= -1e-12);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coupling_must_be_positive(c in -5.0..=0.0f64) {
        prop_assert!(ModelParams::with_coupling(c, 1.0, 0.1).is_err());
    }

    #[test]
    fn carriers_must_match_detuning(w0 in 1.0..100.0f64, d in -0.5..0.5f64, slip in 1e-9..1e-3f64) {
        let p = ModelParams::new(d, 0.1).unwrap();
        prop_assert!(p.with_carriers(w0, w0 + d).is_ok());
        prop_assert!(p.with_carriers(w0, w0 + d + slip).is_err());
    }

    #[test]
    fn prepared_states_are_valid(a in amplitude(5.0), theta in 0.0..2.0 * PI) {
        check_field(&coherent_state(a, 128).unwrap(), 1e-12)?;
        check_field(&mixture_state(a, 128).unwrap(), 1e-12)?;
        if let Ok(spec) = CatSpec::new(a, theta) {
            check_field(&cat_state(&spec, 128).unwrap(), 1e-12)?;
        }
    }

    #[test]
    fn mixture_is_average_of_coherents(a in amplitude(4.0)) {
        let mix = mixture_state(a, 90).unwrap();
        let plus = coherent_state(a, 90).unwrap();
        let minus = coherent_state(-a, 90).unwrap();
        let avg = (plus.matrix() + minus.matrix()).scale(C64::new(0.5, 0.0));
        prop_assert!(mix.matrix().max_abs_diff(&avg) < 1e-14);
    }

    #[test]
    fn cat_normalization_tracks_spec(a in amplitude(3.0), theta in 0.0..2.0 * PI) {
        if let Ok(spec) = CatSpec::new(a, theta) {
            let expected = 0.5 / (1.0 + (-2.0 * a.norm_sqr()).exp() * theta.cos());
            prop_assert!((spec.normalization().unwrap() - expected).abs() <= 1e-12 * expected);
        }
    }

    #[test]
    fn coefficients_are_unitary(p in params(), n in 0usize..=128, t in 0.0..400.0f64) {
        let c = coefficients(n, t, &p);
        prop_assert!((c.unitarity() - 1.0).abs() < 1e-13);
        prop_assert!((c.kerr_phase.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn evolved_states_are_valid(p in params(), a in amplitude(3.0), t in 0.0..60.0f64) {
        let rho0 = coherent_state(a, 60).unwrap();
        let joint = evolve_joint(&rho0, t, &p);
        prop_assert!(joint.hermiticity_error() < 1e-12);
        prop_assert!((joint.trace() - 1.0).abs() < 1e-10);
        let atom = evolve_atom(&rho0, t, &p);
        prop_assert!((atom.trace() - 1.0).abs() < 1e-10);
        prop_assert!(atom.ee >= -1e-12 && atom.ee <= 1.0 + 1e-12);
        prop_assert!(atom.gg >= -1e-12 && atom.gg <= 1.0 + 1e-12);
        check_field(&evolve_field(&rho0, t, &p), 1e-10)?;
    }

    #[test]
    fn phase_space_bounds(a in amplitude(2.5), theta in 0.0..2.0 * PI, b in amplitude(5.0)) {
        if let Ok(spec) = CatSpec::new(a, theta) {
            let rho = cat_state(&spec, 50).unwrap();
            let q = q_function(&rho, b).unwrap();
            let w = wigner(&rho, b).unwrap();
            prop_assert!((-1e-12..=FRAC_1_PI + 1e-12).contains(&q));
            prop_assert!(w.abs() <= 2.0 * FRAC_1_PI + 1e-9);
        }
    }

    #[test]
    fn critical_detuning_linearizes_rabi(chi in 0.001..2.0f64, nbar in 0.0..60.0f64) {
        let dc = critical_detuning(&ModelParams::new(0.0, chi).unwrap()).unwrap();
        let p = ModelParams::new(dc, chi).unwrap();
        for n in 0..=128usize {
            let r = rabi_frequency(n, &p);
            prop_assert!((r - (dc + 2.0 * chi * (n as f64 + 2.0))).abs() < 1e-12 * r.max(1.0));
        }
        let d = rabi_derivatives(&p, nbar, 6);
        prop_assert!(d[2..].iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn dressed_pairs_are_orthonormal(p in params(), n in 0usize..200) {
        let d = dressed_states(n, &p);
        prop_assert!((d.sin_theta.powi(2) + d.cos_theta.powi(2) - 1.0).abs() < 1e-13);
        prop_assert!(d.energy_plus > d.energy_minus);
    }

    #[test]
    fn time_series_requires_increasing_times(mut ts in prop::collection::vec(0.0..10.0f64, 2..20)) {
        ts.sort_by(f64::total_cmp);
        let vals = vec![0.0; ts.len()];
        let strictly = ts.windows(2).all(|w| w[1] > w[0]);
        prop_assert_eq!(TimeSeries::new(ts.clone(), 1.0, vals.clone()).is_ok(), strictly);
        prop_assert!(TimeSeries::new(ts, 1.0, vals[1..].to_vec()).is_err());
    }
}

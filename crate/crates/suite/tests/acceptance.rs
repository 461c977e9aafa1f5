//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::{
    f64::consts::{FRAC_1_PI, FRAC_PI_2, PI},
    time::Instant,
};

use kerrcat::oracle::hamiltonian_oracle;
use kerrcat_core::{
    dispersive::{dispersive_evolve, dispersive_half_revival_cat, dispersive_vs_exact, mixture_cat_identity},
    dynamics::{coefficients, evolve_field, evolve_joint, rabi_frequency},
    observables::{atomic_inversion, field_fidelity, linear_entropy},
    periodicity::{
        collapse_run, critical_detuning_for, rabi_derivatives, revival_time, table1_row, table2_row,
        DEFAULT_SCAN_RESOLUTION, FIDELITY_TOL, REFERENCE_COLUMNS,
    },
    phase_space::{displacement_element, grid_eval, q_function, wigner, GridSpec, PhaseSpaceKind},
    states::{cat_state, coherent_state, mixture_state, CatSpec},
    ModelParams, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    summary: String,
}

fn outcome(passed: bool, summary: impl Into<String>) -> Outcome {
    Outcome { passed, summary: summary.into() }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let rows: Vec<_> = REFERENCE_COLUMNS.iter().map(|c| table1_row(c, 128).unwrap()).collect();
    let secs = start.elapsed().as_secs_f64();
    let worst = rows.iter().map(|r| r.abs_dev()).fold(0.0, f64::max);
    let failed: Vec<String> = rows.iter().filter(|r| !r.passed()).map(|r| format!("({}, {})", r.detuning, r.kerr)).collect();
    outcome(
        failed.is_empty() && secs < 30.0,
        format!("table1 mean photon number at t_r/2: 10 columns, max |dev| {worst:.2e} (tol 2e-3), {secs:.2} s (limit 30 s) {failed:?}"),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let rows: Vec<_> = REFERENCE_COLUMNS.iter().map(|c| table2_row(c, 128, DEFAULT_SCAN_RESOLUTION).unwrap()).collect();
    let secs = start.elapsed().as_secs_f64();
    let worst_f = rows.iter().map(|r| r.fidelity.abs_dev()).fold(0.0, f64::max);
    let worst_theta = rows.iter().map(|r| r.theta.abs_dev() / r.theta.tolerance).fold(0.0, f64::max);
    // fidelity evaluated at exactly the quoted phase
    let mut worst_quoted: f64 = 0.0;
    for c in &REFERENCE_COLUMNS {
        let run = collapse_run(c, 128).unwrap();
        let amp = C64::new(0.0, run.mean_photon.sqrt());
        let cat = cat_state(&CatSpec::new(amp, c.theta_over_pi * PI).unwrap(), 128).unwrap();
        let f = field_fidelity(&cat, &run.rho_half).unwrap();
        worst_quoted = worst_quoted.max((f - c.fidelity).abs());
    }
    let passed = rows.iter().all(|r| r.fidelity.passed() && r.theta.passed()) && worst_quoted <= FIDELITY_TOL && secs < 300.0;
    outcome(
        passed,
        format!(
            "table2 cat fit: max |F*-F| {worst_f:.2e} (tol 5e-3), max |theta*-theta|/tol {worst_theta:.2} (<= 1), \
             max |F(quoted theta)-F| {worst_quoted:.2e} (tol 5e-3), {secs:.1} s (limit 300 s)"
        ),
    )
}

fn criterion_3() -> Outcome {
    let worst = REFERENCE_COLUMNS
        .iter()
        .filter(|c| c.kerr > 0.0)
        .map(|c| (critical_detuning_for(1.0, c.kerr).unwrap() - c.detuning).abs())
        .fold(0.0, f64::max);
    outcome(worst < 1e-4, format!("critical detuning vs the nine nonzero-chi column pairs: max |dev| {worst:.2e} (tol 1e-4)"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let rho0 = coherent_state(C64::new(2.0, 0.0), 24).unwrap();
    let mut worst: f64 = 0.0;
    let cases = 12;
    for _ in 0..cases {
        let p = ModelParams::new(rng.random_range(-10.0..10.0), rng.random_range(0.0..0.6)).unwrap();
        let t = rng.random_range(0.0..10.0);
        let dense = hamiltonian_oracle(&rho0, t, &p).unwrap();
        worst = worst.max(dense.max_abs_diff(&evolve_joint(&rho0, t, &p)));
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 1e-8 && secs < 60.0,
        format!("closed form vs dense Hamiltonian (n_max=24, alpha=2, {cases} random cases): max dev {worst:.2e} (tol 1e-8), {secs:.2} s"),
    )
}

fn criterion_5() -> Outcome {
    let mut unitarity: f64 = 0.0;
    let mut leak: f64 = 0.0;
    let mut herm: f64 = 0.0;
    let rho0 = coherent_state(C64::new(5.0, 0.0), 128).unwrap();
    for c in &REFERENCE_COLUMNS {
        let p = c.params().unwrap();
        let tr = revival_time(&p, 25.0).unwrap();
        for k in 0..100 {
            let t = tr * k as f64 / 99.0;
            for n in 0..=128 {
                unitarity = unitarity.max((coefficients(n, t, &p).unitarity() - 1.0).abs());
            }
        }
        for k in 0..=10 {
            let joint = evolve_joint(&rho0, tr * k as f64 / 5.0, &p);
            leak = leak.max(rho0.trace() - joint.trace());
            herm = herm.max(joint.hermiticity_error()).max(joint.field().matrix().hermiticity_error());
        }
    }
    outcome(
        unitarity < 1e-13 && leak < 1e-10 && herm < 1e-12,
        format!("unitarity max {unitarity:.2e} (tol 1e-13), leakage max {leak:.2e} (tol 1e-10), Hermiticity max {herm:.2e} (tol 1e-12)"),
    )
}

fn criterion_6() -> Outcome {
    let (mut lin, mut second): (f64, f64) = (0.0, 0.0);
    for c in REFERENCE_COLUMNS.iter().filter(|c| c.kerr > 0.0) {
        let dc = critical_detuning_for(1.0, c.kerr).unwrap();
        let p = ModelParams::new(dc, c.kerr).unwrap();
        for n in 0..=128 {
            lin = lin.max((rabi_frequency(n, &p) - (dc + 2.0 * c.kerr * (n as f64 + 2.0))).abs());
        }
        second = second.max(rabi_derivatives(&p, 25.0, 2)[2].abs());
    }
    outcome(
        lin < 1e-12 && second < 1e-9,
        format!("linear Rabi frequency at delta_c: max |dev| {lin:.2e} (tol 1e-12), |second derivative| {second:.2e} (tol 1e-9)"),
    )
}

fn criterion_7() -> Outcome {
    let alpha = C64::new(5.0, 0.0);
    let coh = coherent_state(alpha, 128).unwrap();
    let mut gauss: f64 = 0.0;
    for k in 0..200 {
        let beta = C64::new(-1.0 + 0.05 * k as f64, 2.5 * ((k as f64) * 0.37).sin());
        let q = q_function(&coh, beta).unwrap();
        let w = wigner(&coh, beta).unwrap();
        gauss = gauss.max((q - FRAC_1_PI * (-(beta - alpha).norm_sqr()).exp()).abs());
        gauss = gauss.max((w - 2.0 * FRAC_1_PI * (-2.0 * (beta - alpha).norm_sqr()).exp()).abs());
    }

    let amp = C64::new(0.0, 5.0);
    let even = cat_state(&CatSpec::new(amp, 0.0).unwrap(), 128).unwrap();
    let odd = cat_state(&CatSpec::new(amp, PI).unwrap(), 128).unwrap();
    let origin = C64::new(0.0, 0.0);
    let parity = (wigner(&even, origin).unwrap() - 2.0 * FRAC_1_PI)
        .abs()
        .max((wigner(&odd, origin).unwrap() + 2.0 * FRAC_1_PI).abs());

    // normalization on the default grid, for the collapse-time state of the periodic column
    let chi = 0.1;
    let p = ModelParams::new(critical_detuning_for(1.0, chi).unwrap(), chi).unwrap();
    let rho = evolve_field(&coh, 0.5 * revival_time(&p, 25.0).unwrap(), &p);
    let spec = GridSpec::default();
    let qn = grid_eval(&rho, &spec, PhaseSpaceKind::Q, 0.0).unwrap().integral();
    let wn = grid_eval(&rho, &spec, PhaseSpaceKind::W, 0.0).unwrap().integral();
    let norm = (qn - rho.trace()).abs().max((wn - rho.trace()).abs());

    let mut unitarity: f64 = 0.0;
    for &z in &[C64::new(6.0, 0.0), C64::new(0.0, 6.0), C64::new(-3.0, 4.5), C64::new(1.0, -2.0)] {
        for n in 0..=40 {
            let s: f64 = (0..=300).map(|m| displacement_element(m, n, z).norm_sqr()).sum();
            unitarity = unitarity.max((s - 1.0).abs());
        }
    }
    outcome(
        gauss < 1e-10 && parity < 1e-10 && norm < 1e-3 && unitarity < 1e-8,
        format!(
            "phase space: coherent Q/W vs Gaussians {gauss:.2e} (tol 1e-10), cat W(0) parity {parity:.2e} (tol 1e-10), \
             grid normalization Q {qn:.6} W {wn:.6} (tol 1e-3), displacement column sums {unitarity:.2e} (tol 1e-8)"
        ),
    )
}

fn criterion_8() -> Outcome {
    let p = ModelParams::new(49.98, 0.01).unwrap();
    let alpha = C64::new(5.0, 0.0);
    let evolved = dispersive_evolve(alpha, PI / (2.0 * p.kerr()), &p, 128).unwrap();
    let closed = dispersive_half_revival_cat(alpha, &p, 128).unwrap();
    let overlap = evolved.overlap(&closed).unwrap();
    let tr = revival_time(&p, 25.0).unwrap();
    let fid = dispersive_vs_exact(alpha, &p, 0.5 * tr, 128).unwrap();
    outcome(
        overlap > 1.0 - 1e-10 && fid > 0.97,
        format!("dispersive cat: overlap with two-term form 1-{:.2e} (need > 1-1e-10), fidelity with exact evolution at t_r/2 {fid:.5} (need > 0.97)", 1.0 - overlap),
    )
}

fn criterion_9() -> Outcome {
    let a = C64::new(0.0, 5.0);
    let d0 = mixture_cat_identity(a, 0.0, 128).unwrap();
    let dpi = mixture_cat_identity(a, PI, 128).unwrap();
    let dhalf = mixture_cat_identity(a, FRAC_PI_2, 128).unwrap();
    outcome(
        d0 < 1e-12 && dpi < 1e-12 && dhalf > 0.1,
        format!("mixture vs cat pair distance: theta=0 {d0:.2e}, theta=pi {dpi:.2e} (tol 1e-12), theta=pi/2 {dhalf:.4} (need > 0.1)"),
    )
}

fn criterion_10() -> Outcome {
    let alpha = C64::new(5.0, 0.0);
    let coh = coherent_state(alpha, 128).unwrap();
    let mix = mixture_state(alpha, 128).unwrap();

    let jcm = ModelParams::new(0.0, 0.0).unwrap();
    let tr = revival_time(&jcm, 25.0).unwrap();
    let samples = 4000;
    let (mut min_entropy, mut at) = (f64::INFINITY, 0.0);
    for k in 1..=samples {
        let t = 2.0 * tr * k as f64 / samples as f64;
        let z = linear_entropy(&evolve_field(&mix, t, &jcm));
        if z < min_entropy {
            (min_entropy, at) = (z, t / tr);
        }
    }

    let chi = 0.1;
    let pc = ModelParams::new(critical_detuning_for(1.0, chi).unwrap(), chi).unwrap();
    let half = 0.5 * revival_time(&pc, 25.0).unwrap();
    let z_coh = linear_entropy(&evolve_field(&coh, half, &pc));
    let z_mix = linear_entropy(&evolve_field(&mix, half, &pc));

    let mut inversion: f64 = 0.0;
    for p in [jcm, pc] {
        for k in 0..=2000 {
            let t = 2.0 * tr * k as f64 / 2000.0;
            inversion = inversion.max((atomic_inversion(&coh, t, &p) - atomic_inversion(&mix, t, &p)).abs());
        }
    }
    let clauses = [min_entropy > 0.3, z_coh < 0.1 && z_mix < 0.1, inversion < 1e-13];
    outcome(
        clauses.iter().all(|c| *c),
        format!(
            "figure properties: [{}] chi=delta=0 mixture entropy min {min_entropy:.4} at t/t_r={at:.4} (need > 0.3); \
             [{}] delta_c entropy at t_r/2 coherent {z_coh:.4} mixture {z_mix:.4} (need < 0.1); \
             [{}] coherent vs mixture inversion {inversion:.2e} (tol 1e-13)",
            mark(clauses[0]),
            mark(clauses[1]),
            mark(clauses[2])
        ),
    )
}

fn mark(ok: bool) -> &'static str {
    if ok { "ok" } else { "FAIL" }
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failures = 0;
    for (id, run) in criteria {
        let o = run();
        println!("{} criterion {id:>2}: {}", if o.passed { "PASS" } else { "FAIL" }, o.summary);
        failures += usize::from(!o.passed);
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}

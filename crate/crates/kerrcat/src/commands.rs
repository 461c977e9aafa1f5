//! Command implementations. Each returns whether its checks passed so the
//! binary can pick an exit code.

use std::{
    fs::File,
    io::{BufWriter, Write},
    path::{Path, PathBuf},
};

use anyhow::{bail, Context, Result};
use kerrcat_core::{
    dynamics::evolve_field,
    observables::{Observable, TimeSeries},
    periodicity::{
        critical_detuning, rabi_taylor, table1_row, table2_row, TableRow, DEFAULT_SCAN_RESOLUTION,
        REFERENCE_COLUMNS,
    },
    phase_space::{eval_row, frame_times, EdgeStatus, PhaseSpaceEvaluator, PhaseSpaceGrid, PhaseSpaceKind},
    FieldState,
};
use log::{info, warn};

use crate::{
    config::ResolvedRun,
    formats::{self, frame_file_name, FrameRecord, GridRecord, Manifest, Provenance},
    parallel::ordered_map,
    validate,
};

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn initial_state(run: &ResolvedRun) -> Result<FieldState> {
    run.initial.build(run.n_max, run.eps_trunc).context("building the initial field state")
}

pub fn series(run: &ResolvedRun, pool: &rayon::ThreadPool, quantity: Observable, name: &str) -> Result<PathBuf> {
    run.write_resolved(&run.out)?;
    let rho0 = initial_state(run)?;
    let times = run.series_times();
    let values = ordered_map(pool, &times, |&t| quantity.evaluate(&rho0, t, &run.params));
    let series = TimeSeries::new(times, run.revival_time, values)?;
    let path = run.out.join(format!("{name}.csv"));
    let mut w = create(&path)?;
    formats::write_series(&mut w, &series, &run.provenance())?;
    w.flush()?;
    info!("{} samples written to {}", series.len(), path.display());
    Ok(path)
}

/// Grid of `rho`, rows evaluated in parallel.
pub fn grid(
    pool: &rayon::ThreadPool,
    rho: &FieldState,
    run: &ResolvedRun,
    kind: PhaseSpaceKind,
    time: f64,
) -> Result<PhaseSpaceGrid> {
    let spec = run.grid();
    let rows: Vec<usize> = (0..spec.n_im).collect();
    let rows = ordered_map(pool, &rows, |&j| eval_row(&mut PhaseSpaceEvaluator::new(rho), &spec, kind, j));
    let mut values = Vec::with_capacity(spec.len());
    for r in rows {
        values.extend(r?);
    }
    let g = PhaseSpaceGrid { spec, kind, time, values };
    edge_check(&g)?;
    Ok(g)
}

fn edge_check(g: &PhaseSpaceGrid) -> Result<()> {
    if let EdgeStatus::Warn(edge) = g.check_edges()? {
        warn!("{} grid at t={} reaches {edge:.3e} on its boundary; widen the grid", g.kind.symbol(), g.time);
    }
    Ok(())
}

pub fn snapshot(run: &ResolvedRun, pool: &rayon::ThreadPool, kind: PhaseSpaceKind) -> Result<PathBuf> {
    run.write_resolved(&run.out)?;
    let t = run.snapshot_time();
    let rho = evolve_field(&initial_state(run)?, t, &run.params);
    let g = grid(pool, &rho, run, kind, t)?;
    let name = match kind {
        PhaseSpaceKind::Q => "qfunc.psgrid",
        PhaseSpaceKind::W => "wigner.psgrid",
    };
    let path = run.out.join(name);
    let mut w = create(&path)?;
    formats::write_psgrid(&mut w, &g, &run.provenance())?;
    w.flush()?;
    Ok(path)
}

pub fn animate(run: &ResolvedRun, pool: &rayon::ThreadPool) -> Result<PathBuf> {
    run.write_resolved(&run.out)?;
    let a = &run.config.animate;
    let kind = PhaseSpaceKind::from_symbol(&a.kind).context("animate.kind")?;
    let times = frame_times(run.to_seconds(a.start), run.to_seconds(a.end), a.frames)?;
    let rho0 = initial_state(run)?;
    let spec = run.grid();
    let frames_dir = run.out.join("frames");
    std::fs::create_dir_all(&frames_dir)?;
    let prov = run.provenance();
    let indexed: Vec<(usize, f64)> = times.iter().copied().enumerate().collect();
    // frames in parallel, rows of one frame serially
    let records = ordered_map(pool, &indexed, |&(k, t)| -> Result<FrameRecord> {
        let rho = evolve_field(&rho0, t, &run.params);
        let g = kerrcat_core::phase_space::grid_eval(&rho, &spec, kind, t)?;
        edge_check(&g)?;
        let file = frame_file_name(k);
        let mut w = create(&frames_dir.join(&file))?;
        formats::write_psgrid(&mut w, &g, &prov)?;
        w.flush()?;
        Ok(FrameRecord { file: format!("frames/{file}"), t, t_over_tr: t / run.revival_time, kind: a.kind.clone() })
    });
    let manifest = Manifest {
        delta: run.params.detuning(),
        chi: run.params.kerr(),
        initial: run.alpha_label(),
        n_max: run.n_max,
        t_r: run.revival_time,
        grid: GridRecord::from(&spec),
        frame: records.into_iter().collect::<Result<_>>()?,
    };
    let path = run.out.join("manifest.toml");
    std::fs::write(&path, toml::to_string(&manifest)?)?;
    info!("{} frames listed in {}", manifest.frame.len(), path.display());
    Ok(path)
}

fn print_rows(title: &str, rows: &[TableRow]) {
    println!("{title}");
    for r in rows {
        println!(
            "{} delta={:<8.4} chi={:<7.4} reference={:<7} computed={:<10.6} dev={:.2e}",
            if r.passed() { "PASS" } else { "FAIL" },
            r.detuning,
            r.kerr,
            r.paper_value,
            r.computed,
            r.abs_dev()
        );
    }
}

fn table_provenance(n_max: usize) -> Provenance {
    Provenance::new().with("alpha", "5").with("n_max", n_max).with("t_r", "per row (revival time at nbar=25)")
}

fn write_rows(path: &Path, rows: &[TableRow], n_max: usize) -> Result<()> {
    let mut w = create(path)?;
    formats::write_table(&mut w, rows, &table_provenance(n_max))?;
    w.flush()?;
    Ok(())
}

pub fn table1(out: &Path, pool: &rayon::ThreadPool, n_max: usize) -> Result<bool> {
    let rows = ordered_map(pool, &REFERENCE_COLUMNS, |c| table1_row(c, n_max));
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    print_rows("mean photon number at t_r/2", &rows);
    write_rows(&out.join("table1.csv"), &rows, n_max)?;
    Ok(rows.iter().all(TableRow::passed))
}

pub fn table2(out: &Path, pool: &rayon::ThreadPool, n_max: usize, resolution: f64) -> Result<bool> {
    let rows = ordered_map(pool, &REFERENCE_COLUMNS, |c| table2_row(c, n_max, resolution));
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let fidelity: Vec<TableRow> = rows.iter().map(|r| r.fidelity).collect();
    let theta: Vec<TableRow> = rows.iter().map(|r| r.theta).collect();
    print_rows("cat fidelity at t_r/2", &fidelity);
    print_rows("cat relative phase / pi", &theta);
    write_rows(&out.join("table2.csv"), &fidelity, n_max)?;
    write_rows(&out.join("table2_theta.csv"), &theta, n_max)?;
    Ok(fidelity.iter().chain(&theta).all(TableRow::passed))
}

pub fn delta_c(run: &ResolvedRun) -> Result<()> {
    let p = run.params;
    let dc = critical_detuning(&p).context("critical detuning")?;
    println!("delta_c = {dc}");
    let nbar = run.initial.mean_photon_number();
    let report = rabi_taylor(&p, nbar, 4)?;
    println!("delta = {}  chi = {}  nbar = {nbar}", p.detuning(), p.kerr());
    match report.revival_time {
        Ok(t) => println!("t_r = {t}"),
        Err(e) => println!("t_r undefined: {e}"),
    }
    for (k, d) in report.derivative_table.iter().enumerate() {
        println!("d^{k} Omega/dn^{k} = {d:e}");
    }
    println!("periodic = {}", report.is_periodic);
    Ok(())
}

pub fn validate(oracle_n_max: usize) -> Result<bool> {
    let report = validate::run_suite(oracle_n_max).map_err(|e| anyhow::anyhow!("{e}"))?;
    print!("{report}");
    Ok(report.all_passed())
}

pub fn rwa_check(run: &ResolvedRun) -> Result<()> {
    let p = run.params;
    match p.carriers() {
        None => println!("no carrier frequencies configured; nothing to check"),
        Some(c) => {
            let ratio = p.detuning().abs() / c.cavity.abs();
            match p.rwa_violation() {
                Some(r) => warn!("|delta|/omega_0 = {r:e} is not below 1e-3; the rotating-wave treatment is questionable"),
                None => println!("|delta|/omega_0 = {ratio:e} (below 1e-3)"),
            }
        }
    }
    Ok(())
}

pub fn check_scan_resolution(r: f64) -> Result<f64> {
    if !(r > 0.0 && r <= 0.01) {
        bail!("--scan-resolution is in units of pi and must lie in (0, 0.01]");
    }
    Ok(r * std::f64::consts::PI)
}

pub const DEFAULT_SCAN_RESOLUTION_OVER_PI: f64 = DEFAULT_SCAN_RESOLUTION / std::f64::consts::PI;

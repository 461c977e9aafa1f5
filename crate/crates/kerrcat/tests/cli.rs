use std::{path::Path, process::Command};

fn kerrcat(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_kerrcat")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

const SMALL: &str = "[model]\ndelta = \"critical\"\nchi = 0.1\n\
[time]\nend = 0.2\npoints = 40\nat = 0.25\n\
[animate]\nframes = 400\n\
[grid]\nn_re = 5\nn_im = 5\n";

#[test]
fn unknown_key_is_reported_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[model]\ndelta = 1.0\nchii = 0.1\n");
    let out = kerrcat(&["--config", &cfg, "inversion"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("run.toml") && err.contains("line 3") && err.contains("chii"), "{err}");
}

#[test]
fn critical_detuning_needs_kerr() {
    let out = kerrcat(&["--delta", "critical", "--chi", "0", "delta-c"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no finite critical detuning for chi=0"));
}

#[test]
fn seed_flag_is_rejected() {
    let out = kerrcat(&["--seed", "7", "validate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
}

#[test]
fn outputs_do_not_depend_on_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for (jobs, out) in [("1", &a), ("3", &b)] {
        for cmd in ["inversion", "entropy", "wigner"] {
            let o = kerrcat(&["--config", &cfg, "--jobs", jobs, "--out", out.to_str().unwrap(), cmd]);
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        }
    }
    for f in ["inversion.csv", "entropy.csv", "wigner.psgrid"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn resolved_config_reproduces_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let first = dir.path().join("first");
    let second = dir.path().join("second");
    assert!(kerrcat(&["--config", &cfg, "--out", first.to_str().unwrap(), "qfunc"]).status.success());
    let resolved = first.join("resolved-config.toml");
    let text = std::fs::read_to_string(&resolved).unwrap();
    assert!(text.contains("delta = 4.8"), "{text}");
    assert!(kerrcat(&["--config", resolved.to_str().unwrap(), "--out", second.to_str().unwrap(), "qfunc"])
        .status
        .success());
    assert_eq!(std::fs::read(first.join("qfunc.psgrid")).unwrap(), std::fs::read(second.join("qfunc.psgrid")).unwrap());
}

#[test]
fn animation_manifest_lists_uniform_frames() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("anim");
    let o = kerrcat(&["--config", &cfg, "--out", out.to_str().unwrap(), "animate"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest: kerrcat::formats::Manifest =
        toml::from_str(&std::fs::read_to_string(out.join("manifest.toml")).unwrap()).unwrap();
    assert_eq!(manifest.frame.len(), 400);
    for (k, f) in manifest.frame.iter().enumerate() {
        assert!((f.t_over_tr - k as f64 / 800.0).abs() < 1e-12);
        assert_eq!(f.file, format!("frames/frame_{k:04}.psgrid"));
        assert!(out.join(&f.file).exists());
    }
}

#[test]
fn validate_reports_oracle_deviation() {
    let o = kerrcat(&["validate", "--n-max", "24"]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    let line = text.lines().find(|l| l.contains("oracle-equivalence n_max=24 alpha=2")).unwrap();
    assert!(line.starts_with("PASS"), "{line}");
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
}

#[test]
fn table1_exits_zero_with_ten_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = kerrcat(&["--out", dir.path().to_str().unwrap(), "table1"]);
    assert!(o.status.success());
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(dir.path().join("table1.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["delta", "chi", "paper_value", "computed", "abs_dev"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r[4].parse::<f64>().unwrap() <= 0.002));
}

#[test]
fn rwa_check_warns_on_large_detuning() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[model]\ndelta = 1.0\nchi = 0.1\ncavity = 100.0\natom = 101.0\n");
    let o = kerrcat(&["--config", &cfg, "rwa-check"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("rotating-wave"));
    let cfg = write_config(dir.path(), "[model]\ndelta = 1.0\nchi = 0.1\ncavity = 1e5\natom = 100001.0\n");
    let o = kerrcat(&["--config", &cfg, "rwa-check"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("below 1e-3"));
}

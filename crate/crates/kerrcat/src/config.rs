//! Run configuration: a strict TOML schema and its resolution into concrete
//! numbers.

use std::path::{Path, PathBuf};

use kerrcat_core::{
    observables::DEFAULT_POINTS_PER_REVIVAL,
    periodicity::{critical_detuning, revival_time},
    phase_space::{GridSpec, PhaseSpaceKind},
    states::{CatSpec, InitialField},
    ModelParams, C64, DEFAULT_EPS_TRUNC, DEFAULT_N_MAX,
};
use serde::{Deserialize, Serialize};

/// File written next to every run's outputs.
pub const RESOLVED_CONFIG_FILE: &str = "resolved-config.toml";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{field}: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("{field}: {source}")]
    Core { field: &'static str, source: kerrcat_core::Error },
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn invalid(field: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field, reason: reason.into() }
}

fn core(field: &'static str) -> impl FnOnce(kerrcat_core::Error) -> ConfigError {
    move |source| ConfigError::Core { field, source }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Detuning {
    Value(f64),
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    /// Atom-field detuning in units of the coupling, or `"critical"`.
    pub delta: Detuning,
    pub chi: f64,
    /// Optional carrier frequencies, used only by `rwa-check`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cavity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atom: Option<f64>,
}

impl Default for ModelSection {
    fn default() -> Self { Self { delta: Detuning::Value(0.0), chi: 0.0, cavity: None, atom: None } }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "lowercase", deny_unknown_fields)]
pub enum InitialSection {
    Coherent { alpha: [f64; 2] },
    Mixture { alpha: [f64; 2] },
    Fock { n: usize },
    Thermal { nbar: f64 },
    Cat { amplitude: [f64; 2], theta_over_pi: f64 },
}

impl Default for InitialSection {
    fn default() -> Self { Self::Coherent { alpha: [5.0, 0.0] } }
}

impl InitialSection {
    pub fn build(&self) -> Result<InitialField, ConfigError> {
        let c = |a: [f64; 2]| C64::new(a[0], a[1]);
        Ok(match *self {
            Self::Coherent { alpha } => InitialField::Coherent { alpha: c(alpha) },
            Self::Mixture { alpha } => InitialField::Mixture { alpha: c(alpha) },
            Self::Fock { n } => InitialField::Fock { n },
            Self::Thermal { nbar } => InitialField::Thermal { nbar },
            Self::Cat { amplitude, theta_over_pi } => InitialField::Cat(
                CatSpec::new(c(amplitude), theta_over_pi * std::f64::consts::PI).map_err(core("initial"))?,
            ),
        })
    }

    /// Short description for provenance lines.
    pub fn describe(&self) -> String {
        match self {
            Self::Coherent { alpha } => format!("coherent({}{:+}i)", alpha[0], alpha[1]),
            Self::Mixture { alpha } => format!("mixture({}{:+}i)", alpha[0], alpha[1]),
            Self::Fock { n } => format!("fock({n})"),
            Self::Thermal { nbar } => format!("thermal({nbar})"),
            Self::Cat { amplitude, theta_over_pi } => {
                format!("cat({}{:+}i,{}pi)", amplitude[0], amplitude[1], theta_over_pi)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Truncation {
    Fixed(usize),
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TruncationSection {
    pub n_max: Truncation,
    pub eps_trunc: f64,
}

impl Default for TruncationSection {
    fn default() -> Self { Self { n_max: Truncation::Fixed(DEFAULT_N_MAX), eps_trunc: DEFAULT_EPS_TRUNC } }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeUnit {
    /// Times in units of `1 / Omega`.
    Absolute,
    /// Times as fractions of the revival time.
    Revival,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeSection {
    pub unit: TimeUnit,
    pub start: f64,
    pub end: f64,
    /// Sample count; defaults to 2000 per revival time plus one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    /// Single evaluation time for `qfunc` and `wigner`.
    pub at: f64,
}

impl Default for TimeSection {
    fn default() -> Self { Self { unit: TimeUnit::Revival, start: 0.0, end: 2.0, points: None, at: 0.5 } }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnimateSection {
    /// Span in the units of `[time]`.
    pub start: f64,
    pub end: f64,
    pub frames: usize,
    pub kind: String,
}

impl Default for AnimateSection {
    fn default() -> Self { Self { start: 0.0, end: 0.5, frames: 400, kind: "Q".into() } }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub re: [f64; 2],
    pub im: [f64; 2],
    pub n_re: usize,
    pub n_im: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        let d = GridSpec::default();
        Self { re: [d.re_min, d.re_max], im: [d.im_min, d.im_max], n_re: d.n_re, n_im: d.n_im }
    }
}

impl GridSection {
    pub fn spec(&self) -> GridSpec {
        GridSpec {
            re_min: self.re[0],
            re_max: self.re[1],
            n_re: self.n_re,
            im_min: self.im[0],
            im_max: self.im[1],
            n_im: self.n_im,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub model: ModelSection,
    pub initial: InitialSection,
    pub truncation: TruncationSection,
    pub time: TimeSection,
    pub animate: AnimateSection,
    pub grid: GridSection,
}

/// A configuration with every choice turned into a number.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedRun {
    pub config: RunConfig,
    pub params: ModelParams,
    pub initial: InitialField,
    pub n_max: usize,
    pub eps_trunc: f64,
    pub revival_time: f64,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn from_toml(text: &str, origin: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse { path: origin.to_string(), message: e.to_string() })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_toml(&text, &path.display().to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configuration always serializes")
    }

    pub fn resolve(&self, out_override: Option<&Path>) -> Result<ResolvedRun, ConfigError> {
        let m = &self.model;
        let delta = match &m.delta {
            Detuning::Value(v) => *v,
            Detuning::Named(s) if s == "critical" => {
                critical_detuning(&ModelParams::new(0.0, m.chi).map_err(core("model.chi"))?)
                    .map_err(core("model.delta"))?
            }
            Detuning::Named(s) => return Err(invalid("model.delta", format!("expected a number or \"critical\", got {s:?}"))),
        };
        let mut params = ModelParams::new(delta, m.chi).map_err(core("model"))?;
        match (m.cavity, m.atom) {
            (Some(c), Some(a)) => params = params.with_carriers(c, a).map_err(core("model.cavity"))?,
            (None, None) => {}
            _ => return Err(invalid("model", "cavity and atom carrier frequencies go together")),
        }

        let initial = self.initial.build()?;
        let t = &self.truncation;
        if !(t.eps_trunc > 0.0 && t.eps_trunc < 1.0) {
            return Err(invalid("truncation.eps_trunc", "must lie in (0, 1)"));
        }
        let n_max = match &t.n_max {
            Truncation::Fixed(n) => *n,
            Truncation::Named(s) if s == "auto" => {
                initial.auto_truncation(t.eps_trunc).map_err(core("truncation.n_max"))?
            }
            Truncation::Named(s) => return Err(invalid("truncation.n_max", format!("expected an integer or \"auto\", got {s:?}"))),
        };
        let revival_time =
            revival_time(&params, initial.mean_photon_number()).map_err(core("model (revival time)"))?;

        self.grid.spec().validate().map_err(core("grid"))?;
        if PhaseSpaceKind::from_symbol(&self.animate.kind).is_none() {
            return Err(invalid("animate.kind", format!("expected \"Q\" or \"W\", got {:?}", self.animate.kind)));
        }
        let tm = &self.time;
        if !(tm.start.is_finite() && tm.end.is_finite() && tm.end > tm.start) {
            return Err(invalid("time", "need finite start < end"));
        }
        if tm.points == Some(0) {
            return Err(invalid("time.points", "must be positive"));
        }

        let mut resolved = self.clone();
        resolved.model.delta = Detuning::Value(delta);
        resolved.truncation.n_max = Truncation::Fixed(n_max);
        let out = out_override.map(Path::to_path_buf).or_else(|| self.out.clone()).unwrap_or_else(|| "out".into());
        resolved.out = Some(out.clone());
        Ok(ResolvedRun { config: resolved, params, initial, n_max, eps_trunc: t.eps_trunc, revival_time, out })
    }
}

impl ResolvedRun {
    pub fn to_seconds(&self, x: f64) -> f64 {
        match self.config.time.unit {
            TimeUnit::Absolute => x,
            TimeUnit::Revival => x * self.revival_time,
        }
    }

    pub fn series_times(&self) -> Vec<f64> {
        let tm = &self.config.time;
        let (a, b) = (self.to_seconds(tm.start), self.to_seconds(tm.end));
        let points = tm.points.unwrap_or_else(|| {
            ((b - a) / self.revival_time * DEFAULT_POINTS_PER_REVIVAL as f64).round() as usize + 1
        });
        kerrcat_core::observables::uniform_times(a, b, points.max(2))
    }

    pub fn snapshot_time(&self) -> f64 { self.to_seconds(self.config.time.at) }

    pub fn grid(&self) -> GridSpec { self.config.grid.spec() }

    pub fn alpha_label(&self) -> String { self.config.initial.describe() }

    pub fn provenance(&self) -> crate::formats::Provenance {
        crate::formats::Provenance::new()
            .with("delta", self.params.detuning())
            .with("chi", self.params.kerr())
            .with("initial", self.alpha_label())
            .with("n_max", self.n_max)
            .with("t_r", self.revival_time)
    }

    pub fn write_resolved(&self, dir: &Path) -> std::io::Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(RESOLVED_CONFIG_FILE);
        std::fs::write(&path, self.config.to_toml())?;
        Ok(path)
    }
}

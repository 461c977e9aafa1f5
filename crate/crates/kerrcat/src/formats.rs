//! Text formats for density matrices, phase-space grids, time series,
//! regression tables and animation manifests.
//!
//! Every writer takes a [`Provenance`] and emits it as `#` comment lines.
//! Floats are written with `{:e}`, which is the shortest representation that
//! parses back to the same bits.

use std::io::{BufRead, Write};

use kerrcat_core::{
    observables::TimeSeries,
    periodicity::TableRow,
    phase_space::{GridSpec, PhaseSpaceGrid, PhaseSpaceKind},
    CMatrix, FieldState, C64,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] kerrcat_core::Error),
}

pub type FormatResult<T> = Result<T, FormatError>;

fn parse_err(line: usize, reason: impl Into<String>) -> FormatError {
    FormatError::Parse { line, reason: reason.into() }
}

/// Resolved run parameters recorded at the top of every output file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Provenance {
    entries: Vec<(String, String)>,
}

impl Provenance {
    pub fn new() -> Self { Self::default() }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    pub fn entries(&self) -> &[(String, String)] { &self.entries }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn write_comments<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        for (k, v) in &self.entries {
            writeln!(w, "# {k}={v}")?;
        }
        Ok(())
    }

    fn push_comment(&mut self, line: &str) {
        let body = line.trim_start_matches('#').trim();
        if let Some((k, v)) = body.split_once('=') {
            self.entries.push((k.trim().to_string(), v.trim().to_string()));
        }
    }
}

fn parse_f64(s: &str, line: usize) -> FormatResult<f64> {
    s.trim().parse().map_err(|_| parse_err(line, format!("bad number {s:?}")))
}

/// Splits `key=value` header tokens into a lookup.
fn header_fields<'a>(header: &'a str, magic: &[&str], line: usize) -> FormatResult<Vec<(&'a str, &'a str)>> {
    let mut tokens = header.split_whitespace();
    for m in magic {
        if tokens.next() != Some(*m) {
            return Err(parse_err(line, format!("expected header starting with {:?}", magic.join(" "))));
        }
    }
    tokens
        .map(|t| t.split_once('=').ok_or_else(|| parse_err(line, format!("bad header token {t:?}"))))
        .collect()
}

fn field<'a>(fields: &[(&'a str, &'a str)], key: &str, line: usize) -> FormatResult<&'a str> {
    fields
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| parse_err(line, format!("missing header field {key}")))
}

/// Reads non-empty, non-comment lines, collecting comments into provenance.
struct Lines<R> {
    inner: std::io::Lines<R>,
    number: usize,
    provenance: Provenance,
}

impl<R: BufRead> Lines<R> {
    fn new(r: R) -> Self { Self { inner: r.lines(), number: 0, provenance: Provenance::new() } }

    fn next_data(&mut self) -> FormatResult<Option<(usize, String)>> {
        for line in self.inner.by_ref() {
            self.number += 1;
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if trimmed.starts_with('#') {
                self.provenance.push_comment(trimmed);
                continue;
            }
            return Ok(Some((self.number, line)));
        }
        Ok(None)
    }
}

// fock-dm v1

pub fn write_fock_dm<W: Write>(w: &mut W, rho: &FieldState, provenance: &Provenance) -> std::io::Result<()> {
    let dim = rho.dim();
    writeln!(w, "fock-dm v1 dim={dim}")?;
    provenance.write_comments(w)?;
    for n in 0..dim {
        let row: Vec<String> = rho.matrix().row(n).iter().map(|z| format!("{:e},{:e}", z.re, z.im)).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

pub fn read_fock_dm<R: BufRead>(r: R) -> FormatResult<(FieldState, Provenance)> {
    let mut lines = Lines::new(r);
    let (ln, header) = lines.next_data()?.ok_or_else(|| parse_err(0, "empty input"))?;
    let fields = header_fields(&header, &["fock-dm", "v1"], ln)?;
    let dim: usize = field(&fields, "dim", ln)?.parse().map_err(|_| parse_err(ln, "bad dim"))?;
    if dim == 0 {
        return Err(parse_err(ln, "dim must be positive"));
    }
    let mut data = Vec::with_capacity(dim * dim);
    for _ in 0..dim {
        let (ln, row) = lines.next_data()?.ok_or_else(|| parse_err(lines.number, "truncated matrix"))?;
        let entries: Vec<&str> = row.split_whitespace().collect();
        if entries.len() != dim {
            return Err(parse_err(ln, format!("expected {dim} entries, found {}", entries.len())));
        }
        for e in entries {
            let (re, im) = e.split_once(',').ok_or_else(|| parse_err(ln, format!("bad entry {e:?}")))?;
            data.push(C64::new(parse_f64(re, ln)?, parse_f64(im, ln)?));
        }
    }
    if let Some((ln, _)) = lines.next_data()? {
        return Err(parse_err(ln, "trailing data after matrix"));
    }
    let rho = CMatrix::from_vec(dim, data).ok_or_else(|| parse_err(ln, "dimension mismatch"))?;
    Ok((FieldState::from_matrix(rho), lines.provenance))
}

// psgrid v1

pub fn write_psgrid<W: Write>(w: &mut W, grid: &PhaseSpaceGrid, provenance: &Provenance) -> std::io::Result<()> {
    let s = &grid.spec;
    writeln!(
        w,
        "psgrid v1 kind={} t={:e} re={:e}:{:e}:{} im={:e}:{:e}:{}",
        grid.kind.symbol(),
        grid.time,
        s.re_min,
        s.re_max,
        s.n_re,
        s.im_min,
        s.im_max,
        s.n_im
    )?;
    provenance.write_comments(w)?;
    for row in grid.values.chunks(s.n_re) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        writeln!(w, "{}", cells.join(" "))?;
    }
    Ok(())
}

fn parse_range(s: &str, line: usize) -> FormatResult<(f64, f64, usize)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(parse_err(line, format!("range {s:?} is not min:max:n")));
    }
    let n = parts[2].parse().map_err(|_| parse_err(line, format!("bad point count {:?}", parts[2])))?;
    Ok((parse_f64(parts[0], line)?, parse_f64(parts[1], line)?, n))
}

pub fn read_psgrid<R: BufRead>(r: R) -> FormatResult<(PhaseSpaceGrid, Provenance)> {
    let mut lines = Lines::new(r);
    let (ln, header) = lines.next_data()?.ok_or_else(|| parse_err(0, "empty input"))?;
    let fields = header_fields(&header, &["psgrid", "v1"], ln)?;
    let kind_symbol = field(&fields, "kind", ln)?;
    let kind = PhaseSpaceKind::from_symbol(kind_symbol)
        .ok_or_else(|| parse_err(ln, format!("unknown kind {kind_symbol:?}")))?;
    let time = parse_f64(field(&fields, "t", ln)?, ln)?;
    let (re_min, re_max, n_re) = parse_range(field(&fields, "re", ln)?, ln)?;
    let (im_min, im_max, n_im) = parse_range(field(&fields, "im", ln)?, ln)?;
    let spec = GridSpec { re_min, re_max, im_min, im_max, n_re, n_im };
    spec.validate().map_err(|e| parse_err(ln, e.to_string()))?;
    let mut values = Vec::with_capacity(spec.len());
    for _ in 0..n_im {
        let (ln, row) = lines.next_data()?.ok_or_else(|| parse_err(lines.number, "truncated grid"))?;
        let before = values.len();
        for cell in row.split_whitespace() {
            values.push(parse_f64(cell, ln)?);
        }
        if values.len() - before != n_re {
            return Err(parse_err(ln, format!("expected {n_re} values, found {}", values.len() - before)));
        }
    }
    if let Some((ln, _)) = lines.next_data()? {
        return Err(parse_err(ln, "trailing data after grid"));
    }
    Ok((PhaseSpaceGrid { spec, kind, time, values }, lines.provenance))
}

// time series CSV

pub fn write_series<W: Write>(w: &mut W, series: &TimeSeries, provenance: &Provenance) -> FormatResult<()> {
    provenance.write_comments(w)?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["t", "t_over_tr", "value"])?;
    for ((t, x), v) in series.times().iter().zip(series.normalized_times()).zip(series.values()) {
        out.write_record([format!("{t:e}"), format!("{x:e}"), format!("{v:e}")])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Deserialize)]
struct SeriesRecord {
    t: f64,
    #[allow(dead_code)]
    t_over_tr: f64,
    value: f64,
}

/// Reads a series back; the revival time comes from the `t_r` provenance
/// entry.
pub fn read_series<R: std::io::Read>(r: R) -> FormatResult<(TimeSeries, Provenance)> {
    let mut text = String::new();
    let mut r = r;
    r.read_to_string(&mut text)?;
    let mut provenance = Provenance::new();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        provenance.push_comment(line);
    }
    let revival_time = provenance
        .get("t_r")
        .ok_or_else(|| parse_err(0, "missing t_r provenance"))?
        .parse::<f64>()
        .map_err(|_| parse_err(0, "bad t_r provenance"))?;
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let mut times = Vec::new();
    let mut values = Vec::new();
    for rec in reader.deserialize() {
        let rec: SeriesRecord = rec?;
        times.push(rec.t);
        values.push(rec.value);
    }
    Ok((TimeSeries::new(times, revival_time, values)?, provenance))
}

// regression tables

pub fn write_table<W: Write>(w: &mut W, rows: &[TableRow], provenance: &Provenance) -> FormatResult<()> {
    provenance.write_comments(w)?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["delta", "chi", "paper_value", "computed", "abs_dev"])?;
    for r in rows {
        out.write_record([
            format!("{}", r.detuning),
            format!("{}", r.kerr),
            format!("{}", r.paper_value),
            format!("{:.6}", r.computed),
            format!("{:.6}", r.abs_dev()),
        ])?;
    }
    out.flush()?;
    Ok(())
}

// animation manifest

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridRecord {
    pub re: [f64; 2],
    pub im: [f64; 2],
    pub n_re: usize,
    pub n_im: usize,
}

impl From<&GridSpec> for GridRecord {
    fn from(s: &GridSpec) -> Self {
        Self { re: [s.re_min, s.re_max], im: [s.im_min, s.im_max], n_re: s.n_re, n_im: s.n_im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameRecord {
    pub file: String,
    pub t: f64,
    pub t_over_tr: f64,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub delta: f64,
    pub chi: f64,
    pub initial: String,
    pub n_max: usize,
    pub t_r: f64,
    pub grid: GridRecord,
    pub frame: Vec<FrameRecord>,
}

pub fn frame_file_name(index: usize) -> String { format!("frame_{index:04}.psgrid") }

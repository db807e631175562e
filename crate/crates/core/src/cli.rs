//! Run configuration, report rendering and the persistent zero cache used by
//! the `nanodot` binary.
//!
//! Every command produces a [`Report`]: a set of metadata entries and a
//! table. CSV output writes the metadata as `# key=value` comment lines,
//! then a header row and one row per record, floats with 17 significant
//! digits. JSON output is a single object `{"metadata": {...}, "data": [...]}`.
//!
//! The cache is a plain text file, one tab-separated entry per line, only
//! ever appended to. Concurrent writers are not supported.

use std::collections::{HashMap, HashSet};
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::bessel::{Order, Sign};
use crate::charge::{self, Unfolding, K_B_MEV_PER_K, TAIL_BOUND_KT};
use crate::error::{Error, Result};
use crate::spectrum::{self, DotConfig, Z_MAX_CAP};
use crate::zeros::{self, ZeroKind, ZeroRecord};
use crate::VERSION;

/// Environment variable naming the cache file when `--cache` is not given.
pub const CACHE_ENV: &str = "NANODOT_CACHE";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidArgument(format!(
                "unknown output format '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub radius_nm: f64,
    pub fermi_velocity_over_c: f64,
    pub temperature_k: f64,
    pub degeneracy: u32,
    pub z_max: f64,
    pub tolerance: f64,
    pub output_format: OutputFormat,
    pub cache_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let dot = DotConfig::default();
        RunConfig {
            radius_nm: dot.radius_nm,
            fermi_velocity_over_c: dot.fermi_velocity_over_c,
            temperature_k: 0.0,
            degeneracy: dot.degeneracy,
            z_max: 120.0,
            tolerance: 1e-10,
            output_format: OutputFormat::Csv,
            cache_path: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.dot_config()?;
        if !(self.temperature_k.is_finite() && self.temperature_k >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "temperature must be non-negative, got {}",
                self.temperature_k
            )));
        }
        if !(self.z_max.is_finite() && self.z_max > 0.0 && self.z_max <= Z_MAX_CAP) {
            return Err(Error::InvalidArgument(format!(
                "z_max must be in (0, {Z_MAX_CAP}], got {}",
                self.z_max
            )));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }

    pub fn dot_config(&self) -> Result<DotConfig> {
        DotConfig::new(self.radius_nm, self.fermi_velocity_over_c)?.with_degeneracy(self.degeneracy)
    }

    fn metadata(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("version".into(), json!(VERSION));
        m.insert("radius_nm".into(), json!(self.radius_nm));
        m.insert(
            "fermi_velocity_over_c".into(),
            json!(self.fermi_velocity_over_c),
        );
        m.insert("degeneracy".into(), json!(self.degeneracy));
        m.insert("temperature_k".into(), json!(self.temperature_k));
        m.insert("z_max".into(), json!(self.z_max));
        m.insert("tolerance".into(), json!(self.tolerance));
        m
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_float(*x),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Float(x) => json!(x),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<u32> for Cell {
    fn from(i: u32) -> Self {
        Cell::Int(i64::from(i))
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// 17 significant digits, `.` decimal separator.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Output of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub metadata: Map<String, Value>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    fn new(command: &str, config: &RunConfig, columns: Vec<&'static str>) -> Self {
        let mut metadata = config.metadata();
        metadata.insert("command".into(), json!(command));
        Report {
            metadata,
            columns,
            rows: Vec::new(),
        }
    }

    fn meta(&mut self, key: &str, value: Value) {
        self.metadata.insert(key.into(), value);
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.metadata {
            let text = match value {
                Value::String(s) => s.clone(),
                Value::Number(n) => match n.as_f64() {
                    Some(x) if !n.is_i64() && !n.is_u64() => format_float(x),
                    _ => n.to_string(),
                },
                other => other.to_string(),
            };
            out.push_str(&format!("# {key}={text}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let data: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let doc = json!({ "metadata": self.metadata, "data": data });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }
}

/// One cached zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CacheEntry {
    /// Exact decimal form of the order.
    pub nu: String,
    pub kind: ZeroKind,
    pub k: usize,
    pub value: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub initial_lo: f64,
    pub initial_hi: f64,
    pub tol: f64,
    pub version: String,
}

impl CacheEntry {
    fn from_record(r: &ZeroRecord) -> Self {
        CacheEntry {
            nu: r.order.value().to_string(),
            kind: r.kind,
            k: r.k,
            value: r.value,
            bracket_lo: r.bracket_lo,
            bracket_hi: r.bracket_hi,
            initial_lo: r.initial_bracket.0,
            initial_hi: r.initial_bracket.1,
            tol: r.tol,
            version: VERSION.to_string(),
        }
    }

    fn to_record(&self) -> Result<ZeroRecord> {
        let nu: f64 = self
            .nu
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad cached order {}", self.nu)))?;
        Ok(ZeroRecord {
            order: Order::new(nu)?,
            kind: self.kind,
            k: self.k,
            value: self.value,
            bracket_lo: self.bracket_lo,
            bracket_hi: self.bracket_hi,
            initial_bracket: (self.initial_lo, self.initial_hi),
            tol: self.tol,
        })
    }

    fn to_line(&self) -> String {
        [
            self.nu.clone(),
            self.kind.to_string(),
            self.k.to_string(),
            format_float(self.value),
            format_float(self.bracket_lo),
            format_float(self.bracket_hi),
            format_float(self.initial_lo),
            format_float(self.initial_hi),
            format_float(self.tol),
            self.version.clone(),
        ]
        .join("\t")
    }

    fn parse(line: &str) -> Option<Self> {
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 10 {
            return None;
        }
        Some(CacheEntry {
            nu: f[0].to_string(),
            kind: f[1].parse().ok()?,
            k: f[2].parse().ok()?,
            value: f[3].parse().ok()?,
            bracket_lo: f[4].parse().ok()?,
            bracket_hi: f[5].parse().ok()?,
            initial_lo: f[6].parse().ok()?,
            initial_hi: f[7].parse().ok()?,
            tol: f[8].parse().ok()?,
            version: f[9].to_string(),
        })
    }
}

type CacheKey = (String, ZeroKind, usize);

/// Append-only zero cache. New entries are buffered and written by
/// [`ZeroCache::flush`].
#[derive(Debug, Default)]
pub struct ZeroCache {
    path: Option<PathBuf>,
    entries: HashMap<CacheKey, CacheEntry>,
    pending: Vec<CacheEntry>,
}

impl ZeroCache {
    /// A cache that never stores anything.
    pub fn disabled() -> Self {
        ZeroCache::default()
    }

    /// Loads the cache file; a missing file is an empty cache. Unparseable
    /// lines are ignored.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries: HashMap<CacheKey, CacheEntry> = HashMap::new();
        match fs::read_to_string(&path) {
            Ok(text) => {
                for entry in text.lines().filter_map(CacheEntry::parse) {
                    if entry.version != VERSION {
                        continue;
                    }
                    let key = (entry.nu.clone(), entry.kind, entry.k);
                    match entries.get(&key) {
                        Some(old) if old.tol <= entry.tol => {}
                        _ => {
                            entries.insert(key, entry);
                        }
                    }
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => {
                return Err(Error::InvalidArgument(format!(
                    "cannot read cache {}: {e}",
                    path.display()
                )))
            }
        }
        Ok(ZeroCache {
            path: Some(path),
            entries,
            pending: Vec::new(),
        })
    }

    pub fn is_enabled(&self) -> bool {
        self.path.is_some()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// A cached zero usable at tolerance `tol`.
    pub fn lookup(&self, order: Order, kind: ZeroKind, k: usize, tol: f64) -> Option<ZeroRecord> {
        let entry = self.entries.get(&(order.value().to_string(), kind, k))?;
        if entry.tol <= tol && entry.version == VERSION {
            entry.to_record().ok()
        } else {
            None
        }
    }

    pub fn insert(&mut self, record: &ZeroRecord) {
        if !self.is_enabled() {
            return;
        }
        let entry = CacheEntry::from_record(record);
        let key = (entry.nu.clone(), entry.kind, entry.k);
        if matches!(self.entries.get(&key), Some(old) if old.tol <= entry.tol) {
            return;
        }
        self.entries.insert(key, entry.clone());
        self.pending.push(entry);
    }

    /// Appends buffered entries to the cache file.
    pub fn flush(&mut self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        if self.pending.is_empty() {
            return Ok(());
        }
        let io = |e: std::io::Error| {
            Error::InvalidArgument(format!("cannot write cache {}: {e}", path.display()))
        };
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(io)?;
        let mut text = String::new();
        for entry in self.pending.drain(..) {
            text.push_str(&entry.to_line());
            text.push('\n');
        }
        file.write_all(text.as_bytes()).map_err(io)
    }
}

/// Cache path from the flag, falling back to the environment.
pub fn resolve_cache_path(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    })
}

/// The first `count` zeroes of one kind, served from the cache when every
/// one of them is present at a sufficient tolerance.
pub fn cached_zeros(
    order: Order,
    kind: ZeroKind,
    count: usize,
    tol: f64,
    cache: &mut ZeroCache,
) -> Result<Vec<ZeroRecord>> {
    let hits: Option<Vec<ZeroRecord>> = (1..=count)
        .map(|k| cache.lookup(order, kind, k, tol))
        .collect();
    if let Some(records) = hits {
        if !records.is_empty() {
            return Ok(records);
        }
    }
    let records = zeros::zeros_of_kind(order, kind, count, tol)?;
    for r in &records {
        cache.insert(r);
    }
    Ok(records)
}

pub fn cmd_zeros(
    config: &RunConfig,
    order: Order,
    kind: ZeroKind,
    count: usize,
    cache: &mut ZeroCache,
) -> Result<Report> {
    config.validate()?;
    if matches!(kind, ZeroKind::CrossMinus | ZeroKind::CrossPlus) {
        order.require_interlacing_range()?;
    }
    let records = cached_zeros(order, kind, count, config.tolerance, cache)?;
    let mut report = Report::new(
        "zeros",
        config,
        vec!["nu", "kind", "k", "value", "bracket_lo", "bracket_hi"],
    );
    report.meta("nu", json!(order.value()));
    report.meta("kind", json!(kind.as_str()));
    report.meta("count", json!(count));
    for r in records {
        report.rows.push(vec![
            r.order.value().into(),
            kind.as_str().into(),
            r.k.into(),
            r.value.into(),
            r.bracket_lo.into(),
            r.bracket_hi.into(),
        ]);
    }
    Ok(report)
}

pub fn cmd_spectrum(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let dot = config.dot_config()?;
    let table = spectrum::build_spectrum(&dot, config.z_max)?;
    let mut report = Report::new(
        "spectrum",
        config,
        vec![
            "q",
            "lambda",
            "channel_n",
            "family",
            "radial_k",
            "energy_mev",
        ],
    );
    report.meta("gap_mev", json!(spectrum::gap(&dot)?));
    report.meta("energy_scale_mev", json!(table.energy_scale_mev));
    report.meta("levels", json!(table.len()));
    report.meta("complete_below", json!(table.complete_below));
    for l in &table.levels {
        report.rows.push(vec![
            l.global_index_q.into(),
            l.lambda.into(),
            l.channel_n.into(),
            sign_name(l.family).into(),
            l.radial_k.into(),
            l.energy_mev.into(),
        ]);
    }
    Ok(report)
}

fn sign_name(sign: Sign) -> &'static str {
    match sign {
        Sign::Minus => "minus",
        Sign::Plus => "plus",
    }
}

/// `steps` evenly spaced points on `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) || steps == 0 {
        return Err(Error::InvalidArgument(format!(
            "invalid grid [{lo}, {hi}] with {steps} points"
        )));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    // built about the midpoint so that a window symmetric about 0 gives an
    // exactly antisymmetric grid
    let mid = 0.5 * lo + 0.5 * hi;
    let half = 0.5 * hi - 0.5 * lo;
    let m = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| match i {
            0 => lo,
            _ if i + 1 == steps => hi,
            _ => mid + half * ((2 * i) as f64 - m) / m,
        })
        .collect())
}

/// Smallest table extent, in units of `ε₀`, that answers every `μ` in
/// `[mu_min, mu_max]` at temperature `T`.
fn required_z_max(dot: &DotConfig, mu_min: f64, mu_max: f64, temperature_k: f64) -> f64 {
    let reach = mu_min.abs().max(mu_max.abs()) + TAIL_BOUND_KT * K_B_MEV_PER_K * temperature_k;
    (reach / dot.energy_scale_mev()).max(0.0) + 1.0
}

/// Charge curve on a uniform grid. The spectrum is enumerated as far as the
/// grid and temperature require; the configured `z_max` is only a lower
/// bound.
pub fn cmd_charge(config: &RunConfig, mu_min: f64, mu_max: f64, mu_steps: usize) -> Result<Report> {
    config.validate()?;
    let dot = config.dot_config()?;
    let grid = linspace(mu_min, mu_max, mu_steps)?;
    let z_max = required_z_max(&dot, mu_min, mu_max, config.temperature_k);
    if z_max > Z_MAX_CAP {
        return Err(Error::OutOfRange(format!(
            "μ window needs z_max = {z_max}, above {Z_MAX_CAP}"
        )));
    }
    let table = spectrum::build_spectrum(&dot, z_max)?;
    let curve = charge::charge_curve(&grid, config.temperature_k, &table, &dot)?;
    let mut report = Report::new(
        "charge",
        config,
        vec!["mu_mev", "n_single", "n_total", "weyl"],
    );
    report.meta("z_max", json!(z_max));
    report.meta("mu_steps", json!(mu_steps));
    for s in curve.samples {
        report.rows.push(vec![
            s.mu_mev.into(),
            s.n_single.into(),
            s.n_total.into(),
            s.weyl.into(),
        ]);
    }
    Ok(report)
}

pub fn cmd_peaks(config: &RunConfig, mu_min: f64, mu_max: f64) -> Result<Report> {
    config.validate()?;
    let dot = config.dot_config()?;
    let z_max = required_z_max(&dot, mu_min, mu_max, config.temperature_k);
    if z_max > Z_MAX_CAP {
        return Err(Error::OutOfRange(format!(
            "μ window needs z_max = {z_max}, above {Z_MAX_CAP}"
        )));
    }
    let table = spectrum::build_spectrum(&dot, z_max)?;
    let peaks = charge::conductance_peaks_in(&table, &dot, config.temperature_k, mu_min, mu_max)?;
    let mut report = Report::new("peaks", config, vec!["mu_mev", "height"]);
    report.meta("z_max", json!(z_max));
    for p in peaks {
        let height = match p.height {
            Some(h) => Cell::Float(h),
            None => Cell::Text("exact".into()),
        };
        report.rows.push(vec![p.mu_mev.into(), height]);
    }
    Ok(report)
}

/// Interlacing report; the caller maps `violations > 0` to exit code 1.
pub fn cmd_verify(config: &RunConfig, nu_list: &[f64], k_max: usize) -> Result<(Report, bool)> {
    config.validate()?;
    let orders = nu_list
        .iter()
        .map(|&nu| Order::new(nu))
        .collect::<Result<Vec<_>>>()?;
    let result = zeros::verify_interlacing(&orders, k_max, config.tolerance)?;
    let mut report = Report::new("verify", config, vec!["id", "nu", "k", "lhs", "rhs"]);
    report.meta("nu_list", json!(nu_list));
    report.meta("k_max", json!(k_max));
    report.meta("checked_inequalities", json!(result.checked_inequalities));
    report.meta("violations", json!(result.violations.len()));
    report.meta("max_margin_deficit", json!(result.max_margin_deficit));
    report.meta("passed", json!(result.passed()));
    for v in &result.violations {
        report.rows.push(vec![
            v.id.into(),
            v.nu.into(),
            v.k.into(),
            v.lhs.into(),
            v.rhs.into(),
        ]);
    }
    Ok((report, result.passed()))
}

/// Spacing statistics of the first `levels + 1` levels; the spectrum is
/// enumerated until it holds enough levels.
pub fn cmd_spacings(config: &RunConfig, levels: usize, unfolding: Unfolding) -> Result<Report> {
    config.validate()?;
    if levels == 0 {
        return Err(Error::InvalidArgument("--levels must be at least 1".into()));
    }
    let dot = config.dot_config()?;
    // N(z) ≈ z²/4 minus a boundary term; start a little above the Weyl estimate
    let mut z_max = (2.0 * ((levels + 1) as f64).sqrt() * 1.05 + 3.0).min(Z_MAX_CAP);
    let table = loop {
        let table = spectrum::build_spectrum(&dot, z_max)?;
        if table.len() > levels || z_max >= Z_MAX_CAP {
            break table;
        }
        z_max = (z_max * 1.2).min(Z_MAX_CAP);
    };
    let stats = charge::spacing_statistics_with(&table, levels, unfolding)?;
    let mut report = Report::new("spacings", config, vec!["index", "spacing"]);
    report.meta("z_max", json!(z_max));
    report.meta("levels", json!(levels));
    report.meta("unfolding", json!(unfolding));
    report.meta("mean", json!(stats.mean));
    report.meta("cv", json!(stats.cv));
    report.meta("ks_to_exponential", json!(stats.ks_to_exponential));
    report.meta("degenerate", json!(stats.degenerate));
    for (i, s) in stats.spacings.iter().enumerate() {
        report.rows.push(vec![(i + 1).into(), (*s).into()]);
    }
    Ok(report)
}

/// Process exit code for an error.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::InvalidArgument(_) | Error::OutOfRange(_) => 2,
        Error::ConvergenceFailure(_)
        | Error::NumericDegeneracy(_)
        | Error::InsufficientLevels { .. } => 3,
    }
}

/// Parses a comma-separated list of orders; `a:b` expands to the integers
/// and `a:b:h` to the arithmetic progression from `a` to `b`.
pub fn parse_nu_list(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidArgument(format!("invalid order list '{text}'"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let fields: Vec<f64> = part
            .split(':')
            .map(|f| f.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match fields.as_slice() {
            [v] => out.push(*v),
            [a, b] | [a, b, _] => {
                let h = fields.get(2).copied().unwrap_or(1.0);
                if !(h > 0.0) || !(a <= b) || !a.is_finite() || !b.is_finite() {
                    return Err(bad());
                }
                let n = ((b - a) / h + 1e-9).floor() as usize;
                out.extend((0..=n).map(|i| a + h * i as f64));
            }
            _ => return Err(bad()),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    let mut seen = HashSet::new();
    out.retain(|v| seen.insert(v.to_bits()));
    Ok(out)
}

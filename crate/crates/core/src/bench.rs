//! Benchmark rows: run configuration, inspect / estimate / full modes and
//! CSV or aligned-text tables.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::backend::{BackendKind, BackendOptions};
use crate::chem::{load_fixture, Fixture};
use crate::error::{Error, Result};
use crate::fermion::EncodingKind;
use crate::pipeline::{build, BuiltProblem, PipelineOptions};
use crate::vqe::{minimize, CircuitEnergy, Evaluator, VqeConfig};

/// Slack on the `e_fci <= e_vqe <= e_hf` sandwich.
pub const SANDWICH_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Inspect,
    Estimate,
    Full,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Inspect => "inspect",
            Mode::Estimate => "estimate",
            Mode::Full => "full",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "inspect" => Ok(Mode::Inspect),
            "estimate" => Ok(Mode::Estimate),
            "full" => Ok(Mode::Full),
            other => Err(Error::domain(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FrozenCore {
    /// Take the count recommended by the fixture metadata.
    #[default]
    Auto,
    Count(usize),
}

impl FromStr for FrozenCore {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(FrozenCore::Auto);
        }
        s.parse()
            .map(FrozenCore::Count)
            .map_err(|_| Error::domain(format!("n_frozen must be 'auto' or a count, got '{s}'")))
    }
}

impl fmt::Display for FrozenCore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrozenCore::Auto => f.write_str("auto"),
            FrozenCore::Count(n) => write!(f, "{n}"),
        }
    }
}

fn parse_flag(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "1" | "true" | "on" | "yes" => Ok(true),
        "0" | "false" | "off" | "no" => Ok(false),
        _ => Err(Error::domain(format!("{key} expects on/off, got '{value}'"))),
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::domain(format!("invalid value '{value}' for {key}")))
}

/// One benchmark run. Built from defaults, then a flat `key = value` file,
/// then command-line overrides, each applied with [`RunConfig::set`].
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub fixture: PathBuf,
    pub encoding: EncodingKind,
    /// `None` means on exactly when the encoding is parity.
    pub two_qubit_reduction: Option<bool>,
    pub tapering: bool,
    pub n_frozen: FrozenCore,
    pub optimize_circuit: bool,
    pub backend: BackendOptions,
    pub vqe: VqeConfig,
    pub mode: Mode,
    pub assumed_e_iter: u64,
    /// Compute the sector FCI oracle in full mode.
    pub fci: bool,
    /// Full-mode rows above this many qubits are run as estimates instead.
    pub full_max_qubits: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            fixture: PathBuf::new(),
            encoding: EncodingKind::Parity,
            two_qubit_reduction: None,
            tapering: true,
            n_frozen: FrozenCore::Auto,
            optimize_circuit: true,
            backend: BackendOptions::default(),
            vqe: VqeConfig::default(),
            mode: Mode::Inspect,
            assumed_e_iter: 10,
            fci: true,
            full_max_qubits: 12,
        }
    }
}

impl RunConfig {
    pub const KEYS: &'static [&'static str] = &[
        "fixture",
        "encoding",
        "two_qubit_reduction",
        "tapering",
        "n_frozen",
        "optimize_circuit",
        "backend",
        "shots",
        "seed",
        "max_qubits",
        "tol",
        "max_iter",
        "gradient_step",
        "mode",
        "assumed_e_iter",
        "fci",
        "full_max_qubits",
    ];

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "fixture" => self.fixture = PathBuf::from(value),
            "encoding" => self.encoding = value.parse()?,
            "two_qubit_reduction" => {
                self.two_qubit_reduction = if value.eq_ignore_ascii_case("auto") {
                    None
                } else {
                    Some(parse_flag(key, value)?)
                }
            }
            "tapering" => self.tapering = parse_flag(key, value)?,
            "n_frozen" => self.n_frozen = value.parse()?,
            "optimize_circuit" => self.optimize_circuit = parse_flag(key, value)?,
            "backend" => self.backend.kind = value.parse::<BackendKind>()?,
            "shots" => self.backend.shots = parse_value(key, value)?,
            "seed" => self.backend.seed = parse_value(key, value)?,
            "max_qubits" => self.backend.max_qubits = parse_value(key, value)?,
            "tol" => self.vqe.energy_tolerance = parse_value(key, value)?,
            "max_iter" => self.vqe.max_iterations = parse_value(key, value)?,
            "gradient_step" => self.vqe.gradient_step = parse_value(key, value)?,
            "mode" => self.mode = value.parse()?,
            "assumed_e_iter" => self.assumed_e_iter = parse_value(key, value)?,
            "fci" => self.fci = parse_flag(key, value)?,
            "full_max_qubits" => self.full_max_qubits = parse_value(key, value)?,
            other => return Err(Error::domain(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Applies a `key = value` file; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(i + 1, format!("expected key = value, got '{line}'")))?;
            self.set(k, v).map_err(|e| Error::parse(i + 1, e.to_string()))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.apply_text(&text)
    }

    pub fn pipeline_options(&self, fixture: &Fixture) -> Result<PipelineOptions> {
        let opts = PipelineOptions {
            encoding: self.encoding,
            two_qubit_reduction: self
                .two_qubit_reduction
                .unwrap_or(self.encoding == EncodingKind::Parity),
            tapering: self.tapering,
            n_frozen: match self.n_frozen {
                FrozenCore::Auto => fixture.recommended_frozen(),
                FrozenCore::Count(n) => n,
            },
            optimize_circuit: self.optimize_circuit,
        };
        opts.validate()?;
        Ok(opts)
    }

    pub fn validate(&self) -> Result<()> {
        if self.two_qubit_reduction == Some(true) && self.encoding != EncodingKind::Parity {
            return Err(Error::contract(format!(
                "two-qubit reduction requires the parity encoding, not {}",
                self.encoding
            )));
        }
        if self.assumed_e_iter == 0 {
            return Err(Error::domain("assumed_e_iter must be positive"));
        }
        self.vqe.validate()
    }
}

/// A value that is either measured or derived from the estimate formulas.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reported<T> {
    pub value: T,
    pub estimated: bool,
}

impl<T> Reported<T> {
    pub fn measured(value: T) -> Self {
        Self { value, estimated: false }
    }

    pub fn estimated(value: T) -> Self {
        Self { value, estimated: true }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub label: String,
    pub basis: String,
    pub mode: Mode,
    /// Active electrons after core freezing.
    pub n_electrons: usize,
    pub n_qubits: usize,
    pub n_gates: usize,
    pub n_cnot: usize,
    pub depth: usize,
    pub n_varpar: usize,
    pub tts_1vp: Option<f64>,
    pub tts_iter: Option<Reported<f64>>,
    /// `n_varpar * tts_1vp`, the coarse per-iteration model, always an estimate.
    pub tts_iter_model: Option<f64>,
    pub n_e_iter: Option<Reported<u64>>,
    pub n_evaluations: Option<u64>,
    pub tts_conv: Option<Reported<f64>>,
    pub e_hf: Option<f64>,
    /// Energy of the circuit at zero parameters, i.e. of the reference state.
    pub e_ref: Option<f64>,
    pub e_vqe: Option<f64>,
    pub e_delta: Option<f64>,
    pub e_fci: Option<f64>,
    pub build_seconds: Option<f64>,
    pub encoding: String,
    pub two_qubit_reduction: bool,
    pub tapering: bool,
    pub n_frozen: usize,
    pub count_convention: String,
    pub backend: String,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    /// Empty unless the row failed.
    pub note: String,
}

impl BenchmarkRecord {
    pub fn failed(&self) -> bool {
        !self.note.is_empty()
    }

    /// Checks `e_delta = e_vqe - e_hf` and the variational sandwich.
    pub fn check_invariants(&self) -> Result<()> {
        if let (Some(v), Some(h)) = (self.e_vqe, self.e_hf) {
            match self.e_delta {
                Some(d) if (d - (v - h)).abs() <= 1e-12 => {}
                _ => return Err(Error::contract("e_delta differs from e_vqe - e_hf")),
            }
            if v > h + SANDWICH_SLACK {
                return Err(Error::contract(format!("e_vqe {v} above e_hf {h}")));
            }
        }
        if let (Some(f), Some(v)) = (self.e_fci, self.e_vqe) {
            if f > v + SANDWICH_SLACK {
                return Err(Error::contract(format!("e_fci {f} above e_vqe {v}")));
            }
        }
        Ok(())
    }

    /// Copy with every wall-clock field cleared, for determinism checks.
    pub fn without_timings(&self) -> Self {
        Self {
            tts_1vp: None,
            tts_iter: None,
            tts_iter_model: None,
            tts_conv: None,
            build_seconds: None,
            ..self.clone()
        }
    }

    fn fill_counts(&mut self, built: &BuiltProblem) {
        let stats = built.circuit.stats();
        self.n_electrons = built.active.n_electrons;
        self.n_qubits = built.n_qubits();
        self.n_gates = stats.n_gates;
        self.n_cnot = stats.n_cnot;
        self.depth = stats.depth;
        self.n_varpar = built.n_parameters();
        self.e_hf = Some(built.hf_energy);
        self.build_seconds = Some(built.build_seconds);
        self.count_convention = built.count_convention().to_string();
    }
}

fn blank_record(config: &RunConfig, mode: Mode) -> BenchmarkRecord {
    BenchmarkRecord {
        label: config
            .fixture
            .parent()
            .and_then(|p| p.file_name())
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
        basis: config
            .fixture
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
        mode,
        encoding: config.encoding.name().to_string(),
        two_qubit_reduction: config
            .two_qubit_reduction
            .unwrap_or(config.encoding == EncodingKind::Parity),
        tapering: config.tapering,
        backend: config.backend.kind.to_string(),
        shots: (config.backend.kind == BackendKind::Sampled).then_some(config.backend.shots),
        seed: (config.backend.kind == BackendKind::Sampled).then_some(config.backend.seed),
        ..BenchmarkRecord::default()
    }
}

fn prepare(config: &RunConfig, record: &mut BenchmarkRecord) -> std::result::Result<BuiltProblem, String> {
    config.validate().map_err(|e| format!("config: {e}"))?;
    let fixture = load_fixture(&config.fixture).map_err(|e| format!("chem-io: {e}"))?;
    record.label = fixture.label();
    record.basis = fixture.basis();
    let opts = config.pipeline_options(&fixture).map_err(|e| format!("config: {e}"))?;
    record.n_frozen = opts.n_frozen;
    let built = build(&fixture.problem, opts).map_err(|e| format!("pipeline: {e}"))?;
    record.fill_counts(&built);
    Ok(built)
}

/// Builds the problem through circuit construction only.
pub fn inspect(config: &RunConfig) -> BenchmarkRecord {
    let mut record = blank_record(config, Mode::Inspect);
    if let Err(note) = prepare(config, &mut record) {
        record.note = note;
    }
    record
}

fn estimate_built(config: &RunConfig, built: &BuiltProblem, record: &mut BenchmarkRecord) -> Result<()> {
    let objective = CircuitEnergy::new(&built.hamiltonian, &built.circuit, config.backend)?;
    let mut eval = Evaluator::new(&objective);
    record.e_ref = Some(eval.energy_at(&vec![0.0; built.n_parameters()])?);
    let tts_1vp = eval.eval_seconds();
    let tts_iter = built.n_parameters() as f64 * tts_1vp;
    record.tts_1vp = Some(tts_1vp);
    record.tts_iter = Some(Reported::estimated(tts_iter));
    record.tts_iter_model = Some(tts_iter);
    record.n_e_iter = Some(Reported::estimated(config.assumed_e_iter));
    record.tts_conv = Some(Reported::estimated(config.assumed_e_iter as f64 * tts_iter));
    Ok(())
}

/// Times one energy evaluation and extrapolates with
/// `tts_iter = n_varpar * tts_1vp` and `tts_conv = assumed_e_iter * tts_iter`.
pub fn estimate(config: &RunConfig) -> BenchmarkRecord {
    let mut record = blank_record(config, Mode::Estimate);
    match prepare(config, &mut record) {
        Ok(built) => {
            if let Err(e) = estimate_built(config, &built, &mut record) {
                record.note = format!("backend: {e}");
            }
        }
        Err(note) => record.note = note,
    }
    record
}

/// Full VQE run plus the sector FCI oracle. Rows wider than
/// `full_max_qubits` are run as estimates.
pub fn run_full(config: &RunConfig) -> BenchmarkRecord {
    let mut record = blank_record(config, Mode::Full);
    let built = match prepare(config, &mut record) {
        Ok(b) => b,
        Err(note) => {
            record.note = note;
            return record;
        }
    };
    if built.n_qubits() > config.full_max_qubits {
        record.mode = Mode::Estimate;
        if let Err(e) = estimate_built(config, &built, &mut record) {
            record.note = format!("backend: {e}");
        }
        return record;
    }
    let result = CircuitEnergy::new(&built.hamiltonian, &built.circuit, config.backend)
        .and_then(|objective| minimize(&objective, &config.vqe));
    let result = match result {
        Ok(r) => r,
        Err(e) => {
            record.note = format!("vqe: {e}");
            return record;
        }
    };
    record.tts_1vp = Some(result.tts_1vp);
    record.tts_iter = Some(Reported::measured(result.tts_iter));
    record.tts_iter_model = Some(built.n_parameters() as f64 * result.tts_1vp);
    record.n_e_iter = Some(Reported::measured(result.n_energy_iterations as u64));
    record.n_evaluations = Some(result.n_evaluations);
    record.tts_conv = Some(Reported::measured(result.tts_conv));
    if config.vqe.initial_parameters.is_none() {
        record.e_ref = Some(result.initial_energy);
    }
    record.e_vqe = Some(result.energy);
    record.e_delta = record.e_hf.map(|h| result.energy - h);
    if config.fci {
        match built.sector_fci() {
            Ok(fci) => record.e_fci = Some(fci.energy),
            Err(e) => record.note = format!("backend: sector FCI failed: {e}"),
        }
    }
    if !result.converged {
        record.note = format!("vqe: not converged after {} iterations", result.n_energy_iterations);
    } else if let Err(e) = record.check_invariants() {
        record.note = format!("bench: {e}");
    }
    record
}

pub fn run(config: &RunConfig) -> BenchmarkRecord {
    match config.mode {
        Mode::Inspect => inspect(config),
        Mode::Estimate => estimate(config),
        Mode::Full => run_full(config),
    }
}

/// Every `*.fcidump` under `dir` (one directory level deep), sorted.
pub fn suite_fixtures(dir: &Path) -> Result<Vec<PathBuf>> {
    let io = |path: &Path, source| Error::Io {
        path: path.display().to_string(),
        source,
    };
    let mut out = Vec::new();
    let mut dirs = vec![dir.to_path_buf()];
    for entry in fs::read_dir(dir).map_err(|e| io(dir, e))? {
        let p = entry.map_err(|e| io(dir, e))?.path();
        if p.is_dir() {
            dirs.push(p);
        }
    }
    for d in dirs {
        for entry in fs::read_dir(&d).map_err(|e| io(&d, e))? {
            let p = entry.map_err(|e| io(&d, e))?.path();
            if p.extension().is_some_and(|x| x == "fcidump") {
                out.push(p);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Runs one row per fixture. `parallel_rows > 1` is accepted only in inspect
/// mode, where no timings are taken.
pub fn run_suite(base: &RunConfig, fixtures: &[PathBuf], parallel_rows: usize) -> Result<Vec<BenchmarkRecord>> {
    let configs: Vec<RunConfig> = fixtures
        .iter()
        .map(|f| RunConfig {
            fixture: f.clone(),
            ..base.clone()
        })
        .collect();
    if parallel_rows <= 1 {
        return Ok(configs.iter().map(run).collect());
    }
    if base.mode != Mode::Inspect {
        return Err(Error::contract(format!(
            "parallel rows are only allowed in inspect mode, not {}",
            base.mode
        )));
    }
    let mut out: Vec<Option<BenchmarkRecord>> = vec![None; configs.len()];
    let chunk = configs.len().div_ceil(parallel_rows).max(1);
    std::thread::scope(|scope| {
        for (cfgs, slots) in configs.chunks(chunk).zip(out.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (c, slot) in cfgs.iter().zip(slots.iter_mut()) {
                    *slot = Some(inspect(c));
                }
            });
        }
    });
    Ok(out.into_iter().map(|r| r.expect("every row filled")).collect())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TableFormat {
    #[default]
    Csv,
    Table,
}

impl FromStr for TableFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(TableFormat::Csv),
            "table" | "text" => Ok(TableFormat::Table),
            other => Err(Error::domain(format!("unknown format '{other}'"))),
        }
    }
}

/// Column selection. `All` carries provenance and round-trips through
/// [`parse_csv`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TableView {
    #[default]
    All,
    Timing,
    Energy,
}

impl FromStr for TableView {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "all" | "full" => Ok(TableView::All),
            "timing" => Ok(TableView::Timing),
            "energy" => Ok(TableView::Energy),
            other => Err(Error::domain(format!("unknown view '{other}'"))),
        }
    }
}

const ALL_COLUMNS: &[&str] = &[
    "label",
    "basis",
    "mode",
    "n_electrons",
    "n_qubits",
    "n_gates",
    "n_cnot",
    "depth",
    "n_varpar",
    "tts_1vp",
    "tts_iter",
    "tts_iter_model",
    "n_e_iter",
    "n_evaluations",
    "tts_conv",
    "e_hf",
    "e_ref",
    "e_vqe",
    "e_delta",
    "e_fci",
    "build_seconds",
    "encoding",
    "two_qubit_reduction",
    "tapering",
    "n_frozen",
    "count_convention",
    "backend",
    "shots",
    "seed",
    "note",
];

const TIMING_COLUMNS: &[&str] = &[
    "label",
    "basis",
    "n_electrons",
    "n_qubits",
    "n_gates",
    "n_cnot",
    "n_varpar",
    "tts_1vp",
    "tts_iter",
    "n_e_iter",
    "tts_conv",
    "mode",
    "note",
];

const ENERGY_COLUMNS: &[&str] = &[
    "label",
    "basis",
    "n_electrons",
    "n_qubits",
    "n_gates",
    "depth",
    "n_varpar",
    "e_hf",
    "e_delta",
    "e_vqe",
    "e_fci",
    "mode",
    "note",
];

impl TableView {
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            TableView::All => ALL_COLUMNS,
            TableView::Timing => TIMING_COLUMNS,
            TableView::Energy => ENERGY_COLUMNS,
        }
    }
}

/// Shortest text that parses back to the same `f64`.
fn exact(x: f64) -> String {
    format!("{x:?}")
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

fn reported<T>(v: Option<Reported<T>>, f: impl Fn(T) -> String) -> String {
    opt(v, |r| {
        let mut s = f(r.value);
        if r.estimated {
            s.push('~');
        }
        s
    })
}

fn cell(r: &BenchmarkRecord, column: &str, rounded: bool) -> String {
    let float = |x: f64| if rounded { format!("{x:.3e}") } else { exact(x) };
    let energy = |x: f64| if rounded { format!("{x:.6}") } else { exact(x) };
    match column {
        "label" => r.label.clone(),
        "basis" => r.basis.clone(),
        "mode" => r.mode.to_string(),
        "n_electrons" => r.n_electrons.to_string(),
        "n_qubits" => r.n_qubits.to_string(),
        "n_gates" => r.n_gates.to_string(),
        "n_cnot" => r.n_cnot.to_string(),
        "depth" => r.depth.to_string(),
        "n_varpar" => r.n_varpar.to_string(),
        "tts_1vp" => opt(r.tts_1vp, float),
        "tts_iter" => reported(r.tts_iter, float),
        "tts_iter_model" => opt(r.tts_iter_model, |x| format!("{}~", float(x))),
        "n_e_iter" => reported(r.n_e_iter, |n| n.to_string()),
        "n_evaluations" => opt(r.n_evaluations, |n| n.to_string()),
        "tts_conv" => reported(r.tts_conv, float),
        "e_hf" => opt(r.e_hf, energy),
        "e_ref" => opt(r.e_ref, energy),
        "e_vqe" => opt(r.e_vqe, energy),
        "e_delta" => opt(r.e_delta, energy),
        "e_fci" => opt(r.e_fci, energy),
        "build_seconds" => opt(r.build_seconds, float),
        "encoding" => r.encoding.clone(),
        "two_qubit_reduction" => r.two_qubit_reduction.to_string(),
        "tapering" => r.tapering.to_string(),
        "n_frozen" => r.n_frozen.to_string(),
        "count_convention" => r.count_convention.clone(),
        "backend" => r.backend.clone(),
        "shots" => opt(r.shots, |n| n.to_string()),
        "seed" => opt(r.seed, |n| n.to_string()),
        "note" => r.note.clone(),
        other => unreachable!("unknown column {other}"),
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::domain(format!("csv: {e}"))
}

/// Renders records as CSV or as an aligned text table. Estimated values carry
/// a trailing `~`.
pub fn emit_table(records: &[BenchmarkRecord], format: TableFormat, view: TableView) -> String {
    let columns = view.columns();
    match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(columns).expect("writing to memory");
            for r in records {
                w.write_record(columns.iter().map(|c| cell(r, c, false)))
                    .expect("writing to memory");
            }
            String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is UTF-8")
        }
        TableFormat::Table => {
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|r| columns.iter().map(|c| cell(r, c, true)).collect())
                .collect();
            let widths: Vec<usize> = columns
                .iter()
                .enumerate()
                .map(|(i, c)| rows.iter().map(|row| row[i].len()).chain([c.len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: &mut dyn Iterator<Item = &str>| {
                let parts: Vec<String> = cells.zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                parts.join("  ").trim_end().to_string() + "\n"
            };
            let mut out = line(&mut columns.iter().copied());
            let rules: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            out.push_str(&line(&mut rules.iter().map(String::as_str)));
            for row in &rows {
                out.push_str(&line(&mut row.iter().map(String::as_str)));
            }
            out
        }
    }
}

fn split_flag(s: &str) -> (&str, bool) {
    match s.strip_suffix('~') {
        Some(v) => (v, true),
        None => (s, false),
    }
}

fn parse_opt<T: FromStr>(col: &str, s: &str) -> Result<Option<T>> {
    if s.is_empty() {
        Ok(None)
    } else {
        parse_value(col, s).map(Some)
    }
}

fn parse_reported<T: FromStr>(col: &str, s: &str) -> Result<Option<Reported<T>>> {
    if s.is_empty() {
        return Ok(None);
    }
    let (v, estimated) = split_flag(s);
    Ok(Some(Reported {
        value: parse_value(col, v)?,
        estimated,
    }))
}

fn set_cell(r: &mut BenchmarkRecord, column: &str, s: &str) -> Result<()> {
    match column {
        "label" => r.label = s.to_string(),
        "basis" => r.basis = s.to_string(),
        "mode" => r.mode = s.parse()?,
        "n_electrons" => r.n_electrons = parse_value(column, s)?,
        "n_qubits" => r.n_qubits = parse_value(column, s)?,
        "n_gates" => r.n_gates = parse_value(column, s)?,
        "n_cnot" => r.n_cnot = parse_value(column, s)?,
        "depth" => r.depth = parse_value(column, s)?,
        "n_varpar" => r.n_varpar = parse_value(column, s)?,
        "tts_1vp" => r.tts_1vp = parse_opt(column, s)?,
        "tts_iter" => r.tts_iter = parse_reported(column, s)?,
        "tts_iter_model" => r.tts_iter_model = parse_opt(column, split_flag(s).0)?,
        "n_e_iter" => r.n_e_iter = parse_reported(column, s)?,
        "n_evaluations" => r.n_evaluations = parse_opt(column, s)?,
        "tts_conv" => r.tts_conv = parse_reported(column, s)?,
        "e_hf" => r.e_hf = parse_opt(column, s)?,
        "e_ref" => r.e_ref = parse_opt(column, s)?,
        "e_vqe" => r.e_vqe = parse_opt(column, s)?,
        "e_delta" => r.e_delta = parse_opt(column, s)?,
        "e_fci" => r.e_fci = parse_opt(column, s)?,
        "build_seconds" => r.build_seconds = parse_opt(column, s)?,
        "encoding" => r.encoding = s.to_string(),
        "two_qubit_reduction" => r.two_qubit_reduction = parse_value(column, s)?,
        "tapering" => r.tapering = parse_value(column, s)?,
        "n_frozen" => r.n_frozen = parse_value(column, s)?,
        "count_convention" => r.count_convention = s.to_string(),
        "backend" => r.backend = s.to_string(),
        "shots" => r.shots = parse_opt(column, s)?,
        "seed" => r.seed = parse_opt(column, s)?,
        "note" => r.note = s.to_string(),
        other => return Err(Error::domain(format!("unknown column '{other}'"))),
    }
    Ok(())
}

/// Reads CSV written by [`emit_table`]; missing columns keep their defaults.
pub fn parse_csv(text: &str) -> Result<Vec<BenchmarkRecord>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().map_err(csv_err)?.clone();
    reader
        .records()
        .map(|row| {
            let row = row.map_err(csv_err)?;
            let mut r = BenchmarkRecord::default();
            for (h, v) in headers.iter().zip(row.iter()) {
                set_cell(&mut r, h, v)?;
            }
            Ok(r)
        })
        .collect()
}

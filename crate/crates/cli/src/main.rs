use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use vqebench::backend::{exact_ground_energy, expval_sampled, BackendKind};
use vqebench::bench::{emit_table, run_suite, suite_fixtures, RunConfig, TableFormat, TableView};
use vqebench::chem::load_fixture;
use vqebench::pipeline::{build, BuiltProblem};
use vqebench::vqe::{minimize, CircuitEnergy};

#[derive(Parser)]
#[command(name = "vqebench", version, about = "VQE-UCCSD simulation and benchmark driver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the qubit Hamiltonian and circuit and report their sizes.
    Inspect {
        fixture: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
        /// Write the final Hamiltonian as `re im AXES` lines.
        #[arg(long, value_name = "FILE")]
        dump_hamiltonian: Option<PathBuf>,
        /// Write the UCCSD circuit as text.
        #[arg(long, value_name = "FILE")]
        dump_circuit: Option<PathBuf>,
    },
    /// Evaluate the energy at one parameter point.
    Energy {
        fixture: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
        /// Comma-separated parameters; zeros when omitted.
        #[arg(long, allow_hyphen_values = true)]
        params: Option<String>,
    },
    /// Run the VQE loop; the iteration trace is written as CSV.
    Vqe {
        fixture: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
        /// Trace destination; stdout when omitted.
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
    },
    /// Exact ground energies of the tapered Hamiltonian and of the HF sector.
    Exact {
        fixture: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// One benchmark row per fixture.
    Bench {
        fixtures: Vec<PathBuf>,
        /// Run every `*.fcidump` in this directory and its subdirectories.
        #[arg(long)]
        suite: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value = "csv")]
        format: TableFormat,
        /// all, timing or energy.
        #[arg(long, default_value = "all")]
        view: TableView,
        /// Worker threads; inspect mode only.
        #[arg(long, default_value_t = 1)]
        parallel_rows: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

/// Flags mirroring the keys of a `key = value` config file.
#[derive(Args, Default)]
struct ConfigArgs {
    /// Flat `key = value` file; flags given here override it.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// jw, parity or bk.
    #[arg(long)]
    encoding: Option<String>,
    /// on, off or auto (on with parity).
    #[arg(long)]
    two_qubit_reduction: Option<String>,
    #[arg(long)]
    tapering: Option<String>,
    /// Frozen core orbitals, or auto from the fixture metadata.
    #[arg(long)]
    n_frozen: Option<String>,
    /// Fuse single-qubit runs and cancel CNOT pairs (on by default).
    #[arg(long)]
    optimize_circuit: Option<String>,
    /// statevector or sampled.
    #[arg(long)]
    backend: Option<String>,
    #[arg(long)]
    shots: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    max_qubits: Option<String>,
    /// Energy change that ends the VQE loop (Ha).
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    max_iter: Option<String>,
    #[arg(long)]
    gradient_step: Option<String>,
    /// inspect, estimate or full (bench only).
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    assumed_e_iter: Option<String>,
    #[arg(long)]
    fci: Option<String>,
    /// Full-mode rows wider than this run as estimates.
    #[arg(long)]
    full_max_qubits: Option<String>,
}

impl ConfigArgs {
    fn resolve(&self, fixture: Option<&PathBuf>) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        let flags = [
            ("encoding", &self.encoding),
            ("two_qubit_reduction", &self.two_qubit_reduction),
            ("tapering", &self.tapering),
            ("n_frozen", &self.n_frozen),
            ("optimize_circuit", &self.optimize_circuit),
            ("backend", &self.backend),
            ("shots", &self.shots),
            ("seed", &self.seed),
            ("max_qubits", &self.max_qubits),
            ("tol", &self.tol),
            ("max_iter", &self.max_iter),
            ("gradient_step", &self.gradient_step),
            ("mode", &self.mode),
            ("assumed_e_iter", &self.assumed_e_iter),
            ("fci", &self.fci),
            ("full_max_qubits", &self.full_max_qubits),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v).with_context(|| format!("--{}", key.replace('_', "-")))?;
            }
        }
        if let Some(f) = fixture {
            cfg.fixture = f.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn build_problem(cfg: &RunConfig) -> Result<BuiltProblem> {
    if cfg.fixture.as_os_str().is_empty() {
        bail!("no fixture given (positional argument or `fixture` config key)");
    }
    let fixture = load_fixture(&cfg.fixture)?;
    let opts = cfg.pipeline_options(&fixture)?;
    Ok(build(&fixture.problem, opts)?)
}

fn write_or_print(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn inspect(cfg: &RunConfig, dump_h: Option<&PathBuf>, dump_c: Option<&PathBuf>) -> Result<()> {
    let b = build_problem(cfg)?;
    let stats = b.circuit.stats();
    let raw = &b.raw_circuit_stats;
    println!("fixture      {}", b.active.label);
    println!("encoding     {}", b.options.encoding);
    println!(
        "qubits       {} mapped, {} after reduction, {} after tapering",
        b.mapped.n_qubits(),
        b.reduced.n_qubits(),
        b.n_qubits()
    );
    println!("terms        {} mapped, {} final", b.mapped.len(), b.hamiltonian.len());
    println!("symmetries   [{}]", b.tapering.describe());
    println!("reference    {}", b.reference);
    println!(
        "excitations  {} enumerated, {} kept",
        b.raw_excitations.len(),
        b.excitations.len()
    );
    println!(
        "circuit      {} gates, {} CNOT ({:.3}), depth {}, {} parameters [{}]",
        stats.n_gates,
        stats.n_cnot,
        stats.cnot_fraction(),
        stats.depth,
        stats.n_parameters,
        b.count_convention()
    );
    println!(
        "synthesized  {} gates, {} CNOT, depth {}",
        raw.n_gates, raw.n_cnot, raw.depth
    );
    println!("hf energy    {:.10}", b.hf_energy);
    println!("build        {:.3} s", b.build_seconds);
    if let Some(p) = dump_h {
        fs::write(p, b.hamiltonian.render()).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = dump_c {
        fs::write(p, b.circuit.to_text()).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn energy(cfg: &RunConfig, params: Option<&str>) -> Result<()> {
    let b = build_problem(cfg)?;
    let theta: Vec<f64> = match params {
        Some(text) => text
            .split(',')
            .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad parameter '{t}'")))
            .collect::<Result<_>>()?,
        None => vec![0.0; b.n_parameters()],
    };
    if theta.len() != b.n_parameters() {
        bail!("circuit has {} parameters, {} given", b.n_parameters(), theta.len());
    }
    match cfg.backend.kind {
        BackendKind::Statevector => {
            let e = cfg.backend.energy(&b.hamiltonian, &b.circuit, &theta, 0)?;
            println!("energy {e:.12}");
        }
        BackendKind::Sampled => {
            let est = expval_sampled(
                &b.hamiltonian,
                &b.circuit,
                &theta,
                cfg.backend.shots,
                cfg.backend.seed,
                cfg.backend.max_qubits,
            )?;
            println!(
                "energy {:.12} +- {:.3e} ({} shots, seed {})",
                est.mean, est.stderr, est.shots, est.seed
            );
        }
    }
    println!("hf     {:.12}", b.hf_energy);
    Ok(())
}

fn vqe(cfg: &RunConfig, trace: Option<&PathBuf>) -> Result<()> {
    let b = build_problem(cfg)?;
    let objective = CircuitEnergy::new(&b.hamiltonian, &b.circuit, cfg.backend)?;
    let r = minimize(&objective, &cfg.vqe)?;
    write_or_print(trace, &r.trace_csv())?;
    eprintln!(
        "energy {:.10} (hf {:.10}, delta {:.6}) after {} iterations, {} evaluations, {:.2} s{}",
        r.energy,
        b.hf_energy,
        r.energy - b.hf_energy,
        r.n_energy_iterations,
        r.n_evaluations,
        r.wall_seconds,
        if r.converged { "" } else { ", NOT converged" }
    );
    if !r.converged {
        bail!("VQE did not converge");
    }
    Ok(())
}

fn exact(cfg: &RunConfig) -> Result<()> {
    let b = build_problem(cfg)?;
    let tapered = exact_ground_energy(&b.hamiltonian).context("tapered Hamiltonian")?;
    let sector = b.sector_fci().context("sector FCI")?;
    println!("tapered  {:.12} ({:?}, {} qubits)", tapered.energy, tapered.method, b.n_qubits());
    println!("sector   {:.12} ({:?})", sector.energy, sector.method);
    println!("hf       {:.12}", b.hf_energy);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn bench(
    fixtures: &[PathBuf],
    suite: Option<&PathBuf>,
    cfg: &RunConfig,
    format: TableFormat,
    view: TableView,
    parallel_rows: usize,
    out: Option<&PathBuf>,
) -> Result<bool> {
    let mut paths = fixtures.to_vec();
    if let Some(dir) = suite {
        paths.extend(suite_fixtures(dir)?);
    }
    if paths.is_empty() {
        if cfg.fixture.as_os_str().is_empty() {
            bail!("no fixtures: pass paths or --suite <dir>");
        }
        paths.push(cfg.fixture.clone());
    }
    let records = run_suite(cfg, &paths, parallel_rows)?;
    write_or_print(out, &emit_table(&records, format, view))?;
    let mut ok = true;
    for r in records.iter().filter(|r| r.failed()) {
        eprintln!("{} ({}): {}", r.label, r.basis, r.note);
        ok = false;
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Inspect {
            fixture,
            config,
            dump_hamiltonian,
            dump_circuit,
        } => config
            .resolve(fixture.as_ref())
            .and_then(|c| inspect(&c, dump_hamiltonian.as_ref(), dump_circuit.as_ref()))
            .map(|_| true),
        Command::Energy { fixture, config, params } => config
            .resolve(fixture.as_ref())
            .and_then(|c| energy(&c, params.as_deref()))
            .map(|_| true),
        Command::Vqe { fixture, config, trace } => config
            .resolve(fixture.as_ref())
            .and_then(|c| vqe(&c, trace.as_ref()))
            .map(|_| true),
        Command::Exact { fixture, config } => config.resolve(fixture.as_ref()).and_then(|c| exact(&c)).map(|_| true),
        Command::Bench {
            fixtures,
            suite,
            config,
            format,
            view,
            parallel_rows,
            out,
        } => config.resolve(None).and_then(|c| {
            bench(fixtures, suite.as_ref(), &c, *format, *view, *parallel_rows, out.as_ref())
        }),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

//! `vqgf`: train, verify and export variational Toffoli circuits.
//!
//! Exit codes: 0 success, 1 invalid input, 2 no seed converged (synth),
//! 3 params file does not match the requested shape (verify).

pub mod files;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use vqgf_core::circuit::{AnsatzKind, BoundCircuit, Gate};
use vqgf_core::cost::{toffoli_truth_table, Method, Objective};
use vqgf_core::optimize::{gradient_descent, init_params, OptimizerConfig, StopMode, StopReason};
use vqgf_core::verify::{process_fidelity, truth_table_report};
use vqgf_core::{qasm, DenseUnitary};

use crate::files::{write_trace, ParamsFile, PARAMS_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_SHAPE_MISMATCH: i32 = 3;

/// Caps the worker pool when set.
pub const THREADS_ENV: &str = "VQGF_THREADS";

#[derive(Debug, Parser)]
#[command(name = "vqgf", version, about = "Variational synthesis of multi-controlled Toffoli gates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train an ansatz against the n-qubit Toffoli.
    Synth(SynthArgs),
    /// Check saved parameters input by input.
    Verify(VerifyArgs),
    /// Print a trained circuit as OpenQASM 2.0 or JSON.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub qubits: usize,
    #[arg(long, default_value = "observable", value_parser = parse_method)]
    pub method: Method,
    #[arg(long, default_value = "basic", value_parser = parse_ansatz)]
    pub ansatz: AnsatzKind,
    #[arg(long, default_value_t = 8)]
    pub layers: usize,
    #[arg(long = "lr", default_value_t = 0.01)]
    pub learning_rate: f64,
    #[arg(long = "steps", default_value_t = 500)]
    pub max_steps: usize,
    /// Comma-separated list.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub seeds: Vec<u64>,
    /// Drop the CNOTs after the last rotation layer.
    #[arg(long)]
    pub strip_trailing_cnots: bool,
    #[arg(long = "out", default_value = ".")]
    pub out_dir: PathBuf,
    /// Start every seed from these parameters instead of random angles.
    #[arg(long)]
    pub init_from: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-6)]
    pub hst_eps: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub observable_eps: f64,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    pub params_file: PathBuf,
    /// Width of the Toffoli to check against; defaults to the file's.
    #[arg(long)]
    pub qubits: Option<usize>,
    #[arg(long, default_value_t = 0.97)]
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Qasm,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct ExportArgs {
    pub params_file: PathBuf,
    #[arg(long, value_enum, default_value = "qasm")]
    pub format: ExportFormat,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

fn parse_ansatz(s: &str) -> Result<AnsatzKind, String> {
    s.parse()
}

/// A failed command: exit code plus message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

impl Failure {
    fn invalid(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: EXIT_INVALID,
            error: error.into(),
        }
    }

    fn shape(msg: String) -> Self {
        Self {
            code: EXIT_SHAPE_MISMATCH,
            error: anyhow::Error::msg(msg),
        }
    }
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::invalid(e)
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code. Output goes to stdout/stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let result = match cli.command {
        Command::Synth(a) => cmd_synth(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Export(a) => cmd_export(&a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            f.code
        }
    }
}

fn configure_threads() {
    #[cfg(feature = "parallel")]
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Outcome of one seed.
#[derive(Debug, Clone)]
pub struct SeedRun {
    pub seed: u64,
    pub params: ParamsFile,
    pub costs: Vec<f64>,
    pub stop_reason: StopReason,
    pub min_success: f64,
    pub mean_success: f64,
}

impl SynthArgs {
    fn validate(&self) -> anyhow::Result<()> {
        if self.qubits < 2 {
            bail!("--qubits must be at least 2, got {}", self.qubits);
        }
        if self.qubits > 7 {
            bail!("--qubits above 7 is not supported, got {}", self.qubits);
        }
        if self.layers == 0 {
            bail!("--layers must be at least 1");
        }
        if self.seeds.is_empty() {
            bail!("at least one seed is required");
        }
        self.optimizer_config(0).validate()?;
        Ok(())
    }

    fn optimizer_config(&self, seed: u64) -> OptimizerConfig {
        OptimizerConfig {
            learning_rate: self.learning_rate,
            max_steps: self.max_steps,
            hst_stop_eps: self.hst_eps,
            observable_stop_eps: self.observable_eps,
            seed,
        }
    }
}

/// Runs every seed; files are written by the caller.
pub fn synthesize(args: &SynthArgs) -> Result<Vec<SeedRun>, Failure> {
    args.validate().map_err(Failure::invalid)?;
    let mut circuit = args.ansatz.build(args.qubits, args.layers)?;
    if args.strip_trailing_cnots {
        circuit = circuit.strip_trailing_cnots();
    }
    let init_override = match &args.init_from {
        Some(path) => {
            let file = ParamsFile::read(path)?;
            if file.params.len() != circuit.param_count() {
                return Err(Failure::invalid(anyhow::anyhow!(
                    "{} holds {} parameters, the ansatz needs {}",
                    path.display(),
                    file.params.len(),
                    circuit.param_count()
                )));
            }
            Some(file.params)
        }
        None => None,
    };
    let objective = Objective::toffoli(args.method, circuit.clone())?;
    let table = toffoli_truth_table(args.qubits)?;
    let mode = StopMode::from(args.method);

    let run_seed = |seed: u64| -> Result<SeedRun, Failure> {
        let init = init_override
            .clone()
            .unwrap_or_else(|| init_params(objective.param_count(), seed));
        let trace = gradient_descent(
            |p: &[f64]| objective.evaluate(p),
            &init,
            &args.optimizer_config(seed),
            mode,
        )?;
        let report = truth_table_report(&circuit, &trace.final_params, &table)?;
        Ok(SeedRun {
            seed,
            params: ParamsFile {
                version: PARAMS_VERSION,
                qubits: args.qubits,
                ansatz: args.ansatz.to_string(),
                layers: args.layers,
                method: args.method.to_string(),
                seed,
                final_cost: trace.final_cost(),
                strip_trailing_cnots: args.strip_trailing_cnots,
                params: trace.final_params.clone(),
            },
            costs: trace.costs,
            stop_reason: trace.stop_reason,
            min_success: report.min_success,
            mean_success: report.mean_success,
        })
    };

    #[cfg(feature = "parallel")]
    let runs: Vec<Result<SeedRun, Failure>> = {
        use rayon::prelude::*;
        args.seeds.par_iter().map(|&s| run_seed(s)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let runs: Vec<Result<SeedRun, Failure>> = args.seeds.iter().map(|&s| run_seed(s)).collect();

    runs.into_iter().collect()
}

pub fn cmd_synth(args: &SynthArgs) -> Result<i32, Failure> {
    let runs = synthesize(args)?;
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let mut any_converged = false;
    for run in &runs {
        run.params
            .write(&args.out_dir.join(format!("params_{}.json", run.seed)))?;
        write_trace(
            &args.out_dir.join(format!("trace_{}.csv", run.seed)),
            &run.costs,
        )?;
        any_converged |= run.stop_reason == StopReason::Converged;
        println!(
            "seed {}: final_cost={} stop={} steps={} min_success={:.6} mean_success={:.6}",
            run.seed,
            run.params.final_cost,
            run.stop_reason.as_str(),
            run.costs.len() - 1,
            run.min_success,
            run.mean_success
        );
    }
    Ok(if any_converged {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}

#[derive(Debug, Serialize)]
pub struct InputResult {
    pub input: usize,
    pub expected_output: usize,
    pub success: f64,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub qubits: usize,
    pub ansatz: String,
    pub layers: usize,
    pub method: String,
    pub seed: u64,
    pub per_input: Vec<InputResult>,
    pub min_success: f64,
    pub mean_success: f64,
    pub process_fidelity: f64,
    pub threshold: f64,
    pub pass: bool,
}

pub fn verify_report(args: &VerifyArgs) -> Result<VerifyReport, Failure> {
    let file = ParamsFile::read(&args.params_file)?;
    if let Some(q) = args.qubits {
        if q != file.qubits {
            return Err(Failure::shape(format!(
                "params are for {} qubits, asked to verify {q}",
                file.qubits
            )));
        }
    }
    if file.qubits < 2 || file.qubits > 7 || file.layers == 0 {
        return Err(Failure::shape(format!(
            "cannot build a {}-qubit, {}-layer ansatz",
            file.qubits, file.layers
        )));
    }
    let circuit = file.circuit()?;
    if file.params.len() != circuit.param_count() {
        return Err(Failure::shape(format!(
            "{} parameters for an ansatz with {}",
            file.params.len(),
            circuit.param_count()
        )));
    }
    let table = toffoli_truth_table(file.qubits)?;
    let report = truth_table_report(&circuit, &file.params, &table)?;
    let fidelity = process_fidelity(&circuit, &file.params, &DenseUnitary::mcx(file.qubits)?)?;
    Ok(VerifyReport {
        qubits: file.qubits,
        ansatz: file.ansatz.clone(),
        layers: file.layers,
        method: file.method.clone(),
        seed: file.seed,
        per_input: report
            .per_input
            .iter()
            .map(|&(input, success)| InputResult {
                input,
                expected_output: table.output(input),
                success,
            })
            .collect(),
        min_success: report.min_success,
        mean_success: report.mean_success,
        process_fidelity: fidelity,
        threshold: args.threshold,
        pass: report.min_success >= args.threshold,
    })
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<i32, Failure> {
    let report = verify_report(args)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if report.pass { EXIT_OK } else { EXIT_INVALID })
}

#[derive(Debug, Serialize)]
struct JsonGate {
    gate: &'static str,
    wires: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    params: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct JsonCircuit {
    qubits: usize,
    depth: usize,
    gates: Vec<JsonGate>,
}

/// Circuit as JSON: `{qubits, depth, gates: [{gate, wires, params?}]}` with
/// U3 angles inlined.
pub fn circuit_json(bound: &BoundCircuit) -> anyhow::Result<String> {
    let c = &bound.circuit;
    let gates = c
        .gates()
        .iter()
        .map(|g| JsonGate {
            gate: g.name(),
            wires: g.wires(),
            params: match g {
                Gate::U3 { slots, .. } => slots.iter().map(|&s| bound.params[s]).collect(),
                _ => Vec::new(),
            },
        })
        .collect();
    Ok(serde_json::to_string_pretty(&JsonCircuit {
        qubits: c.qubits(),
        depth: c.depth(),
        gates,
    })?)
}

pub fn export_text(params_file: &Path, format: ExportFormat) -> Result<String, Failure> {
    let file = ParamsFile::read(params_file)?;
    let bound = BoundCircuit::new(file.circuit()?, file.params)?;
    Ok(match format {
        ExportFormat::Qasm => qasm::to_qasm(&bound)?,
        ExportFormat::Json => {
            let mut s = circuit_json(&bound)?;
            s.push('\n');
            s
        }
    })
}

pub fn cmd_export(args: &ExportArgs) -> Result<i32, Failure> {
    let text = export_text(&args.params_file, args.format)?;
    match &args.out {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(EXIT_OK)
}

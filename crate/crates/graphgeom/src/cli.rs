use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graphgeom_core::circuits::{build_correlator_protocol, build_usquared_protocol};
use graphgeom_core::experiment::{phi_grid, run_sweep, ExperimentError, SweepConfig};
use graphgeom_core::oracle::DEFAULT_SIZE_CAP;
use graphgeom_core::{GeometryError, Oracle, OracleError, WeightedGraph};
use thiserror::Error;

use crate::format::{load_graph, LoadError};
use crate::qasm::{to_qasm, QasmError};
use crate::report::{analysis_table, analyze, sweep_csv, sweep_table, SweepOutput};
use crate::{exit, ORACLE_CAP_ENV};

#[derive(Debug, Parser)]
#[command(
    name = "graphgeom",
    version,
    about = "Velocity, curvature and torsion of Ising weighted graph states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Graph invariants, energy moments and geometry of the evolving state.
    Analyze(AnalyzeArgs),
    /// Simulated small-time sweep of |<U>|^2 with shot noise and quadratic fit.
    Simulate(SimulateArgs),
    /// Emit a measurement protocol as OpenQASM 2.0.
    Emit(EmitArgs),
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Brute-force node cap (default from GRAPHGEOM_ORACLE_CAP, else 24).
    #[arg(long)]
    pub oracle_cap: Option<usize>,
}

impl OracleArgs {
    fn oracle(&self) -> Result<Oracle, CliError> {
        if let Some(cap) = self.oracle_cap {
            return Ok(Oracle::with_cap(cap));
        }
        match std::env::var(ORACLE_CAP_ENV) {
            Ok(v) => v.trim().parse().map(Oracle::with_cap).map_err(|_| {
                CliError::Invalid(format!("{ORACLE_CAP_ENV}={v:?} is not a node count"))
            }),
            Err(_) => Ok(Oracle::with_cap(DEFAULT_SIZE_CAP)),
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Edge-list file (`.json` for the JSON mirror).
    pub graph: PathBuf,
    /// Also compute moments by brute force and report the deviation.
    #[arg(long)]
    pub oracle: bool,
    /// Fail (exit 3) instead of omitting curvature/torsion for edgeless graphs.
    #[arg(long)]
    pub strict: bool,
    /// Human-readable table instead of JSON.
    #[arg(long)]
    pub pretty: bool,
    #[command(flatten)]
    pub cap: OracleArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub graph: PathBuf,
    #[arg(long, default_value_t = 1024)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Grid start (default -3pi/32).
    #[arg(long, allow_hyphen_values = true)]
    pub phi_min: Option<f64>,
    /// Grid end, inclusive (default 3pi/32).
    #[arg(long, allow_hyphen_values = true)]
    pub phi_max: Option<f64>,
    /// Grid step (default pi/64).
    #[arg(long)]
    pub phi_step: Option<f64>,
    /// Read the phi flags as multiples of pi.
    #[arg(long)]
    pub phi_in_pi: bool,
    /// Exact probabilities, no shot noise.
    #[arg(long)]
    pub ideal: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[arg(long)]
    pub pretty: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub cap: OracleArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolArg {
    Usquared,
    Correlator,
}

#[derive(Debug, Args)]
pub struct EmitArgs {
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = ProtocolArg::Usquared)]
    pub protocol: ProtocolArg,
    /// phi = J t / hbar for the usquared protocol.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    #[arg(long)]
    pub phi_in_pi: bool,
    /// Node pair `i,j` for the correlator protocol.
    #[arg(long)]
    pub qubits: Option<String>,
    /// Gate list as JSON instead of QASM.
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Experiment(ExperimentError),
    #[error(transparent)]
    Qasm(#[from] QasmError),
    #[error("{0}")]
    Invalid(String),
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Oracle(o) => CliError::Oracle(o),
            other => CliError::Experiment(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Load(LoadError::Parse { .. }) => exit::PARSE,
            CliError::Load(LoadError::Io { .. }) | CliError::Io(_) | CliError::Serialize(_) => {
                exit::FAILURE
            }
            CliError::Geometry(GeometryError::ZeroVariance) => exit::ZERO_VARIANCE,
            CliError::Oracle(OracleError::SizeCapExceeded { .. }) => exit::ORACLE_CAP,
            CliError::Oracle(_) | CliError::Experiment(_) | CliError::Invalid(_) => {
                exit::INVALID_ARGS
            }
            CliError::Qasm(_) => exit::INVALID_ARGS,
        }
    }
}

fn json_string<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let mut s =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Serialize(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn deliver(text: &str, out_path: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out_path {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze(args) => cmd_analyze(&args, stdout),
        Command::Simulate(args) => cmd_simulate(&args, stdout),
        Command::Emit(args) => cmd_emit(&args, stdout),
    }
}

pub fn cmd_analyze(args: &AnalyzeArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let g = load_graph(&args.graph)?;
    if args.strict && g.edge_count() == 0 {
        return Err(GeometryError::ZeroVariance.into());
    }
    let oracle = if args.oracle {
        Some(args.cap.oracle()?)
    } else {
        None
    };
    let report = analyze(&g, oracle.as_ref())?;
    let text = if args.pretty {
        analysis_table(&report)
    } else {
        json_string(&report)?
    };
    deliver(&text, None, stdout)
}

fn grid_value(v: Option<f64>, default_in_pi: f64, in_pi: bool) -> f64 {
    match v {
        Some(x) if in_pi => x * PI,
        Some(x) => x,
        None => default_in_pi * PI,
    }
}

pub fn cmd_simulate(args: &SimulateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let g = load_graph(&args.graph)?;
    let oracle = args.cap.oracle()?;
    let phi_values = phi_grid(
        grid_value(args.phi_min, -3.0 / 32.0, args.phi_in_pi),
        grid_value(args.phi_max, 3.0 / 32.0, args.phi_in_pi),
        grid_value(args.phi_step, 1.0 / 64.0, args.phi_in_pi),
    )?;
    let cfg = SweepConfig {
        graph: g.clone(),
        phi_values,
        shots: args.shots,
        seed: args.seed,
        ideal: args.ideal,
    };
    let result = run_sweep(&cfg, &oracle)?;
    let output = SweepOutput::new(&g, result);
    let text = match (args.format, args.pretty) {
        (_, true) => sweep_table(&output),
        (OutputFormat::Json, false) => json_string(&output)?,
        (OutputFormat::Csv, false) => {
            sweep_csv(&output.result).map_err(|e| CliError::Serialize(e.to_string()))?
        }
    };
    deliver(&text, args.out.as_ref(), stdout)
}

fn parse_pair(s: &str, g: &WeightedGraph) -> Result<(usize, usize), CliError> {
    let invalid = || {
        CliError::Invalid(format!(
            "--qubits expects two distinct node indices `i,j`, got {s:?}"
        ))
    };
    let (a, b) = s.split_once(',').ok_or_else(invalid)?;
    let i: usize = a.trim().parse().map_err(|_| invalid())?;
    let j: usize = b.trim().parse().map_err(|_| invalid())?;
    if i == j {
        return Err(invalid());
    }
    let n = g.node_count();
    if i >= n || j >= n {
        return Err(CliError::Invalid(format!(
            "--qubits {i},{j} out of range for {n} nodes"
        )));
    }
    Ok((i, j))
}

pub fn cmd_emit(args: &EmitArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let g = load_graph(&args.graph)?;
    let circuit = match args.protocol {
        ProtocolArg::Usquared => {
            let phi = args.phi.ok_or_else(|| {
                CliError::Invalid("--phi is required for the usquared protocol".into())
            })?;
            if !phi.is_finite() {
                return Err(CliError::Invalid("--phi must be finite".into()));
            }
            let t = if args.phi_in_pi { phi * PI } else { phi };
            build_usquared_protocol(&g, t)
        }
        ProtocolArg::Correlator => {
            let qubits = args.qubits.as_deref().ok_or_else(|| {
                CliError::Invalid("--qubits is required for the correlator protocol".into())
            })?;
            let (i, j) = parse_pair(qubits, &g)?;
            build_correlator_protocol(i, j).map_err(|e| CliError::Invalid(e.to_string()))?
        }
    };
    let text = if args.json {
        circuit.validate().map_err(QasmError::from)?;
        json_string(&circuit)?
    } else {
        to_qasm(&circuit)?
    };
    deliver(&text, args.out.as_ref(), stdout)
}

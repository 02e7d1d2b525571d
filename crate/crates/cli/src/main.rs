mod commands;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::manifest::{Session, VERSION};

#[derive(Parser, Debug)]
#[command(name = "qcsc", version = VERSION, about = "Quantum circuit simulation, Hamiltonian analysis and hybrid scheduling tools")]
struct Cli {
    /// Cap on worker threads for parallel kernels.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Where to write the run manifest. Defaults to next to the first output
    /// file, or stderr when everything went to stdout.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Circuit simulation.
    #[command(subcommand)]
    Sim(SimCmd),
    /// Model Hamiltonian construction.
    #[command(subcommand)]
    Ham(HamCmd),
    /// Reference computations by dense linear algebra.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Product-formula planning.
    #[command(subcommand)]
    Trotter(TrotterCmd),
    /// Expectation estimation and error mitigation.
    #[command(subcommand)]
    Measure(MeasureCmd),
    /// SWAP-network schedules and ZZ compilation on a line.
    Swapnet(SwapnetArgs),
    /// Workload scheduling simulation.
    #[command(subcommand)]
    Sched(SchedCmd),
}

#[derive(Subcommand, Debug)]
enum SimCmd {
    /// Run a circuit from |0...0>.
    Run(SimRun),
}

#[derive(Args, Debug)]
pub struct SimRun {
    #[arg(long)]
    pub circuit: PathBuf,
    /// Sample this many shots and report counts.
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Operator JSON whose expectation value is reported.
    #[arg(long)]
    pub observable: Option<PathBuf>,
    /// Noise-model JSON; switches to density-matrix simulation.
    #[arg(long)]
    pub noise: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum HamCmd {
    /// Build a model Hamiltonian as a qubit operator.
    Build(HamBuild),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Model {
    Hubbard,
    Emery,
    Kitaev,
    Heisenberg,
}

#[derive(Args, Debug)]
pub struct HamBuild {
    #[arg(long, value_enum)]
    pub model: Model,
    /// Open chain length (hubbard, heisenberg).
    #[arg(long)]
    pub sites: Option<usize>,
    /// Lattice JSON, e.g. {"kind": "honeycomb", "cells": [1, 1]}.
    #[arg(long)]
    pub lattice: Option<PathBuf>,
    /// Unit cells (emery) or honeycomb plaquettes `nx,ny` (kitaev).
    #[arg(long, value_delimiter = ',')]
    pub cells: Option<Vec<usize>>,
    /// Hopping; copper-oxygen hopping for emery.
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// On-site repulsion; copper site for emery.
    #[arg(long, default_value_t = 0.0)]
    pub u: f64,
    #[arg(long, default_value_t = 0.0)]
    pub t_pp: f64,
    /// Charge-transfer energy (emery).
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub u_p: f64,
    #[arg(long, default_value_t = 0.0)]
    pub v_pd: f64,
    /// Heisenberg exchange.
    #[arg(long)]
    pub j: Option<f64>,
    /// Kitaev coupling.
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub gamma_prime: Option<f64>,
    /// Start from literature alpha-RuCl3 couplings (kitaev).
    #[arg(long)]
    pub rucl3: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum OracleCmd {
    /// Lowest eigenvalues of an operator.
    Diag(OracleDiag),
}

#[derive(Args, Debug)]
pub struct OracleDiag {
    #[arg(long)]
    pub ham: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Restrict to basis states with this many ones.
    #[arg(long)]
    pub particles: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Bound {
    L1,
    Commutator,
}

#[derive(Subcommand, Debug)]
enum TrotterCmd {
    /// Choose a step count for a target error and emit the plan.
    Plan(TrotterPlanArgs),
    /// Measured spectral-norm error of a product formula.
    Error(TrotterErrorArgs),
}

#[derive(Args, Debug)]
pub struct TrotterPlanArgs {
    #[arg(long)]
    pub ham: PathBuf,
    #[arg(long)]
    pub t: f64,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, default_value_t = 2)]
    pub order: u8,
    #[arg(long, value_enum, default_value_t = Bound::L1)]
    pub bound: Bound,
    /// Also write the full circuit here.
    #[arg(long)]
    pub circuit_out: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TrotterErrorArgs {
    #[arg(long)]
    pub ham: PathBuf,
    #[arg(long)]
    pub t: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, default_value_t = 2)]
    pub order: u8,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Groups,
    Shadows,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Weighted,
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ZneKind {
    Linear,
    Poly2,
    Exp,
}

#[derive(Subcommand, Debug)]
enum MeasureCmd {
    /// Shot-based estimate of an observable on a circuit's output state.
    Estimate(MeasureEstimate),
    /// Extrapolate (noise factor, value) points to zero noise.
    Zne(MeasureZne),
}

#[derive(Args, Debug)]
pub struct MeasureEstimate {
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long)]
    pub observable: PathBuf,
    /// Total shots (groups) or samples (shadows).
    #[arg(long, default_value_t = 10_000)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Method::Groups)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = Strategy::Weighted)]
    pub strategy: Strategy,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MeasureZne {
    /// CSV with columns `factor,value`.
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long, value_enum, default_value_t = ZneKind::Linear)]
    pub model: ZneKind,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SwapnetArgs {
    /// Line length; taken from the operator with --compile.
    #[arg(long)]
    pub n: Option<usize>,
    /// ZZ operator JSON to compile into a line circuit.
    #[arg(long)]
    pub compile: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExampleKind {
    Vqe,
    Fairshare,
}

#[derive(Subcommand, Debug)]
enum SchedCmd {
    /// Simulate a scenario; writes events.jsonl and metrics.json.
    Run(SchedRun),
    /// Fit gate and readout times from a JSON trace of past runs.
    Calibrate(SchedCalibrate),
    /// Emit a ready-made scenario.
    Example(SchedExample),
}

#[derive(Args, Debug)]
pub struct SchedRun {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct SchedCalibrate {
    #[arg(long)]
    pub trace: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SchedExample {
    #[arg(long, value_enum)]
    pub kind: ExampleKind,
    /// VQE iterations.
    #[arg(long, default_value_t = 3)]
    pub iterations: usize,
    /// Jobs per project for the fair-share example.
    #[arg(long, default_value_t = 1000)]
    pub jobs: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn dispatch(cmd: Cmd, s: &mut Session) -> error::CliResult<()> {
    match cmd {
        Cmd::Sim(SimCmd::Run(a)) => commands::sim_run(a, s),
        Cmd::Ham(HamCmd::Build(a)) => commands::ham_build(a, s),
        Cmd::Oracle(OracleCmd::Diag(a)) => commands::oracle_diag(a, s),
        Cmd::Trotter(TrotterCmd::Plan(a)) => commands::trotter_plan(a, s),
        Cmd::Trotter(TrotterCmd::Error(a)) => commands::trotter_error(a, s),
        Cmd::Measure(MeasureCmd::Estimate(a)) => commands::measure_estimate(a, s),
        Cmd::Measure(MeasureCmd::Zne(a)) => commands::measure_zne(a, s),
        Cmd::Swapnet(a) => commands::swapnet(a, s),
        Cmd::Sched(SchedCmd::Run(a)) => commands::sched_run(a, s),
        Cmd::Sched(SchedCmd::Calibrate(a)) => commands::sched_calibrate(a, s),
        Cmd::Sched(SchedCmd::Example(a)) => commands::sched_example(a, s),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            // Help and version exit 0; usage errors exit 2.
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("{}", error::CliError::invalid(e.to_string()).to_json());
            return ExitCode::from(2);
        }
    }
    let mut session = Session::new(argv);
    if let Err(e) = dispatch(cli.cmd, &mut session) {
        eprintln!("{}", e.to_json());
        return ExitCode::from(2);
    }
    let target = cli
        .manifest
        .clone()
        .or_else(|| session.manifest_path.clone())
        .or_else(|| {
            session.outputs().first().map(|p| {
                let mut name = p.as_os_str().to_owned();
                name.push(".manifest.json");
                PathBuf::from(name)
            })
        });
    let manifest = serde_json::to_string_pretty(&session.finish()).expect("manifest serializes");
    match target {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, manifest) {
                eprintln!("{}", error::CliError::io(&path, e).to_json());
                return ExitCode::from(2);
            }
        }
        None => eprintln!("{manifest}"),
    }
    ExitCode::SUCCESS
}

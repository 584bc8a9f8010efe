//! Command-line front end for the signaling-game solvers.
//!
//! Subcommands wrap the library: `solve-cheaptalk` and `solve-noisy` emit
//! equilibrium solutions as versioned JSON, `phase-diagram` sweeps the
//! scalar (a, ρ) plane into a CSV grid, `simulate` runs the deterministic
//! Monte Carlo harness against the solved encoder, and `waterfill` exposes
//! the capacity power allocation.
//!
//! Exit codes: 0 success, 2 input error (bad flags, unreadable or invalid
//! scenario files), 3 regime error (the scenario is valid but outside the
//! requested solver's contract), 4 runtime failure (simulation or output
//! I/O). Diagnostics go to standard error; results go to standard output
//! unless `--out` redirects them.

mod output;
mod scenario;

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use nalgebra::DMatrix;
use rayon::prelude::*;
use signalgame::cheaptalk::{self, Scenario};
use signalgame::noisy::{self, PowerRegime};
use signalgame::simulate::{run_sim, run_sim_with_scatter, SimConfig};
use signalgame::{channel, Error};

use output::{CheaptalkDoc, PhaseCell, PowerDoc, SimDoc, WaterfillDoc};
use scenario::LoadedScenario;

/// Seed fallback consulted when `--seed` is absent.
const SEED_ENV: &str = "SIGNALGAME_SEED";
const DEFAULT_SAMPLES: u64 = 10_000;

#[derive(Parser)]
#[command(
    name = "signalgame",
    version,
    about = "Stackelberg equilibria of Gaussian signaling games",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a noiseless costless scenario (Σw = O, ρ = 0) in closed form.
    SolveCheaptalk(SolveArgs),
    /// Solve a noisy costly scenario (ρ > 0) for its equilibrium power.
    SolveNoisy(SolveArgs),
    /// Sweep the scalar (a, ρ) plane and classify each cell's regime.
    PhaseDiagram(PhaseDiagramArgs),
    /// Solve a scenario, then estimate its moments by Monte Carlo.
    Simulate(SimulateArgs),
    /// Water-filling power allocation over the channel noise eigenmodes.
    Waterfill(WaterfillArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Scenario file (TOML).
    scenario: PathBuf,
    /// Write the JSON document here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PhaseDiagramArgs {
    /// Sensitivity axis as min:max:steps, e.g. 0.0:1.5:151.
    #[arg(long)]
    a: RangeSpec,
    /// Power-price axis as min:max:steps, e.g. 0.0:2.0:201.
    #[arg(long)]
    rho: RangeSpec,
    /// Source variance σm².
    #[arg(long = "sigma-m2")]
    sigma_m2: f64,
    /// Channel noise variance σw².
    #[arg(long = "sigma-w2")]
    sigma_w2: f64,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Scenario file (TOML).
    scenario: PathBuf,
    /// Sample count; defaults to the file's sim.samples, then 10000.
    #[arg(long)]
    samples: Option<u64>,
    /// RNG seed; defaults to $SIGNALGAME_SEED, then sim.seed, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Also write per-sample (m, u) pairs as CSV to this path.
    #[arg(long)]
    scatter: Option<PathBuf>,
    /// Write the report JSON here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WaterfillArgs {
    /// Noise eigenvalues, comma-separated, e.g. --eigs 1,3.
    #[arg(
        long,
        value_delimiter = ',',
        conflicts_with = "scenario",
        required_unless_present = "scenario"
    )]
    eigs: Option<Vec<f64>>,
    /// Scenario file whose channel covariance supplies the eigenvalues.
    scenario: Option<PathBuf>,
    /// Total transmission power budget.
    #[arg(long)]
    power: f64,
    /// Write the JSON document here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Inclusive linear grid `min:max:steps`; the endpoints are hit exactly.
#[derive(Debug, Clone, Copy)]
struct RangeSpec {
    min: f64,
    max: f64,
    steps: usize,
}

impl RangeSpec {
    fn values(self) -> Vec<f64> {
        let Self { min, max, steps } = self;
        (0..steps)
            .map(|i| {
                if i == 0 {
                    min
                } else if i == steps - 1 {
                    max
                } else {
                    min + i as f64 * (max - min) / (steps - 1) as f64
                }
            })
            .collect()
    }
}

impl FromStr for RangeSpec {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = text.split(':').collect();
        let [min, max, steps] = parts.as_slice() else {
            return Err(format!("expected min:max:steps, got {text:?}"));
        };
        let min: f64 = min.parse().map_err(|_| format!("bad range minimum {min:?}"))?;
        let max: f64 = max.parse().map_err(|_| format!("bad range maximum {max:?}"))?;
        let steps: usize = steps.parse().map_err(|_| format!("bad step count {steps:?}"))?;
        if !min.is_finite() || !max.is_finite() {
            return Err(format!("range endpoints must be finite, got {text:?}"));
        }
        if min > max {
            return Err(format!("range minimum exceeds maximum in {text:?}"));
        }
        if steps == 0 {
            return Err(format!("step count must be at least 1 in {text:?}"));
        }
        if steps == 1 && min != max {
            return Err(format!("a single-step range needs min = max, got {text:?}"));
        }
        Ok(Self { min, max, steps })
    }
}

/// Failure carrying the process exit code it maps to.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn runtime(message: impl Into<String>) -> Self {
        Self { code: 4, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    /// Regime violations — the scenario is well-formed but outside the
    /// solver's contract — exit 3; everything else is an input error.
    fn from(err: Error) -> Self {
        let code = match err {
            Error::NotCheapTalk { .. }
            | Error::NotSignaling
            | Error::NotIsotropic
            | Error::Infeasible { .. }
            | Error::TooLarge { .. } => 3,
            _ => 2,
        };
        Self { code, message: err.to_string() }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::SolveCheaptalk(args) => cmd_solve_cheaptalk(&args),
        Command::SolveNoisy(args) => cmd_solve_noisy(&args),
        Command::PhaseDiagram(args) => cmd_phase_diagram(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Waterfill(args) => cmd_waterfill(&args),
    }
}

fn load(path: &Path) -> Result<LoadedScenario, CliError> {
    scenario::load_scenario(path).map_err(CliError::input)
}

/// Write `text` to `out`, or to standard output when absent.
fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|err| CliError::runtime(format!("cannot write {}: {err}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|err| CliError::runtime(format!("cannot write standard output: {err}"))),
    }
}

fn cmd_solve_cheaptalk(args: &SolveArgs) -> Result<(), CliError> {
    let loaded = load(&args.scenario)?;
    let sol = cheaptalk::solve_noiseless(&loaded.scenario)?;
    emit(args.out.as_deref(), &output::to_json(&CheaptalkDoc::from_solution(&sol)))
}

/// Noisy solver dispatch: exact scalar solution for n = 1, certified
/// isotropic bound optimization otherwise. The zero-price check runs first
/// so a cheap-talk scenario is reported as such rather than tripping over a
/// later precondition.
fn solve_noisy_scenario(scen: &Scenario) -> Result<noisy::PowerSolution, Error> {
    if scen.rho() == 0.0 {
        return Err(Error::NotSignaling);
    }
    if scen.dim() == 1 {
        noisy::scalar_power(
            scen.sensitivity()[(0, 0)],
            scen.bias()[0],
            scen.sigma_m().as_matrix()[(0, 0)],
            scen.sigma_w().as_matrix()[(0, 0)],
            scen.rho(),
        )
    } else {
        noisy::optimize_bound_power(scen)
    }
}

fn cmd_solve_noisy(args: &SolveArgs) -> Result<(), CliError> {
    let loaded = load(&args.scenario)?;
    let sol = solve_noisy_scenario(&loaded.scenario)?;
    let doc = PowerDoc::from_solution(loaded.scenario.dim(), &sol);
    emit(args.out.as_deref(), &output::to_json(&doc))
}

fn cmd_phase_diagram(args: &PhaseDiagramArgs) -> Result<(), CliError> {
    for (name, value) in [("sigma-m2", args.sigma_m2), ("sigma-w2", args.sigma_w2)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(CliError::input(format!("--{name} must be a positive real, got {value}")));
        }
    }
    if args.rho.min < 0.0 {
        return Err(CliError::input(format!(
            "--rho must be nonnegative, got minimum {}",
            args.rho.min
        )));
    }
    let points: Vec<(f64, f64)> = args
        .a
        .values()
        .into_iter()
        .flat_map(|a| args.rho.values().into_iter().map(move |rho| (a, rho)))
        .collect();
    // Cells are independent; the indexed collect keeps them in (a, ρ) order
    // regardless of scheduling.
    let cells = points
        .into_par_iter()
        .map(|(a, rho)| phase_cell(a, rho, args.sigma_m2, args.sigma_w2))
        .collect::<Result<Vec<PhaseCell>, Error>>()?;
    emit(args.out.as_deref(), &output::phase_diagram_csv(&cells))
}

/// One phase-diagram cell. A free channel (ρ = 0) has no power trade-off to
/// classify, so it is reported as the non-informative base point.
fn phase_cell(a: f64, rho: f64, sigma_m2: f64, sigma_w2: f64) -> Result<PhaseCell, Error> {
    if rho == 0.0 {
        return Ok(PhaseCell { a, rho, regime: PowerRegime::NonInformative.as_str(), p_star: 0.0 });
    }
    let sol = noisy::scalar_power(a, 0.0, sigma_m2, sigma_w2, rho)?;
    Ok(PhaseCell { a, rho, regime: sol.regime.as_str(), p_star: sol.p_star })
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let loaded = load(&args.scenario)?;
    let scen = loaded.scenario;
    let n = scen.dim();
    let samples = args.samples.or(loaded.default_samples).unwrap_or(DEFAULT_SAMPLES);
    let seed = resolve_seed(args.seed, loaded.default_seed)?;

    let (solver, encoder) = if scen.is_cheap_talk() {
        let sol = cheaptalk::solve_noiseless(&scen)?;
        ("cheaptalk", sol.l)
    } else if n == 1 {
        let sol = solve_noisy_scenario(&scen)?;
        ("noisy-scalar", DMatrix::from_element(1, 1, sol.alpha))
    } else {
        let sol = solve_noisy_scenario(&scen)?;
        ("noisy-isotropic", DMatrix::identity(n, n) * sol.alpha)
    };

    let cfg = SimConfig::new(scen, encoder, samples as usize, seed)?;
    let (report, scatter) = if args.scatter.is_some() {
        let (report, pairs) = run_sim_with_scatter(&cfg)
            .map_err(|err| CliError::runtime(format!("simulation failed: {err}")))?;
        (report, Some(pairs))
    } else {
        let report = run_sim(&cfg)
            .map_err(|err| CliError::runtime(format!("simulation failed: {err}")))?;
        (report, None)
    };

    if let (Some(path), Some(pairs)) = (args.scatter.as_deref(), scatter) {
        emit(Some(path), &output::scatter_csv(&pairs, n))?;
    }
    let doc = SimDoc::from_report(solver, &cfg.encoder, &report);
    emit(args.out.as_deref(), &output::to_json(&doc))
}

/// Seed precedence: `--seed`, then `$SIGNALGAME_SEED`, then the scenario
/// file's `sim.seed`, then 0.
fn resolve_seed(flag: Option<u64>, file_default: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text.trim().parse::<u64>().map_err(|_| {
            CliError::input(format!("{SEED_ENV} must be an unsigned integer, got {text:?}"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(file_default.unwrap_or(0)),
        Err(std::env::VarError::NotUnicode(_)) => {
            Err(CliError::input(format!("{SEED_ENV} is not valid unicode")))
        }
    }
}

fn cmd_waterfill(args: &WaterfillArgs) -> Result<(), CliError> {
    let result = match (&args.eigs, &args.scenario) {
        (Some(eigs), None) => channel::waterfill_eigs(eigs, args.power)?,
        (None, Some(path)) => {
            let loaded = load(path)?;
            channel::waterfill(loaded.scenario.sigma_w(), args.power)?
        }
        // clap enforces exactly one source; this arm is unreachable.
        _ => return Err(CliError::input("provide --eigs or a scenario file")),
    };
    emit(args.out.as_deref(), &output::to_json(&WaterfillDoc::from_result(&result)))
}

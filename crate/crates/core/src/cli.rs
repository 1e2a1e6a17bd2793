//! Command-line front end. The binary only parses arguments and maps errors
//! to exit codes; every command lives here so it can be driven from tests.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;

use crate::engine::Preset;
use crate::error::{Error, Result};
use crate::interaction::{Interaction, InteractionSpec};
use crate::output::{self, fmt_num};
use crate::phasemap::{
    count_orbit_classes, critical_ratio, enumerate_attractors, iterate_full_cycle,
    iterate_return_map, AttractorCensus, CriticalRatio, DifferenceState,
};
use crate::scenario::{stream_rng, ScenarioConfig, ScenarioRun};

/// Smallest tolerance accepted by `rho-c`.
pub const MIN_RHO_TOLERANCE: f64 = 1e-6;

/// Convergence tolerance for `map` summaries.
pub const MAP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "pulse-desync", version, about = "Desynchronization of pulse-coupled oscillators")]
pub struct Cli {
    /// Override the scenario or sampling seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Suppress the summary printed to stdout.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a JSON scenario and write its trace and diagnostics.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one of the built-in five-oscillator experiments.
    Reproduce {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Iterate the firing map of N identical all-to-all oscillators.
    Map(MapArgs),
    /// Find the critical frequency ratio for two oscillators.
    RhoC(RhoArgs),
    /// Sample the attracting cyclic firing orders for N oscillators.
    Orbits(OrbitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    SmoothLog,
    ShiftedCubic,
}

#[derive(Debug, Clone, Args)]
pub struct FunctionArgs {
    #[arg(long, value_enum, default_value = "smooth-log")]
    pub family: Family,
    #[arg(long, default_value_t = 2.0)]
    pub gain: f64,
    #[arg(long, default_value_t = 0.1)]
    pub tau: f64,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
}

impl Default for FunctionArgs {
    fn default() -> Self {
        Self {
            family: Family::SmoothLog,
            gain: 2.0,
            tau: 0.1,
            beta: 0.5,
        }
    }
}

impl FunctionArgs {
    pub fn spec(&self) -> InteractionSpec {
        match self.family {
            Family::SmoothLog => InteractionSpec::SmoothLog { gain: self.gain },
            Family::ShiftedCubic => InteractionSpec::ShiftedCubic {
                tau: self.tau,
                beta: self.beta,
            },
        }
    }

    pub fn build(&self) -> Result<Interaction> {
        self.spec().build()
    }
}

#[derive(Debug, Clone, Args)]
pub struct MapArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Initial differences, comma separated (N - 1 values). Random when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub d0: Option<Vec<f64>>,
    /// Iterations for N = 2, full rounds of firings otherwise.
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RhoArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, default_value_t = 1e-3)]
    pub tolerance: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OrbitArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn say(w: &mut dyn Write, line: impl AsRef<str>) -> Result<()> {
    writeln!(w, "{}", line.as_ref()).map_err(|e| Error::io("<stdout>", e))
}

fn ids(order: &[usize]) -> String {
    order.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ")
}

/// One-line summary of a scenario run.
pub fn summary_line(run: &ScenarioRun) -> String {
    let v = &run.verdict;
    let period = v
        .limit_cycle
        .as_ref()
        .map_or_else(|| "none".to_string(), |lc| fmt_num(lc.period));
    let order = v
        .firing_order
        .as_ref()
        .map_or_else(|| "unstable".to_string(), |o| ids(o));
    let ok = v.edges.iter().filter(|e| e.desynchronized).count();
    format!(
        "final P = {} (t >= {}), period = {period}, firing order = {order}, desynchronized edges = {ok}/{}",
        fmt_num(run.final_mean_order_parameter()),
        fmt_num(v.window_start),
        v.edges.len()
    )
}

pub fn cmd_simulate(
    config: &Path,
    out: &Path,
    seed: Option<u64>,
    w: &mut dyn Write,
) -> Result<ScenarioRun> {
    let text = fs::read_to_string(config).map_err(|e| Error::io(config, e))?;
    let mut cfg = ScenarioConfig::from_json(&text)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let run = cfg.resolve()?.run()?;
    output::write_run(out, &run)?;
    say(w, summary_line(&run))?;
    for d in &run.verdict.diagnostics {
        say(w, format!("note: {d}"))?;
    }
    Ok(run)
}

pub fn cmd_reproduce(
    preset: &str,
    out: &Path,
    seed: Option<u64>,
    w: &mut dyn Write,
) -> Result<ScenarioRun> {
    let preset: Preset = preset.parse()?;
    let mut cfg = preset.config();
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let run = cfg.resolve()?.run()?;
    output::write_run(out, &run)?;
    say(w, format!("{preset}: {}", summary_line(&run)))?;
    for d in &run.verdict.diagnostics {
        say(w, format!("note: {d}"))?;
    }
    Ok(run)
}

/// Outcome of `map`, one state per iteration (N = 2) or per round.
#[derive(Debug, Clone, PartialEq)]
pub struct MapOutcome {
    pub states: Vec<DifferenceState>,
    pub summary: String,
}

fn random_ordered_state(n: usize, seed: u64) -> Result<DifferenceState> {
    let mut rng = stream_rng(seed, 0);
    let mut phases: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    phases.sort_by(|a, b| b.total_cmp(a));
    DifferenceState::from_phases(&phases)
}

fn two_oscillator_summary(values: &[f64], converged_at: Option<usize>) -> String {
    let last = *values.last().expect("trajectory holds d0");
    if values.iter().all(|&v| v == 0.0) {
        return "unstable fixed point, no motion".to_string();
    }
    if let Some(k) = converged_at {
        return format!("converged to ±0.5 after {k} iterations");
    }
    let n = values.len();
    if n >= 2 && (last - values[n - 2]).abs() < MAP_TOLERANCE {
        return format!("converged to fixed point {last:.10}");
    }
    if n >= 3 && (last - values[n - 3]).abs() < MAP_TOLERANCE {
        return format!("period-2 orbit ±{:.10}", last.abs());
    }
    format!("no convergence within {} iterations", n - 1)
}

pub fn cmd_map(args: &MapArgs, seed: Option<u64>, w: &mut dyn Write) -> Result<MapOutcome> {
    let f = args.function.build()?;
    if args.n < 2 {
        return Err(Error::invalid(format!("need N >= 2, got {}", args.n)));
    }
    let d0 = match &args.d0 {
        Some(d) if d.len() != args.n - 1 => {
            return Err(Error::invalid(format!(
                "d0 needs {} values for N = {}, got {}",
                args.n - 1,
                args.n,
                d.len()
            )))
        }
        Some(d) => DifferenceState::new(d.clone())?,
        None if args.n == 2 => DifferenceState::new(vec![0.1])?,
        None => random_ordered_state(args.n, seed.unwrap_or(0))?,
    };

    let outcome = if args.n == 2 {
        let traj = iterate_return_map(d0.as_slice()[0], args.steps, &f, MAP_TOLERANCE)?;
        let summary = two_oscillator_summary(&traj.values, traj.converged_at);
        let states = traj
            .values
            .iter()
            .map(|&v| DifferenceState::new(vec![v]))
            .collect::<Result<Vec<_>>>()?;
        MapOutcome { states, summary }
    } else {
        let traj = iterate_full_cycle(&d0, args.steps, &f, MAP_TOLERANCE)?;
        let summary = match traj.converged_at {
            Some(k) => format!("converged to fixed point {} after {k} rounds", traj.last()),
            None => format!("no convergence within {} rounds, last state {}", args.steps, traj.last()),
        };
        MapOutcome {
            states: traj.states,
            summary,
        }
    };
    if let Some(dir) = &args.out {
        output::ensure_dir(dir)?;
        output::write_file(&dir.join(output::TRAJECTORY_FILE), |w| {
            output::write_trajectory(w, &outcome.states)
        })?;
    }
    say(w, &outcome.summary)?;
    Ok(outcome)
}

pub fn cmd_rho_c(args: &RhoArgs, w: &mut dyn Write) -> Result<CriticalRatio> {
    if args.tolerance.is_nan() || args.tolerance < MIN_RHO_TOLERANCE {
        return Err(Error::invalid(format!(
            "tolerance must be >= {MIN_RHO_TOLERANCE}, got {}",
            args.tolerance
        )));
    }
    let f = args.function.build()?;
    let rc = critical_ratio(&f, args.tolerance)?;
    if let Some(dir) = &args.out {
        output::ensure_dir(dir)?;
        output::write_file(&dir.join(output::RHO_SWEEP_FILE), |w| output::write_rho_sweep(w, &rc))?;
    }
    say(w, format!("rho_c = {} (tolerance {})", fmt_num(rc.rho_c), fmt_num(rc.tolerance)))?;
    let failures: Vec<_> = rc.solver_failures().collect();
    for s in &failures {
        say(w, format!("solver failure at rho = {}: {}", fmt_num(s.rho), s.error.as_deref().unwrap_or("")))?;
    }
    if !failures.is_empty() {
        return Err(Error::Solver(format!("{} ratio samples failed to converge", failures.len())));
    }
    Ok(rc)
}

pub fn cmd_orbits(args: &OrbitArgs, seed: Option<u64>, w: &mut dyn Write) -> Result<AttractorCensus> {
    let f = args.function.build()?;
    let census = enumerate_attractors(args.n, args.samples, seed.unwrap_or(0), &f)?;
    let expected = count_orbit_classes(args.n)?;
    if let Some(dir) = &args.out {
        output::ensure_dir(dir)?;
        output::write_file(&dir.join(output::ORBITS_FILE), |w| output::write_orbits(w, &census))?;
    }
    say(w, format!("found {}, expected {expected}", census.orbits.len()))?;
    say(
        w,
        format!(
            "converged samples: {}/{}",
            census.converged(),
            census.samples
        ),
    )?;
    for o in &census.orbits {
        let order: Vec<String> = o.firing_order.iter().map(|i| i.to_string()).collect();
        say(
            w,
            format!(
                "order {}: fixed point {}, max |multiplier| {}, hits {}",
                order.join(" "),
                o.fixed_point,
                fmt_num(o.multipliers.first().copied().unwrap_or(f64::NAN)),
                o.hits
            ),
        )?;
    }
    Ok(census)
}

/// Runs a parsed command line, writing summaries to `stdout` unless quiet.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let mut sink = io::sink();
    let w: &mut dyn Write = if cli.quiet { &mut sink } else { stdout };
    match &cli.command {
        Command::Simulate { config, out } => cmd_simulate(config, out, cli.seed, w).map(drop),
        Command::Reproduce { preset, out } => cmd_reproduce(preset, out, cli.seed, w).map(drop),
        Command::Map(args) => cmd_map(args, cli.seed, w).map(drop),
        Command::RhoC(args) => cmd_rho_c(args, w).map(drop),
        Command::Orbits(args) => cmd_orbits(args, cli.seed, w).map(drop),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli, &mut io::stdout().lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

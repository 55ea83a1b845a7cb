//! `hjbwave` — construct monotone travelling-wave solutions of constrained
//! control field equations and verify them three independent ways.

mod commands;
mod config;
mod fail;
mod fmt;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

const AFTER_HELP: &str = "\
Configuration precedence: command-line flags override entries in the \
`key = value` file given by --config, which override built-in defaults. \
Config keys use the long option names of the subcommand. \
Relative --out paths resolve under $HJBWAVE_OUT_DIR when it is set; without \
--out, reports go to stdout.

Exit codes: 0 success; 2 invalid input; 3 no travelling wave; 4 numerical \
failure.";

#[derive(Parser)]
#[command(
    name = "hjbwave",
    version,
    about = "Travelling waves of constrained control field equations: construction, \
             PDE verification, value reconstruction, and Monte Carlo policy tests",
    after_help = AFTER_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the wave chord for prescribed far-field limits and report
    /// speed, intercept, equilibria and the connection verdict as JSON.
    #[command(allow_negative_numbers = true)]
    Spec(SpecArgs),
    /// Integrate the wave profile and emit it as CSV (`xi,z,v,theta`).
    #[command(allow_negative_numbers = true)]
    Profile(ProfileArgs),
    /// Evolve the profile with the independent finite-difference solver and
    /// report measured speed, identity residual and bounds as JSON.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
    /// Simulate the wave-induced policy against constant policies by Monte
    /// Carlo and report means, standard errors and z-scores as JSON.
    #[command(allow_negative_numbers = true)]
    Simulate(SimulateArgs),
    /// Tabulate root counts and wave existence over a parameter grid as CSV.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    /// Linear drift, volatility equal to the exposure.
    Simple,
    /// Drift with a quadratic exposure penalty.
    QuadraticDrift,
    /// Power-law volatility growth with a floor (requires --m).
    General,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FluxArg {
    /// Pick centered or upwind from the grid Péclet number.
    Auto,
    /// Second-order centered advective flux.
    Centered,
    /// First-order upwind advective flux.
    Upwind,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepModeArg {
    /// Grid over the far-field limits (v-left, v-right).
    Limits,
    /// Grid over the chord parameters (c, k0).
    Chord,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UtilityArg {
    /// Terminal payout synthesized from the wave itself.
    Wave,
    /// Constant absolute risk aversion payout (see --lambda).
    Cara,
}

#[derive(Args)]
pub struct CommonArgs {
    /// Plain-text `key = value` file supplying defaults for any long option.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Write the report to this file instead of stdout; relative paths
    /// resolve under $HJBWAVE_OUT_DIR when set.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Base seed for stochastic commands [default: 42].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for parallel simulation [default: all cores].
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args)]
pub struct ModelArgs {
    /// Model family [default: simple].
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    /// Risk-premium scale, > 0 [default: 1].
    #[arg(long)]
    pub omega: Option<f64>,
    /// Volatility floor, >= 0 (general only) [default: 0].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Control-independent drift (general only) [default: 0].
    #[arg(long)]
    pub beta: Option<f64>,
    /// Volatility-growth exponent, > 1 (general only; required there).
    #[arg(long)]
    pub m: Option<f64>,
}

#[derive(Args)]
pub struct LimitArgs {
    /// Far-field limit of the profile as xi -> -inf.
    #[arg(long)]
    pub v_left: Option<f64>,
    /// Far-field limit of the profile as xi -> +inf.
    #[arg(long)]
    pub v_right: Option<f64>,
}

#[derive(Args)]
pub struct SpecArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Lower end of the equilibrium scan [default: 0.02 * min(1, v_left, v_right)].
    #[arg(long)]
    pub scan_lo: Option<f64>,
    /// Upper end of the equilibrium scan [default: 6 * max(1, v_left, v_right)].
    #[arg(long)]
    pub scan_hi: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Stop integrating a tail once z is this close to its limit [default: 1e-8].
    #[arg(long)]
    pub eps_trunc: Option<f64>,
    /// Hard cap on |xi| in either direction [default: 200].
    #[arg(long)]
    pub xi_max: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Number of grid cells [default: 1024].
    #[arg(long)]
    pub cells: Option<usize>,
    /// Horizon in units of wave widths travelled [default: 10].
    #[arg(long)]
    pub travel_widths: Option<f64>,
    /// Extra domain padding beyond the profile span and travel [default: 8].
    #[arg(long)]
    pub pad: Option<f64>,
    /// Safety factor on the explicit stability bound, in (0, 1) [default: 0.45].
    #[arg(long)]
    pub cfl: Option<f64>,
    /// Advective flux scheme [default: auto].
    #[arg(long, value_enum)]
    pub flux: Option<FluxArg>,
    /// Number of recorded snapshots, >= 2 [default: 17].
    #[arg(long)]
    pub snapshots: Option<usize>,
    /// Relative speed-error tolerance [default: 0.02].
    #[arg(long)]
    pub speed_tol: Option<f64>,
    /// Profile-identity residual tolerance [default: 1e-6].
    #[arg(long)]
    pub residual_tol: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Initial state [default: 0].
    #[arg(long)]
    pub x0: Option<f64>,
    /// Start time [default: 0].
    #[arg(long)]
    pub t0: Option<f64>,
    /// Terminal time [default: 2].
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Euler-Maruyama steps per path, >= 100 [default: 400].
    #[arg(long)]
    pub steps: Option<usize>,
    /// Number of simulated paths, >= 1000 [default: 20000].
    #[arg(long)]
    pub paths: Option<usize>,
    /// Comma-separated constant exposures to compare against
    /// [default: 0.25,0.5,0.75,1].
    #[arg(long)]
    pub thetas: Option<String>,
    /// Terminal payout [default: wave].
    #[arg(long, value_enum)]
    pub utility: Option<UtilityArg>,
    /// Risk aversion of the CARA payout [default: 1].
    #[arg(long)]
    pub lambda: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// What the grid ranges over [default: limits].
    #[arg(long, value_enum)]
    pub mode: Option<SweepModeArg>,
    /// Start of the v-left range (limits mode).
    #[arg(long)]
    pub v_left_from: Option<f64>,
    /// End of the v-left range [default: v-left-from].
    #[arg(long)]
    pub v_left_to: Option<f64>,
    /// Number of v-left grid points [default: 1].
    #[arg(long)]
    pub v_left_steps: Option<usize>,
    /// Start of the v-right range (limits mode).
    #[arg(long)]
    pub v_right_from: Option<f64>,
    /// End of the v-right range [default: v-right-from].
    #[arg(long)]
    pub v_right_to: Option<f64>,
    /// Number of v-right grid points [default: 1].
    #[arg(long)]
    pub v_right_steps: Option<usize>,
    /// Start of the c range (chord mode).
    #[arg(long)]
    pub c_from: Option<f64>,
    /// End of the c range [default: c-from].
    #[arg(long)]
    pub c_to: Option<f64>,
    /// Number of c grid points [default: 1].
    #[arg(long)]
    pub c_steps: Option<usize>,
    /// Start of the k0 range (chord mode).
    #[arg(long)]
    pub k0_from: Option<f64>,
    /// End of the k0 range [default: k0-from].
    #[arg(long)]
    pub k0_to: Option<f64>,
    /// Number of k0 grid points [default: 1].
    #[arg(long)]
    pub k0_steps: Option<usize>,
    /// Lower end of the equilibrium scan [default: mode-dependent].
    #[arg(long)]
    pub scan_lo: Option<f64>,
    /// Upper end of the equilibrium scan [default: mode-dependent].
    #[arg(long)]
    pub scan_hi: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Spec(args) => commands::cmd_spec(args),
        Command::Profile(args) => commands::cmd_profile(args),
        Command::Verify(args) => commands::cmd_verify(args),
        Command::Simulate(args) => commands::cmd_simulate(args),
        Command::Sweep(args) => commands::cmd_sweep(args),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

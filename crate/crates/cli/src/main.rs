//! `bwkb`: batch front-end for the transmission solver, the boundary-layer
//! expansion and the verification studies.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

const DEFAULTS_HELP: &str = "\
Configuration (TOML, every key optional; shown with its default):

  [geometry]
  period = 6.283185307179586   # L
  fluid_top = 1.0              # a
  porous = 2.0                 # b
  fluid_bottom = 1.0           # c

  [params]
  kappa = 4.0
  mu = 1.0
  alpha = 1.0
  beta = 1.0

  [data]
  kind = \"random\"             # random | manufactured | zero | file
  seed = 7
  active_modes = 2
  terms = 2
  amplitude = 1.0
  # path = \"data.json\"        # ProblemData JSON, kind = \"file\"

  [discretization]
  n_modes = 4
  n_points = 32
  layer_factor = 9.0

  [study]
  eps_list = [0.1, 0.03, 0.01, 0.003, 0.001]
  eps = 0.1
  orders = [2, 3, 4]
  order = 4
  refine = 0.0                 # > 1 adds a grid-refinement check to converge

Environment: BWKB_THREADS caps the number of worker threads.
Exit codes: 0 success, 1 numerical failure, 2 configuration failure.";

#[derive(Debug, Parser)]
#[command(name = "bwkb", version, about = "Stokes-Brinkman transmission solver and boundary-layer expansion studies", after_long_help = DEFAULTS_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML configuration file; built-in defaults are used without one.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Viscosity for `solve` and `mms` (overrides study.eps).
    #[arg(long, global = true, value_name = "X")]
    eps: Option<f64>,

    /// Decreasing ε list for `converge` and `energy` (overrides study.eps_list).
    #[arg(long, global = true, value_name = "a,b,c", value_delimiter = ',')]
    eps_list: Option<Vec<f64>>,

    /// Expansion order for `expand`, or the single truncation order for `converge`.
    #[arg(long, global = true, value_name = "J")]
    order: Option<usize>,

    /// Output file; standard output without one.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format; `converge` and `energy` default to CSV, the others to JSON.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Solve the full problem at one ε and report norms and energy terms.
    Solve,
    /// Build the boundary-layer expansion and its residual summary.
    Expand,
    /// Remainder convergence study over the ε list, with fitted slopes and an energy check.
    Converge,
    /// Energy estimate terms over the ε list.
    Energy,
    /// Recover manufactured fields with the full, elementary and mixed solvers.
    Mms,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("BWKB_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            CliError::Config(format!(
                "BWKB_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot set up {n} worker threads: {e}")))
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(eps) = cli.eps {
        cfg.study.eps = eps;
    }
    if let Some(list) = cli.eps_list {
        cfg.study.eps_list = list;
    }
    let text = match cli.command {
        Command::Solve => commands::solve(&cfg, cli.format)?,
        Command::Expand => {
            commands::expand(&cfg, cli.order.unwrap_or(cfg.study.order), cli.format)?
        }
        Command::Converge => {
            let orders = cli
                .order
                .map_or_else(|| cfg.study.orders.clone(), |k| vec![k]);
            commands::converge(&cfg, &orders, cli.format)?
        }
        Command::Energy => commands::energy(&cfg, cli.format)?,
        Command::Mms => {
            let (text, worst) = commands::mms(&cfg, cli.format)?;
            output::write(cli.out.as_deref(), &text)?;
            return commands::check_recovery(worst);
        }
    };
    output::write(cli.out.as_deref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            output::report_error(&e);
            ExitCode::from(e.exit_code())
        }
    }
}

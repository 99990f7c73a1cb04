//! `fullgroup`: synthesis, distances, verification and Diophantine queries
//! for piecewise rotations generated by `T` and `U`.
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 smallness violated,
//! 3 no Diophantine solution (or no certified word) within the `k` cap,
//! 4 target arcs collide, 5 invalid rotation system or involution,
//! 6 certificate verification failed.

mod commands;
mod config;
mod maps;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use fullgroup::circle_maps::CircleMapError;
use fullgroup::diophantine::DiophantineError;
use fullgroup::synthesis::SynthesisError;

use config::{parse_list, parse_number, Format, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
    #[error(transparent)]
    Map(#[from] CircleMapError),
    #[error(transparent)]
    Diophantine(#[from] DiophantineError),
    #[error("verification failed: {0}")]
    Verify(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Synthesis(e) => match e {
                SynthesisError::Smallness { .. } => 2,
                SynthesisError::NotFound { .. } | SynthesisError::NotCertified { .. } => 3,
                SynthesisError::Separation(_) => 4,
                SynthesisError::WordParse(_) | SynthesisError::BadDelta => 1,
                SynthesisError::Certificate(_) => 6,
                SynthesisError::Independence | SynthesisError::CircleCount { .. } => 5,
                SynthesisError::CircleMap(m) => map_code(m),
            },
            CliError::Map(m) => map_code(m),
            CliError::Diophantine(e) => match e {
                DiophantineError::NotFound { .. } => 3,
                DiophantineError::Dependent => 5,
                _ => 1,
            },
            CliError::Verify(_) => 6,
        }
    }
}

fn map_code(e: &CircleMapError) -> u8 {
    match e {
        CircleMapError::Parse { .. }
        | CircleMapError::BadArc { .. }
        | CircleMapError::CircleIndex { .. } => 1,
        _ => 5,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fullgroup",
    version,
    about = "Certified words in T and U for piecewise rotations"
)]
struct Cli {
    /// `key = value` configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Rotation amount(s), one per circle (repeat or separate by commas).
    #[arg(long, global = true, value_delimiter = ',')]
    alpha: Vec<String>,
    /// Length of the base arc of U.
    #[arg(long, global = true)]
    beta: Option<String>,
    /// Number of circles when the default rotation amounts are used.
    #[arg(long, global = true)]
    circles: Option<usize>,
    /// Circle carrying the target (and the default circle for arcs without `i:`).
    #[arg(long, global = true)]
    component: Option<usize>,
    /// Initial Diophantine search bound.
    #[arg(long, global = true)]
    kmax: Option<u64>,
    /// Largest search bound reached by doubling.
    #[arg(long = "kmax-cap", global = true)]
    kmax_cap: Option<u64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for sampled checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize a certified word for T_A.
    Synth {
        /// Arc set, e.g. "[0, 0.1)" or "0:[0, 1/10) U 1:[1/2, 0.55)".
        #[arg(long)]
        target: String,
        /// Uniform-distance tolerance (default 1/10).
        #[arg(long)]
        delta: Option<String>,
        /// Block half-length; arcs are cut into pieces of length <= 2 eps.
        #[arg(long)]
        eps: Option<String>,
    },
    /// Exact uniform distance between two maps.
    Dist {
        /// Map spec: product of id, T, T^m, U, inv(<arc set>).
        a: String,
        b: String,
        /// Also estimate the distance from this many random points.
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Recompute a JSON certificate and print it again.
    Verify {
        /// Certificate file, or `-` for stdin.
        path: String,
    },
    /// Block synthesis over a grid of eps and delta values.
    Table {
        /// Comma-separated block half-lengths.
        #[arg(long)]
        eps: Option<String>,
        /// Comma-separated tolerances.
        #[arg(long)]
        delta: Option<String>,
        /// Omit the wall-time column (output becomes fully deterministic).
        #[arg(long)]
        no_timing: bool,
    },
    /// Diophantine queries on the rotation amounts.
    Dioph {
        /// Targets, one per circle (default 0).
        #[arg(long, value_delimiter = ',')]
        goal: Vec<String>,
        #[arg(long)]
        tol: Option<String>,
        /// Print this many continued-fraction quotients of each alpha instead.
        #[arg(long)]
        cf: Option<usize>,
        /// Print the gap lengths of {j alpha : 0 <= j <= K} instead.
        #[arg(long)]
        three_distance: Option<u64>,
    },
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if !cli.alpha.is_empty() {
        cfg.alphas = Some(
            cli.alpha
                .iter()
                .map(|a| parse_number(a))
                .collect::<Result<_, _>>()?,
        );
    }
    if let Some(b) = &cli.beta {
        cfg.beta = Some(parse_number(b)?);
    }
    cfg.circles = cli.circles.or(cfg.circles);
    cfg.component = cli.component.unwrap_or(cfg.component);
    cfg.k_max = cli.kmax.or(cfg.k_max);
    cfg.k_cap = cli.kmax_cap.or(cfg.k_cap);
    cfg.format = cli.format.or(cfg.format);
    cfg.seed = cli.seed.or(cfg.seed);
    Ok(cfg)
}

fn run(cli: Cli) -> Result<String, CliError> {
    let mut cfg = load_config(&cli)?;
    match cli.command {
        Command::Synth { target, delta, eps } => {
            if let Some(d) = delta {
                cfg.delta = Some(parse_list(&d)?);
            }
            if let Some(e) = eps {
                cfg.eps = Some(parse_list(&e)?);
            }
            commands::synth(&cfg, &target)
        }
        Command::Dist { a, b, samples } => commands::dist(&cfg, &a, &b, samples),
        Command::Verify { path } => commands::verify(&cfg, &path),
        Command::Table {
            eps,
            delta,
            no_timing,
        } => {
            if let Some(d) = delta {
                cfg.delta = Some(parse_list(&d)?);
            }
            if let Some(e) = eps {
                cfg.eps = Some(parse_list(&e)?);
            }
            commands::table(&cfg, !no_timing)
        }
        Command::Dioph {
            goal,
            tol,
            cf,
            three_distance,
        } => {
            let goals = goal
                .iter()
                .map(|g| parse_number(g))
                .collect::<Result<Vec<_>, _>>()?;
            let tol = tol.map(|t| parse_number(&t)).transpose()?;
            commands::dioph(&cfg, &goals, tol, cf, three_distance)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

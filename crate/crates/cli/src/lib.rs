//! Command-line front end: file formats, commands and JSON reports.

pub mod commands;
pub mod error;
pub mod formats;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use zzsim::Config;

pub use commands::Method;
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "zzsim",
    version,
    about = "Plan and verify zz-drift Hamiltonian simulation schedules"
)]
pub struct Cli {
    /// JSON file overriding tolerances and size caps.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lower and upper overhead bounds for a zz target.
    Bounds { graph: PathBuf },
    /// Plan a sign schedule.
    Plan {
        /// Graph, cliques or jz file depending on the method.
        input: PathBuf,
        #[arg(long, value_enum, default_value = "lp")]
        method: Method,
        /// Also write the schedule file here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check a schedule against its target.
    Verify {
        #[arg(long)]
        schedule: PathBuf,
        /// Target graph; defaults to the one embedded in the schedule file.
        #[arg(long)]
        target: Option<PathBuf>,
        /// Drift graph; defaults to the complete graph with unit weights.
        #[arg(long)]
        drift: Option<PathBuf>,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Time-reverse a bipartite zz drift.
    Invert {
        drift: PathBuf,
        /// Use the σx/σy/σz triple, which inverts any pair interaction.
        #[arg(long)]
        general: bool,
    },
    /// Gate angles and weighted depth of a circuit.
    Depth {
        #[arg(long)]
        circuit: PathBuf,
    },
}

pub fn load_config(path: Option<&std::path::Path>) -> Result<Config, CliError> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text = formats::read(path)?;
    let cfg: Config = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        line: e.line(),
        message: e.to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Runs one command and returns its JSON report.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let cfg = load_config(cli.config.as_deref())?;
    match &cli.command {
        Command::Bounds { graph } => Ok(to_json(&commands::bounds(graph, &cfg)?)),
        Command::Plan { input, method, output } => {
            let out = commands::plan(input, *method, &cfg)?;
            if let Some(path) = output {
                formats::write(path, &to_json(&out.schedule))?;
            }
            Ok(to_json(&out))
        }
        Command::Verify {
            schedule,
            target,
            drift,
            epsilon,
            steps,
        } => {
            let args = commands::VerifyArgs {
                schedule,
                target: target.as_deref(),
                drift: drift.as_deref(),
                epsilon: *epsilon,
                steps: *steps,
            };
            Ok(to_json(&commands::verify(&args, &cfg)?))
        }
        Command::Invert { drift, general } => Ok(to_json(&commands::invert(drift, *general)?)),
        Command::Depth { circuit } => Ok(to_json(&commands::depth(circuit)?)),
    }
}

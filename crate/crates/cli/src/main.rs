//! `corner-index`: validate corner posets and families, compute conormal
//! homology, and evaluate boundary-index obstructions from JSON documents.
//!
//! Exit codes: 0 success, 1 domain failure, 2 unreadable or malformed input,
//! 3 unsupported codimension.

mod commands;
mod documents;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use corner_index::abelian::FGAbelianGroup;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Unsupported(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Input(_) => 2,
            CliError::Unsupported(_) => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Parser)]
#[command(
    name = "corner-index",
    version,
    about = "Conormal homology and boundary-index obstructions for manifolds with corners"
)]
struct Cli {
    /// Output format for reports.
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a poset or family document against the structural rules.
    Validate { file: PathBuf },
    /// Conormal homology of a filtered pair.
    Homology {
        file: PathBuf,
        /// Filtration levels `m l` of the pair (X_l, X_m); absolute by default.
        #[arg(long, num_args = 2, value_names = ["M", "L"], allow_negative_numbers = true)]
        pair: Option<Vec<i64>>,
        /// Coefficient group, e.g. "Z^2 + Z/4".
        #[arg(long, default_value = "Z")]
        coeff: String,
    },
    /// Orbit structure of a family's total space.
    Family {
        file: PathBuf,
        #[arg(long)]
        check_embeddable: bool,
    },
    /// Obstruction groups, and the vanishing verdict when symbol data is given.
    Obstruction {
        poset: PathBuf,
        ktheory: PathBuf,
        symbol: Option<PathBuf>,
    },
    /// Emit a built-in example family.
    Gallery {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn command_echo(cmd: &Command) -> Value {
    let path = |p: &PathBuf| p.display().to_string();
    match cmd {
        Command::Validate { file } => json!({"name": "validate", "file": path(file)}),
        Command::Homology { file, pair, coeff } => {
            json!({"name": "homology", "file": path(file), "pair": pair, "coeff": coeff})
        }
        Command::Family {
            file,
            check_embeddable,
        } => {
            json!({"name": "family", "file": path(file), "check_embeddable": check_embeddable})
        }
        Command::Obstruction {
            poset,
            ktheory,
            symbol,
        } => json!({
            "name": "obstruction",
            "poset": path(poset),
            "ktheory": path(ktheory),
            "symbol": symbol.as_ref().map(path),
        }),
        Command::Gallery { name, out } => {
            json!({"name": "gallery", "entry": name, "out": out.as_ref().map(path)})
        }
    }
}

fn run(cmd: &Command) -> Result<(commands::Outcome, Option<String>), CliError> {
    match cmd {
        Command::Validate { file } => Ok((commands::validate(file)?, None)),
        Command::Homology { file, pair, coeff } => {
            let g: FGAbelianGroup = coeff
                .parse()
                .map_err(|e| CliError::Input(format!("bad coefficient group {coeff:?}: {e}")))?;
            let pair = pair.as_ref().map(|v| (v[0], v[1]));
            Ok((commands::homology_cmd(file, pair, &g)?, None))
        }
        Command::Family {
            file,
            check_embeddable,
        } => Ok((commands::family(file, *check_embeddable)?, None)),
        Command::Obstruction {
            poset,
            ktheory,
            symbol,
        } => Ok((
            commands::obstruction(poset, ktheory, symbol.as_deref())?,
            None,
        )),
        Command::Gallery { name, out } => commands::gallery_cmd(name, out.as_ref()),
    }
}

/// Writes to stdout, tolerating a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("CORNER_INDEX_LOG")).init();
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli.command) {
        Ok((_, Some(document))) => {
            emit(&document);
            ExitCode::SUCCESS
        }
        Ok((outcome, None)) => {
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            log::debug!("command finished in {elapsed:.3} ms");
            match cli.format {
                Format::Json => {
                    let r = report::envelope(command_echo(&cli.command), outcome.results, elapsed);
                    emit(&(serde_json::to_string_pretty(&r).expect("serializable") + "\n"));
                }
                Format::Table => emit(&report::table(&outcome.results)),
            }
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

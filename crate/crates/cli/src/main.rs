//! Command-line front end: exact analysis of balanced multisum terms and
//! holonomic sequences.
//!
//! Every command prints one report, as JSON (default) or text, to stdout
//! or to `--out`. The exit code summarizes the outcome; see
//! [`pipeline`] for the code table.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use holoscope::pipeline::{self, Options, Outcome};
use holoscope::{formats, text};

#[derive(Parser)]
#[command(name = "holoscope", version, about = "Exact analysis of balanced multisum sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline on a balanced term file: balance, support, values,
    /// recurrence, differential equation, local data, fit, certificates.
    AnalyzeTerm {
        /// Term file (or `-` for stdin).
        term: PathBuf,
        /// Largest index to evaluate.
        #[arg(long, default_value_t = 60)]
        nmax: u64,
        /// Largest recurrence order to search.
        #[arg(long, default_value_t = 6)]
        max_order: usize,
        /// Largest coefficient degree to search.
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
        /// Extrapolation depth for the asymptotic fit.
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Decide the irrational-exponent obstruction for a recurrence with
    /// initial values.
    Obstruct {
        /// Recurrence file (or `-` for stdin).
        recurrence: PathBuf,
        /// Comma-separated initial values `a_0,...,a_{d-1}`.
        #[arg(long)]
        initial: String,
        /// Largest index to extend to.
        #[arg(long, default_value_t = 400)]
        nmax: u64,
        /// Extrapolation depth for the asymptotic fit.
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Fit growth, polynomial correction, and Gevrey class of a sequence
    /// file.
    Fit {
        /// Sequence file (or `-` for stdin).
        sequence: PathBuf,
        /// Extrapolation depth.
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Height and denominator growth certificates for a sequence file.
    Certify {
        /// Sequence file (or `-` for stdin).
        sequence: PathBuf,
        /// Largest recurrence order to search for the holonomy check.
        #[arg(long, default_value_t = 6)]
        max_order: usize,
        /// Largest coefficient degree to search.
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
    },
    /// Tabulate the normalized binomial lcm sequence as CSV.
    LcmTable {
        /// Largest row.
        #[arg(long, default_value_t = 500)]
        nmax: u64,
    },
}

fn read_input(path: &Path) -> Result<(String, Option<String>), String> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut text)
            .map_err(|e| format!("stdin: {e}"))?;
        return Ok((text, None));
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((text, Some(path.display().to_string())))
}

fn run(cli: &Cli) -> Result<Outcome, String> {
    let outcome = match &cli.command {
        Command::AnalyzeTerm {
            term,
            nmax,
            max_order,
            max_degree,
            depth,
        } => {
            let (text, path) = read_input(term)?;
            let opts = Options {
                nmax: *nmax,
                max_order: *max_order,
                max_degree: *max_degree,
                depth: *depth,
            };
            pipeline::analyze_term(&text, path, opts)
        }
        Command::Obstruct {
            recurrence,
            initial,
            nmax,
            depth,
        } => {
            let (text, path) = read_input(recurrence)?;
            let initial = formats::parse_rat_list(initial)
                .map_err(|e| format!("--initial: {}", e.message))?;
            let opts = Options {
                nmax: *nmax,
                max_order: 0,
                max_degree: 0,
                depth: *depth,
            };
            pipeline::obstruct(&text, path, &initial, opts)
        }
        Command::Fit { sequence, depth } => {
            let (text, path) = read_input(sequence)?;
            pipeline::fit(&text, path, *depth)
        }
        Command::Certify {
            sequence,
            max_order,
            max_degree,
        } => {
            let (text, path) = read_input(sequence)?;
            let opts = Options {
                nmax: 0,
                max_order: *max_order,
                max_degree: *max_degree,
                depth: 0,
            };
            pipeline::certify(&text, path, opts)
        }
        Command::LcmTable { nmax } => pipeline::lcm_table(*nmax),
    };
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut outcome = match run(&cli) {
        Ok(o) => o,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };
    outcome.report.timing_ms = start.elapsed().as_millis() as u64;
    let rendered = match cli.format {
        Format::Json => outcome.report.to_json(),
        Format::Text => text::render_text(&outcome.report),
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &rendered).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(rendered.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(message) = written {
        eprintln!("error: {message}");
        return ExitCode::from(2);
    }
    ExitCode::from(u8::try_from(outcome.exit).unwrap_or(1))
}

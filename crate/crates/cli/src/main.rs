//! `curve-atlas`: runs the point, map and tower checks, the bounded searches
//! and single modular computations, and writes text, JSON or CSV reports.
//!
//! Exit codes: 0 all checks pass, 1 some check failed, 2 usage error, 3 I/O
//! failure.

mod checks;
mod report;

use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, CommandFactory, Parser, Subcommand, ValueEnum};
use curve_atlas::catalog::CurveId;

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "curve-atlas", version, about = "Exact checks, searches and modular computations for the curve family")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (defaults to the available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every tabulated point against its curve equation.
    VerifyPoints,
    /// Check coverings, birational maps and the Pell parametrization.
    VerifyMaps,
    /// Recover the integral pairs and check every tower residual.
    VerifyTower {
        /// One discriminant label instead of all six.
        #[arg(long)]
        d: Option<u64>,
        /// Precision in bits (default depends on d).
        #[arg(long, value_parser = clap::value_parser!(u32).range(32..))]
        bits: Option<u32>,
    },
    /// Evaluate W, the integral pair, j and the residual table for one d.
    Modular {
        #[arg(long)]
        d: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(32..))]
        bits: Option<u32>,
    },
    /// Bounded point search on one curve.
    Search {
        #[arg(long, value_parser = parse_curve)]
        curve: CurveId,
        /// Height bound for ks.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        height: Option<u64>,
        /// Box bound |x| <= B for k1 and k3.
        #[arg(long = "box", value_parser = clap::value_parser!(u64).range(1..))]
        box_bound: Option<u64>,
    },
    /// Run the full battery and write one aggregate document.
    Report {
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        height: u64,
        #[arg(long = "box", default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
        box_bound: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

fn parse_curve(s: &str) -> Result<CurveId, String> {
    s.parse().map_err(|e: curve_atlas::catalog::CatalogError| e.to_string())
}

fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::ArgumentConflict, msg).exit()
}

fn run(cli: &Cli, partitions: u32) -> Report {
    match &cli.command {
        Command::VerifyPoints => checks::verify_points(),
        Command::VerifyMaps => checks::verify_maps(),
        Command::VerifyTower { d, bits } => {
            let ds = d.map(|d| vec![d]).unwrap_or_else(|| checks::SIX.to_vec());
            checks::verify_tower_report(&ds, *bits)
        }
        Command::Modular { d, bits } => checks::modular(*d, *bits).unwrap_or_else(|e| usage_error(e)),
        Command::Search { curve, height, box_bound } => {
            let bound = match (curve, height, box_bound) {
                (CurveId::Ks, Some(h), None) => *h,
                (CurveId::K1 | CurveId::K3, None, Some(b)) => *b,
                (CurveId::Ks, _, _) => usage_error("--curve ks takes --height and no --box"),
                (CurveId::K1 | CurveId::K3, _, _) => usage_error("--curve k1/k3 takes --box and no --height"),
                (c, _, _) => usage_error(format!("no search on {c}; use ks, k1 or k3")),
            };
            checks::search(*curve, bound, partitions).unwrap_or_else(|e| usage_error(e))
        }
        Command::Report { height, box_bound } => checks::full_report(*height, *box_bound, partitions),
    }
}

fn render(rep: &Report, format: Format) -> Result<String, String> {
    Ok(match format {
        Format::Text => rep.to_text(),
        Format::Json => {
            let stamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
            let mut s = serde_json::to_string_pretty(&rep.to_json(&stamp)).map_err(|e| e.to_string())?;
            s.push('\n');
            s
        }
        Format::Csv => rep.to_csv().map_err(|e| e.to_string())?,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = cli
        .jobs
        .map(|j| j as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, NonZeroUsize::get));
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start {jobs} workers: {e}");
            return ExitCode::from(3);
        }
    };
    // four residue classes per worker keeps the chunks balanced
    let partitions = (jobs as u32).saturating_mul(4);
    let rep = pool.install(|| run(&cli, partitions));
    let text = match render(&rep, cli.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(3);
    }
    if rep.failed() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

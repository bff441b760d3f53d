use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nilcone::suites::lcsl_point;
use nilcone::{fan_figure, fan_svg, run_verification, transport_records, LoopChoice, Record, Report, Side, Suite, TransportPlan};
use nilcone_core::exact::format_rat;
use nilcone_core::series::{check_annihilation, w0_series};
use nilcone_core::Dataset;

/// Exit status for usage and input errors.
const USAGE_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "nilcone", version, about = "Verify monodromy datasets of Calabi-Yau degenerations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print one line per check.
    Verify {
        #[arg(long, value_parser = ["p4p4", "p3p3", "k3"])]
        case: String,
        #[arg(long, value_parser = Suite::NAMES)]
        suite: String,
        /// Load the dataset from this file instead of the bundled case.
        #[arg(long)]
        dataset: Option<PathBuf>,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Working precision of the transport suite in bits.
        #[arg(long, default_value_t = 256)]
        prec: usize,
        /// Verdict tolerance of the transport suite.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Draw a chamber fan with its limiting rays as SVG.
    Fan {
        #[arg(long, value_parser = ["p4p4", "p3p3", "k3"])]
        case: String,
        #[arg(long, value_parser = ["a", "b"])]
        side: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the fundamental period of the P3xP3 family and check it against the operators.
    Series {
        #[arg(long, default_value_t = 12)]
        degree: u32,
    },
    /// Continue the period jet numerically around a loop and compare with the dataset.
    Transport {
        #[arg(long, value_parser = ["p3p3"])]
        case: String,
        #[arg(long = "loop", value_parser = ["x0", "y0", "e1", "rel"])]
        loop_name: String,
        #[arg(long, default_value_t = 256)]
        prec: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check the LCSL conditions at one boundary point.
    Lcsl {
        #[arg(long, value_parser = ["p4p4", "p3p3", "k3"])]
        case: String,
        #[arg(long)]
        point: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("nilcone: {msg}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}

fn load(case: &str, path: Option<&Path>) -> Result<Dataset, String> {
    match path {
        Some(p) => Dataset::load(p).map_err(|e| format!("{}: {e}", p.display())),
        None => Dataset::bundled(case).map_err(|e| e.to_string()),
    }
}

fn emit(report: &Report, json: Option<&Path>) -> Result<u8, String> {
    print!("{}", report.to_text());
    if let Some(p) = json {
        fs::write(p, report.to_json()).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    Ok(report.exit_code() as u8)
}

fn run(cmd: Command) -> Result<u8, String> {
    let err = |e: nilcone_core::Error| e.to_string();
    match cmd {
        Command::Verify { case, suite, dataset, json, prec, tol } => {
            let ds = load(&case, dataset.as_deref())?;
            let suite: Suite = suite.parse().map_err(err)?;
            emit(&run_verification(&ds, suite, &TransportPlan::full(prec, tol)), json.as_deref())
        }
        Command::Fan { case, side, depth, out } => {
            let ds = load(&case, None)?;
            let side: Side = side.parse().map_err(err)?;
            let svg = fan_figure(&ds, side, depth).and_then(|f| fan_svg(&f)).map_err(err)?;
            fs::write(&out, svg).map_err(|e| format!("{}: {e}", out.display()))?;
            println!("wrote {}", out.display());
            Ok(0)
        }
        Command::Series { degree } => {
            let w = w0_series(degree);
            println!("w0 coefficients c(n, m) of x^n y^m, n + m <= {degree}");
            for total in 0..=degree {
                let row: Vec<String> = (0..=total).map(|n| format_rat(&w.coeff(n, total - n))).collect();
                println!("  {total:>2}: {}", row.join(" "));
            }
            let rep = check_annihilation("w0", &w).map_err(err)?;
            let mut report = Report::new("p3p3", "series");
            report.push(
                Record::check("series/w0", "w0 is annihilated by both Picard-Fuchs operators", rep.d1_zero && rep.d2_zero)
                    .with("degree", rep.degree)
                    .with("valid_through", rep.valid_through),
            );
            emit(&report, None)
        }
        Command::Transport { case, loop_name, prec, tol, json } => {
            let choice: LoopChoice = loop_name.parse().map_err(err)?;
            if prec < 64 {
                return Err(format!("precision {prec} is below 64 bits"));
            }
            let mut report = Report::new(&case, "transport");
            report.extend(transport_records(&TransportPlan::for_loop(choice, prec, tol)));
            emit(&report, json.as_deref())
        }
        Command::Lcsl { case, point, json } => {
            let ds = load(&case, None)?;
            let mut report = Report::new(&case, "lcsl");
            report.extend(lcsl_point(&ds, &point).map_err(err)?);
            emit(&report, json.as_deref())
        }
    }
}

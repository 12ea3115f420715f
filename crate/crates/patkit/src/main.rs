//! `patkit`: classify polynomial point patterns, evaluate counting operators and
//! uniformity norms, verify residue distributions, and search for pattern-free sets.
//!
//! Exit codes: 0 success, 1 computational error, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use patkit::commands::{self, CmdError, GlobalOpts};
use patkit::report::{write_atomic, OutputFormat, Report};

#[derive(Parser)]
#[command(name = "patkit", version, about = "Polynomial pattern analysis toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Seed for all randomized choices (functions, sampling, greedy order).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout (atomic rename).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, default_value = "json", value_parser = ["json", "csv"])]
    format: String,
    /// Worker count knob; results are independent of it.
    #[arg(long, global = true, default_value_t = 1)]
    workers: u32,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the kernel system of a pattern and classify it.
    Classify {
        #[arg(long)]
        pattern: PathBuf,
        /// Kernel degree bound (default t*d).
        #[arg(long)]
        degree_bound: Option<u32>,
    },
    /// Evaluate the polynomial and linearized counting operators and their gap.
    TransferGap {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long = "N")]
        n: u64,
        /// Function spec per slot (repeatable); one spec is reused for every slot;
        /// none means seeded random +-1 functions.
        #[arg(long = "fn")]
        fns: Vec<String>,
        #[arg(long, default_value = "auto", value_parser = ["auto", "direct", "fourier"])]
        method: String,
    },
    /// Gowers uniformity norm of a test function.
    Gowers {
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        s: u32,
        #[arg(long = "fn")]
        function: String,
        #[arg(long, default_value = "cyclic", value_parser = ["cyclic", "interval", "u2-fourier"])]
        mode: String,
    },
    /// Gowers-Peluse norm with explicit difference measures.
    GpNorm {
        #[arg(long = "N")]
        n: u64,
        #[arg(long = "fn")]
        function: String,
        /// Measure spec per difference level (repeatable).
        #[arg(long = "measure")]
        measures: Vec<String>,
        /// Monte Carlo size when the exact expansion exceeds the budget.
        #[arg(long, default_value_t = 20_000)]
        samples: u64,
    },
    /// Compare residue distributions of a polynomial against a reference monomial.
    HenselCheck {
        /// Polynomial in y, exact text form.
        #[arg(long)]
        q: String,
        /// Reference monomial in y.
        #[arg(long = "ref")]
        reference: String,
        #[arg(long)]
        modulus: u64,
    },
    /// W-trick report for one polynomial: W, P_W, admissible residues, Hensel checks.
    Wtrick {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        w: u64,
        #[arg(long = "N")]
        n: Option<u64>,
    },
    /// Largest pattern-free subset of Z/NZ (exact search or seeded greedy).
    Extremal {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long = "N")]
        n: u64,
        /// Exact branch-and-bound (the default).
        #[arg(long, conflicts_with = "greedy")]
        exact: bool,
        /// Seeded greedy lower bound instead of the exact search.
        #[arg(long)]
        greedy: Option<u64>,
        /// Disable the pin-0 symmetry reduction.
        #[arg(long)]
        no_pin_zero: bool,
        /// Also check a subset file (one residue per line) for freeness.
        #[arg(long)]
        check_set: Option<PathBuf>,
    },
    /// Re-run the bundled worked examples and print one pass/fail line each.
    Reproduce,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format.as_str() {
        "csv" => OutputFormat::Csv,
        _ => OutputFormat::Json,
    };
    if cli.workers < 1 {
        eprintln!("error: --workers must be at least 1");
        return ExitCode::from(2);
    }
    let budget = std::env::var("PATKIT_BUDGET")
        .ok()
        .and_then(|v| v.parse::<f64>().ok())
        .unwrap_or(1e9);
    let g = GlobalOpts { seed: cli.seed, workers: cli.workers, format, budget };

    let started = Instant::now();
    let outcome = match &cli.command {
        Cmd::Classify { pattern, degree_bound } => commands::run_classify(pattern, *degree_bound, &g),
        Cmd::TransferGap { pattern, n, fns, method } => {
            commands::run_transfer_gap(pattern, *n, fns, method, &g)
        }
        Cmd::Gowers { n, s, function, mode } => commands::run_gowers(*n, *s, function, mode, &g),
        Cmd::GpNorm { n, function, measures, samples } => {
            commands::run_gp_norm(*n, function, measures, *samples, &g)
        }
        Cmd::HenselCheck { q, reference, modulus } => {
            commands::run_hensel_check(q, reference, *modulus, &g)
        }
        Cmd::Wtrick { poly, w, n } => commands::run_wtrick(poly, *w, *n, &g),
        Cmd::Extremal { pattern, n, exact: _, greedy, no_pin_zero, check_set } => {
            commands::run_extremal(pattern, *n, *greedy, !no_pin_zero, check_set.as_ref(), &g)
        }
        Cmd::Reproduce => commands::run_reproduce(&g),
    };

    match outcome {
        Ok((mut config, result)) => {
            if let Some(map) = config.as_object_mut() {
                map.insert(
                    "output".into(),
                    match &cli.output {
                        Some(p) => serde_json::json!(p.display().to_string()),
                        None => serde_json::json!("stdout"),
                    },
                );
            }
            let report = Report { config, result, elapsed_seconds: started.elapsed().as_secs_f64() };
            let body = report.render(format);
            match &cli.output {
                Some(path) => {
                    if let Err(e) = write_atomic(path, &body) {
                        eprintln!("error: {e}");
                        return ExitCode::from(1);
                    }
                }
                None => print!("{body}"),
            }
            ExitCode::SUCCESS
        }
        Err(CmdError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CmdError::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

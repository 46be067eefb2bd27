//! `sspp`: batch front end for the shifted-schur library.
//!
//! Exit status is 0 on success, 2 on flag errors and 1 when a computation
//! fails, in which case a JSON error document goes to standard error.

mod commands;
mod parse;
mod selftest;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "sspp",
    version,
    about = "Strict plane partitions and the shifted Schur process"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Run this subcommand's invariant checks instead of a computation.
    #[arg(long)]
    self_test: bool,
    /// Write the document here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients of the shifted MacMahon product.
    Macmahon {
        #[arg(long, value_name = "N")]
        max_n: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Correlation function by the Pfaffian formula, optionally checked against enumeration.
    Corr {
        #[arg(long)]
        q: Option<String>,
        /// JSON list of points, e.g. "[[0,1],[1,1]]".
        #[arg(long)]
        points: Option<String>,
        #[arg(long)]
        check_oracle: bool,
        #[arg(long, default_value_t = 18)]
        vmax: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Correlation function by brute-force enumeration.
    Oracle {
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        points: Option<String>,
        #[arg(long, default_value_t = 18)]
        vmax: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Limit kernel entry (with --tau/--chi) or finite-q kernel entry (with --q).
    Kernel {
        #[arg(long, allow_negative_numbers = true)]
        tau: Option<f64>,
        #[arg(long)]
        chi: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        dt: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        dx: Option<i64>,
        #[arg(long)]
        q: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        x: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        y: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        t1: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        t2: Option<i64>,
        #[command(flatten)]
        common: Common,
    },
    /// Limiting density mesh as CSV.
    Density {
        #[command(flatten)]
        mesh: Mesh,
        #[command(flatten)]
        common: Common,
    },
    /// Limit-shape mesh as CSV.
    Shape {
        #[command(flatten)]
        mesh: Mesh,
        #[command(flatten)]
        common: Common,
    },
    /// Mean and variance of the volume.
    Volume {
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long, value_name = "A:B:H")]
        r_grid: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Both sides of the QPQP Cauchy-type identity.
    QpqpCheck {
        /// JSON list of parts, e.g. "[2,1]".
        #[arg(long)]
        mu: Option<String>,
        #[arg(long)]
        nu: Option<String>,
        /// Comma-separated variable values of the Q side.
        #[arg(long)]
        x: Option<String>,
        /// Comma-separated variable values of the P side.
        #[arg(long)]
        y: Option<String>,
        #[arg(long, default_value_t = 20)]
        cutoff: u32,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Mesh {
    #[arg(long, allow_negative_numbers = true, conflicts_with = "tau_grid")]
    tau: Option<f64>,
    #[arg(long, value_name = "A:B:H", allow_hyphen_values = true)]
    tau_grid: Option<String>,
    #[arg(long, value_name = "A:B:H")]
    chi_grid: Option<String>,
}

/// Why a run did not produce a document.
pub enum Failure {
    Usage(String),
    Compute(shifted_schur::Error),
    /// A self-test ran and at least one check failed.
    Checks(String),
}

/// A finished document: JSON or CSV text.
pub struct Document {
    pub text: String,
}

fn emit(doc: &Document, out: &Option<PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, &doc.text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(doc.text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (result, common) = commands::run(cli.command);
    let (doc, failure) = match result {
        Ok(doc) => (Some(doc), None),
        Err((doc, failure)) => (doc, Some(failure)),
    };
    if let Some(doc) = &doc {
        if let Err(e) = emit(doc, &common.out) {
            eprintln!("{}", commands::error_json("IoError", &e.to_string()));
            return ExitCode::from(1);
        }
    }
    match failure {
        None => ExitCode::SUCCESS,
        Some(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
        Some(Failure::Compute(e)) => {
            eprintln!("{}", commands::error_json(e.kind(), &e.to_string()));
            ExitCode::from(1)
        }
        Some(Failure::Checks(msg)) => {
            eprintln!("{}", commands::error_json("SelfTestFailed", &msg));
            ExitCode::from(1)
        }
    }
}

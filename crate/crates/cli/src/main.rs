//! `spkl`: Kazhdan-Lusztig polynomials of sparse paving matroids from the
//! command line.
//!
//! Polynomials are printed as low-to-high coefficient lists. Ground-set
//! elements are 1-based everywhere. Exit codes: 0 ok, 2 invalid input,
//! 3 verification mismatch, 4 resource cap.

mod commands;
mod doc;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use spkl_core::exec::Execution;
use spkl_core::sweep::CPolicy;
use spkl_core::tableaux::DEFAULT_CELL_CAP;

use commands::Method;
use report::Format;

#[derive(Parser)]
#[command(name = "spkl", version, about = "Kazhdan-Lusztig polynomials of sparse paving matroids")]
struct Cli {
    /// Output format; polynomials are low-to-high coefficient lists.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Seed for sampled families (verify).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Accept c above the best upper bound; the formula is evaluated as a
    /// polynomial in c.
    #[arg(long, global = true)]
    unchecked: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One KL coefficient, or the whole polynomial without --i.
    Coeff {
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
        /// Number of circuit-hyperplanes.
        #[arg(long)]
        c: Option<u64>,
        /// JSON document {"m": .., "d": .., "ch": [[1-based elements], ..]}.
        #[arg(long)]
        ch_file: Option<PathBuf>,
        #[arg(long)]
        i: Option<u32>,
    },
    /// KL and characteristic polynomials.
    Poly {
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        c: Option<u64>,
        #[arg(long)]
        ch_file: Option<PathBuf>,
    },
    /// Count (and optionally list) skew tableaux of shape (a, i, b).
    Skyt {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        enumerate: bool,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
        /// Largest shape (in cells) --enumerate will attempt.
        #[arg(long, default_value_t = DEFAULT_CELL_CAP)]
        cap: u32,
    },
    /// Formula against the brute-force oracle: every family up to ground
    /// size 7, then seeded samples for sizes 8 and 9.
    Verify {
        #[arg(long, default_value_t = 7)]
        max_ground: u32,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long)]
        sequential: bool,
        #[arg(long, hide = true)]
        corrupt_formula: bool,
    },
    /// Upper bounds on the number of circuit-hyperplanes.
    Bounds {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        d: u32,
        /// Solve the Johnson-graph independence number exactly (small cases).
        #[arg(long)]
        exact: bool,
    },
    /// KL coefficients over a grid of (m, d).
    Table {
        /// Inclusive, e.g. 1..6.
        #[arg(long, value_parser = commands::parse_range, default_value = "1..6")]
        m_range: std::ops::RangeInclusive<u32>,
        #[arg(long, value_parser = commands::parse_range, default_value = "1..6")]
        d_range: std::ops::RangeInclusive<u32>,
        /// zero, max-bound (best upper bound), known-bound (largest size
        /// known to be attainable) or an explicit integer.
        #[arg(long, value_parser = commands::parse_policy, default_value = "zero")]
        c: CPolicy,
        #[arg(long)]
        sequential: bool,
    },
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let start = Instant::now();
    let unchecked = cli.unchecked;
    let (name, result) = match cli.command {
        Command::Coeff { m, d, c, ch_file, i } => (
            "coeff",
            commands::resolve_instance(m, d, c, ch_file.as_ref()).and_then(|inst| commands::coeff(inst, i, unchecked)),
        ),
        Command::Poly { m, d, c, ch_file } => (
            "poly",
            commands::resolve_instance(m, d, c, ch_file.as_ref())
                .and_then(|inst| commands::poly_command(inst, unchecked)),
        ),
        Command::Skyt { a, i, b, enumerate, method, cap } => ("skyt", commands::skyt(a, i, b, enumerate, method, cap)),
        Command::Verify { max_ground, samples, sequential, corrupt_formula } => (
            "verify",
            commands::verify(max_ground, samples, cli.seed, execution(sequential), corrupt_formula),
        ),
        Command::Bounds { m, d, exact } => ("bounds", commands::bounds(m, d, exact)),
        Command::Table { m_range, d_range, c, sequential } => {
            ("table", commands::table(m_range, d_range, c, unchecked, execution(sequential)))
        }
    };
    let elapsed_ms = start.elapsed().as_millis() as u64;
    match report::emit(cli.format, name, argv, elapsed_ms, result) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error writing output: {e}");
            ExitCode::FAILURE
        }
    }
}

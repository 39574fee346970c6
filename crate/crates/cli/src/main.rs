//! Command-line surface for analyzing, decomposing, verifying and comparing
//! *-linear matrix maps.
//!
//! Every command prints machine-readable JSON on stdout (newline-terminated,
//! floats with 17 significant digits) and human diagnostics on stderr. The
//! exit-code contract is fixed for CI use: 0 success, 1 I/O failure,
//! 2 schema violation, 3 map not *-linear, 4 verification or comparison
//! failure, 5 missing provenance.

use clap::{Parser, Subcommand};
use hillrep_cli::commands;

const DEFAULT_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(
    name = "hillrep",
    about = "Minimal Hill representations of *-linear matrix maps",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report *-linearity criteria, minimal representation size and the
    /// Choi spectrum of a map file.
    Analyze {
        /// Map file (JSON, matricization or Choi representation)
        map: String,
        /// Shared tolerance for every decision in the pipeline
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Build a minimal Hill representation and write it as a JSON file.
    Hill {
        map: String,
        /// Basis selection strategy: "blocks" or "qr"
        #[arg(long, default_value = "blocks")]
        strategy: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Output path; stdout when omitted
        #[arg(long)]
        out: Option<String>,
    },
    /// Check a representation file against a map file.
    Verify {
        map: String,
        rep: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Relate two representations of the same map by the invertible bridge
    /// (Phi, Xi) and report the identity residuals.
    Compare {
        rep_a: String,
        rep_b: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Rewrite a map file in the other representation; the entry
    /// permutation is exact, so round-trips are byte-identical.
    Convert {
        map: String,
        /// Target representation: "choi" or "matricization"
        #[arg(long)]
        to: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Generate a seeded random *-linear map with prescribed Choi rank.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Detect block-level and entry-level structural patterns.
    Structure {
        map: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Evaluate the map on a matrix (JSON nested array of [re, im] pairs).
    Apply {
        map: String,
        /// Path to the argument matrix
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        out: Option<String>,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Analyze { map, tol } => commands::cmd_analyze(map, *tol),
        Command::Hill { map, strategy, tol, out } => {
            commands::cmd_hill(map, strategy, *tol, out.as_deref())
        }
        Command::Verify { map, rep, tol } => commands::cmd_verify(map, rep, *tol),
        Command::Compare { rep_a, rep_b, tol } => commands::cmd_compare(rep_a, rep_b, *tol),
        Command::Convert { map, to, out } => commands::cmd_convert(map, to, out.as_deref()),
        Command::Random { n, q, rank, seed, out } => {
            commands::cmd_random(*n, *q, *rank, *seed, out.as_deref())
        }
        Command::Structure { map, tol } => commands::cmd_structure(map, *tol),
        Command::Apply { map, matrix, out } => {
            commands::cmd_apply(map, matrix, out.as_deref())
        }
    };
    std::process::exit(code);
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod report;

/// Torsion notions and quasivarieties of modules over finite rings.
#[derive(Parser)]
#[command(name = "torsionlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order, labels and commutativity of a ring.
    RingInfo {
        ring: String,
        #[arg(long)]
        json: bool,
    },
    /// Every left ideal, with two-sidedness and regularity.
    Ideals {
        ring: String,
        #[arg(long)]
        json: bool,
    },
    /// Checks a family of left ideals against the torsion axioms.
    TorsionCheck {
        ring: String,
        /// Generator lists separated by `;`, e.g. `e11,e12;1`.
        #[arg(long)]
        filter: String,
        #[arg(long)]
        json: bool,
    },
    /// Lists every torsion notion of a ring.
    TorsionEnum {
        ring: String,
        #[arg(long)]
        json: bool,
    },
    /// Relative closure of a submodule.
    Closure {
        ring: String,
        #[arg(long)]
        filter: String,
        #[arg(long)]
        module: String,
        /// Generators of the submodule, e.g. `(e11,0),(0,e12)`.
        #[arg(long)]
        sub: String,
        #[arg(long)]
        json: bool,
    },
    /// Weak extension principle on one module.
    Wep {
        ring: String,
        #[arg(long)]
        filter: String,
        #[arg(long)]
        module: String,
        #[arg(long)]
        json: bool,
    },
    /// Modularity and WEP over the bounded corpus.
    Rcm {
        ring: String,
        #[arg(long)]
        filter: String,
        #[arg(long, default_value_t = 2)]
        bound: usize,
        #[arg(long)]
        json: bool,
    },
    /// Reduces a Δ-axiom file, or sweeps random reducible axioms with `--seed`.
    DeltaReduce {
        file: Option<PathBuf>,
        /// Ring for the random sweep; all builtin rings if absent.
        #[arg(long)]
        ring: Option<String>,
        /// Evaluates the axiom on this module.
        #[arg(long)]
        module: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        bound: usize,
        #[arg(long)]
        json: bool,
    },
    /// Classifies the quasivariety presented by `--quasi` and `--ident`.
    Classify {
        ring: String,
        /// Quasiidentities `q_A`, one generator list each, separated by `;`.
        #[arg(long)]
        quasi: Option<String>,
        /// Linear identities `Σ r_i x_i = 0`, coefficient lists separated by `;`.
        #[arg(long)]
        ident: Option<String>,
        #[arg(long, default_value_t = 2)]
        bound: usize,
        #[arg(long)]
        json: bool,
    },
    /// Torsion notions, RCM status and collapse traces for many rings.
    Census {
        /// Ring specs, or `builtin`.
        specs: Vec<String>,
        #[arg(long, default_value_t = 2)]
        bound: usize,
        #[arg(long)]
        json: bool,
    },
}

/// Outcome of a completed computation.
pub enum Verdict {
    Pass,
    Negative,
    /// Completed, but part of the input was rejected.
    Invalid,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok((text, verdict)) => {
            print!("{text}");
            match verdict {
                Verdict::Pass => ExitCode::SUCCESS,
                Verdict::Negative => ExitCode::from(1),
                Verdict::Invalid => ExitCode::from(2),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

//! `qfcodes` — build codes from quadratic-form level sets, evaluate their
//! closed-form weight enumerators, and verify the closed forms against
//! exhaustive enumeration.
//!
//! Exit codes: 0 verified/ok, 1 mathematical mismatch, 2 invalid input,
//! 3 budget exceeded.

mod cache;
mod commands;
mod config;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qfcodes",
    version,
    about = "Linear codes from quadratic-form level sets over F_q: classification, closed-form enumerators, and brute-force verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Field and form selection shared by most subcommands.
#[derive(Args, Debug, Clone)]
pub struct FormArgs {
    /// Odd prime characteristic.
    #[arg(long)]
    pub p: u32,
    /// Base-field extension degree (q = p^e).
    #[arg(long, default_value_t = 1)]
    pub e: u32,
    /// Number of variables.
    #[arg(long)]
    pub m: usize,
    /// Inline coefficients "i,j:c" (1-based, i <= j, c an encoding),
    /// entries separated by ';'. Example: "1,2:1;3,3:2".
    #[arg(long, group = "form_source")]
    pub coeffs: Option<String>,
    /// Canonical class, e.g. "r=2,type=I", "r=3,type=II,mu=gamma",
    /// "r=4,type=III".
    #[arg(long, group = "form_source")]
    pub canonical: Option<String>,
    /// Coefficients c_0,c_1,... (encodings in F_{q^m}) of the built-in
    /// family trace(sum c_i x^(q^i + 1)).
    #[arg(long, group = "form_source")]
    pub trace_coeffs: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct BudgetArgs {
    /// Maximum q^m for any exhaustive sweep (env QFCODES_MAX_ENUM).
    #[arg(long)]
    pub max_enum: Option<u64>,
    /// Maximum q^m * n codebook work (env QFCODES_MAX_WORK).
    #[arg(long)]
    pub max_work: Option<u64>,
    /// Maximum codeword pairs for exhaustive covering scans
    /// (env QFCODES_MAX_PAIRS).
    #[arg(long)]
    pub max_pairs: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output format for weight tables.
    #[arg(long, value_enum, default_value_t = config::Format::Json)]
    pub format: config::Format,
    /// Cache directory for verification reports (env QFCODES_CACHE_DIR).
    #[arg(long)]
    pub cache_dir: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a form: rank, standard type, and the standardizing
    /// transform.
    Classify {
        #[command(flatten)]
        form: FormArgs,
    },
    /// Enumerate the code and compare against the closed forms under both
    /// sign conventions.
    Verify {
        #[command(flatten)]
        form: FormArgs,
        /// Level value: an encoding, or "all-nonzero".
        #[arg(long)]
        a: String,
        /// Which convention gates the exit code.
        #[arg(long, value_enum, default_value_t = config::ConventionPolicy::Adjudicate)]
        convention: config::ConventionPolicy,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run verification over a grid of classes; one JSON line per cell.
    Sweep {
        /// Comma-separated prime powers, e.g. "3,5,9". Empty = no cells.
        #[arg(long, default_value = "3,5")]
        q_list: String,
        /// Verify every class of rank 1..=m for each m up to this.
        #[arg(long, default_value_t = 3)]
        m_max: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Minimal-codeword analysis: ratio criterion plus a covering scan.
    Minimal {
        #[command(flatten)]
        form: FormArgs,
        /// Level value encoding (nonzero).
        #[arg(long)]
        a: String,
        /// Seed for the sampled fallback scan.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Brute-force enumeration only (works for a = 0 as well).
    Enumerate {
        #[command(flatten)]
        form: FormArgs,
        /// Level value: an encoding, possibly 0.
        #[arg(long)]
        a: String,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Closed-form weight data without enumeration.
    Predict {
        #[command(flatten)]
        form: FormArgs,
        /// Level value encoding (nonzero).
        #[arg(long)]
        a: String,
        /// Convention for the composition families.
        #[arg(long, value_enum, default_value_t = config::ConventionPolicy::Adjudicate)]
        convention: config::ConventionPolicy,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Classify { form } => commands::classify(&form),
        Command::Verify {
            form,
            a,
            convention,
            budget,
            output,
        } => commands::verify(&form, &a, convention, &budget, &output),
        Command::Sweep {
            q_list,
            m_max,
            budget,
        } => commands::sweep(&q_list, m_max, &budget),
        Command::Minimal {
            form,
            a,
            seed,
            budget,
            output,
        } => commands::minimal(&form, &a, seed, &budget, &output),
        Command::Enumerate {
            form,
            a,
            budget,
            output,
        } => commands::enumerate(&form, &a, &budget, &output),
        Command::Predict {
            form,
            a,
            convention,
            output,
        } => commands::predict(&form, &a, convention, &output),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.exit)
        }
    }
}

/// An error carrying its exit code.
pub struct CliError {
    pub exit: u8,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> CliError {
        CliError {
            exit: EXIT_INVALID,
            message: message.into(),
        }
    }

    pub fn budget(message: impl Into<String>) -> CliError {
        CliError {
            exit: EXIT_BUDGET,
            message: message.into(),
        }
    }
}

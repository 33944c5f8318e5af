use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use k4_cli::{FieldChoice, Outcome, TableFormat};

#[derive(Parser)]
#[command(name = "k4", version, about = "Klein-four covers of the projective line in characteristic 2")]
struct Cli {
    /// Seed for the randomized steps of polynomial factorization.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Does a cover with genus g, 2-rank s (and type p) exist?
    Check {
        #[arg(short, long, allow_negative_numbers = true)]
        g: i64,
        #[arg(short, long, allow_negative_numbers = true)]
        sigma: i64,
        /// Type as three comma-separated quotient genera, e.g. 2,2,1.
        #[arg(short, long)]
        partition: Option<String>,
    },
    /// Build an explicit witness, optionally checked by point counting.
    Construct {
        #[arg(short, long)]
        g: i64,
        #[arg(short, long)]
        sigma: i64,
        /// Type as three comma-separated quotient genera.
        #[arg(short, long)]
        partition: String,
        /// Count points over extensions of degree 1..=n and compare.
        #[arg(long)]
        verify_depth: Option<u32>,
    },
    /// Genus and 2-rank of y^2 + y = f.
    Invariants {
        /// Rational function in x, e.g. "x^3 + 1/(x+1)"; `a` generates GF(4).
        #[arg(short, long)]
        f: String,
        #[arg(long, value_enum, env = "K4_DEFAULT_FIELD", default_value = "gf2")]
        field: FieldChoice,
    },
    /// Every (sigma, type) cell of genus g.
    Table {
        #[arg(short, long)]
        g: i64,
        /// Construct and point-count every realizable cell.
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value = "tsv")]
        format: TableFormat,
    },
    /// Enumerate all covers from functions of bounded degree.
    Census {
        #[arg(long, value_enum, env = "K4_DEFAULT_FIELD", default_value = "gf2")]
        field: FieldChoice,
        /// Bound on numerator and denominator degree.
        #[arg(long, default_value_t = 2)]
        max_deg: u32,
    },
    /// Is there a hyperelliptic curve of genus g and 2-rank s with an extra involution?
    Hyperelliptic {
        #[arg(short, long)]
        g: i64,
        #[arg(short, long)]
        sigma: i64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { k4_cli::EXIT_INPUT as u8 } else { 0 });
        }
    };
    k4_core::factor::set_seed(cli.seed);
    let out: Outcome = match cli.command {
        Command::Check { g, sigma, partition } => k4_cli::cmd_check(g, sigma, partition.as_deref()),
        Command::Construct { g, sigma, partition, verify_depth } => {
            k4_cli::cmd_construct(g, sigma, &partition, verify_depth)
        }
        Command::Invariants { f, field } => k4_cli::cmd_invariants(&f, field),
        Command::Table { g, verify, format } => k4_cli::cmd_table(g, verify, format),
        Command::Census { field, max_deg } => k4_cli::cmd_census(field, max_deg),
        Command::Hyperelliptic { g, sigma } => k4_cli::cmd_hyperelliptic(g, sigma),
    };
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}

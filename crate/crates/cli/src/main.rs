use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Monoid presentations, their upho posets, and totally positive series.
#[derive(Debug, Parser)]
#[command(name = "upho", version)]
pub struct Cli {
    /// Maximum number of words in one length stratum.
    #[arg(long, global = true, env = "UPHO_BUDGET")]
    budget: Option<u64>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Args)]
pub struct PresentationArg {
    /// Presentation file in the v1 text format.
    #[arg(short = 'p', long = "presentation")]
    path: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Layer counts |W_0| .. |W_max_len|.
    Enum {
        #[command(flatten)]
        p: PresentationArg,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Canonical representatives per length.
    Classes {
        #[command(flatten)]
        p: PresentationArg,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Hasse diagram of the colored poset prefix.
    Hasse {
        #[command(flatten)]
        p: PresentationArg,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Bounded left-cancellativity check.
    LcCheck {
        #[command(flatten)]
        p: PresentationArg,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Greedy 0-monoid series for a coefficient prefix.
    GreedyZero {
        #[arg(long)]
        coeffs: String,
        /// Defaults to the last given coefficient.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Greedy head-changing series for a coefficient prefix.
    GreedyLch {
        #[arg(long)]
        coeffs: String,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Free 0-monoid of canonical words up to a depth.
    Treeify {
        #[command(flatten)]
        p: PresentationArg,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Convolution of a monoid with a free 0-monoid.
    Convolve {
        #[command(flatten)]
        p: PresentationArg,
        /// The free 0-monoid factor.
        #[arg(long = "with")]
        with: PathBuf,
        /// Images of the 0-monoid generators, e.g. `y1=a,y2=b`.
        #[arg(long)]
        xmap: Option<String>,
        /// Also check layer counts against the product of the factors' counts.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Minors of the lower triangular Toeplitz matrix of a series prefix.
    TpCheck {
        #[arg(long)]
        coeffs: String,
        /// Largest minor order.
        #[arg(long, default_value_t = 3)]
        order: usize,
        /// Defaults to twice the order.
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Root location of an integer polynomial.
    Roots {
        #[arg(long)]
        coeffs: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Irreducible factors over the integers.
    Factor {
        #[arg(long)]
        coeffs: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Certificate for num/den as the layer counts of a built presentation.
    TpBuild {
        #[arg(long, default_value = "1")]
        num: String,
        #[arg(long)]
        den: String,
        #[arg(long, default_value_t = upho::tpbuild::DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Re-run the enumeration behind a certificate.
    VerifyCert {
        cert: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_ANOMALY: u8 = 3;

fn write_output(out: Option<&Path>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(outcome) => {
            if let Err(e) = write_output(cli.out.as_deref(), &outcome.text) {
                eprintln!("upho: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
            if outcome.positive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_NEGATIVE)
            }
        }
        Err(e) => {
            eprintln!("upho: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}

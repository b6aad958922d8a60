use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rug::Rational;

mod commands;
mod config;
mod error;
mod report;

use config::parse_rational;

#[derive(Parser, Debug)]
#[command(name = "scatter", version, about = "Uniform approximation by translates on scattered nodes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SolveMode {
    Vandermonde,
    LogAlternant,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expansion polynomials A_0..A_kmax (and B_k for log kernels).
    Expand {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=400))]
        k_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Greedy doubling sequence extracted from the configured provider.
    Doubling {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
        n: u32,
        /// Extraction floor M (rational).
        #[arg(long, default_value = "8", value_parser = rational_arg)]
        floor: Rational,
        /// Defaults to the sign the configured kernel requires, else positive.
        #[arg(long)]
        sign: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the Vandermonde or log-alternant system on extracted nodes.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        mode: SolveMode,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
        n: u32,
        #[arg(long, default_value = "8", value_parser = rational_arg)]
        floor: Rational,
        /// Log-alternant lead index; defaults to the kernel's, else 1.
        #[arg(long)]
        lead: Option<u32>,
        /// Overrides the configured precision.
        #[arg(long)]
        bits: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full pipeline and write the certificate and samples.
    Approx {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long)]
        samples: Option<PathBuf>,
    },
    /// Re-check a certificate against its samples, and optionally re-evaluate it.
    Certify {
        #[arg(long)]
        certificate: PathBuf,
        #[arg(long)]
        samples: PathBuf,
        /// Re-evaluate the stored combination against this config's target.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Expand { config, k_max, out } => commands::expand(&config, k_max as usize, out.as_deref()),
        Command::Doubling {
            config,
            n,
            floor,
            sign,
            out,
        } => commands::doubling(&config, n as usize, &floor, sign.as_deref(), out.as_deref()),
        Command::Solve {
            config,
            mode,
            n,
            floor,
            lead,
            bits,
            out,
        } => commands::solve(&config, mode, n as usize, &floor, lead, bits, out.as_deref()),
        Command::Approx {
            config,
            certificate,
            samples,
        } => commands::approx(&config, certificate, samples),
        Command::Certify {
            certificate,
            samples,
            config,
        } => commands::certify(&certificate, &samples, config.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("scatter: {e}");
            e.into()
        }
    }
}

//! `tropmot`: command-line front end for the motivic volume calculators.
//!
//! Exit status is 0 on success, 1 when a verification fails and 2 on input
//! errors.

mod commands;
mod input;

use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};

use commands::Report;
use tropmot::motring::is_prime;

#[derive(Parser)]
#[command(name = "tropmot", version, about = "Exact motivic volumes of tropical sets")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Primes for point counts and reduction checks.
    #[arg(long, global = true, num_args = 1.., value_delimiter = ',', default_values_t = [5u64, 7, 11])]
    primes: Vec<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Bounded Euler characteristic of a constructible set.
    Chi { input: String },
    /// Integral of a constructible function.
    Integrate { input: String },
    /// Pushforward of a constructible function along an affine map.
    Pushforward { input: String },
    /// Volume of an SNC model over a support selection (full fiber by default).
    SncVol { input: String },
    /// Motivic nearby fiber of an SNC model.
    NearbyFiber { input: String },
    /// Motivic Milnor fiber over the strata listed under `support`.
    MilnorFiber { input: String },
    /// Tropical volume: preimage of Γ, schön hypersurface over Γ, or a stratified affine problem.
    TropVol { input: String },
    /// Reduction-smoothness of every initial form.
    SchonCheck { input: String },
    /// Finite-field point counts.
    CountPoints { input: String },
    /// Compare the stratified volume of {f = t} with #f⁻¹(1)(𝔽_q).
    VerifyDm { input: String },
    /// Check the integral identity for a ℚ-equivariant f on x, y, z blocks.
    VerifyKs { input: String },
    /// Whether |Σ| + w ⊆ |Σ|.
    CircleCompact { input: String },
    /// Randomized χ′ and Fubini self-tests.
    FubiniSelftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        polyhedra: usize,
        #[arg(long, default_value_t = 200)]
        sets: usize,
        #[arg(long, default_value_t = 200)]
        pairs: usize,
    },
}

fn run(cli: &Cli) -> Result<Report> {
    if let Some(bad) = cli.primes.iter().find(|q| !is_prime(**q)) {
        bail!("--primes: {bad} is not prime");
    }
    let primes = &cli.primes;
    match &cli.command {
        Command::Chi { input } => commands::chi(input),
        Command::Integrate { input } => commands::integrate(input),
        Command::Pushforward { input } => commands::pushforward(input),
        Command::SncVol { input } => commands::snc_vol(input),
        Command::NearbyFiber { input } => commands::nearby(input),
        Command::MilnorFiber { input } => commands::milnor(input),
        Command::TropVol { input } => commands::trop_vol(input),
        Command::SchonCheck { input } => commands::schon_check(input, primes),
        Command::CountPoints { input } => commands::count_points(input, primes),
        Command::VerifyDm { input } => commands::verify_dm_cmd(input, primes),
        Command::VerifyKs { input } => commands::verify_ks_cmd(input, primes),
        Command::CircleCompact { input } => commands::circle_compact(input),
        Command::FubiniSelftest { seed, polyhedra, sets, pairs } => {
            commands::fubini_selftest(*seed, *polyhedra, *sets, *pairs)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Text => println!("{}", report.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&report.json).expect("reports serialize")),
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

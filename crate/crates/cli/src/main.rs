use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dirdet::construct::Character;

mod commands;
mod pointfile;
mod report;

/// Directions and determined subspaces of affine point sets over finite fields.
#[derive(Parser, Debug)]
#[command(name = "dirdet", version)]
pub struct Cli {
    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a point set and write it as a point file.
    #[command(subcommand)]
    Construct(Construct),
    /// List determined and undetermined k-subspaces at infinity.
    Directions {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        k: isize,
        /// Include per-flat intersection profiles of undetermined subspaces.
        #[arg(long)]
        profiles: bool,
    },
    /// Classify a q²-set of AG(3,q) by its undetermined lines.
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run a verification suite; exit code 1 on any violation.
    #[command(subcommand)]
    Verify(Verify),
}

#[derive(Subcommand, Debug)]
pub enum Construct {
    /// Cylinder over a base point file, lifted to AG(n,q).
    Cone {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Affine part of the tangent quadric X0 Xn = phi(X1..X(n-1)).
    Quadric {
        #[arg(long)]
        n: usize,
        #[arg(long = "char", value_parser = parse_character)]
        character: Character,
        #[arg(long)]
        q: u32,
    },
    /// Graph {(x, f(x))} of a polynomial in AG(2,q).
    Graph {
        #[arg(long)]
        q: u32,
        /// Coefficients low to high, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        coeffs: Vec<u32>,
    },
    /// Uniform random subset of AG(n,q).
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        size: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// Nesting of determined subspaces for a q^(n-1)-set.
    Hierarchy {
        #[arg(long)]
        input: PathBuf,
    },
    /// Cylinder/base correspondence of undetermined subspaces.
    Cone {
        #[arg(long = "base-n")]
        base_n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        /// Base point file; a seeded random q^(m-1)-set when absent.
        #[arg(long)]
        base: Option<PathBuf>,
        /// Only this subspace dimension (default: all of 0..=n-2).
        #[arg(long)]
        r: Option<usize>,
    },
    /// Undetermined g-subspaces of a quadric's affine part and generator counts.
    Quadric {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long = "char", value_parser = parse_character)]
        character: Character,
        /// (g-1)-subspaces sampled for the generator count; 0 tests all.
        #[arg(long, default_value_t = 50)]
        rho_samples: usize,
    },
    /// Exhaustive classification of all q²-subsets of AG(3,q), q ≤ 3.
    Survey {
        #[arg(long)]
        q: u32,
        /// Violations listed in full.
        #[arg(long, default_value_t = 100)]
        max_violations: usize,
    },
}

fn parse_character(s: &str) -> Result<Character, String> {
    s.parse().map_err(|e: dirdet::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli, std::env::args().collect()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

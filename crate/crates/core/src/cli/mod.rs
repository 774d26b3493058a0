//! `nttkit verify | bench | banks`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error. Every error
//! path prints exactly one `error: ...` line on stderr.

mod banks;
mod bench;
mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algorithms::Variant;
use crate::error::Error;
use crate::modmath::{find_primitive_root, FieldParams, DEFAULT_PRIME};

pub use banks::{cmd_banks, BanksArgs};
pub use bench::{cmd_bench, BenchArgs, BenchRecord};
pub use verify::{cmd_verify, CellResult, VerifyArgs, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "nttkit", version, about = "Prime-field NTT verification, benchmarks and bank-model experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every variant against the naive DFT, the inverse and schoolbook multiplication.
    Verify(VerifyArgs),
    /// Time forward transforms and emit CSV.
    Bench(BenchArgs),
    /// Schedule butterfly traces against a bank partition.
    Banks(BanksArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Modulus; the smallest primitive root is used as generator.
    #[arg(long, default_value_t = DEFAULT_PRIME as u64)]
    pub prime: u64,
}

impl FieldArgs {
    pub fn params(&self) -> Result<FieldParams, Error> {
        let g = find_primitive_root(self.prime)?;
        FieldParams::with_generator(self.prime, g)
    }
}

/// Failure raised by a subcommand, mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failed(_) => EXIT_FAILURE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub(crate) fn io_error(path: &std::path::Path, e: impl std::fmt::Display) -> CliError {
    CliError::Failed(format!("cannot write {}: {e}", path.display()))
}

pub(crate) fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse::<Variant>().map_err(|e| e.to_string())
}

pub(crate) fn parse_fast_variant(s: &str) -> Result<Variant, String> {
    match parse_variant(s)? {
        Variant::Naive => Err("naive is the oracle, not a benchmarked variant".into()),
        v => Ok(v),
    }
}

/// Seeded input shared by `verify` and `bench`, so both report the same
/// checksum for a given `(n, seed)`.
pub fn reference_input(params: &FieldParams, n: usize, seed: u64) -> Vec<u32> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).rotate_left(32));
    let p = params.modulus();
    (0..n).map(|_| rng.gen_range(0..p)).collect()
}

pub(crate) fn write_csv<T: serde::Serialize>(path: &PathBuf, rows: &[T]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_error(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| io_error(path, e))?;
    }
    w.flush().map_err(|e| io_error(path, e))
}

/// Parses `args` and runs the subcommand; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            let rendered = e.to_string();
            let line = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            let line = line.trim_start_matches("error: ");
            eprintln!("error: {line}");
            return EXIT_USAGE;
        }
    };
    let out = match cli.command {
        Command::Verify(a) => cmd_verify(&a).map(|_| ()),
        Command::Bench(a) => cmd_bench(&a).map(|_| ()),
        Command::Banks(a) => cmd_banks(&a),
    };
    match out {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

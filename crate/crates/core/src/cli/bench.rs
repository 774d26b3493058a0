use std::hint::black_box;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use serde::Serialize;

use super::{parse_fast_variant, reference_input, write_csv, CliError, FieldArgs};
use crate::algorithms::{NttPlan, Variant};
use crate::twiddle::{Direction, TwiddleCache};

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Variants to time (comma separated); all seven by default.
    #[arg(long, value_delimiter = ',', value_parser = parse_fast_variant)]
    pub algo: Vec<Variant>,

    /// Transform sizes (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = [1024usize, 4096, 16384])]
    pub size: Vec<usize>,

    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    pub reps: u32,

    /// Seed of the input vector; matches `verify --seed`.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    #[command(flatten)]
    pub field: FieldArgs,

    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRecord {
    pub algo: String,
    pub n: usize,
    pub prime: u32,
    pub reps: u32,
    pub mean_ns: u64,
    pub median_ns: u64,
    pub min_ns: u64,
    pub checksum: u32,
}

fn summarize(mut samples: Vec<u64>) -> (u64, u64, u64) {
    samples.sort_unstable();
    let mean = (samples.iter().map(|&s| s as u128).sum::<u128>() / samples.len() as u128) as u64;
    (mean, samples[(samples.len() - 1) / 2], samples[0])
}

pub fn cmd_bench(args: &BenchArgs) -> Result<Vec<BenchRecord>, CliError> {
    let params = args.field.params()?;
    for &n in &args.size {
        if n < 2 || !n.is_power_of_two() || !params.supports(n) {
            return Err(CliError::Usage(format!(
                "invalid size {n}: need a power of two >= 2 dividing p-1 for p={}",
                params.modulus()
            )));
        }
    }
    let algos: Vec<Variant> = if args.algo.is_empty() {
        Variant::FAST.to_vec()
    } else {
        args.algo.clone()
    };
    let cache = TwiddleCache::new();
    let mut records = Vec::with_capacity(algos.len() * args.size.len());
    println!(
        "{:<10} {:>6} {:>12} {:>12} {:>12} {:>11}",
        "algo", "n", "mean_ns", "median_ns", "min_ns", "checksum"
    );
    for &algo in &algos {
        for &n in &args.size {
            // tables are built here, outside the timed region
            let plan = NttPlan::new(algo, &params, n, Direction::Forward, &cache)?;
            let input = reference_input(&params, n, args.seed);
            let checksum = plan.execute(input.clone())[0];
            let mut samples = Vec::with_capacity(args.reps as usize);
            for _ in 0..args.reps {
                let buf = input.clone();
                let t0 = Instant::now();
                let out = black_box(plan.execute(black_box(buf)));
                samples.push(t0.elapsed().as_nanos() as u64);
                debug_assert_eq!(out[0], checksum);
                drop(out);
            }
            let (mean_ns, median_ns, min_ns) = summarize(samples);
            println!("{:<10} {:>6} {:>12} {:>12} {:>12} {:>11}", algo.name(), n, mean_ns, median_ns, min_ns, checksum);
            records.push(BenchRecord {
                algo: algo.name().to_string(),
                n,
                prime: params.modulus(),
                reps: args.reps,
                mean_ns,
                median_ns,
                min_ns,
                checksum,
            });
        }
    }
    if let Some(path) = &args.csv {
        write_csv(path, &records)?;
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_of_one_sample() {
        assert_eq!(summarize(vec![7]), (7, 7, 7));
        assert_eq!(summarize(vec![5, 1, 3, 100]), (27, 3, 1));
    }
}

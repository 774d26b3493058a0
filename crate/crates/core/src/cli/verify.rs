use std::path::PathBuf;
use std::sync::Arc;

use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{parse_fast_variant, reference_input, write_csv, CliError, FieldArgs};
use crate::algorithms::{naive_dft, NttPlan, ResidueVector, Variant};
use crate::modmath::{mod_add, mod_mul_wide, FieldParams};
use crate::polymul::{cyclic_mul_ntt, schoolbook_cyclic, PolyRingElem};
use crate::twiddle::{Direction, TwiddleCache, TwiddleTable};

/// Sizes above this use a sampled oracle instead of the full O(n^2) one.
const FULL_ORACLE_MAX_LOG: u32 = 10;
const SAMPLED_POINTS: usize = 32;

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Largest size exponent checked; sizes are 2^1 .. 2^max_log.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=14))]
    pub max_log: u32,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    #[command(flatten)]
    pub field: FieldArgs,

    /// Variants to check (comma separated); all seven by default.
    #[arg(long, value_delimiter = ',', value_parser = parse_fast_variant)]
    pub algo: Vec<Variant>,

    /// Random vectors per cell for sizes up to 2^10.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    pub vectors: u32,

    #[arg(long)]
    pub csv: Option<PathBuf>,

    /// Run the named variant with a perturbed twiddle table.
    #[arg(long, hide = true, value_parser = parse_fast_variant)]
    pub inject_fault: Option<Variant>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellResult {
    pub algo: String,
    pub n: usize,
    pub prime: u32,
    pub seed: u64,
    pub oracle: bool,
    pub roundtrip: bool,
    pub polymul: bool,
    /// First output element of the forward transform of the reference input.
    pub checksum: u32,
    #[serde(skip)]
    pub failure: Option<String>,
}

impl CellResult {
    pub fn passed(&self) -> bool {
        self.oracle && self.roundtrip && self.polymul
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub cells: Vec<CellResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.cells.iter().all(CellResult::passed)
    }

    pub fn checksum(&self, algo: Variant, n: usize) -> Option<u32> {
        self.cells
            .iter()
            .find(|c| c.algo == algo.name() && c.n == n)
            .map(|c| c.checksum)
    }
}

enum Expected {
    Full(Vec<u32>),
    Sampled(Vec<(usize, u32)>),
}

impl Expected {
    fn matches(&self, got: &[u32]) -> bool {
        match self {
            Expected::Full(v) => v == got,
            Expected::Sampled(pts) => pts.iter().all(|&(k, v)| got[k] == v),
        }
    }
}

/// Inputs and oracle answers for one size, shared by every variant.
struct Level {
    n: usize,
    inputs: Vec<Vec<u32>>,
    spectra: Vec<Expected>,
    pairs: Vec<(Vec<u32>, Vec<u32>)>,
    products: Vec<Expected>,
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize, p: u32) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..p)).collect()
}

fn build_level(params: &FieldParams, log_n: u32, seed: u64, vectors: usize) -> Result<Level, CliError> {
    let n = 1usize << log_n;
    let p = params.modulus();
    let full = log_n <= FULL_ORACLE_MAX_LOG;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ log_n as u64);
    let table = TwiddleTable::build(params, n, Direction::Forward)?;
    let count = if full { vectors } else { 4 };
    let n_pairs = if full { 8 } else { 2 };

    let inputs: Vec<Vec<u32>> = (0..count).map(|_| random_vec(&mut rng, n, p)).collect();
    let mut spectra = Vec::with_capacity(count);
    for x in &inputs {
        spectra.push(if full {
            let rv = ResidueVector::new(x.clone(), *params)?;
            Expected::Full(naive_dft(&rv, &table)?.into_inner())
        } else {
            let pts = (0..SAMPLED_POINTS)
                .map(|_| {
                    let k = rng.gen_range(0..n);
                    let v = x
                        .iter()
                        .enumerate()
                        .fold(0u32, |acc, (j, &xj)| mod_add(acc, mod_mul_wide(xj, table.at(j * k).0, p), p));
                    (k, v)
                })
                .collect();
            Expected::Sampled(pts)
        });
    }

    let pairs: Vec<(Vec<u32>, Vec<u32>)> = (0..n_pairs)
        .map(|_| (random_vec(&mut rng, n, p), random_vec(&mut rng, n, p)))
        .collect();
    let mut products = Vec::with_capacity(n_pairs);
    for (a, b) in &pairs {
        products.push(if full {
            let pa: PolyRingElem = ResidueVector::new(a.clone(), *params)?.into();
            let pb: PolyRingElem = ResidueVector::new(b.clone(), *params)?.into();
            Expected::Full(schoolbook_cyclic(&pa, &pb)?.into_coeffs().into_inner())
        } else {
            let pts = (0..SAMPLED_POINTS)
                .map(|_| {
                    let k = rng.gen_range(0..n);
                    let v = (0..n).fold(0u32, |acc, i| mod_add(acc, mod_mul_wide(a[i], b[(k + n - i) & (n - 1)], p), p));
                    (k, v)
                })
                .collect();
            Expected::Sampled(pts)
        });
    }
    Ok(Level {
        n,
        inputs,
        spectra,
        pairs,
        products,
    })
}

fn check_cell(
    algo: Variant,
    level: &Level,
    params: &FieldParams,
    seed: u64,
    faulty: bool,
    cache: &TwiddleCache,
) -> Result<CellResult, CliError> {
    let n = level.n;
    let p = params.modulus();
    let mut fwd_table = cache.get(params, n, Direction::Forward)?;
    if faulty {
        fwd_table = Arc::new(fwd_table.corrupted(0));
    }
    let fwd = NttPlan::from_table(algo, fwd_table)?;
    let inv = NttPlan::new(algo, params, n, Direction::Inverse, cache)?;

    let mut failure = None;
    let mut note = |suite: &str, i: usize| {
        failure.get_or_insert_with(|| format!("suite={suite} vector={i}"));
    };

    let mut oracle = true;
    let mut roundtrip = true;
    for (i, (x, want)) in level.inputs.iter().zip(&level.spectra).enumerate() {
        let got = fwd.execute(x.clone());
        if oracle && !want.matches(&got) {
            oracle = false;
            note("oracle", i);
        }
        if roundtrip && inv.execute(got) != *x {
            roundtrip = false;
            note("roundtrip", i);
        }
    }

    let mut polymul = true;
    for (i, ((a, b), want)) in level.pairs.iter().zip(&level.products).enumerate() {
        let got = if faulty {
            let fa = fwd.execute(a.clone());
            let fb = fwd.execute(b.clone());
            inv.execute(fa.iter().zip(&fb).map(|(&u, &v)| mod_mul_wide(u, v, p)).collect())
        } else {
            let pa: PolyRingElem = ResidueVector::new(a.clone(), *params)?.into();
            let pb: PolyRingElem = ResidueVector::new(b.clone(), *params)?.into();
            cyclic_mul_ntt(&pa, &pb, algo, cache)?.into_coeffs().into_inner()
        };
        if !want.matches(&got) {
            polymul = false;
            note("polymul", i);
            break;
        }
    }

    let checksum = fwd.execute(reference_input(params, n, seed))[0];
    Ok(CellResult {
        algo: algo.name().to_string(),
        n,
        prime: p,
        seed,
        oracle,
        roundtrip,
        polymul,
        checksum,
        failure,
    })
}

/// Runs the suites without printing; the building block of [`cmd_verify`].
pub fn run_suites(args: &VerifyArgs) -> Result<VerifyReport, CliError> {
    let params = args.field.params()?;
    if args.max_log > params.two_adicity() {
        return Err(CliError::Usage(format!(
            "prime {} supports sizes up to 2^{}, got --max-log {}",
            params.modulus(),
            params.two_adicity(),
            args.max_log
        )));
    }
    let algos: Vec<Variant> = if args.algo.is_empty() {
        Variant::FAST.to_vec()
    } else {
        args.algo.clone()
    };
    let levels = (1..=args.max_log)
        .into_par_iter()
        .map(|l| build_level(&params, l, args.seed, args.vectors as usize))
        .collect::<Result<Vec<_>, _>>()?;
    let cache = TwiddleCache::new();
    let jobs: Vec<(Variant, &Level)> = algos
        .iter()
        .flat_map(|&a| levels.iter().map(move |lv| (a, lv)))
        .collect();
    let cells = jobs
        .into_par_iter()
        .map(|(a, lv)| check_cell(a, lv, &params, args.seed, args.inject_fault == Some(a), &cache))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VerifyReport { cells })
}

fn print_matrix(report: &VerifyReport, max_log: u32) {
    print!("{:<10}", "algo");
    for l in 1..=max_log {
        print!(" {:>6}", 1usize << l);
    }
    println!();
    let mut algo: Option<&str> = None;
    for c in &report.cells {
        if algo != Some(c.algo.as_str()) {
            if algo.is_some() {
                println!();
            }
            print!("{:<10}", c.algo);
            algo = Some(&c.algo);
        }
        print!(" {:>6}", if c.passed() { "ok" } else { "FAIL" });
    }
    println!();
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<VerifyReport, CliError> {
    let report = run_suites(args)?;
    print_matrix(&report, args.max_log);
    let passed = report.cells.iter().filter(|c| c.passed()).count();
    println!(
        "{passed}/{} cells passed (prime={}, seed={})",
        report.cells.len(),
        args.field.prime,
        args.seed
    );
    if let Some(path) = &args.csv {
        write_csv(path, &report.cells)?;
    }
    if report.all_passed() {
        return Ok(report);
    }
    let mut failed: Vec<&CellResult> = Vec::new();
    for c in report.cells.iter().filter(|c| !c.passed()) {
        // smallest failing size per variant
        if !failed.iter().any(|f| f.algo == c.algo) {
            failed.push(c);
        }
    }
    for c in &failed {
        println!(
            "repro: nttkit verify --algo {} --max-log {} --seed {} --prime {}  # n={} {}",
            c.algo,
            c.n.trailing_zeros(),
            c.seed,
            c.prime,
            c.n,
            c.failure.as_deref().unwrap_or("")
        );
    }
    let names: Vec<String> = failed.iter().map(|c| format!("{}(n={})", c.algo, c.n)).collect();
    Err(CliError::Failed(format!("verification failed: {}", names.join(" "))))
}

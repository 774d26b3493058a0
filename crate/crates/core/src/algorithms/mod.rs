//! NTT variants over a shared [`TwiddleTable`].
//!
//! Every variant reads twiddles through [`TwiddleTable::at`], i.e. by exponent
//! modulo `n`, so the only differences between them are loop structure and
//! buffer management. All of them agree bit-for-bit with [`naive_dft`].
//!
//! The checked entry points ([`ntt_dit`], [`run_plan`], ...) take a
//! [`ResidueVector`] and return a fresh one. [`NttPlan::execute`] is the
//! unchecked path used by the benchmark; it consumes its buffer so in-place
//! variants never allocate.

mod naive;
mod pease;
mod radix2;
mod sixstep;
mod stockham;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::modmath::{mod_add, mod_sub, shoup_mul, shoup_precompute, FieldParams, ShoupConstant};
use crate::twiddle::{Direction, TwiddleCache, TwiddleTable};

pub use sixstep::default_split;

/// Transform algorithm. [`Variant::Naive`] is the O(n^2) oracle; the other
/// seven are the fast variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Naive,
    Dit,
    Dif,
    Flat,
    Pease,
    PeaseNc,
    Stockham,
    SixStep,
}

impl Variant {
    /// The seven fast variants, in reporting order.
    pub const FAST: [Variant; 7] = [
        Variant::Dit,
        Variant::Dif,
        Variant::Flat,
        Variant::Pease,
        Variant::PeaseNc,
        Variant::Stockham,
        Variant::SixStep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Naive => "naive",
            Variant::Dit => "dit",
            Variant::Dif => "dif",
            Variant::Flat => "flat",
            Variant::Pease => "pease",
            Variant::PeaseNc => "pease_nc",
            Variant::Stockham => "stockham",
            Variant::SixStep => "sixstep",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v = match s.to_ascii_lowercase().as_str() {
            "naive" => Variant::Naive,
            "dit" => Variant::Dit,
            "dif" => Variant::Dif,
            "flat" => Variant::Flat,
            "pease" => Variant::Pease,
            "pease_nc" | "pease-nc" => Variant::PeaseNc,
            "stockham" => Variant::Stockham,
            "sixstep" | "six-step" | "six_step" => Variant::SixStep,
            _ => return Err(Error::UnknownVariant(s.to_string())),
        };
        Ok(v)
    }
}

/// Execution counters. Kernels report into a [`Probe`]; the unit type
/// discards everything and compiles away.
pub trait Probe {
    fn bit_reverse(&mut self) {}
    fn copied(&mut self, _elems: usize) {}
    fn stage(&mut self, _trips: usize) {}
}

impl Probe for () {}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExecStats {
    pub bit_reversals: usize,
    pub copied_elems: usize,
    pub stage_trips: Vec<usize>,
}

impl Probe for ExecStats {
    fn bit_reverse(&mut self) {
        self.bit_reversals += 1;
    }

    fn copied(&mut self, elems: usize) {
        self.copied_elems += elems;
    }

    fn stage(&mut self, trips: usize) {
        self.stage_trips.push(trips);
    }
}

/// Power-of-two length vector of residues reduced modulo `params`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueVector {
    elems: Vec<u32>,
    params: FieldParams,
}

impl ResidueVector {
    pub fn new(elems: Vec<u32>, params: FieldParams) -> Result<Self> {
        if !elems.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo(elems.len()));
        }
        let p = params.modulus();
        if let Some((index, &value)) = elems.iter().enumerate().find(|(_, &v)| v >= p) {
            return Err(Error::ResidueOutOfRange { index, value, p });
        }
        Ok(Self { elems, params })
    }

    fn from_trusted(elems: Vec<u32>, params: FieldParams) -> Self {
        debug_assert!(elems.iter().all(|&v| v < params.modulus()));
        Self { elems, params }
    }

    pub fn zeros(n: usize, params: FieldParams) -> Result<Self> {
        Self::new(vec![0; n], params)
    }

    /// `[1, 0, ..., 0]`.
    pub fn delta(n: usize, params: FieldParams) -> Result<Self> {
        let mut v = vec![0; n];
        if let Some(first) = v.first_mut() {
            *first = 1;
        }
        Self::new(v, params)
    }

    pub fn constant(n: usize, c: u32, params: FieldParams) -> Result<Self> {
        Self::new(vec![c; n], params)
    }

    pub fn random<R: Rng + ?Sized>(n: usize, params: FieldParams, rng: &mut R) -> Result<Self> {
        let p = params.modulus();
        Self::new((0..n).map(|_| rng.gen_range(0..p)).collect(), params)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.elems
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    /// `a*self + b*other`, elementwise.
    pub fn linear_combination(&self, a: u32, other: &Self, b: u32) -> Result<Self> {
        check_same_shape(self, other)?;
        let p = self.params.modulus();
        let (ah, bh) = (shoup_precompute(a, p), shoup_precompute(b, p));
        let elems = self
            .elems
            .iter()
            .zip(&other.elems)
            .map(|(&x, &y)| mod_add(shoup_mul(x, a, ah, p), shoup_mul(y, b, bh, p), p))
            .collect();
        Ok(Self::from_trusted(elems, self.params))
    }
}

pub(crate) fn check_same_shape(a: &ResidueVector, b: &ResidueVector) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    if a.params.modulus() != b.params.modulus() {
        return Err(Error::ModulusMismatch {
            expected: a.params.modulus(),
            actual: b.params.modulus(),
        });
    }
    Ok(())
}

fn check_input(x: &ResidueVector, table: &TwiddleTable) -> Result<()> {
    if x.len() != table.len() {
        return Err(Error::SizeMismatch {
            expected: table.len(),
            actual: x.len(),
        });
    }
    if x.params.modulus() != table.modulus() {
        return Err(Error::ModulusMismatch {
            expected: table.modulus(),
            actual: x.params.modulus(),
        });
    }
    Ok(())
}

/// Twiddle pair as stored in the table.
pub(crate) type Twiddle = (u32, ShoupConstant);

/// `(a + tw*b, a - tw*b)`.
#[inline(always)]
pub(crate) fn ct_butterfly(a: u32, b: u32, tw: Twiddle, p: u32) -> (u32, u32) {
    let t = shoup_mul(b, tw.0, tw.1, p);
    (mod_add(a, t, p), mod_sub(a, t, p))
}

/// `(a + b, tw*(a - b))`.
#[inline(always)]
pub(crate) fn gs_butterfly(a: u32, b: u32, tw: Twiddle, p: u32) -> (u32, u32) {
    (mod_add(a, b, p), shoup_mul(mod_sub(a, b, p), tw.0, tw.1, p))
}

fn dispatch<P: Probe>(
    variant: Variant,
    mut data: Vec<u32>,
    table: &TwiddleTable,
    split: Option<(&TwiddleTable, &TwiddleTable)>,
    probe: &mut P,
) -> Vec<u32> {
    match variant {
        Variant::Naive => naive::naive(&data, table),
        Variant::Dit => {
            radix2::dit(&mut data, table, probe);
            data
        }
        Variant::Dif => {
            radix2::dif(&mut data, table, probe);
            data
        }
        Variant::Flat => {
            radix2::flat(&mut data, table, probe);
            data
        }
        Variant::Pease => pease::pease(data, table, probe),
        Variant::PeaseNc => pease::pease_nc(data, table, probe),
        Variant::Stockham => stockham::stockham(data, table, probe),
        Variant::SixStep => {
            let (t1, t2) = split.expect("six-step requires sub-tables");
            sixstep::sixstep(data, table, t1, t2, probe)
        }
    }
}

fn scale_in_place(data: &mut [u32], table: &TwiddleTable) {
    let p = table.modulus();
    let c = table.n_inv();
    let ch = shoup_precompute(c, p);
    for v in data.iter_mut() {
        *v = shoup_mul(*v, c, ch, p);
    }
}

#[derive(Debug, Clone)]
struct SplitTables {
    rows_n1: Arc<TwiddleTable>,
    rows_n2: Arc<TwiddleTable>,
}

/// Executable transform: variant, size, direction and prebuilt tables.
#[derive(Debug, Clone)]
pub struct NttPlan {
    variant: Variant,
    table: Arc<TwiddleTable>,
    split: Option<SplitTables>,
}

impl NttPlan {
    pub fn new(
        variant: Variant,
        params: &FieldParams,
        n: usize,
        direction: Direction,
        cache: &TwiddleCache,
    ) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        let table = cache.get(params, n, direction)?;
        let split = if variant == Variant::SixStep {
            let (n1, n2) = default_split(n);
            Some(SplitTables {
                rows_n1: cache.get(params, n1, direction)?,
                rows_n2: cache.get(params, n2, direction)?,
            })
        } else {
            None
        };
        Ok(Self { variant, table, split })
    }

    /// Plan over an existing table; six-step sub-tables are built on the spot.
    pub fn from_table(variant: Variant, table: Arc<TwiddleTable>) -> Result<Self> {
        let n = table.len();
        if n < 2 {
            return Err(Error::NotPowerOfTwo(n));
        }
        if variant == Variant::SixStep {
            let (n1, n2) = default_split(n);
            return Self::sixstep_with_split(table, n1, n2);
        }
        Ok(Self {
            variant,
            table,
            split: None,
        })
    }

    /// Six-step plan with an explicit `n1 x n2` factorization.
    pub fn sixstep_with_split(table: Arc<TwiddleTable>, n1: usize, n2: usize) -> Result<Self> {
        let n = table.len();
        if n1 == 0 || n2 == 0 || !n1.is_power_of_two() || !n2.is_power_of_two() || n1 * n2 != n {
            return Err(Error::BadFactorization { n, n1, n2 });
        }
        let params = *table.params();
        let dir = table.direction();
        Ok(Self {
            variant: Variant::SixStep,
            split: Some(SplitTables {
                rows_n1: Arc::new(TwiddleTable::build(&params, n1, dir)?),
                rows_n2: Arc::new(TwiddleTable::build(&params, n2, dir)?),
            }),
            table,
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn direction(&self) -> Direction {
        self.table.direction()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn table(&self) -> &TwiddleTable {
        &self.table
    }

    /// `(n1, n2)` for six-step plans.
    pub fn split(&self) -> Option<(usize, usize)> {
        self.split.as_ref().map(|s| (s.rows_n1.len(), s.rows_n2.len()))
    }

    /// Runs the transform on a raw buffer of exactly `len()` reduced residues.
    /// Inverse plans include the `n^-1` scaling.
    pub fn execute(&self, data: Vec<u32>) -> Vec<u32> {
        self.execute_probed(data, &mut ())
    }

    pub fn execute_probed<P: Probe>(&self, data: Vec<u32>, probe: &mut P) -> Vec<u32> {
        assert_eq!(data.len(), self.len(), "buffer length must match the plan");
        let split = self.split.as_ref().map(|s| (&*s.rows_n1, &*s.rows_n2));
        let mut out = dispatch(self.variant, data, &self.table, split, probe);
        if self.direction() == Direction::Inverse {
            scale_in_place(&mut out, &self.table);
        }
        out
    }
}

/// Checked dispatch: forward plans return the NTT, inverse plans the scaled INTT.
pub fn run_plan(plan: &NttPlan, x: &ResidueVector) -> Result<ResidueVector> {
    check_input(x, &plan.table)?;
    Ok(ResidueVector::from_trusted(plan.execute(x.elems.clone()), x.params))
}

fn run_unscaled(variant: Variant, x: &ResidueVector, table: &TwiddleTable) -> Result<ResidueVector> {
    check_input(x, table)?;
    let out = dispatch(variant, x.elems.clone(), table, None, &mut ());
    Ok(ResidueVector::from_trusted(out, x.params))
}

/// `X[k] = sum_n x[n] * omega^(k*n)` in O(n^2). The oracle for every other variant.
pub fn naive_dft(x: &ResidueVector, table: &TwiddleTable) -> Result<ResidueVector> {
    run_unscaled(Variant::Naive, x, table)
}

/// Iterative radix-2 decimation in time: bit reversal, then stages s = 1..L.
pub fn ntt_dit(x: &ResidueVector, table: &TwiddleTable) -> Result<ResidueVector> {
    run_unscaled(Variant::Dit, x, table)
}

/// Decimation in frequency: stages s = L..1, bit reversal last.
pub fn ntt_dif(x: &ResidueVector, table: &TwiddleTable) -> Result<ResidueVector> {
    run_unscaled(Variant::Dif, x, table)
}

/// DIT with each stage's two inner loops fused into one loop of n/2 trips.
pub fn ntt_flat(x: &ResidueVector, table: &TwiddleTable) -> Result<ResidueVector> {
    run_unscaled(Variant::Flat, x, table)
}

/// Constant-geometry Pease transform with a copy back after every stage.
pub fn ntt_pease(x: &ResidueVector, table: &TwiddleTable) -> Result<ResidueVector> {
    run_unscaled(Variant::Pease, x, table)
}

/// Pease with buffer role swapping instead of copies.
pub fn ntt_pease_nc(x: &ResidueVector, table: &TwiddleTable) -> Result<ResidueVector> {
    run_unscaled(Variant::PeaseNc, x, table)
}

/// Stockham autosort: natural order in and out, no bit reversal.
pub fn ntt_stockham(x: &ResidueVector, table: &TwiddleTable) -> Result<ResidueVector> {
    run_unscaled(Variant::Stockham, x, table)
}

/// Six-step transform driven by a six-step plan (which carries the split).
/// The plan direction decides which root is used; no scaling is applied.
pub fn ntt_sixstep(x: &ResidueVector, plan: &NttPlan) -> Result<ResidueVector> {
    if plan.variant != Variant::SixStep {
        return Err(Error::UnsupportedVariant(plan.variant.to_string()));
    }
    check_input(x, &plan.table)?;
    let split = plan.split.as_ref().map(|s| (&*s.rows_n1, &*s.rows_n2));
    let out = dispatch(Variant::SixStep, x.elems.clone(), &plan.table, split, &mut ());
    Ok(ResidueVector::from_trusted(out, x.params))
}

/// Inverse transform with `variant`, scaled by `n^-1`.
pub fn intt(x: &ResidueVector, table: &TwiddleTable, variant: Variant) -> Result<ResidueVector> {
    if table.direction() != Direction::Inverse {
        return Err(Error::DirectionMismatch);
    }
    check_input(x, table)?;
    let mut out = if variant == Variant::SixStep {
        let plan = NttPlan::from_table(variant, Arc::new(table.clone()))?;
        let split = plan.split.as_ref().map(|s| (&*s.rows_n1, &*s.rows_n2));
        dispatch(variant, x.elems.clone(), table, split, &mut ())
    } else {
        dispatch(variant, x.elems.clone(), table, None, &mut ())
    };
    scale_in_place(&mut out, table);
    Ok(ResidueVector::from_trusted(out, x.params))
}

/// Runs `variant` on `x` and returns the execution counters alongside the output.
pub fn run_with_stats(variant: Variant, x: &ResidueVector, table: Arc<TwiddleTable>) -> Result<(ResidueVector, ExecStats)> {
    check_input(x, &table)?;
    let plan = NttPlan::from_table(variant, table)?;
    let mut stats = ExecStats::default();
    let out = plan.execute_probed(x.elems.clone(), &mut stats);
    Ok((ResidueVector::from_trusted(out, x.params), stats))
}

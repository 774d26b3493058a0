//! Root-of-unity tables with paired Shoup constants.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::modmath::{mod_inv, mod_mul_wide, mod_pow, shoup_precompute, FieldParams, ShoupConstant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Inverse,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Inverse => "inverse",
        })
    }
}

/// Primitive `n`-th root of unity `g^((p-1)/n)`.
pub fn root_of_unity(params: &FieldParams, n: usize) -> Result<u32> {
    let p = params.modulus();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    if (p as u64 - 1) % n as u64 != 0 {
        return Err(Error::SizeNotSupported { p, n });
    }
    Ok(mod_pow(params.generator(), (p as u64 - 1) / n as u64, p))
}

/// Powers `omega^0 .. omega^(n-1)` of one root, plus their Shoup words.
///
/// Exponents are always taken modulo `n`; see [`TwiddleTable::at`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwiddleTable {
    params: FieldParams,
    n: usize,
    direction: Direction,
    root: u32,
    w_pow: Vec<u32>,
    w_shoup: Vec<ShoupConstant>,
    n_inv: u32,
}

impl TwiddleTable {
    pub fn build(params: &FieldParams, n: usize, direction: Direction) -> Result<Self> {
        let p = params.modulus();
        let forward = root_of_unity(params, n)?;
        let root = match direction {
            Direction::Forward => forward,
            Direction::Inverse => mod_inv(forward, p),
        };
        let mut w_pow = Vec::with_capacity(n);
        let mut w = 1u32;
        for _ in 0..n {
            w_pow.push(w);
            w = mod_mul_wide(w, root, p);
        }
        let w_shoup = w_pow.iter().map(|&w| shoup_precompute(w, p)).collect();
        let n_inv = mod_pow(n as u32 % p, p as u64 - 2, p);
        Ok(Self {
            params: *params,
            n,
            direction,
            root,
            w_pow,
            w_shoup,
            n_inv,
        })
    }

    #[inline]
    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.params.modulus()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// The root `omega` this table enumerates.
    pub fn root(&self) -> u32 {
        self.root
    }

    /// `n^-1 mod p`, applied after an inverse transform.
    pub fn n_inv(&self) -> u32 {
        self.n_inv
    }

    pub fn powers(&self) -> &[u32] {
        &self.w_pow
    }

    pub fn shoup(&self) -> &[ShoupConstant] {
        &self.w_shoup
    }

    /// `(omega^e, shoup(omega^e))` for an unreduced exponent.
    #[inline(always)]
    pub fn at(&self, exponent: usize) -> (u32, ShoupConstant) {
        let i = exponent & (self.n - 1);
        (self.w_pow[i], self.w_shoup[i])
    }

    /// Copy of this table with entry `index` perturbed. Fault-injection hook
    /// for the verifier; never used on the transform path.
    #[doc(hidden)]
    pub fn corrupted(&self, index: usize) -> Self {
        let mut t = self.clone();
        let i = index % self.n;
        let p = self.modulus();
        t.w_pow[i] = (t.w_pow[i] + 1) % p;
        t.w_shoup[i] = shoup_precompute(t.w_pow[i], p);
        t
    }
}

type CacheKey = (FieldParams, usize, Direction);

/// Tables keyed by `(params, n, direction)`. Each key is built at most once.
#[derive(Debug, Default)]
pub struct TwiddleCache {
    tables: Mutex<HashMap<CacheKey, Arc<TwiddleTable>>>,
}

impl TwiddleCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, params: &FieldParams, n: usize, direction: Direction) -> Result<Arc<TwiddleTable>> {
        let key = (*params, n, direction);
        let mut tables = self.tables.lock().expect("twiddle cache poisoned");
        if let Some(t) = tables.get(&key) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(TwiddleTable::build(params, n, direction)?);
        tables.insert(key, Arc::clone(&table));
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.tables.lock().expect("twiddle cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

//! Multiplication in `Z_p[X] / (X^n - 1)`.

use crate::algorithms::{check_same_shape, NttPlan, ResidueVector, Variant};
use crate::error::Result;
use crate::modmath::{mod_add, mod_mul_wide};
use crate::twiddle::{Direction, TwiddleCache};

/// Polynomial of degree < n in the cyclic ring; `coeffs[i]` multiplies `X^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRingElem {
    coeffs: ResidueVector,
}

impl PolyRingElem {
    pub fn new(coeffs: ResidueVector) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &ResidueVector {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> ResidueVector {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl From<ResidueVector> for PolyRingElem {
    fn from(coeffs: ResidueVector) -> Self {
        Self::new(coeffs)
    }
}

/// `c[k] = sum_{i+j = k mod n} a[i] * b[j]`, O(n^2).
pub fn schoolbook_cyclic(a: &PolyRingElem, b: &PolyRingElem) -> Result<PolyRingElem> {
    check_same_shape(&a.coeffs, &b.coeffs)?;
    let params = *a.coeffs.params();
    let p = params.modulus();
    let n = a.len();
    let (x, y) = (a.coeffs.as_slice(), b.coeffs.as_slice());
    let mut c = vec![0u32; n];
    for (i, &ai) in x.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in y.iter().enumerate() {
            let k = (i + j) & (n - 1);
            c[k] = mod_add(c[k], mod_mul_wide(ai, bj, p), p);
        }
    }
    Ok(ResidueVector::new(c, params)?.into())
}

/// `intt(ntt(a) * ntt(b))` with `variant` for both directions.
pub fn cyclic_mul_ntt(a: &PolyRingElem, b: &PolyRingElem, variant: Variant, cache: &TwiddleCache) -> Result<PolyRingElem> {
    check_same_shape(&a.coeffs, &b.coeffs)?;
    let params = *a.coeffs.params();
    let p = params.modulus();
    let n = a.len();
    if n == 1 {
        return schoolbook_cyclic(a, b);
    }
    let fwd = NttPlan::new(variant, &params, n, Direction::Forward, cache)?;
    let inv = NttPlan::new(variant, &params, n, Direction::Inverse, cache)?;
    let fa = fwd.execute(a.coeffs.as_slice().to_vec());
    let fb = fwd.execute(b.coeffs.as_slice().to_vec());
    let prod = fa.iter().zip(&fb).map(|(&u, &v)| mod_mul_wide(u, v, p)).collect();
    Ok(ResidueVector::new(inv.execute(prod), params)?.into())
}

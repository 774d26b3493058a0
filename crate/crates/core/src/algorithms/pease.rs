//! Constant-geometry (Pease) kernels.
//!
//! After the input bit reversal every stage reads the pair `(2r, 2r+1)` and
//! writes `(r, r + n/2)`. Position bits rotate right by one per stage, so in
//! stage `s` butterfly `r` needs the twiddle exponent `r` with its low
//! `L - s` bits cleared.

use std::mem;

use super::{ct_butterfly, Probe};
use crate::modmath::bit_reverse_in_place;
use crate::twiddle::TwiddleTable;

#[inline(always)]
fn stage(src: &[u32], dst: &mut [u32], log_n: u32, s: u32, table: &TwiddleTable) {
    let half = src.len() / 2;
    let p = table.modulus();
    let clear = log_n - s;
    let (lo, hi) = dst.split_at_mut(half);
    for (r, (pair, (out_lo, out_hi))) in src.chunks_exact(2).zip(lo.iter_mut().zip(hi.iter_mut())).enumerate() {
        let e = (r >> clear) << clear;
        let (a, b) = ct_butterfly(pair[0], pair[1], table.at(e), p);
        *out_lo = a;
        *out_hi = b;
    }
}

/// Out-of-place stages with a full copy of the output back into the input
/// array after each one.
pub(crate) fn pease<P: Probe>(mut x: Vec<u32>, table: &TwiddleTable, probe: &mut P) -> Vec<u32> {
    let n = x.len();
    let log_n = n.trailing_zeros();
    probe.bit_reverse();
    bit_reverse_in_place(&mut x);
    let mut y = vec![0u32; n];
    for s in 1..=log_n {
        stage(&x, &mut y, log_n, s, table);
        x.copy_from_slice(&y);
        probe.copied(n);
        probe.stage(n / 2);
    }
    x
}

/// Same stages, but the two arrays trade input/output roles each stage. The
/// buffer holding the last stage's output is returned as is.
pub(crate) fn pease_nc<P: Probe>(mut a: Vec<u32>, table: &TwiddleTable, probe: &mut P) -> Vec<u32> {
    let n = a.len();
    let log_n = n.trailing_zeros();
    probe.bit_reverse();
    bit_reverse_in_place(&mut a);
    let mut b = vec![0u32; n];
    for s in 1..=log_n {
        stage(&a, &mut b, log_n, s, table);
        mem::swap(&mut a, &mut b);
        probe.stage(n / 2);
    }
    a
}

use std::mem;

use super::{gs_butterfly, Probe};
use crate::twiddle::TwiddleTable;

/// Radix-2 Stockham autosort. Each stage reads `x[q + s*(j)]` and
/// `x[q + s*(j + m)]` and writes `y[q + s*2j]`, `y[q + s*(2j+1)]`, where `s`
/// doubles and the sub-transform length `2m` halves every stage; the index
/// shuffle replaces the bit reversal.
pub(crate) fn stockham<P: Probe>(mut x: Vec<u32>, table: &TwiddleTable, probe: &mut P) -> Vec<u32> {
    let n = x.len();
    let p = table.modulus();
    let mut y = vec![0u32; n];
    let mut len = n;
    let mut stride = 1usize;
    while len > 1 {
        let m = len / 2;
        for j in 0..m {
            let tw = table.at(j * stride);
            let src_lo = stride * j;
            let src_hi = stride * (j + m);
            let dst = stride * 2 * j;
            for q in 0..stride {
                let (a, b) = gs_butterfly(x[src_lo + q], x[src_hi + q], tw, p);
                y[dst + q] = a;
                y[dst + stride + q] = b;
            }
        }
        mem::swap(&mut x, &mut y);
        len = m;
        stride *= 2;
        probe.stage(n / 2);
    }
    x
}

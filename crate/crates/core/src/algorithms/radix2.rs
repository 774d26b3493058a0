//! In-place radix-2 kernels: DIT, DIF and the flattened DIT.

use super::{ct_butterfly, gs_butterfly, Probe};
use crate::modmath::bit_reverse_in_place;
use crate::twiddle::TwiddleTable;

pub(crate) fn dit<P: Probe>(x: &mut [u32], table: &TwiddleTable, probe: &mut P) {
    let n = x.len();
    let log_n = n.trailing_zeros();
    let p = table.modulus();
    probe.bit_reverse();
    bit_reverse_in_place(x);
    for s in 1..=log_n {
        let m = 1usize << s;
        let half = m >> 1;
        let stride = n >> s;
        for j in (0..n).step_by(m) {
            for k in 0..half {
                let (a, b) = ct_butterfly(x[j + k], x[j + k + half], table.at(stride * k), p);
                x[j + k] = a;
                x[j + k + half] = b;
            }
        }
        probe.stage(n / 2);
    }
}

pub(crate) fn dif<P: Probe>(x: &mut [u32], table: &TwiddleTable, probe: &mut P) {
    let n = x.len();
    let log_n = n.trailing_zeros();
    let p = table.modulus();
    for s in (1..=log_n).rev() {
        let m = 1usize << s;
        let half = m >> 1;
        let stride = n >> s;
        for j in (0..n).step_by(m) {
            for k in 0..half {
                let (a, b) = gs_butterfly(x[j + k], x[j + k + half], table.at(stride * k), p);
                x[j + k] = a;
                x[j + k + half] = b;
            }
        }
        probe.stage(n / 2);
    }
    probe.bit_reverse();
    bit_reverse_in_place(x);
}

/// DIT with a fixed n/2 trip count per stage. The group base and offset are
/// recovered from the flat counter `t` as `((t >> (s-1)) << s)` and
/// `t & (2^(s-1) - 1)`.
pub(crate) fn flat<P: Probe>(x: &mut [u32], table: &TwiddleTable, probe: &mut P) {
    let n = x.len();
    let log_n = n.trailing_zeros();
    let p = table.modulus();
    probe.bit_reverse();
    bit_reverse_in_place(x);
    let trips = n / 2;
    for s in 1..=log_n {
        let shift = s - 1;
        let half = 1usize << shift;
        let mask = half - 1;
        let stride = n >> s;
        for t in 0..trips {
            let k = t & mask;
            let lo = ((t >> shift) << s) + k;
            let (a, b) = ct_butterfly(x[lo], x[lo + half], table.at(stride * k), p);
            x[lo] = a;
            x[lo + half] = b;
        }
        probe.stage(trips);
    }
}

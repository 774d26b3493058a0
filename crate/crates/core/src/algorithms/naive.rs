use crate::modmath::{mod_add, mod_mul_wide};
use crate::twiddle::TwiddleTable;

/// Direct evaluation with wide multiplication, deliberately sharing no code
/// with the butterfly kernels.
pub(crate) fn naive(x: &[u32], table: &TwiddleTable) -> Vec<u32> {
    let n = x.len();
    let p = table.modulus();
    let w = table.powers();
    (0..n)
        .map(|k| {
            x.iter().enumerate().fold(0u32, |acc, (j, &v)| {
                let e = (k * j) % n;
                mod_add(acc, mod_mul_wide(v, w[e], p), p)
            })
        })
        .collect()
}

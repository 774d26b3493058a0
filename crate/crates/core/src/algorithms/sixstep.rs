//! Six-step transform over an `n1 x n2` split.
//!
//! With `n = j1 + n1*j2` and `k = n2*k1 + k2`:
//! `X[n2*k1 + k2] = sum_j1 w_n1^(j1*k1) * w_n^(j1*k2) * sum_j2 x[j1 + n1*j2] * w_n2^(j2*k2)`.

use super::{radix2, Probe};
use crate::modmath::shoup_mul;
use crate::twiddle::TwiddleTable;

const BLOCK: usize = 16;

/// `n1 = 2^ceil(L/2)`, `n2 = 2^floor(L/2)`.
pub fn default_split(n: usize) -> (usize, usize) {
    let log_n = n.trailing_zeros();
    (1 << log_n.div_ceil(2), 1 << (log_n / 2))
}

/// Blocked transpose of a `rows x cols` row-major matrix.
fn transpose(src: &[u32], rows: usize, cols: usize) -> Vec<u32> {
    let mut dst = vec![0u32; src.len()];
    for rb in (0..rows).step_by(BLOCK) {
        for cb in (0..cols).step_by(BLOCK) {
            for r in rb..(rb + BLOCK).min(rows) {
                for c in cb..(cb + BLOCK).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
    dst
}

pub(crate) fn sixstep<P: Probe>(
    x: Vec<u32>,
    table: &TwiddleTable,
    rows_n1: &TwiddleTable,
    rows_n2: &TwiddleTable,
    probe: &mut P,
) -> Vec<u32> {
    let n1 = rows_n1.len();
    let n2 = rows_n2.len();
    debug_assert_eq!(n1 * n2, x.len());
    let p = table.modulus();

    // x as n2 rows of n1 -> n1 rows of n2
    let mut a = transpose(&x, n2, n1);
    for row in a.chunks_exact_mut(n2) {
        radix2::dit(row, rows_n2, probe);
    }
    for (j1, row) in a.chunks_exact_mut(n2).enumerate() {
        for (k2, v) in row.iter_mut().enumerate() {
            let (w, wh) = table.at(j1 * k2);
            *v = shoup_mul(*v, w, wh, p);
        }
    }
    let mut b = transpose(&a, n1, n2);
    for row in b.chunks_exact_mut(n1) {
        radix2::dit(row, rows_n1, probe);
    }
    transpose(&b, n2, n1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{naive_dft, NttPlan, ResidueVector};
    use crate::modmath::FieldParams;
    use crate::twiddle::Direction;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    #[test]
    fn split_shapes() {
        assert_eq!(default_split(2), (2, 1));
        assert_eq!(default_split(4), (2, 2));
        assert_eq!(default_split(8), (4, 2));
        assert_eq!(default_split(1024), (32, 32));
        assert_eq!(default_split(16384), (128, 128));
    }

    #[test]
    fn transpose_rectangular() {
        let m: Vec<u32> = (0..6).collect(); // 2x3
        assert_eq!(transpose(&m, 2, 3), vec![0, 3, 1, 4, 2, 5]);
        let big: Vec<u32> = (0..40 * 24).collect();
        assert_eq!(transpose(&transpose(&big, 40, 24), 24, 40), big);
    }

    #[test]
    fn every_split_matches_oracle() {
        let f = FieldParams::default_suite();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for log_n in 1..=8u32 {
            let n = 1usize << log_n;
            let t = Arc::new(TwiddleTable::build(&f, n, Direction::Forward).unwrap());
            let x = ResidueVector::random(n, f, &mut rng).unwrap();
            let oracle = naive_dft(&x, &t).unwrap();
            for log_n1 in 0..=log_n {
                let plan = NttPlan::sixstep_with_split(Arc::clone(&t), 1 << log_n1, n >> log_n1).unwrap();
                assert_eq!(crate::algorithms::ntt_sixstep(&x, &plan).unwrap(), oracle, "n={n} n1={}", 1 << log_n1);
            }
        }
    }

    #[test]
    fn degenerate_split_is_row_transform() {
        let f = FieldParams::default_suite();
        let t = Arc::new(TwiddleTable::build(&f, 16, Direction::Forward).unwrap());
        let plan = NttPlan::sixstep_with_split(Arc::clone(&t), 1, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = ResidueVector::random(16, f, &mut rng).unwrap();
        let mut direct = x.as_slice().to_vec();
        radix2::dit(&mut direct, &t, &mut ());
        assert_eq!(plan.execute(x.into_inner()), direct);
    }

    #[test]
    fn bad_factorizations() {
        let f = FieldParams::default_suite();
        let t = Arc::new(TwiddleTable::build(&f, 16, Direction::Forward).unwrap());
        for (n1, n2) in [(2, 4), (3, 5), (0, 16), (16, 0)] {
            assert!(matches!(
                NttPlan::sixstep_with_split(Arc::clone(&t), n1, n2),
                Err(crate::Error::BadFactorization { .. })
            ));
        }
    }
}

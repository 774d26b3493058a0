//! Arithmetic in Z_p for odd primes p < 2^32.
//!
//! Residues are `u32`; every product is formed in `u64`. The butterfly hot path
//! uses [`shoup_mul`] against a precomputed [`ShoupConstant`] so that no
//! division happens inside a transform.

use crate::error::{Error, Result};

/// Default suite prime, 3 * 2^30 + 1. Supports power-of-two sizes up to 2^30.
pub const DEFAULT_PRIME: u32 = 3_221_225_473;

/// Word width `w` of the Shoup high word. Intermediates use `2w` bits.
pub const WORD_BITS: u32 = 32;

/// Prime modulus together with a primitive root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldParams {
    p: u32,
    g: u32,
}

impl FieldParams {
    /// Validates `p` and discovers the smallest primitive root.
    pub fn new(p: u64) -> Result<Self> {
        let p32 = check_modulus(p)?;
        let g = find_primitive_root(p)?;
        Ok(Self { p: p32, g })
    }

    /// Uses a caller-supplied generator after checking its order is exactly p-1.
    pub fn with_generator(p: u64, g: u32) -> Result<Self> {
        let p32 = check_modulus(p)?;
        if g < 2 || g >= p32 || !has_full_order(g, p32) {
            return Err(Error::NotPrimitiveRoot { p: p32, g });
        }
        Ok(Self { p: p32, g })
    }

    /// The suite default, `p = 3221225473` with `g = 5`.
    pub fn default_suite() -> Self {
        Self {
            p: DEFAULT_PRIME,
            g: 5,
        }
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn generator(&self) -> u32 {
        self.g
    }

    pub fn word_bits(&self) -> u32 {
        WORD_BITS
    }

    /// Largest `k` such that `2^k` divides `p - 1`.
    pub fn two_adicity(&self) -> u32 {
        (self.p - 1).trailing_zeros()
    }

    /// True if a power-of-two transform of length `n` exists over this field.
    pub fn supports(&self, n: usize) -> bool {
        n.is_power_of_two() && (n as u64) <= (1u64 << self.two_adicity())
    }
}

impl Default for FieldParams {
    fn default() -> Self {
        Self::default_suite()
    }
}

fn check_modulus(p: u64) -> Result<u32> {
    if p > u32::MAX as u64 {
        return Err(Error::ModulusTooLarge(p));
    }
    if p < 3 || p % 2 == 0 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(p as u32)
}

fn has_full_order(g: u32, p: u32) -> bool {
    let order = (p - 1) as u64;
    prime_factors(order)
        .into_iter()
        .all(|q| mod_pow(g, order / q, p) != 1)
}

/// Precomputed Shoup high word `floor(tw * 2^w / p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ShoupConstant(pub u32);

impl ShoupConstant {
    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }
}

/// `(a + b) mod p` with one compare and one conditional subtract.
#[inline(always)]
pub fn mod_add(a: u32, b: u32, p: u32) -> u32 {
    debug_assert!(a < p && b < p);
    // p may exceed 2^31, so the sum needs the carry bit.
    let s = a as u64 + b as u64;
    if s >= p as u64 {
        (s - p as u64) as u32
    } else {
        s as u32
    }
}

/// `(a - b) mod p` with one conditional add.
#[inline(always)]
pub fn mod_sub(a: u32, b: u32, p: u32) -> u32 {
    debug_assert!(a < p && b < p);
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

/// Reference `(a * b) mod p` through a 64-bit product.
#[inline]
pub fn mod_mul_wide(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

/// `floor(tw * 2^w / p)`.
#[inline]
pub fn shoup_precompute(tw: u32, p: u32) -> ShoupConstant {
    debug_assert!(tw < p);
    ShoupConstant((((tw as u64) << WORD_BITS) / p as u64) as u32)
}

/// `(x * tw) mod p` using the precomputed high word of `tw`.
///
/// The quotient estimate `q = floor(x * tw_h / 2^w)` is at most one short of
/// the true quotient, so `x * tw - q * p` lies in `[0, 2p)`. For `p > 2^31`
/// that range does not fit in a `w`-bit word, hence the subtraction is taken
/// in the double-width ring.
#[inline(always)]
pub fn shoup_mul(x: u32, tw: u32, tw_h: ShoupConstant, p: u32) -> u32 {
    debug_assert!(x < p && tw < p);
    let q = (x as u64 * tw_h.0 as u64) >> WORD_BITS;
    let z = (x as u64 * tw as u64).wrapping_sub(q * p as u64);
    if z >= p as u64 {
        (z - p as u64) as u32
    } else {
        z as u32
    }
}

/// `b^e mod p` by square-and-multiply.
pub fn mod_pow(b: u32, mut e: u64, p: u32) -> u32 {
    let mut base = b % p;
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mod_mul_wide(acc, base, p);
        }
        base = mod_mul_wide(base, base, p);
        e >>= 1;
    }
    acc
}

/// Multiplicative inverse by Fermat's little theorem.
pub fn mod_inv(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    mod_pow(a, p as u64 - 2, p)
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &q in &WITNESSES {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of `n` by trial division, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if n % 2 == 0 {
        out.push(2);
        while n % 2 == 0 {
            n /= 2;
        }
    }
    let mut q = 3u64;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 2;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest `g >= 2` whose order modulo `p` is exactly `p - 1`.
pub fn find_primitive_root(p: u64) -> Result<u32> {
    let p32 = check_modulus(p)?;
    let order = p - 1;
    let factors = prime_factors(order);
    (2..p32)
        .find(|&g| factors.iter().all(|&q| mod_pow(g, order / q, p32) != 1))
        .ok_or(Error::NotPrime(p))
}

/// Reverses the low `bits` bits of `i`.
#[inline]
pub fn bit_reverse_index(i: usize, bits: u32) -> usize {
    debug_assert!(bits == 0 || i >> bits == 0 || bits >= usize::BITS);
    if bits == 0 {
        0
    } else {
        i.reverse_bits() >> (usize::BITS - bits)
    }
}

/// Permutes `data` in place so that element `i` moves to `bit_reverse_index(i)`.
pub fn bit_reverse_in_place<T>(data: &mut [T]) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = bit_reverse_index(i, bits);
        if i < j {
            data.swap(i, j);
        }
    }
}

/// Bit-reversal permutation of a power-of-two length slice.
pub fn bit_reverse_permute<T: Clone>(x: &[T]) -> Result<Vec<T>> {
    if !x.len().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(x.len()));
    }
    let mut out = x.to_vec();
    bit_reverse_in_place(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn add_sub_examples() {
        assert_eq!(mod_add(10, 12, 17), 5);
        assert_eq!(mod_add(0, 0, 17), 0);
        assert_eq!(mod_add(16, 16, 17), 15);
        assert_eq!(mod_sub(5, 9, 17), 13);
        assert_eq!(mod_sub(9, 9, 17), 0);
        assert_eq!(mod_sub(16, 0, 17), 16);
    }

    #[test]
    fn add_near_32_bit_boundary() {
        let p = DEFAULT_PRIME;
        assert_eq!(mod_add(p - 1, p - 1, p), p - 2);
        assert_eq!(mod_sub(0, p - 1, p), 1);
    }

    #[test]
    fn wide_mul_examples() {
        assert_eq!(mod_mul_wide(13, 13, 17), 16);
        assert_eq!(mod_mul_wide(0, 5, 17), 0);
        // 2^32 mod p, from a big-integer computation.
        assert_eq!(mod_mul_wide(65536, 65536, DEFAULT_PRIME), 1_073_741_823);
    }

    #[test]
    fn shoup_constants() {
        assert_eq!(shoup_precompute(0, 17).value(), 0);
        assert_eq!(shoup_precompute(1, 17).value(), 252_645_135);
        assert_eq!(252_645_135u64 * 17, (1u64 << 32) - 1);
        assert_eq!(shoup_precompute(16, 17).value(), 4_042_322_160);
    }

    #[test]
    fn shoup_identity_and_zero() {
        let p = DEFAULT_PRIME;
        for tw in [0, 1, 2, p / 2, p - 1] {
            let h = shoup_precompute(tw, p);
            assert_eq!(shoup_mul(0, tw, h, p), 0);
            assert_eq!(shoup_mul(1, tw, h, p), tw);
        }
    }

    #[test]
    fn shoup_exhaustive_small() {
        for p in [3u32, 5, 17, 97, 257] {
            for tw in 0..p {
                let h = shoup_precompute(tw, p);
                for x in 0..p {
                    assert_eq!(shoup_mul(x, tw, h, p), mod_mul_wide(x, tw, p), "p={p} x={x} tw={tw}");
                }
            }
        }
    }

    #[test]
    fn shoup_extreme_operands() {
        let p = DEFAULT_PRIME;
        let edge = [0, 1, 2, p / 3, p / 2, p / 2 + 1, p - 2, p - 1];
        for &tw in &edge {
            let h = shoup_precompute(tw, p);
            for &x in &edge {
                assert_eq!(shoup_mul(x, tw, h, p), mod_mul_wide(x, tw, p));
            }
        }
    }

    #[test]
    fn pow_examples() {
        assert_eq!(mod_pow(3, 0, 17), 1);
        // 3^8 = 6561 = 385*17 + 16
        assert_eq!(mod_pow(3, 8, 17), 16);
        assert_eq!(mod_pow(3, 16, 17), 1);
        assert_eq!(mod_pow(5, DEFAULT_PRIME as u64 - 1, DEFAULT_PRIME), 1);
    }

    #[test]
    fn primality() {
        assert!(is_prime(DEFAULT_PRIME as u64));
        assert!(is_prime(7681));
        assert!(is_prime(2));
        assert!(!is_prime(1));
        assert!(!is_prime(561)); // Carmichael
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
        assert!(is_prime(4_294_967_291));
        assert!(!is_prime(4_294_967_297)); // F5
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(find_primitive_root(17), Ok(3));
        assert_eq!(find_primitive_root(7681), Ok(17));
        assert_eq!(find_primitive_root(DEFAULT_PRIME as u64), Ok(5));
        assert_eq!(find_primitive_root(15), Err(Error::NotPrime(15)));
        assert_eq!(FieldParams::new(DEFAULT_PRIME as u64), Ok(FieldParams::default_suite()));
    }

    #[test]
    fn field_params_rejects_bad_input() {
        assert_eq!(FieldParams::new(2), Err(Error::NotPrime(2)));
        assert_eq!(FieldParams::new(21), Err(Error::NotPrime(21)));
        assert!(matches!(FieldParams::new(1 << 33), Err(Error::ModulusTooLarge(_))));
        assert!(matches!(
            FieldParams::with_generator(17, 2),
            Err(Error::NotPrimitiveRoot { p: 17, g: 2 })
        ));
        assert!(FieldParams::with_generator(17, 5).is_ok());
    }

    #[test]
    fn bit_reverse_examples() {
        assert_eq!(bit_reverse_index(1, 3), 4);
        assert_eq!(bit_reverse_index(0, 5), 0);
        assert_eq!(bit_reverse_index(6, 3), 3);
        assert_eq!(bit_reverse_index(0, 0), 0);
        assert_eq!(bit_reverse_permute(&['a', 'b', 'c', 'd']).unwrap(), vec!['a', 'c', 'b', 'd']);
        assert_eq!(bit_reverse_permute(&[7]).unwrap(), vec![7]);
        assert_eq!(bit_reverse_permute(&[1, 2, 3]), Err(Error::NotPowerOfTwo(3)));
    }

    #[test]
    fn bit_reverse_involution_all_sizes() {
        for bits in 0..=16u32 {
            let v: Vec<u32> = (0..1u32 << bits).collect();
            let twice = bit_reverse_permute(&bit_reverse_permute(&v).unwrap()).unwrap();
            assert_eq!(twice, v);
        }
    }

    proptest! {
        #[test]
        fn add_matches_wide(a in 0u32..DEFAULT_PRIME, b in 0u32..DEFAULT_PRIME) {
            let r = mod_add(a, b, DEFAULT_PRIME);
            prop_assert!(r < DEFAULT_PRIME);
            prop_assert_eq!(r as u64, (a as u64 + b as u64) % DEFAULT_PRIME as u64);
        }

        #[test]
        fn sub_matches_wide(a in 0u32..DEFAULT_PRIME, b in 0u32..DEFAULT_PRIME) {
            let r = mod_sub(a, b, DEFAULT_PRIME);
            prop_assert!(r < DEFAULT_PRIME);
            prop_assert_eq!((r as u64 + b as u64) % DEFAULT_PRIME as u64, a as u64);
        }

        #[test]
        fn shoup_matches_wide(x in 0u32..DEFAULT_PRIME, tw in 0u32..DEFAULT_PRIME) {
            let h = shoup_precompute(tw, DEFAULT_PRIME);
            prop_assert_eq!(shoup_mul(x, tw, h, DEFAULT_PRIME), mod_mul_wide(x, tw, DEFAULT_PRIME));
        }

        #[test]
        fn generator_has_full_order(p in prop::sample::select(vec![17u64, 97, 257, 7681, 12289, 65537, 998_244_353, 3_221_225_473])) {
            let params = FieldParams::new(p).unwrap();
            let g = params.generator();
            prop_assert_eq!(mod_pow(g, p - 1, params.modulus()), 1);
            for q in prime_factors(p - 1) {
                prop_assert_ne!(mod_pow(g, (p - 1) / q, params.modulus()), 1);
            }
        }
    }
}

//! Deterministic balanced-semiprime corpora for benchmarks and tests.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest supported modulus size.
pub const MAX_BITS: u32 = 48;

pub const GIVE_UP_AFTER: usize = 10_000;

/// Bases for which Miller–Rabin is exact on every `u64`.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Miller–Rabin with fixed bases.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Miller–Rabin over the same fixed bases; exact below 3.3·10²⁴.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if MR_BASES.iter().any(|&p| (n % p).to_u64() == Some(0)) {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Semiprime {
    pub n: u64,
    /// Larger factor.
    pub p: u64,
    pub q: u64,
}

/// `count` distinct semiprimes of exactly `bits` bits whose two distinct
/// prime factors both have bit length `⌈bits/2⌉`, in generation order.
///
/// Small sizes admit only a handful of such numbers; generation stops early
/// once [`GIVE_UP_AFTER`] consecutive draws bring nothing new.
///
/// Panics unless `8 <= bits <= MAX_BITS`.
pub fn balanced_semiprimes(bits: u32, count: usize, seed: u64) -> Vec<Semiprime> {
    assert!((8..=MAX_BITS).contains(&bits), "bits must lie in 8..={MAX_BITS}");
    let half = bits.div_ceil(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(bits as u64);
    let random_prime = |rng: &mut ChaCha8Rng| loop {
        let c = rng.gen_range(1u64 << (half - 1)..1u64 << half) | 1;
        if is_prime_u64(c) {
            return c;
        }
    };
    let mut out: Vec<Semiprime> = Vec::with_capacity(count);
    let mut misses = 0;
    while out.len() < count && misses < GIVE_UP_AFTER {
        let a = random_prime(&mut rng);
        let b = random_prime(&mut rng);
        let n = a * b;
        if a == b || 64 - n.leading_zeros() != bits || out.iter().any(|s| s.n == n) {
            misses += 1;
            continue;
        }
        misses = 0;
        out.push(Semiprime { n, p: a.max(b), q: a.min(b) });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..20_000 {
            assert_eq!(is_prime_u64(n), trial_prime(n), "{n}");
        }
        // strong pseudoprimes to small base sets
        for n in [2047u64, 1_373_653, 25_326_001, 3_215_031_751, 3_825_123_056_546_413_051] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
    }

    #[test]
    fn big_miller_rabin() {
        let m61 = (BigUint::one() << 61u32) - 1u32;
        let m89 = (BigUint::one() << 89u32) - 1u32;
        assert!(is_probable_prime(&m61));
        assert!(is_probable_prime(&m89));
        assert!(!is_probable_prime(&(&m61 * &m89)));
        assert!(!is_probable_prime(&(&m89 * 3u32)));
        assert!(!is_probable_prime(&((BigUint::one() << 67u32) - 1u32)));
        assert!(is_probable_prime(&BigUint::from(8_689_739u64 / 2713)));
    }

    #[test]
    fn semiprimes_are_balanced() {
        for bits in [16, 20, 31, 48] {
            let corpus = balanced_semiprimes(bits, 20, 5);
            assert_eq!(corpus.len(), 20);
            for s in corpus {
                assert_eq!(s.p * s.q, s.n);
                assert_eq!(64 - s.n.leading_zeros(), bits);
                assert!(s.p > s.q && s.q > 3);
                assert_eq!(64 - s.p.leading_zeros(), bits.div_ceil(2));
                assert_eq!(64 - s.q.leading_zeros(), bits.div_ceil(2));
                if bits <= 31 {
                    assert!(trial_prime(s.p) && trial_prime(s.q));
                }
            }
        }
    }

    #[test]
    fn tiny_sizes_stop_early() {
        // 11·13 is the only 8-bit candidate
        assert_eq!(balanced_semiprimes(8, 5, 0), vec![Semiprime { n: 143, p: 13, q: 11 }]);
        // 17·19, 17·23, 17·29, 19·23
        assert_eq!(balanced_semiprimes(9, 50, 0).len(), 4);
    }

    #[test]
    fn corpus_is_deterministic() {
        assert_eq!(balanced_semiprimes(20, 30, 1), balanced_semiprimes(20, 30, 1));
        assert_ne!(balanced_semiprimes(20, 30, 1), balanced_semiprimes(20, 30, 2));
    }
}

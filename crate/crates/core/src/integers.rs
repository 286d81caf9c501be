//! Exact integer helpers shared by the Fermat search and the QUBO encoders.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Quadratic residues modulo 64, as a bitmask indexed by `n mod 64`.
const SQUARE_MOD_64: u64 = {
    let mut mask = 0u64;
    let mut r = 0u64;
    while r < 64 {
        mask |= 1 << ((r * r) % 64);
        r += 1;
    }
    mask
};

/// Floor square root, `r` with `r² ≤ n < (r+1)²`.
///
/// Newton's iteration on integers, started from a power of two that is
/// guaranteed to be at least the root, so the iterates decrease
/// monotonically until they stop.
pub fn isqrt(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    if let Some(small) = n.to_u64() {
        return BigUint::from(isqrt_u64(small));
    }
    let bits = n.bits();
    let mut x = BigUint::one() << bits.div_ceil(2);
    loop {
        let y = (&x + n / &x) >> 1u32;
        if y >= x {
            return x;
        }
        x = y;
    }
}

fn isqrt_u64(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let bits = 64 - n.leading_zeros() as u64;
    let mut x: u64 = 1 << bits.div_ceil(2);
    loop {
        let y = (x + n / x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Smallest `r` with `r² ≥ n`.
pub fn ceil_sqrt(n: &BigUint) -> BigUint {
    let r = isqrt(n);
    if &r * &r == *n {
        r
    } else {
        r + 1u32
    }
}

/// Returns the root when `n` is a perfect square.
pub fn is_perfect_square(n: &BigUint) -> Option<BigUint> {
    let low = n.iter_u64_digits().next().unwrap_or(0) & 63;
    if SQUARE_MOD_64 & (1 << low) == 0 {
        return None;
    }
    let r = isqrt(n);
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Number of significant bits; zero has bit length 0.
pub fn bitlen(n: &BigUint) -> u64 {
    n.bits()
}

/// `n mod m` for a small modulus.
pub(crate) fn mod_small(n: &BigUint, m: u64) -> u64 {
    (n % m).to_u64().expect("remainder below a u64 modulus")
}

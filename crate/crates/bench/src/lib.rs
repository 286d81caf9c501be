//! Shared inputs for the criterion benches.

use fermatq::corpus::balanced_semiprimes;
use fermatq::encoders::encode_bit_pattern;
use fermatq::fermat::fermat_bounds;
use fermatq::{BigUint, QuboModel};

/// 8,689,739 = 3203 · 2713.
pub fn headline_n() -> BigUint {
    BigUint::from(8_689_739u32)
}

/// A fixed balanced semiprime of `bits` bits.
pub fn semiprime(bits: u32) -> BigUint {
    BigUint::from(balanced_semiprimes(bits, 1, 0)[0].n)
}

/// Balanced bit-pattern model of `n`.
pub fn bit_pattern_model(n: &BigUint) -> QuboModel {
    encode_bit_pattern(n, &fermat_bounds(n, true).expect("odd n >= 9")).expect("encodable").0
}

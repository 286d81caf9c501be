use num_bigint::BigUint;
use num_traits::One;

use super::SampleSet;
use crate::encoders::VarMap;
use crate::fermat::Factorization;

/// First sample, in energy order, that decodes to a verified nontrivial
/// factorization of `n`.
///
/// `iterations` on the result counts the samples examined. Samples whose
/// length does not match `map` are skipped.
pub fn recover_factors(n: &BigUint, samples: &SampleSet, map: &VarMap) -> Option<Factorization> {
    for (k, sample) in samples.iter().enumerate() {
        let Ok(Some((x, y))) = map.decode_roots(&sample.assignment) else {
            continue;
        };
        if y > x || &x * &x - &y * &y != *n {
            continue;
        }
        let f = Factorization::from_xy(x, y, k as u64 + 1);
        if f.q > BigUint::one() && &f.p * &f.q == *n {
            return Some(f);
        }
    }
    None
}

//! Squares as free high bits above a fixed low-bit pattern.
//!
//! The parity of `k = (N ∓ 1)/4` fixes `x² mod 8` and `y² mod 8` when
//! `N ≡ 3 (mod 4)`, or both modulo 16 when `N ≡ 1 (mod 4)`. Only the bits
//! above that pattern are variables, and the model is
//! `(x′ - y′ - N)²` with `x′`, `y′` the reassembled values.
//!
//! The model does not force `x′` and `y′` to be squares. Decoding filters
//! those out.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde_json::Value;

use super::{check_len, decimal_list, field_num, field_num_list, object, EncodeError};
use crate::fermat::{fermat_bounds, k_is_odd, FermatBounds};
use crate::integers::{bitlen, is_perfect_square, mod_small};
use crate::qubo::QuboModel;

/// Deepest supported extra-pattern depth.
pub const MAX_PATTERN_DEPTH: u32 = 16;

/// Fixed low bits: `value` occupies the lowest `width` bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    pub value: u64,
    pub width: u32,
}

impl Pattern {
    fn to_json(self) -> Value {
        object(vec![
            ("value", Value::String(self.value.to_string())),
            ("width", Value::String(self.width.to_string())),
        ])
    }

    fn from_json(v: &Value) -> Result<Self, EncodeError> {
        let p = Pattern { value: field_num(v, "value")?, width: field_num(v, "width")? };
        if p.width > 63 || p.value >> p.width != 0 {
            return Err(EncodeError::Metadata(format!("pattern {} does not fit in {} bits", p.value, p.width)));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitPatternMap {
    pub x_pattern: Pattern,
    pub y_pattern: Pattern,
    /// Bit positions of `x²` held by variables `0..x_free_bits.len()`.
    pub x_free_bits: Vec<u32>,
    /// Bit positions of `y²` held by the variables after the x bits.
    pub y_free_bits: Vec<u32>,
}

impl BitPatternMap {
    pub fn num_vars(&self) -> usize {
        self.x_free_bits.len() + self.y_free_bits.len()
    }

    /// `(x′, y′)` reassembled from the pattern and the free bits.
    pub fn values(&self, assignment: &[bool]) -> Result<(BigUint, BigUint), EncodeError> {
        check_len(self.num_vars(), assignment)?;
        let (xs, ys) = assignment.split_at(self.x_free_bits.len());
        let assemble = |pattern: Pattern, bits: &[u32], vals: &[bool]| {
            bits.iter()
                .zip(vals)
                .filter(|(_, &b)| b)
                .fold(BigUint::from(pattern.value), |acc, (&pos, _)| acc + (BigUint::one() << pos))
        };
        Ok((assemble(self.x_pattern, &self.x_free_bits, xs), assemble(self.y_pattern, &self.y_free_bits, ys)))
    }

    /// Assignment whose reassembled values are `x2` and `y2`, if representable.
    pub fn assignment_for(&self, x2: &BigUint, y2: &BigUint) -> Option<Vec<bool>> {
        let mut a = Vec::with_capacity(self.num_vars());
        for (v, pattern, bits) in
            [(x2, self.x_pattern, &self.x_free_bits), (y2, self.y_pattern, &self.y_free_bits)]
        {
            if mod_small(v, 1 << pattern.width) != pattern.value {
                return None;
            }
            let mut rest = v >> pattern.width << pattern.width;
            for &pos in bits {
                let set = rest.bit(pos as u64);
                if set {
                    rest.set_bit(pos as u64, false);
                }
                a.push(set);
            }
            if rest != BigUint::default() {
                return None;
            }
        }
        Some(a)
    }

    pub(super) fn to_json(&self) -> Value {
        object(vec![
            ("x_pattern", self.x_pattern.to_json()),
            ("y_pattern", self.y_pattern.to_json()),
            ("x_free_bits", decimal_list(&self.x_free_bits)),
            ("y_free_bits", decimal_list(&self.y_free_bits)),
        ])
    }

    pub(super) fn from_json(v: &Value) -> Result<Self, EncodeError> {
        let pattern = |field: &str| {
            Pattern::from_json(v.get(field).ok_or_else(|| EncodeError::Metadata(format!("missing `{field}`")))?)
        };
        Ok(Self {
            x_pattern: pattern("x_pattern")?,
            y_pattern: pattern("y_pattern")?,
            x_free_bits: field_num_list(v, "x_free_bits")?,
            y_free_bits: field_num_list(v, "y_free_bits")?,
        })
    }
}

/// Low-bit patterns of `(x², y²)` forced by `N mod 4` and the parity of `k`.
///
/// `N ≡ 3 (mod 4)`: `y² ≡ 1 (mod 8)`, `x² ≡ 4·(k mod 2) (mod 8)`.
/// `N ≡ 1 (mod 4)`: `y² ≡ 4·(k mod 2) (mod 16)`, `x² ≡ N + y² (mod 16)`.
pub fn pattern_for(n: &BigUint) -> Result<(Pattern, Pattern), EncodeError> {
    fermat_bounds(n, false)?;
    let k_odd = k_is_odd(n) as u64;
    if mod_small(n, 4) == 3 {
        Ok((Pattern { value: 4 * k_odd, width: 3 }, Pattern { value: 1, width: 3 }))
    } else {
        let y = 4 * k_odd;
        Ok((Pattern { value: (mod_small(n, 16) + y) % 16, width: 4 }, Pattern { value: y, width: 4 }))
    }
}

/// Encoding with only the mandatory 3- or 4-bit patterns.
pub fn encode_bit_pattern(n: &BigUint, bounds: &FermatBounds) -> Result<(QuboModel, BitPatternMap), EncodeError> {
    let (x_pattern, y_pattern) = pattern_for(n)?;
    Ok(build(n, bounds, x_pattern, y_pattern))
}

/// Splits the encoding into sub-problems that also fix `depth` further low
/// bits of `x²` (and, through `y² = x² - N`, of `y²`).
///
/// Each sub-problem takes one pair of residues modulo `2^(w+depth)` that are
/// both quadratic residues and differ by `N`; together they cover every
/// factorization the depth-0 model covers, each with `2·depth` fewer
/// variables. Depth 0 returns the single model of [`encode_bit_pattern`].
pub fn encode_bit_pattern_with_depth(
    n: &BigUint,
    bounds: &FermatBounds,
    depth: u32,
) -> Result<Vec<(QuboModel, BitPatternMap)>, EncodeError> {
    if depth > MAX_PATTERN_DEPTH {
        return Err(EncodeError::DepthTooLarge(depth));
    }
    let (x_base, y_base) = pattern_for(n)?;
    if depth == 0 {
        return Ok(vec![build(n, bounds, x_base, y_base)]);
    }
    let width = x_base.width + depth;
    let modulus = 1u64 << width;
    let squares: BTreeSet<u64> = (0..modulus).map(|z| z * z % modulus).collect();
    let n_mod = mod_small(n, modulus);
    let base_mask = (1u64 << x_base.width) - 1;
    let subproblems = squares
        .iter()
        .filter(|&&v| v & base_mask == x_base.value)
        .filter_map(|&v| {
            let u = (v + modulus - n_mod) % modulus;
            (u & base_mask == y_base.value && squares.contains(&u)).then_some((v, u))
        })
        .map(|(v, u)| build(n, bounds, Pattern { value: v, width }, Pattern { value: u, width }))
        .collect();
    Ok(subproblems)
}

fn build(n: &BigUint, bounds: &FermatBounds, x_pattern: Pattern, y_pattern: Pattern) -> (QuboModel, BitPatternMap) {
    let x_top = bitlen(&(&bounds.x_max * &bounds.x_max)) as u32;
    let y_top = bitlen(&(&bounds.y_max * &bounds.y_max + 1u32)) as u32;
    let map = BitPatternMap {
        x_pattern,
        y_pattern,
        x_free_bits: (x_pattern.width..x_top.max(x_pattern.width)).collect(),
        y_free_bits: (y_pattern.width..y_top.max(y_pattern.width)).collect(),
    };
    let nx = map.x_free_bits.len();
    let terms: Vec<(usize, BigInt)> = map
        .x_free_bits
        .iter()
        .enumerate()
        .map(|(i, &pos)| (i, BigInt::one() << pos))
        .chain(map.y_free_bits.iter().enumerate().map(|(j, &pos)| (nx + j, -(BigInt::one() << pos))))
        .collect();
    let constant = BigInt::from(x_pattern.value) - BigInt::from(y_pattern.value) - BigInt::from(n.clone());
    let mut model = QuboModel::new(map.num_vars());
    model.add_squared_linear(&terms, &constant, &BigUint::one()).expect("indices in range");
    (model, map)
}

/// `(√x′, √y′)` when both reassembled values are perfect squares.
///
/// Energy is not checked: the caller verifies `x² - y² = N`.
pub fn decode_bit_pattern(
    map: &BitPatternMap,
    assignment: &[bool],
) -> Result<Option<(BigUint, BigUint)>, EncodeError> {
    let (x2, y2) = map.values(assignment)?;
    Ok(is_perfect_square(&x2).zip(is_perfect_square(&y2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::tests::assignments;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn bounds(n: u64, balanced: bool) -> FermatBounds {
        fermat_bounds(&big(n), balanced).unwrap()
    }

    #[test]
    fn patterns_for_examples() {
        let (x, y) = pattern_for(&big(8_689_739)).unwrap();
        assert_eq!((x, y), (Pattern { value: 4, width: 3 }, Pattern { value: 1, width: 3 }));
        assert_eq!((8_749_764 % 8, 60_025 % 8), (4, 1));

        let (x, y) = pattern_for(&big(21)).unwrap();
        assert_eq!((x, y), (Pattern { value: 9, width: 4 }, Pattern { value: 4, width: 4 }));
        assert_eq!((25 % 16, 4 % 16), (9, 4));

        let (x, y) = pattern_for(&big(33)).unwrap();
        assert_eq!((x, y), (Pattern { value: 1, width: 4 }, Pattern { value: 0, width: 4 }));
        assert_eq!((49 % 16, 16 % 16), (1, 0));

        assert!(pattern_for(&big(34)).is_err());
        assert!(pattern_for(&big(7)).is_err());
    }

    /// Every representation `x² - y² = n` matches the pattern.
    #[test]
    fn patterns_hold_for_all_representations() {
        for n in (9..3000u64).step_by(2) {
            let (xp, yp) = pattern_for(&big(n)).unwrap();
            for d in (1..=n).take_while(|d| d * d <= n).filter(|d| n % d == 0) {
                let (x, y) = ((d + n / d) / 2, (n / d - d) / 2);
                assert_eq!((x * x) % (1 << xp.width), xp.value, "n={n} x={x}");
                assert_eq!((y * y) % (1 << yp.width), yp.value, "n={n} y={y}");
            }
        }
    }

    #[test]
    fn depth_zero_patterns_are_the_unique_residue_pair() {
        // brute force: residue pairs (v, u) of squares with v - u ≡ n, at the base width
        for n in (9..200u64).step_by(2) {
            let (xp, yp) = pattern_for(&big(n)).unwrap();
            let m = 1u64 << xp.width;
            let squares: BTreeSet<u64> = (0..m).map(|z| z * z % m).collect();
            let pairs: Vec<(u64, u64)> = squares
                .iter()
                .flat_map(|&v| squares.iter().map(move |&u| (v, u)))
                .filter(|&(v, u)| (v + m - u) % m == n % m)
                .filter(|&(v, _)| (v % 2 == 1) == (n % 4 == 1))
                .collect();
            assert_eq!(pairs, vec![(xp.value, yp.value)], "n={n}");
        }
    }

    #[test]
    fn headline_instance_ground_truth() {
        let n = big(8_689_739);
        let b = bounds(8_689_739, true);
        let (model, map) = encode_bit_pattern(&n, &b).unwrap();
        // x_max² = 3144² has 24 bits, y_max² + 1 = 1093² + 1 has 21 bits
        assert_eq!(bitlen(&(&b.x_max * &b.x_max)), 24);
        assert_eq!(map.x_free_bits, (3..24).collect::<Vec<_>>());
        assert_eq!(map.y_free_bits, (3..21).collect::<Vec<_>>());
        assert_eq!(model.num_vars(), (24 - 3) + (21 - 3));
        assert!(model.num_vars() <= 3 * 24);

        let a = map.assignment_for(&big(8_749_764), &big(60_025)).unwrap();
        assert_eq!(model.energy(&a).unwrap(), 0.into());
        assert_eq!(decode_bit_pattern(&map, &a).unwrap(), Some((big(2958), big(245))));
    }

    #[test]
    fn n21_ground_truth() {
        let n = big(21);
        let (model, map) = encode_bit_pattern(&n, &bounds(21, false)).unwrap();
        let a = map.assignment_for(&big(25), &big(4)).unwrap();
        // 25 = 0b11001: only bit 4 above the 4-bit pattern
        let x_bits: Vec<u32> = map.x_free_bits.iter().zip(&a).filter(|(_, &b)| b).map(|(&p, _)| p).collect();
        assert_eq!(x_bits, vec![4]);
        assert!(a[map.x_free_bits.len()..].iter().all(|&b| !b));
        assert_eq!(model.energy(&a).unwrap(), 0.into());
    }

    #[test]
    fn all_zero_assignment_when_k_even() {
        // n ≡ 3 (mod 4) with k even means n ≡ 7 (mod 8)
        for n in [15u64, 23, 31, 39, 47, 55, 119] {
            let (model, map) = encode_bit_pattern(&big(n), &bounds(n, false)).unwrap();
            assert_eq!(map.x_pattern.value, 0);
            let zeros = vec![false; map.num_vars()];
            assert_eq!(map.values(&zeros).unwrap(), (big(0), big(1)));
            assert_eq!(model.energy(&zeros).unwrap(), BigInt::from((n + 1) * (n + 1)));
        }
    }

    #[test]
    fn all_zero_decode_does_not_check_energy() {
        // n ≡ 3 (mod 8): k odd, x′ = 4, y′ = 1, both squares but 4 - 1 ≠ n
        let (_, map) = encode_bit_pattern(&big(27), &bounds(27, false)).unwrap();
        let zeros = vec![false; map.num_vars()];
        assert_eq!(decode_bit_pattern(&map, &zeros).unwrap(), Some((big(2), big(1))));
    }

    #[test]
    fn zero_energy_non_square_witness() {
        // 21 encodes to a single variable whose only zero state is 5² - 2²,
        // so enumerate 493 = 17·29 instead
        let (_, tiny) = encode_bit_pattern(&big(21), &bounds(21, false)).unwrap();
        assert_eq!(tiny.num_vars(), 1);
        let n = big(493);
        let (model, map) = encode_bit_pattern(&n, &bounds(493, true)).unwrap();
        let zero_states: Vec<Vec<bool>> =
            assignments(map.num_vars()).filter(|a| model.energy(a).unwrap() == 0.into()).collect();
        assert!(!zero_states.is_empty());
        let rejected = zero_states.iter().filter(|a| decode_bit_pattern(&map, a).unwrap().is_none()).count();
        assert!(rejected > 0, "every zero-energy state decoded to squares");
        for a in &zero_states {
            let (x2, y2) = map.values(a).unwrap();
            assert_eq!(x2 - y2, n.clone());
        }
    }

    #[test]
    fn depth_subproblems_partition_the_depth_zero_ground_states() {
        for n in [493u64, 391, 851, 1147, 1763] {
            let nb = big(n);
            let b = bounds(n, false);
            let (model, map) = encode_bit_pattern(&nb, &b).unwrap();
            if map.num_vars() > 18 {
                continue;
            }
            let square_pairs = |model: &QuboModel, map: &BitPatternMap| -> BTreeSet<(BigUint, BigUint)> {
                assignments(map.num_vars())
                    .filter(|a| model.energy(a).unwrap() == 0.into())
                    .filter_map(|a| decode_bit_pattern(map, &a).unwrap())
                    .collect()
            };
            let want = square_pairs(&model, &map);
            assert!(!want.is_empty(), "n={n}");
            for depth in 1..=3 {
                let subs = encode_bit_pattern_with_depth(&nb, &b, depth).unwrap();
                let mut got = BTreeSet::new();
                for (m, mp) in &subs {
                    assert_eq!(mp.num_vars() + 2 * depth as usize, map.num_vars());
                    got.extend(square_pairs(m, mp));
                }
                assert_eq!(got, want, "n={n} depth={depth}");
            }
        }
    }

    #[test]
    fn depth_is_capped() {
        let n = big(493);
        let b = bounds(493, false);
        assert_eq!(encode_bit_pattern_with_depth(&n, &b, MAX_PATTERN_DEPTH + 1), Err(EncodeError::DepthTooLarge(17)));
        assert_eq!(encode_bit_pattern_with_depth(&n, &b, 0).unwrap().len(), 1);
    }

    #[test]
    fn variable_count_is_logarithmic() {
        for n in [8_689_739u64, 1_000_003 * 999_983, 65_537 * 65_539] {
            let nb = big(n);
            let (model, _) = encode_bit_pattern(&nb, &fermat_bounds(&nb, true).unwrap()).unwrap();
            assert!(model.num_vars() as u64 <= 3 * bitlen(&nb), "n={n}");
        }
    }
}

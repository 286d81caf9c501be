//! Squares as prefix sums of consecutive odd numbers.
//!
//! With `r0 = ⌈√N⌉`, `r0² + Σ_{i=r0+1}^{s} (2i - 1) = s²`, so a prefix of
//! the x-chain selecting `2(r0+1)-1, 2(r0+2)-1, ...` always lands on a
//! square, and likewise the y-chain `1, 3, 5, ...` starting from zero.
//! Penalties `P·(v_next - v_next·v_prev)` keep each chain a prefix.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde_json::Value;

use super::{check_len, field_big, field_num, object, EncodeError};
use crate::fermat::FermatBounds;
use crate::integers::ceil_sqrt;
use crate::qubo::QuboModel;

pub const DEFAULT_VAR_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumOfOddsMap {
    /// `⌈√N⌉`, the first x the chain can reach.
    pub r0: BigUint,
    pub n_x: usize,
    pub n_y: usize,
    /// `r0²`.
    pub base: BigUint,
    pub penalty_weight: BigUint,
}

impl SumOfOddsMap {
    pub fn num_vars(&self) -> usize {
        self.n_x + self.n_y
    }

    /// Odd number selected by x-chain variable `i`.
    pub fn x_odd(&self, i: usize) -> BigUint {
        ((&self.r0 + 1u32 + i) << 1u32) - 1u32
    }

    /// Odd number selected by y-chain variable `j`.
    pub fn y_odd(j: usize) -> BigUint {
        BigUint::from(2 * j as u128 + 1)
    }

    /// Prefix assignment reaching `(x, y)`, if both lie within the chains.
    pub fn assignment_for(&self, x: &BigUint, y: &BigUint) -> Option<Vec<bool>> {
        if *x < self.r0 {
            return None;
        }
        let cx = (x - &self.r0).to_usize()?;
        let cy = y.to_usize()?;
        if cx > self.n_x || cy > self.n_y {
            return None;
        }
        let mut a = vec![false; self.num_vars()];
        a[..cx].fill(true);
        a[self.n_x..self.n_x + cy].fill(true);
        Some(a)
    }

    pub(super) fn to_json(&self) -> Value {
        object(vec![
            ("r0", Value::String(self.r0.to_string())),
            ("n_x", Value::String(self.n_x.to_string())),
            ("n_y", Value::String(self.n_y.to_string())),
            ("base", Value::String(self.base.to_string())),
            ("penalty_weight", Value::String(self.penalty_weight.to_string())),
        ])
    }

    pub(super) fn from_json(v: &Value) -> Result<Self, EncodeError> {
        let map = Self {
            r0: field_big(v, "r0")?,
            n_x: field_num(v, "n_x")?,
            n_y: field_num(v, "n_y")?,
            base: field_big(v, "base")?,
            penalty_weight: field_big(v, "penalty_weight")?,
        };
        if map.base != &map.r0 * &map.r0 {
            return Err(EncodeError::Metadata("base must equal r0²".into()));
        }
        Ok(map)
    }
}

/// `4·N² + 1`.
pub fn default_penalty(n: &BigUint) -> BigUint {
    ((n * n) << 2u32) + 1u32
}

pub fn encode_sum_of_odds(
    n: &BigUint,
    bounds: &FermatBounds,
    penalty_weight: &BigUint,
) -> Result<(QuboModel, SumOfOddsMap), EncodeError> {
    encode_sum_of_odds_with_cap(n, bounds, penalty_weight, DEFAULT_VAR_CAP)
}

pub fn encode_sum_of_odds_with_cap(
    n: &BigUint,
    bounds: &FermatBounds,
    penalty_weight: &BigUint,
    var_cap: usize,
) -> Result<(QuboModel, SumOfOddsMap), EncodeError> {
    // validates N (odd, >= 9)
    crate::fermat::fermat_bounds(n, false)?;
    if penalty_weight.is_zero() {
        return Err(EncodeError::Metadata("penalty weight must be at least 1".into()));
    }
    let r0 = ceil_sqrt(n);
    let span_x = if bounds.x_max > r0 { &bounds.x_max - &r0 } else { BigUint::zero() };
    let count = span_x.to_u128().zip(bounds.y_max.to_u128()).map_or(u128::MAX, |(a, b)| a.saturating_add(b));
    if count > var_cap as u128 {
        return Err(EncodeError::TooManyVariables { count, cap: var_cap });
    }
    let n_x = span_x.to_usize().expect("bounded by cap");
    let n_y = bounds.y_max.to_usize().expect("bounded by cap");
    let map = SumOfOddsMap { base: &r0 * &r0, r0, n_x, n_y, penalty_weight: penalty_weight.clone() };

    let mut model = QuboModel::new(map.num_vars());
    let terms: Vec<(usize, BigInt)> = (0..n_x)
        .map(|i| (i, BigInt::from(map.x_odd(i))))
        .chain((0..n_y).map(|j| (n_x + j, -BigInt::from(SumOfOddsMap::y_odd(j)))))
        .collect();
    let constant = BigInt::from(map.base.clone()) - BigInt::from(n.clone());
    model.add_squared_linear(&terms, &constant, &BigUint::from(1u32)).expect("indices in range");

    let p = BigInt::from(penalty_weight.clone());
    for (start, len) in [(0, n_x), (n_x, n_y)] {
        for k in 1..len {
            let (prev, next) = (start + k - 1, start + k);
            model.add_linear(next, p.clone()).expect("index in range");
            model.add_quadratic(prev, next, -p.clone()).expect("index in range");
        }
    }
    Ok((model, map))
}

/// `(x², y²)` from a prefix-valid assignment, `None` if a chain has a gap.
pub fn decode_sum_of_odds(
    map: &SumOfOddsMap,
    assignment: &[bool],
) -> Result<Option<(BigUint, BigUint)>, EncodeError> {
    check_len(map.num_vars(), assignment)?;
    let (xs, ys) = assignment.split_at(map.n_x);
    let is_prefix = |chain: &[bool]| chain.windows(2).all(|w| w[0] || !w[1]);
    if !is_prefix(xs) || !is_prefix(ys) {
        return Ok(None);
    }
    let x2 = xs.iter().enumerate().filter(|(_, &b)| b).fold(map.base.clone(), |acc, (i, _)| acc + map.x_odd(i));
    let y2 = ys.iter().enumerate().filter(|(_, &b)| b).fold(BigUint::zero(), |acc, (j, _)| acc + SumOfOddsMap::y_odd(j));
    Ok(Some((x2, y2)))
}

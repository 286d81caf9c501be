//! Fermat's difference-of-squares search with residue-class acceleration.
//!
//! Every method is a walk over the admissible values of `x` in
//! `[x_min, x_max]`: the naive method admits all of them, the filters below
//! admit a fixed set of residues modulo a small modulus, and the wheel
//! combines several filters through their least common multiple.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::integers::{bitlen, ceil_sqrt, is_perfect_square, isqrt, mod_small};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FermatError {
    #[error("input must be odd")]
    EvenInput,
    #[error("input must be at least 9")]
    TooSmall,
    #[error("input is divisible by 3; the mod-6 filter needs both factors above 3")]
    DivisibleByThree,
    #[error("residue filters have an empty intersection")]
    EmptyWheel,
    #[error("no factorization with x <= {x_max}")]
    BoundExceeded { x_max: BigUint },
}

/// Search interval for `x` (and the implied bound on `y`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FermatBounds {
    pub x_min: BigUint,
    pub x_max: BigUint,
    pub y_max: BigUint,
    /// Assumed smallest prime factor.
    pub delta_min: BigUint,
}

/// Admissible residues of `x` modulo `modulus`, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueFilter {
    modulus: u64,
    admissible: Vec<u64>,
}

impl ResidueFilter {
    /// Panics if `admissible` is empty or holds a value `>= modulus`.
    pub fn new(modulus: u64, mut admissible: Vec<u64>) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        assert!(!admissible.is_empty(), "filter admits no residue");
        assert!(admissible.iter().all(|&r| r < modulus), "residue out of range");
        admissible.sort_unstable();
        admissible.dedup();
        Self { modulus, admissible }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn admissible(&self) -> &[u64] {
        &self.admissible
    }

    pub fn admits(&self, x: &BigUint) -> bool {
        self.admits_residue(mod_small(x, self.modulus))
    }

    fn admits_residue(&self, r: u64) -> bool {
        self.admissible.binary_search(&(r % self.modulus)).is_ok()
    }
}

/// Intersection of several filters over one period `W`, iterated by gaps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueWheel {
    modulus: u64,
    residues: Vec<u64>,
    // gaps[i] = distance from residues[i] to the next admissible value
    gaps: Vec<u64>,
}

impl ResidueWheel {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    /// Admissible values `>= start`, ascending, without end.
    pub fn iter_from(&self, start: &BigUint) -> WheelIter<'_> {
        let s = mod_small(start, self.modulus);
        let base = start - s;
        let (idx, next) = match self.residues.iter().position(|&r| r >= s) {
            Some(i) => (i, base + self.residues[i]),
            None => (0, base + self.modulus + self.residues[0]),
        };
        WheelIter { wheel: self, idx, next }
    }
}

pub struct WheelIter<'a> {
    wheel: &'a ResidueWheel,
    idx: usize,
    next: BigUint,
}

impl Iterator for WheelIter<'_> {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        let gap = self.wheel.gaps[self.idx];
        self.idx = (self.idx + 1) % self.wheel.gaps.len();
        let cur = std::mem::replace(&mut self.next, BigUint::zero());
        self.next = &cur + gap;
        Some(cur)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub p: BigUint,
    pub q: BigUint,
    pub x: BigUint,
    pub y: BigUint,
    /// Perfect-square tests performed.
    pub iterations: u64,
}

impl Factorization {
    /// Builds `p = x + y`, `q = x - y`; `y <= x` is required.
    pub fn from_xy(x: BigUint, y: BigUint, iterations: u64) -> Self {
        let p = &x + &y;
        let q = &x - &y;
        Self { p, q, x, y, iterations }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Naive,
    Mod4,
    Mod6,
    Mod8_16,
    Wheel,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Naive, Method::Mod4, Method::Mod6, Method::Mod8_16, Method::Wheel];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Mod4 => "mod4",
            Method::Mod6 => "mod6",
            Method::Mod8_16 => "mod8-16",
            Method::Wheel => "wheel",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown method `{s}` (expected naive, mod4, mod6, mod8-16 or wheel)"))
    }
}

fn check_odd(n: &BigUint) -> Result<(), FermatError> {
    if n.is_even() {
        Err(FermatError::EvenInput)
    } else {
        Ok(())
    }
}

fn check_odd_at_least_9(n: &BigUint) -> Result<(), FermatError> {
    check_odd(n)?;
    if *n < BigUint::from(9u32) {
        return Err(FermatError::TooSmall);
    }
    Ok(())
}

/// Search bounds for odd `n >= 9`.
///
/// Without `assume_balanced` the smallest factor is only assumed to be at
/// least 3. With it, both factors are taken to have `⌈bitlen(n)/2⌉` bits,
/// so the smallest is at least `2^(⌈bitlen(n)/2⌉-1) + 1`.
pub fn fermat_bounds(n: &BigUint, assume_balanced: bool) -> Result<FermatBounds, FermatError> {
    check_odd_at_least_9(n)?;
    let delta_min = if assume_balanced {
        let half = bitlen(n).div_ceil(2);
        (BigUint::one() << (half - 1)) + 1u32
    } else {
        BigUint::from(3u32)
    };
    let x_min = ceil_sqrt(n);
    let mut x_max = (n + &delta_min * &delta_min) / (&delta_min << 1u32);
    // floor of the real bound can land one below ⌈√n⌉
    if x_max < x_min {
        x_max = x_min.clone();
    }
    let y_max = isqrt(&(&x_max * &x_max - n));
    Ok(FermatBounds { x_min, x_max, y_max, delta_min })
}

/// Parity of `x`: odd when `n ≡ 1 (mod 4)`, even when `n ≡ 3 (mod 4)`.
pub fn filter_mod4(n: &BigUint) -> Result<ResidueFilter, FermatError> {
    check_odd(n)?;
    let admissible = if mod_small(n, 4) == 1 { 1 } else { 0 };
    Ok(ResidueFilter::new(2, vec![admissible]))
}

/// `x mod 3` from `n mod 6`, valid when neither factor is divisible by 3.
///
/// `n ≡ 1 (mod 6)` forces `p + q ≡ ±2 (mod 6)`, so `x ≡ ±1 (mod 3)`;
/// `n ≡ 5 (mod 6)` forces `p + q ≡ 0 (mod 6)`, so `x ≡ 0 (mod 3)`.
pub fn filter_mod6(n: &BigUint) -> Result<ResidueFilter, FermatError> {
    check_odd(n)?;
    match mod_small(n, 6) {
        1 => Ok(ResidueFilter::new(3, vec![1, 2])),
        5 => Ok(ResidueFilter::new(3, vec![0])),
        _ => Err(FermatError::DivisibleByThree),
    }
}

/// Residue class of `x` fixed by `n mod 4` and the parity of `k = (n ∓ 1)/4`.
///
/// For `n ≡ 3 (mod 4)`, `y` is odd so `y² ≡ 1 (mod 8)` and
/// `x² ≡ 4·(k mod 2) (mod 8)`, giving `x ≡ 0` or `2 (mod 4)`.
/// For `n ≡ 1 (mod 4)`, `y` is even and `x² ≡ n + 4·(k mod 2) (mod 16)`,
/// which is 1 (`x ≡ ±1 mod 8`) or 9 (`x ≡ ±3 mod 8`).
pub fn filter_mod8_16(n: &BigUint) -> Result<ResidueFilter, FermatError> {
    check_odd_at_least_9(n)?;
    let k_odd = k_is_odd(n);
    if mod_small(n, 4) == 3 {
        Ok(ResidueFilter::new(4, vec![if k_odd { 2 } else { 0 }]))
    } else {
        let x_sq = (mod_small(n, 16) + if k_odd { 4 } else { 0 }) % 16;
        let admissible = if x_sq == 1 { vec![1, 7] } else { vec![3, 5] };
        Ok(ResidueFilter::new(8, admissible))
    }
}

/// Parity of `k`, where `k = (n+1)/4` for `n ≡ 3 (mod 4)` and `(n-1)/4` otherwise.
pub(crate) fn k_is_odd(n: &BigUint) -> bool {
    let r = mod_small(n, 8);
    // k = (n ± 1)/4, so k mod 2 is decided by n mod 8
    match r {
        1 | 7 => false,
        3 | 5 => true,
        _ => unreachable!("n must be odd"),
    }
}

/// Combines filters over `lcm` of their moduli.
pub fn build_wheel(filters: &[ResidueFilter]) -> Result<ResidueWheel, FermatError> {
    let modulus = filters.iter().fold(1u64, |acc, f| acc.lcm(&f.modulus));
    let residues: Vec<u64> = (0..modulus)
        .filter(|&r| filters.iter().all(|f| f.admits_residue(r)))
        .collect();
    if residues.is_empty() {
        return Err(FermatError::EmptyWheel);
    }
    let gaps = residues
        .iter()
        .enumerate()
        .map(|(i, &r)| match residues.get(i + 1) {
            Some(&next) => next - r,
            None => modulus - r + residues[0],
        })
        .collect();
    Ok(ResidueWheel { modulus, residues, gaps })
}

/// The wheel a method walks for `n`.
pub fn method_wheel(n: &BigUint, method: Method) -> Result<ResidueWheel, FermatError> {
    let filters = match method {
        Method::Naive => vec![ResidueFilter::new(1, vec![0])],
        Method::Mod4 => vec![filter_mod4(n)?],
        Method::Mod6 => vec![filter_mod6(n)?],
        Method::Mod8_16 => vec![filter_mod8_16(n)?],
        Method::Wheel => {
            let mut fs = vec![filter_mod8_16(n)?];
            if let Ok(f) = filter_mod6(n) {
                fs.push(f);
            }
            fs
        }
    };
    build_wheel(&filters)
}

/// Factors odd `n >= 9` as `x² - y²` with the smallest admissible `x`.
pub fn factor_fermat(n: &BigUint, method: Method, assume_balanced: bool) -> Result<Factorization, FermatError> {
    check_odd_at_least_9(n)?;
    if let Some(root) = is_perfect_square(n) {
        return Ok(Factorization::from_xy(root, BigUint::zero(), 1));
    }
    let wheel = method_wheel(n, method)?;
    let bounds = fermat_bounds(n, assume_balanced)?;
    search(n, &wheel, &bounds)
}

/// Walks `wheel` across `[bounds.x_min, bounds.x_max]`.
pub fn search(n: &BigUint, wheel: &ResidueWheel, bounds: &FermatBounds) -> Result<Factorization, FermatError> {
    let mut iterations = 0u64;
    for x in wheel.iter_from(&bounds.x_min) {
        if x > bounds.x_max {
            break;
        }
        iterations += 1;
        let rem = &x * &x - n;
        if let Some(y) = is_perfect_square(&rem) {
            return Ok(Factorization::from_xy(x, y, iterations));
        }
    }
    Err(FermatError::BoundExceeded { x_max: bounds.x_max.clone() })
}

/// Smallest prime divisor of `n` not above `limit`, with its cofactor.
pub fn trial_divide_small(n: &BigUint, limit: u64) -> Option<(u64, BigUint)> {
    if n.is_zero() {
        return None;
    }
    let cap = n.to_u64().map_or(limit, |v| v.min(limit));
    std::iter::once(2)
        .chain((3..).step_by(2))
        .take_while(|&d| d <= cap)
        .find(|&d| mod_small(n, d) == 0)
        .map(|d| (d, n / d))
}

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{accumulate, QuboError, QuboModel};

/// `offset + Σ h_i·σ_i + Σ J_ij·σ_i·σ_j` over `σ ∈ {-1,+1}ⁿ`.
///
/// Substituting `x = (1+σ)/2` only introduces halves and quarters, so every
/// coefficient is stored multiplied by 4.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IsingModel {
    num_spins: usize,
    h: BTreeMap<usize, BigInt>,
    j: BTreeMap<(usize, usize), BigInt>,
    offset: BigInt,
}

impl IsingModel {
    pub fn num_spins(&self) -> usize {
        self.num_spins
    }

    /// Fields scaled by 4.
    pub fn h_quarters(&self) -> &BTreeMap<usize, BigInt> {
        &self.h
    }

    /// Couplings scaled by 4.
    pub fn j_quarters(&self) -> &BTreeMap<(usize, usize), BigInt> {
        &self.j
    }

    /// Offset scaled by 4.
    pub fn offset_quarters(&self) -> &BigInt {
        &self.offset
    }

    pub(super) fn from_qubo(model: &QuboModel) -> Self {
        let mut h = BTreeMap::new();
        let mut j = BTreeMap::new();
        let mut offset = model.offset() * BigInt::from(4);
        // a·x = a/2 + (a/2)·σ
        for (&i, a) in model.linear() {
            let two_a = a * BigInt::from(2);
            accumulate(&mut h, i, two_a.clone());
            offset += two_a;
        }
        // b·x_i·x_j = (b/4)·(1 + σ_i + σ_j + σ_i·σ_j)
        for (&(a, b), c) in model.quadratic() {
            accumulate(&mut j, (a, b), c.clone());
            accumulate(&mut h, a, c.clone());
            accumulate(&mut h, b, c.clone());
            offset += c;
        }
        Self { num_spins: model.num_vars(), h, j, offset }
    }

    /// Inverse substitution `σ = 2x - 1`; fails unless every QUBO coefficient is integral.
    pub fn to_qubo(&self) -> Result<QuboModel, QuboError> {
        // everything below is in quarter units until the final division
        let mut linear: BTreeMap<usize, BigInt> = BTreeMap::new();
        let mut quadratic = BTreeMap::new();
        let mut offset = self.offset.clone();
        for (&i, h) in &self.h {
            accumulate(&mut linear, i, h * BigInt::from(2));
            offset -= h;
        }
        for (&(a, b), c) in &self.j {
            accumulate(&mut quadratic, (a, b), c * BigInt::from(4));
            accumulate(&mut linear, a, c * BigInt::from(-2));
            accumulate(&mut linear, b, c * BigInt::from(-2));
            offset += c;
        }
        let quarter = |v: BigInt| -> Result<BigInt, QuboError> {
            let (q, r) = v.div_rem(&BigInt::from(4));
            if r.is_zero() {
                Ok(q)
            } else {
                Err(QuboError::NonIntegerCoefficient)
            }
        };
        let linear = linear.into_iter().map(|(k, v)| Ok((k, quarter(v)?))).collect::<Result<_, QuboError>>()?;
        let quadratic =
            quadratic.into_iter().map(|(k, v)| Ok((k, quarter(v)?))).collect::<Result<_, QuboError>>()?;
        QuboModel::from_parts(self.num_spins, linear, quadratic, quarter(offset)?)
    }

    /// Four times the energy of `spins`, each of which must be ±1.
    pub fn energy_quarters(&self, spins: &[i8]) -> Result<BigInt, QuboError> {
        if spins.len() != self.num_spins {
            return Err(QuboError::LengthMismatch { expected: self.num_spins, got: spins.len() });
        }
        if let Some(&bad) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(QuboError::InvalidSpin(bad));
        }
        let mut e = self.offset.clone();
        for (&i, h) in &self.h {
            e += h * BigInt::from(spins[i]);
        }
        for (&(a, b), c) in &self.j {
            e += c * BigInt::from(spins[a] * spins[b]);
        }
        Ok(e)
    }
}

impl QuboModel {
    pub fn from_ising(model: &IsingModel) -> Result<QuboModel, QuboError> {
        model.to_qubo()
    }
}

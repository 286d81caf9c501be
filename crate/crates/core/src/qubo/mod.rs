//! Exact-integer QUBO models.
//!
//! Coefficients are arbitrary-precision integers. The squared objectives
//! built here reach roughly `N²`, which is past the point where `f64`
//! coefficients keep a unit energy gap.

mod document;
mod ising;

pub use document::{ParseError, QuboDocument, FORMAT_VERSION};
pub use ising::IsingModel;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuboError {
    #[error("variable index {index} out of range for {num_vars} variables")]
    IndexOutOfRange { index: usize, num_vars: usize },
    #[error("assignment has {got} entries, model has {expected} variables")]
    LengthMismatch { expected: usize, got: usize },
    #[error("penalty weight must be at least 1")]
    ZeroWeight,
    #[error("spin values must be +1 or -1, got {0}")]
    InvalidSpin(i8),
    #[error("coefficient is not an integer after conversion")]
    NonIntegerCoefficient,
}

/// `offset + Σ linear[i]·x_i + Σ quadratic[(i,j)]·x_i·x_j` over `x ∈ {0,1}ⁿ`.
///
/// Quadratic keys always satisfy `i < j`; zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QuboModel {
    num_vars: usize,
    linear: BTreeMap<usize, BigInt>,
    quadratic: BTreeMap<(usize, usize), BigInt>,
    offset: BigInt,
}

fn accumulate<K: Ord>(map: &mut BTreeMap<K, BigInt>, key: K, value: BigInt) {
    if value.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(value);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += value;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl QuboModel {
    pub fn new(num_vars: usize) -> Self {
        Self { num_vars, ..Self::default() }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn linear(&self) -> &BTreeMap<usize, BigInt> {
        &self.linear
    }

    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), BigInt> {
        &self.quadratic
    }

    pub fn offset(&self) -> &BigInt {
        &self.offset
    }

    fn check_index(&self, index: usize) -> Result<(), QuboError> {
        if index >= self.num_vars {
            Err(QuboError::IndexOutOfRange { index, num_vars: self.num_vars })
        } else {
            Ok(())
        }
    }

    pub fn add_offset(&mut self, value: BigInt) {
        self.offset += value;
    }

    pub fn add_linear(&mut self, i: usize, value: BigInt) -> Result<(), QuboError> {
        self.check_index(i)?;
        accumulate(&mut self.linear, i, value);
        Ok(())
    }

    /// Adds `value·x_i·x_j`; a diagonal term folds into the linear table since `x² = x`.
    pub fn add_quadratic(&mut self, i: usize, j: usize, value: BigInt) -> Result<(), QuboError> {
        self.check_index(i)?;
        self.check_index(j)?;
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => accumulate(&mut self.linear, i, value),
            std::cmp::Ordering::Less => accumulate(&mut self.quadratic, (i, j), value),
            std::cmp::Ordering::Greater => accumulate(&mut self.quadratic, (j, i), value),
        }
        Ok(())
    }

    /// Adds `weight·(Σ c_v·v + constant)²`, expanded with `v² = v`.
    ///
    /// Repeated indices in `terms` are merged before expansion.
    pub fn add_squared_linear(
        &mut self,
        terms: &[(usize, BigInt)],
        constant: &BigInt,
        weight: &BigUint,
    ) -> Result<(), QuboError> {
        if weight.is_zero() {
            return Err(QuboError::ZeroWeight);
        }
        let mut merged: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (i, c) in terms {
            self.check_index(*i)?;
            *merged.entry(*i).or_default() += c;
        }
        merged.retain(|_, c| !c.is_zero());
        let w = BigInt::from(weight.clone());
        let merged: Vec<(usize, BigInt)> = merged.into_iter().collect();

        for (idx, (i, ci)) in merged.iter().enumerate() {
            let lin = &w * (ci * ci + BigInt::from(2) * constant * ci);
            accumulate(&mut self.linear, *i, lin);
            for (j, cj) in &merged[idx + 1..] {
                accumulate(&mut self.quadratic, (*i, *j), &w * BigInt::from(2) * ci * cj);
            }
        }
        self.offset += &w * constant * constant;
        Ok(())
    }

    /// Exact energy of `assignment`, offset included.
    pub fn energy(&self, assignment: &[bool]) -> Result<BigInt, QuboError> {
        if assignment.len() != self.num_vars {
            return Err(QuboError::LengthMismatch { expected: self.num_vars, got: assignment.len() });
        }
        let mut e = self.offset.clone();
        for (&i, c) in &self.linear {
            if assignment[i] {
                e += c;
            }
        }
        for (&(i, j), c) in &self.quadratic {
            if assignment[i] && assignment[j] {
                e += c;
            }
        }
        Ok(e)
    }

    /// Sum of absolute values of every coefficient and the offset.
    pub fn coefficient_mass(&self) -> BigInt {
        self.linear.values().chain(self.quadratic.values()).map(|c| c.abs()).sum::<BigInt>() + self.offset.abs()
    }

    pub fn to_ising(&self) -> IsingModel {
        IsingModel::from_qubo(self)
    }

    pub(crate) fn from_parts(
        num_vars: usize,
        linear: BTreeMap<usize, BigInt>,
        quadratic: BTreeMap<(usize, usize), BigInt>,
        offset: BigInt,
    ) -> Result<Self, QuboError> {
        let mut model = Self::new(num_vars);
        for (i, c) in linear {
            model.add_linear(i, c)?;
        }
        for ((i, j), c) in quadratic {
            model.add_quadratic(i, j, c)?;
        }
        model.offset = offset;
        Ok(model)
    }
}

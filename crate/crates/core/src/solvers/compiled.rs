use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::SolveError;
use crate::qubo::QuboModel;

/// Coefficient mass must stay below this so no partial sum can overflow.
const MASS_LIMIT_BITS: u64 = 120;

/// `i128` copy of a model with adjacency lists for single-flip updates.
#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    pub(crate) linear: Vec<i128>,
    pub(crate) adj: Vec<Vec<(usize, i128)>>,
    pub(crate) offset: i128,
}

impl Compiled {
    pub(crate) fn new(model: &QuboModel) -> Result<Self, SolveError> {
        if model.coefficient_mass().bits() > MASS_LIMIT_BITS {
            return Err(SolveError::CoefficientOverflow);
        }
        let to_i128 = |c: &BigInt| c.to_i128().expect("bounded by mass check");
        let n = model.num_vars();
        let mut linear = vec![0; n];
        for (&i, c) in model.linear() {
            linear[i] = to_i128(c);
        }
        let mut adj = vec![Vec::new(); n];
        for (&(i, j), c) in model.quadratic() {
            let c = to_i128(c);
            adj[i].push((j, c));
            adj[j].push((i, c));
        }
        Ok(Self { linear, adj, offset: to_i128(model.offset()) })
    }

    pub(crate) fn num_vars(&self) -> usize {
        self.linear.len()
    }

    pub(crate) fn energy(&self, bits: &[bool]) -> i128 {
        let mut e = self.offset;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                e += self.linear[i];
                e += self.adj[i].iter().filter(|&&(j, _)| j > i && bits[j]).map(|&(_, c)| c).sum::<i128>();
            }
        }
        e
    }
}

/// Assignment plus local fields `field_i = linear_i + Σ_j Q_ij·x_j`.
#[derive(Debug, Clone)]
pub(crate) struct State<'a> {
    model: &'a Compiled,
    pub(crate) bits: Vec<bool>,
    field: Vec<i128>,
    pub(crate) energy: i128,
}

impl<'a> State<'a> {
    pub(crate) fn new(model: &'a Compiled, bits: Vec<bool>) -> Self {
        let mut field = model.linear.clone();
        for (i, &b) in bits.iter().enumerate() {
            if b {
                for &(j, c) in &model.adj[i] {
                    field[j] += c;
                }
            }
        }
        let energy = model.energy(&bits);
        Self { model, bits, field, energy }
    }

    /// Energy change of flipping bit `i`.
    #[inline]
    pub(crate) fn delta(&self, i: usize) -> i128 {
        if self.bits[i] {
            -self.field[i]
        } else {
            self.field[i]
        }
    }

    #[inline]
    pub(crate) fn flip(&mut self, i: usize) {
        let d = self.delta(i);
        self.energy += d;
        let turning_on = !self.bits[i];
        self.bits[i] = turning_on;
        for &(j, c) in &self.model.adj[i] {
            if turning_on {
                self.field[j] += c;
            } else {
                self.field[j] -= c;
            }
        }
    }
}

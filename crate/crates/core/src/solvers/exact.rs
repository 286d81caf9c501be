use super::compiled::{Compiled, State};
use super::{SampleSet, SolveError};
use crate::qubo::QuboModel;

pub const DEFAULT_VAR_LIMIT: usize = 26;

/// Enumerates all `2ⁿ` assignments in Gray-code order and returns every
/// assignment of minimum energy.
pub fn solve_exact(model: &QuboModel, var_limit: usize) -> Result<SampleSet, SolveError> {
    let n = model.num_vars();
    if n > var_limit || n >= 64 {
        return Err(SolveError::TooLarge { num_vars: n, limit: var_limit.min(63) });
    }
    let compiled = Compiled::new(model)?;
    let mut state = State::new(&compiled, vec![false; n]);
    let mut best = state.energy;
    // bit i of a mask is variable i
    let mut mask = 0u64;
    let mut ground = vec![0u64];
    for step in 1u64..1 << n {
        let i = step.trailing_zeros() as usize;
        state.flip(i);
        mask ^= 1 << i;
        if state.energy < best {
            best = state.energy;
            ground.clear();
            ground.push(mask);
        } else if state.energy == best {
            ground.push(mask);
        }
    }
    let raw = ground.into_iter().map(|m| ((0..n).map(|i| m >> i & 1 == 1).collect(), 1));
    Ok(SampleSet::from_assignments(model, raw))
}

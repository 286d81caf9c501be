//! Seeded simulated annealing with single-bit Metropolis updates.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::compiled::{Compiled, State};
use super::{SampleSet, SolveError};
use crate::qubo::QuboModel;

/// Flips probed when estimating the largest single-flip delta.
const PROBE_FLIPS: usize = 64;
/// `exp(-x)` below this argument's cutoff is treated as zero.
const MAX_EXPONENT: f64 = 50.0;
/// Chains run in parallel per batch; results merge in chain order.
const BATCH: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct SaParams {
    pub sweeps: usize,
    pub restarts: usize,
    /// `(beta_initial, beta_final)`; `None` derives it from the model with
    /// [`auto_beta_range`].
    pub beta_range: Option<(f64, f64)>,
    pub seed: u64,
    pub samples_kept: usize,
}

impl Default for SaParams {
    fn default() -> Self {
        Self { sweeps: 256, restarts: 32, beta_range: None, seed: 0, samples_kept: 64 }
    }
}

impl SaParams {
    fn validate(&self) -> Result<(), SolveError> {
        let bad = |msg: &str| Err(SolveError::InvalidParams(msg.to_owned()));
        if self.sweeps == 0 {
            return bad("sweeps must be at least 1");
        }
        if self.restarts == 0 {
            return bad("restarts must be at least 1");
        }
        if self.samples_kept == 0 {
            return bad("samples_kept must be at least 1");
        }
        if let Some((lo, hi)) = self.beta_range {
            if !(lo > 0.0 && lo < hi && hi.is_finite()) {
                return bad("beta range must satisfy 0 < beta_initial < beta_final");
            }
        }
        Ok(())
    }
}

/// What one annealing chain did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainTrace {
    pub initial_energy: i128,
    pub final_energy: i128,
    pub final_assignment: Vec<bool>,
    /// Sum of the incremental deltas of every accepted flip.
    pub delta_sum: i128,
    pub accepted_flips: u64,
    pub best_energy: i128,
    /// Distinct assignments seen at `best_energy`, with visit counts, sorted.
    pub best_states: Vec<(Vec<bool>, u64)>,
}

/// Inverse-temperature range scaled to the model.
///
/// The hot end is `1/Δ_max`, with `Δ_max` the largest `|delta|` among
/// [`PROBE_FLIPS`] random flips at a random assignment. The cold end is
/// `10/Δ_low`, with `Δ_low` the smallest uphill delta at the local minimum a
/// steepest descent reaches from that assignment.
pub fn auto_beta_range(model: &QuboModel, seed: u64) -> Result<(f64, f64), SolveError> {
    Ok(beta_range_for(&Compiled::new(model)?, seed))
}

fn beta_range_for(model: &Compiled, seed: u64) -> (f64, f64) {
    let n = model.num_vars();
    if n == 0 {
        return (1.0, 10.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let bits = (0..n).map(|_| rng.gen::<bool>()).collect();
    let mut state = State::new(model, bits);
    let delta_max = (0..PROBE_FLIPS).map(|_| state.delta(rng.gen_range(0..n)).unsigned_abs()).max().unwrap_or(0);

    for _ in 0..10 * n {
        let (i, d) = (0..n).map(|i| (i, state.delta(i))).min_by_key(|&(_, d)| d).expect("n > 0");
        if d >= 0 {
            break;
        }
        state.flip(i);
    }
    let delta_low = (0..n).map(|i| state.delta(i)).filter(|&d| d > 0).min().map(i128::unsigned_abs);

    let hot = match delta_max {
        0 => 1.0,
        d => 1.0 / d as f64,
    };
    let cold = 10.0 / delta_low.unwrap_or(delta_max.max(1)) as f64;
    (hot, if cold > hot { cold } else { hot * 10.0 })
}

fn schedule(params: &SaParams, range: (f64, f64)) -> Vec<f64> {
    let (lo, hi) = range;
    if params.sweeps == 1 {
        return vec![hi];
    }
    let ratio = hi / lo;
    (0..params.sweeps).map(|s| lo * ratio.powf(s as f64 / (params.sweeps - 1) as f64)).collect()
}

fn run_chain(model: &Compiled, betas: &[f64], seed: u64, index: u64, keep: usize) -> ChainTrace {
    let n = model.num_vars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ index);
    let bits = (0..n).map(|_| rng.gen::<bool>()).collect();
    let mut state = State::new(model, bits);
    let initial_energy = state.energy;
    let mut delta_sum = 0i128;
    let mut accepted_flips = 0u64;
    let mut best_energy = state.energy;
    let mut best: HashMap<Vec<bool>, u64> = HashMap::from([(state.bits.clone(), 1)]);

    for &beta in betas {
        for i in 0..n {
            let d = state.delta(i);
            let accept = d <= 0 || {
                let x = beta * d as f64;
                x < MAX_EXPONENT && rng.gen::<f64>() < (-x).exp()
            };
            if !accept {
                continue;
            }
            state.flip(i);
            delta_sum += d;
            accepted_flips += 1;
            if state.energy < best_energy {
                best_energy = state.energy;
                best.clear();
                best.insert(state.bits.clone(), 1);
            } else if state.energy == best_energy {
                if let Some(count) = best.get_mut(&state.bits) {
                    *count += 1;
                } else if best.len() < keep {
                    best.insert(state.bits.clone(), 1);
                }
            }
        }
    }
    let mut best_states: Vec<(Vec<bool>, u64)> = best.into_iter().collect();
    best_states.sort();
    ChainTrace {
        initial_energy,
        final_energy: state.energy,
        final_assignment: state.bits,
        delta_sum,
        accepted_flips,
        best_energy,
        best_states,
    }
}

/// Runs one chain of `solve_sa` on its own, for inspection.
pub fn trace_chain(model: &QuboModel, params: &SaParams, chain_index: u64) -> Result<ChainTrace, SolveError> {
    params.validate()?;
    let compiled = Compiled::new(model)?;
    let range = params.beta_range.unwrap_or_else(|| beta_range_for(&compiled, params.seed));
    Ok(run_chain(&compiled, &schedule(params, range), params.seed, chain_index, params.samples_kept))
}

/// Runs `restarts` independent chains and keeps the best `samples_kept`
/// distinct assignments seen at each chain's lowest energy (plus every
/// chain's final state).
///
/// Chain `i` draws from a stream seeded with `seed ^ i`; the result depends
/// only on the model and `params`.
pub fn solve_sa(model: &QuboModel, params: &SaParams) -> Result<SampleSet, SolveError> {
    params.validate()?;
    if model.num_vars() == 0 {
        return Ok(SampleSet::from_assignments(model, [(Vec::new(), 1)]));
    }
    let compiled = Compiled::new(model)?;
    let range = params.beta_range.unwrap_or_else(|| beta_range_for(&compiled, params.seed));
    let betas = schedule(params, range);
    let keep = params.samples_kept;

    let mut pool: BTreeMap<Vec<bool>, (i128, u64)> = BTreeMap::new();
    for start in (0..params.restarts).step_by(BATCH) {
        let end = (start + BATCH).min(params.restarts);
        let traces: Vec<ChainTrace> =
            (start..end).into_par_iter().map(|i| run_chain(&compiled, &betas, params.seed, i as u64, keep)).collect();
        for trace in traces {
            for (bits, count) in trace.best_states {
                pool.entry(bits).or_insert((trace.best_energy, 0)).1 += count;
            }
            pool.entry(trace.final_assignment).or_insert((trace.final_energy, 0)).1 += 1;
        }
        if pool.len() > 4 * keep {
            prune(&mut pool, keep);
        }
    }
    let mut set = SampleSet::from_assignments(model, pool.into_iter().map(|(bits, (_, count))| (bits, count)));
    set.truncate(keep);
    Ok(set)
}

fn prune(pool: &mut BTreeMap<Vec<bool>, (i128, u64)>, keep: usize) {
    let mut ranked: Vec<(i128, Vec<bool>)> = pool.iter().map(|(bits, &(e, _))| (e, bits.clone())).collect();
    ranked.sort();
    for (_, bits) in ranked.into_iter().skip(keep) {
        pool.remove(&bits);
    }
}

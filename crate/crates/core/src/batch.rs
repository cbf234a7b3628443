//! Independent-trial evaluation.
//!
//! With the `parallel` feature (on by default) trials run on the rayon pool;
//! without it they run in order on the calling thread. Results always come
//! back in trial order, and seeded trials draw from a per-trial stream, so
//! output does not depend on which path ran.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::dynamics::{self, DynamicsError, Mode, Schedule, TraceTable};
use crate::energy::{self, EnergyError};
use crate::topology::EnsembleSpec;

pub const DEFAULT_SEED: u64 = 20_140_306;

/// Generator for trial `trial` under `seed`, independent of evaluation order.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

pub fn map_sequential<T, F>(trials: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..trials).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_parallel<T, F>(trials: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..trials).into_par_iter().map(f).collect()
}

pub fn map_trials<T, F>(trials: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_parallel(trials, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(trials, f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainTrial {
    pub weights: Vec<u64>,
    pub product: u64,
    pub oracle: u64,
}

impl ChainTrial {
    pub fn agrees(&self) -> bool {
        self.product == self.oracle
    }
}

/// Random integer chains checked against the event-accumulation simulation.
pub fn chain_trials(
    trials: usize,
    seed: u64,
    max_len: usize,
    max_weight: u64,
) -> Result<Vec<ChainTrial>, EnergyError> {
    map_trials(trials, |i| chain_trial(seed, i, max_len, max_weight))
        .into_iter()
        .collect()
}

pub fn chain_trial(
    seed: u64,
    trial: usize,
    max_len: usize,
    max_weight: u64,
) -> Result<ChainTrial, EnergyError> {
    let mut rng = trial_rng(seed, trial);
    let chain = energy::random_weight_chain(&mut rng, max_len, max_weight);
    Ok(ChainTrial {
        product: energy::chain_source_firings(&chain)?,
        oracle: energy::event_oracle(&chain.to_chain())?,
        weights: chain.weights().to_vec(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayoutTrial {
    pub separation: f64,
    pub radius: f64,
    pub inward: f64,
    pub outward: f64,
}

impl LayoutTrial {
    pub fn inward_shorter(&self) -> bool {
        self.inward < self.outward
    }
}

pub fn layout_trial(seed: u64, trial: usize) -> Result<LayoutTrial, EnergyError> {
    let mut rng = trial_rng(seed, trial);
    use rand::Rng;
    let radius = rng.gen_range(0.5..3.0);
    // strictly more than the two group radii
    let separation = 2.0 * radius * rng.gen_range(1.05..4.0);
    let nodes = rng.gen_range(3..16);
    let layout = energy::mirrored_layout(&mut rng, radius, separation, nodes);
    let (inward, outward) = energy::layout_distances(&layout)?;
    Ok(LayoutTrial {
        separation: layout.separation(),
        radius: layout.group_a.radius().max(layout.group_b.radius()),
        inward,
        outward,
    })
}

pub fn layout_trials(trials: usize, seed: u64) -> Result<Vec<LayoutTrial>, EnergyError> {
    map_trials(trials, |i| layout_trial(seed, i))
        .into_iter()
        .collect()
}

/// Runs the same ensemble shape under each inhibitory weight.
pub fn inhibition_sweep(
    depth: usize,
    size: usize,
    excitatory_unit: f64,
    weights: &[f64],
    steps: usize,
    mode: Mode,
) -> Result<Vec<TraceTable>, DynamicsError> {
    let schedule = Schedule::staggered(depth, 1)?;
    map_trials(weights.len(), |i| {
        let spec = EnsembleSpec::build_linear(depth, size, excitatory_unit, weights[i])?;
        dynamics::run(&spec, &schedule, steps, mode)
    })
    .into_iter()
    .collect()
}

//! Discrete-time excitatory/inhibitory firing dynamics over a nested ensemble.
//!
//! Every step, each firing pattern adds `excitatory_unit * size` to each of
//! its own neurons (every member, itself included, contributes one unit) and
//! subtracts `inhibitory_weight * excitatory_unit * size` from each neuron of
//! every enclosing pattern. Totals are computed from the step-begin firing set
//! and applied together; strengths never drop below zero.

use thiserror::Error;

use crate::topology::{EnsembleSpec, TopologyError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("state does not match ensemble: {0}")]
    SpecMismatch(String),
    #[error("schedule: {0}")]
    InvalidSchedule(String),
    #[error("pattern {pattern} is asymmetric at step {step}")]
    AsymmetricPattern { pattern: usize, step: usize },
    #[error("{0} out of range")]
    OutOfRange(&'static str),
    #[error("trace has wrong shape for the golden table: {0}")]
    WrongShape(String),
    #[error("run needs at least one step")]
    NoSteps,
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// First firing step (1-based) of every pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    activation_step: Vec<usize>,
}

impl Schedule {
    pub fn explicit(activation_step: Vec<usize>) -> Result<Self, DynamicsError> {
        if let Some(k) = activation_step.iter().position(|&t| t == 0) {
            return Err(DynamicsError::InvalidSchedule(format!(
                "pattern {} has activation step 0; steps are 1-based",
                k + 1
            )));
        }
        Ok(Self { activation_step })
    }

    /// Pattern `k` (0-based) first fires at step `1 + k * interval`.
    pub fn staggered(patterns: usize, interval: usize) -> Result<Self, DynamicsError> {
        if interval == 0 {
            return Err(DynamicsError::InvalidSchedule(
                "interval must be >= 1".into(),
            ));
        }
        Ok(Self {
            activation_step: (0..patterns).map(|k| 1 + k * interval).collect(),
        })
    }

    pub fn activation_step(&self, pattern: usize) -> Option<usize> {
        self.activation_step.get(pattern).copied()
    }

    pub fn steps(&self) -> &[usize] {
        &self.activation_step
    }

    pub fn len(&self) -> usize {
        self.activation_step.len()
    }

    pub fn is_empty(&self) -> bool {
        self.activation_step.is_empty()
    }
}

/// How root patterns are driven in free-run mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Drive {
    #[default]
    Always,
    /// The external drive is on for steps `1..=n` only.
    Until(usize),
}

impl Drive {
    fn on_at(self, step: usize) -> bool {
        match self {
            Drive::Always => true,
            Drive::Until(n) => step <= n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// A pattern fires at every step from its activation step onward.
    #[default]
    Scheduled,
    /// A pattern fires once activated only while it still has strength and
    /// its parent fired on the previous step; roots need the external drive.
    FreeRun(Drive),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub step: usize,
    pub strength: Vec<f64>,
    /// Patterns that fired on `step`.
    pub active: Vec<bool>,
    pub ever_active: Vec<bool>,
}

impl SimState {
    pub fn initial(spec: &EnsembleSpec) -> Self {
        Self {
            step: 0,
            strength: vec![0.0; spec.neuron_count()],
            active: vec![false; spec.pattern_count()],
            ever_active: vec![false; spec.pattern_count()],
        }
    }
}

/// Per-neuron inputs applied during one step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepBreakdown {
    pub excitatory_in: Vec<f64>,
    pub inhibitory_in: Vec<f64>,
}

/// Advances the simulation by one step.
pub fn step(
    state: &SimState,
    spec: &EnsembleSpec,
    schedule: &Schedule,
    mode: Mode,
) -> Result<(SimState, StepBreakdown), DynamicsError> {
    let patterns = spec.pattern_count();
    if state.strength.len() != spec.neuron_count() {
        return Err(DynamicsError::SpecMismatch(format!(
            "{} strengths for {} neurons",
            state.strength.len(),
            spec.neuron_count()
        )));
    }
    if state.active.len() != patterns || state.ever_active.len() != patterns {
        return Err(DynamicsError::SpecMismatch(format!(
            "pattern flags sized {} for {} patterns",
            state.active.len(),
            patterns
        )));
    }
    if schedule.len() != patterns {
        return Err(DynamicsError::SpecMismatch(format!(
            "schedule covers {} of {} patterns",
            schedule.len(),
            patterns
        )));
    }

    let t = state.step + 1;
    let firing: Vec<bool> = (0..patterns)
        .map(|p| -> Result<bool, DynamicsError> {
            let reached = t >= schedule.steps()[p];
            Ok(match mode {
                Mode::Scheduled => reached,
                Mode::FreeRun(drive) => {
                    let members = spec.members(p)?;
                    let alive = !state.ever_active[p] || state.strength[members.start] > 0.0;
                    let driven = match spec.parent(p)? {
                        Some(parent) => state.active[parent],
                        None => drive.on_at(t),
                    };
                    reached && alive && driven
                }
            })
        })
        .collect::<Result<_, _>>()?;

    let unit = spec.excitatory_unit();
    let mut excite = vec![0.0; patterns];
    let mut inhibit = vec![0.0; patterns];
    for q in (0..patterns).filter(|&q| firing[q]) {
        let output = unit * spec.size(q)? as f64;
        excite[q] += output;
        for a in spec.ancestors(q)? {
            inhibit[a] += spec.inhibitory_weight() * output;
        }
    }

    let n = spec.neuron_count();
    let mut next = SimState {
        step: t,
        strength: vec![0.0; n],
        active: firing.clone(),
        ever_active: state
            .ever_active
            .iter()
            .zip(&firing)
            .map(|(&e, &f)| e || f)
            .collect(),
    };
    let mut breakdown = StepBreakdown {
        excitatory_in: vec![0.0; n],
        inhibitory_in: vec![0.0; n],
    };
    for p in 0..patterns {
        for i in spec.members(p)? {
            breakdown.excitatory_in[i] = excite[p];
            breakdown.inhibitory_in[i] = inhibit[p];
            next.strength[i] = (state.strength[i] + excite[p] - inhibit[p]).max(0.0);
        }
    }
    Ok((next, breakdown))
}

/// Step-by-neuron strength matrix; row `r` holds the strengths after step `r + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceTable {
    pub values: Vec<Vec<f64>>,
    pub pattern_of: Vec<usize>,
}

impl TraceTable {
    pub fn steps(&self) -> usize {
        self.values.len()
    }

    pub fn neurons(&self) -> usize {
        self.pattern_of.len()
    }

    pub fn pattern_count(&self) -> usize {
        self.pattern_of.iter().max().map_or(0, |m| m + 1)
    }

    /// Strength of `neuron` after 1-based step `t`.
    pub fn get(&self, t: usize, neuron: usize) -> Option<f64> {
        t.checked_sub(1)
            .and_then(|r| self.values.get(r))
            .and_then(|row| row.get(neuron))
            .copied()
    }
}

/// A run together with the per-step inputs that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct DetailedRun {
    pub trace: TraceTable,
    pub breakdowns: Vec<StepBreakdown>,
    pub firing: Vec<Vec<bool>>,
}

pub fn run(
    spec: &EnsembleSpec,
    schedule: &Schedule,
    steps: usize,
    mode: Mode,
) -> Result<TraceTable, DynamicsError> {
    run_detailed(spec, schedule, steps, mode).map(|r| r.trace)
}

pub fn run_detailed(
    spec: &EnsembleSpec,
    schedule: &Schedule,
    steps: usize,
    mode: Mode,
) -> Result<DetailedRun, DynamicsError> {
    if steps == 0 {
        return Err(DynamicsError::NoSteps);
    }
    let mut state = SimState::initial(spec);
    let mut values = Vec::with_capacity(steps);
    let mut breakdowns = Vec::with_capacity(steps);
    let mut firing = Vec::with_capacity(steps);
    for _ in 0..steps {
        let (next, b) = step(&state, spec, schedule, mode)?;
        values.push(next.strength.clone());
        firing.push(next.active.clone());
        breakdowns.push(b);
        state = next;
    }
    Ok(DetailedRun {
        trace: TraceTable {
            values,
            pattern_of: spec.pattern_of_neurons(),
        },
        breakdowns,
        firing,
    })
}

fn pattern_neurons(trace: &TraceTable, pattern: usize) -> impl Iterator<Item = usize> + '_ {
    trace
        .pattern_of
        .iter()
        .enumerate()
        .filter(move |(_, &p)| p == pattern)
        .map(|(i, _)| i)
}

/// Common per-neuron strength of `pattern` after step `t` (1-based).
pub fn pattern_strength(
    trace: &TraceTable,
    pattern: usize,
    t: usize,
) -> Result<f64, DynamicsError> {
    if t == 0 || t > trace.steps() {
        return Err(DynamicsError::OutOfRange("step"));
    }
    let row = &trace.values[t - 1];
    let mut members = pattern_neurons(trace, pattern).map(|i| row[i]);
    let first = members.next().ok_or(DynamicsError::OutOfRange("pattern"))?;
    if members.any(|v| v != first) {
        return Err(DynamicsError::AsymmetricPattern { pattern, step: t });
    }
    Ok(first)
}

/// Earliest step at which `pattern` is back at zero after having been positive.
pub fn first_zero_step(trace: &TraceTable, pattern: usize) -> Result<Option<usize>, DynamicsError> {
    if pattern >= trace.pattern_count() {
        return Err(DynamicsError::OutOfRange("pattern"));
    }
    let mut was_positive = false;
    for t in 1..=trace.steps() {
        let s = pattern_strength(trace, pattern, t)?;
        if s > 0.0 {
            was_positive = true;
        } else if was_positive {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

pub const GOLDEN_NEURONS: usize = 25;
pub const GOLDEN_STEPS: [usize; 3] = [3, 4, 5];

/// Neurons 1..=25 (rows) at steps 3, 4, 5 (columns).
pub type GoldenGrid = [[f64; 3]; GOLDEN_NEURONS];

/// Extracts the 25 x 3 comparison grid from a standard-scenario trace.
pub fn golden_table(trace: &TraceTable) -> Result<GoldenGrid, DynamicsError> {
    if trace.neurons() != GOLDEN_NEURONS {
        return Err(DynamicsError::WrongShape(format!(
            "{} neurons, expected {GOLDEN_NEURONS}",
            trace.neurons()
        )));
    }
    if trace.steps() < 5 {
        return Err(DynamicsError::WrongShape(format!(
            "{} steps, expected at least 5",
            trace.steps()
        )));
    }
    let mut grid = [[0.0; 3]; GOLDEN_NEURONS];
    for (i, row) in grid.iter_mut().enumerate() {
        for (c, &t) in GOLDEN_STEPS.iter().enumerate() {
            row[c] = trace.values[t - 1][i];
        }
    }
    Ok(grid)
}

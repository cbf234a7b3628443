//! Timer / counter built from a nested chain.
//!
//! An on-switch drives the outermost pattern; activation moves inward one
//! level per tick and each level emits a count as it switches on. The
//! innermost level also signals the off-switch, which inhibits the on-switch
//! on the following tick. One tick later every level is off and the counter
//! stays quiescent.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CounterError {
    #[error("counter depth must be >= 1")]
    InvalidDepth,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterSpec {
    pub depth: usize,
    pub label: Option<String>,
}

impl CounterSpec {
    pub fn new(depth: usize) -> Self {
        Self { depth, label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Idle,
    /// 1-based level that activated on the current tick.
    Cascading(usize),
    ShuttingDown,
    Quiescent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountEvent {
    pub level: usize,
    pub tick: usize,
}

impl fmt::Display for CountEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "count level={} tick={}", self.level, self.tick)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterState {
    pub phase: Phase,
    pub tick: usize,
    pub emissions: Vec<CountEvent>,
    /// Set once the innermost level has signalled the off-switch.
    pub off_signalled: bool,
    /// Whether the on-switch is still feeding the outermost level.
    pub driven: bool,
}

pub fn start(spec: &CounterSpec) -> Result<CounterState, CounterError> {
    if spec.depth == 0 {
        return Err(CounterError::InvalidDepth);
    }
    Ok(CounterState {
        phase: Phase::Idle,
        tick: 0,
        emissions: Vec::new(),
        off_signalled: false,
        driven: true,
    })
}

pub fn tick(state: &CounterState, spec: &CounterSpec) -> CounterState {
    let mut next = state.clone();
    if state.phase == Phase::Quiescent {
        return next;
    }
    next.tick += 1;
    let k = next.tick;
    if k <= spec.depth {
        next.phase = Phase::Cascading(k);
        next.emissions.push(CountEvent { level: k, tick: k });
        if k == spec.depth {
            next.off_signalled = true;
        }
    } else if k == spec.depth + 1 {
        next.phase = Phase::ShuttingDown;
        next.driven = false;
    } else {
        next.phase = Phase::Quiescent;
    }
    next
}

/// Ticks a fresh counter until it is quiescent.
pub fn run_counter(spec: &CounterSpec) -> Result<(Vec<CountEvent>, CounterState), CounterError> {
    let mut state = start(spec)?;
    while state.phase != Phase::Quiescent {
        state = tick(&state, spec);
    }
    Ok((state.emissions.clone(), state))
}

//! Deterministic simulation of nested neural pattern ensembles.
//!
//! - [`topology`]: patterns, nesting and connectivity queries.
//! - [`dynamics`]: the discrete-time excitatory/inhibitory update and traces.
//! - [`counter`]: the on-switch / cascade / off-switch counter state machine.
//! - [`energy`]: attenuation, chained firing requirements, centre placement,
//!   terminal layout economics and route reinforcement.
//! - [`scenario`]: scenario files, trace CSV and golden comparison.
//! - [`batch`]: seeded independent trials, parallel when the `parallel`
//!   feature is enabled.

pub mod batch;
pub mod counter;
pub mod dynamics;
pub mod energy;
pub mod scenario;
pub mod topology;

pub use dynamics::{Drive, Mode, Schedule, TraceTable};
pub use topology::EnsembleSpec;

//! Signal cost model: attenuation along hops, capacitor-style accumulation,
//! multiplicative firing requirements along a chain, centre placement, and
//! the inward/outward terminal economics with route reinforcement.

mod chain;
mod layout;
mod stigmergy;

pub use chain::{
    best_center, centering_cost, centering_costs, chain_source_firings, event_oracle,
    firings_per_hop, random_weight_chain, required_output, ChainSpec, HopSpec, WeightChain,
};
pub use layout::{layout_distances, mirrored_layout, Group, LayoutSpec, Point};
pub use stigmergy::{stigmergy_reinforce, Route, RouteSet};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnergyError {
    #[error("invalid hop: {0}")]
    InvalidHop(String),
    #[error("hop {hop}: signal attenuated out (impulse {impulse} <= loss {loss})")]
    AttenuatedOut { hop: usize, impulse: f64, loss: f64 },
    #[error("chain must have at least one hop")]
    EmptyChain,
    #[error("weight {weight} at hop {hop} must be >= 1")]
    ZeroWeight { hop: usize, weight: u64 },
    #[error("position {position} out of range for {neurons} neurons")]
    OutOfRange { position: usize, neurons: usize },
    #[error("firing count overflows u64")]
    Overflow,
    #[error("degenerate layout: {0}")]
    DegenerateLayout(&'static str),
}

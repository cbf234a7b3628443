use rand::Rng;

use super::EnergyError;

/// Relative slack when comparing accumulated charge against a threshold.
const THRESHOLD_SLACK: f64 = 1e-9;

/// Source firings the event simulation will attempt before giving up.
const ORACLE_LIMIT: u64 = 1 << 32;

/// One feeder-to-target connection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopSpec {
    pub distance: f64,
    /// Signal lost per unit distance.
    pub attenuation: f64,
    /// Signal the downstream neuron must accumulate before it fires.
    pub threshold: f64,
    /// Signal emitted per upstream firing.
    pub impulse: f64,
}

impl HopSpec {
    pub fn new(
        distance: f64,
        attenuation: f64,
        threshold: f64,
        impulse: f64,
    ) -> Result<Self, EnergyError> {
        let hop = Self {
            distance,
            attenuation,
            threshold,
            impulse,
        };
        hop.validate()?;
        Ok(hop)
    }

    /// Lossless hop that needs `weight` unit impulses.
    pub fn unit(weight: u64) -> Self {
        Self {
            distance: 0.0,
            attenuation: 0.0,
            threshold: weight as f64,
            impulse: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), EnergyError> {
        let bad = |what: &str, v: f64| Err(EnergyError::InvalidHop(format!("{what} = {v}")));
        if self.distance.is_nan() || self.distance < 0.0 {
            return bad("distance", self.distance);
        }
        if self.attenuation.is_nan() || self.attenuation < 0.0 {
            return bad("attenuation", self.attenuation);
        }
        if self.threshold.is_nan() || self.threshold <= 0.0 {
            return bad("threshold", self.threshold);
        }
        if self.impulse.is_nan() || self.impulse <= 0.0 {
            return bad("impulse", self.impulse);
        }
        Ok(())
    }

    pub fn loss(&self) -> f64 {
        self.distance * self.attenuation
    }

    pub fn arriving(&self) -> f64 {
        self.impulse - self.loss()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    pub hops: Vec<HopSpec>,
}

impl ChainSpec {
    pub fn new(hops: Vec<HopSpec>) -> Result<Self, EnergyError> {
        if hops.is_empty() {
            return Err(EnergyError::EmptyChain);
        }
        for h in &hops {
            h.validate()?;
        }
        Ok(Self { hops })
    }
}

/// Per-hop firing requirements along a line of neurons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightChain {
    weights: Vec<u64>,
}

impl WeightChain {
    pub fn new(weights: Vec<u64>) -> Result<Self, EnergyError> {
        if weights.is_empty() {
            return Err(EnergyError::EmptyChain);
        }
        if let Some((hop, &weight)) = weights.iter().enumerate().find(|(_, &w)| w == 0) {
            return Err(EnergyError::ZeroWeight { hop, weight });
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn neurons(&self) -> usize {
        self.weights.len() + 1
    }

    /// Lossless unit-impulse hops whose thresholds are the weights.
    pub fn to_chain(&self) -> ChainSpec {
        ChainSpec {
            hops: self.weights.iter().map(|&w| HopSpec::unit(w)).collect(),
        }
    }

    /// Per-hop requirements of an arbitrary chain.
    pub fn from_chain(chain: &ChainSpec) -> Result<Self, EnergyError> {
        let weights = chain
            .hops
            .iter()
            .enumerate()
            .map(|(i, h)| hop_firings(i, h))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(weights)
    }
}

/// Output the feeder must produce so that `downstream_demand` still arrives.
pub fn required_output(hop: &HopSpec, downstream_demand: f64) -> f64 {
    downstream_demand + hop.loss()
}

/// Upstream firings needed, with charge stored between firings, to fire the
/// downstream neuron once.
pub fn firings_per_hop(hop: &HopSpec) -> Result<u64, EnergyError> {
    hop_firings(0, hop)
}

fn hop_firings(index: usize, hop: &HopSpec) -> Result<u64, EnergyError> {
    hop.validate()?;
    let arriving = hop.arriving();
    if arriving <= 0.0 {
        return Err(EnergyError::AttenuatedOut {
            hop: index,
            impulse: hop.impulse,
            loss: hop.loss(),
        });
    }
    let ratio = hop.threshold / arriving;
    let nearest = ratio.round();
    let n = if (ratio - nearest).abs() <= THRESHOLD_SLACK * nearest.max(1.0) {
        nearest
    } else {
        ratio.ceil()
    };
    if n >= u64::MAX as f64 {
        return Err(EnergyError::Overflow);
    }
    Ok((n as u64).max(1))
}

/// Source firings needed to fire the last neuron: the product of the hop weights.
pub fn chain_source_firings(chain: &WeightChain) -> Result<u64, EnergyError> {
    product(chain.weights())
}

fn product(ws: &[u64]) -> Result<u64, EnergyError> {
    ws.iter()
        .try_fold(1u64, |acc, &w| acc.checked_mul(w))
        .ok_or(EnergyError::Overflow)
}

/// Counts source firings by simulating every neuron as an accumulator that
/// fires once its threshold is reached and then empties.
pub fn event_oracle(chain: &ChainSpec) -> Result<u64, EnergyError> {
    if chain.hops.is_empty() {
        return Err(EnergyError::EmptyChain);
    }
    for (i, h) in chain.hops.iter().enumerate() {
        h.validate()?;
        if h.arriving() <= 0.0 {
            return Err(EnergyError::AttenuatedOut {
                hop: i,
                impulse: h.impulse,
                loss: h.loss(),
            });
        }
    }
    let mut charge = vec![0.0f64; chain.hops.len()];
    let mut source = 0u64;
    while source < ORACLE_LIMIT {
        source += 1;
        let mut h = 0;
        loop {
            let hop = &chain.hops[h];
            charge[h] += hop.arriving();
            if charge[h] < hop.threshold * (1.0 - THRESHOLD_SLACK) {
                break;
            }
            charge[h] = 0.0;
            h += 1;
            if h == chain.hops.len() {
                return Ok(source);
            }
        }
    }
    Err(EnergyError::Overflow)
}

/// Firings needed to reach both ends of the line from `position`: the
/// product of weights on each side, with an empty side costing nothing.
pub fn centering_cost(chain: &WeightChain, position: usize) -> Result<u64, EnergyError> {
    let neurons = chain.neurons();
    if position >= neurons {
        return Err(EnergyError::OutOfRange { position, neurons });
    }
    let (left, right) = chain.weights().split_at(position);
    let side = |ws: &[u64]| if ws.is_empty() { Ok(0) } else { product(ws) };
    side(left)?
        .checked_add(side(right)?)
        .ok_or(EnergyError::Overflow)
}

pub fn centering_costs(chain: &WeightChain) -> Result<Vec<u64>, EnergyError> {
    (0..chain.neurons())
        .map(|p| centering_cost(chain, p))
        .collect()
}

/// Cheapest activation point; ties go to the lowest index.
pub fn best_center(chain: &WeightChain) -> Result<usize, EnergyError> {
    let costs = centering_costs(chain)?;
    let mut best = 0;
    for (i, &c) in costs.iter().enumerate() {
        if c < costs[best] {
            best = i;
        }
    }
    Ok(best)
}

/// Random chain of `1..=max_len` hops with weights in `1..=max_weight`.
pub fn random_weight_chain<R: Rng>(rng: &mut R, max_len: usize, max_weight: u64) -> WeightChain {
    let len = rng.gen_range(1..=max_len.max(1));
    let weights = (0..len)
        .map(|_| rng.gen_range(1..=max_weight.max(1)))
        .collect();
    WeightChain { weights }
}

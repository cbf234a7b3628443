#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Route {
    pub length: f64,
    pub reinforcement: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteSet {
    pub routes: Vec<Route>,
}

impl RouteSet {
    /// Fresh routes with no accumulated trace.
    pub fn from_lengths(lengths: &[f64]) -> Self {
        Self {
            routes: lengths
                .iter()
                .map(|&length| Route {
                    length,
                    reinforcement: 0.0,
                })
                .collect(),
        }
    }

    pub fn reinforcements(&self) -> Vec<f64> {
        self.routes.iter().map(|r| r.reinforcement).collect()
    }

    /// Index of the most reinforced route (lowest index on ties).
    pub fn most_reinforced(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, r) in self.routes.iter().enumerate() {
            match best {
                Some(b) if self.routes[b].reinforcement >= r.reinforcement => {}
                _ => best = Some(i),
            }
        }
        best
    }
}

/// Each cycle, every route receives the same energy and keeps a trace
/// inversely proportional to its length.
pub fn stigmergy_reinforce(routes: &RouteSet, cycles: usize, energy_per_cycle: f64) -> RouteSet {
    let mut out = routes.clone();
    for _ in 0..cycles {
        for r in &mut out.routes {
            r.reinforcement += energy_per_cycle / r.length;
        }
    }
    out
}

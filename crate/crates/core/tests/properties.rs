use proptest::prelude::*;

use nestfire_core::batch;
use nestfire_core::counter::{self, CounterSpec, Phase};
use nestfire_core::dynamics::{self, Mode, Schedule};
use nestfire_core::energy::{
    self, best_center, centering_cost, centering_costs, firings_per_hop, required_output, HopSpec,
    RouteSet, WeightChain,
};
use nestfire_core::scenario::{self, ModeName, Nesting, ScenarioFile, ScheduleSection};
use nestfire_core::topology::EnsembleSpec;

/// Random forest: each pattern's parent is an earlier pattern or none.
fn forest() -> impl Strategy<Value = Vec<(Option<usize>, usize)>> {
    prop::collection::vec(
        (any::<prop::sample::Index>(), any::<bool>(), 1usize..6),
        1..8,
    )
    .prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (pick, root, size))| {
                let parent = if i == 0 || root {
                    None
                } else {
                    Some(pick.index(i))
                };
                (parent, size)
            })
            .collect()
    })
}

fn chain_weights() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..=5, 1..=6)
}

proptest! {
    #[test]
    fn membership_partitions_neurons(layout in forest()) {
        let spec = EnsembleSpec::new(&layout, 1.0, 0.5).unwrap();
        let mut seen = vec![0usize; spec.neuron_count()];
        for p in 0..spec.pattern_count() {
            for i in spec.members(p).unwrap() {
                seen[i] += 1;
            }
            let anc = spec.ancestors(p).unwrap();
            prop_assert!(anc.len() < spec.pattern_count());
            prop_assert!(!anc.contains(&p));
            let mut dedup = anc.clone();
            dedup.sort_unstable();
            dedup.dedup();
            prop_assert_eq!(dedup.len(), anc.len());
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn linear_ancestor_counts(depth in 1usize..12, size in 1usize..6) {
        let spec = EnsembleSpec::build_linear(depth, size, 1.0, 0.5).unwrap();
        prop_assert_eq!(spec.neuron_count(), depth * size);
        for k in 0..depth {
            let anc = spec.ancestors(k).unwrap();
            prop_assert_eq!(anc, (0..k).rev().collect::<Vec<_>>());
        }
    }

    #[test]
    fn dynamics_invariants(
        depth in 1usize..7,
        size in 1usize..6,
        unit in prop::sample::select(vec![0.25, 0.5, 1.0, 2.0]),
        delta in prop::sample::select(vec![0.0, 0.1, 0.25, 0.5, 1.0, 2.0]),
        interval in 1usize..4,
        steps in 1usize..20,
        free in any::<bool>(),
    ) {
        let spec = EnsembleSpec::build_linear(depth, size, unit, delta).unwrap();
        let schedule = Schedule::staggered(depth, interval).unwrap();
        let mode = if free { Mode::FreeRun(Default::default()) } else { Mode::Scheduled };
        let run = dynamics::run_detailed(&spec, &schedule, steps, mode).unwrap();
        let trace = &run.trace;
        let innermost = depth - 1;
        for t in 1..=steps {
            for p in 0..depth {
                // symmetry: pattern_strength errors on any intra-pattern disagreement
                let s = dynamics::pattern_strength(trace, p, t).unwrap();
                prop_assert!(s >= 0.0);
            }
            let b = &run.breakdowns[t - 1];
            for i in spec.members(innermost).unwrap() {
                prop_assert_eq!(b.inhibitory_in[i], 0.0);
            }
        }
        if !free {
            for p in 0..depth {
                let tk = schedule.activation_step(p).unwrap();
                let first = (1..=steps).find(|&t| dynamics::pattern_strength(trace, p, t).unwrap() > 0.0);
                prop_assert_eq!(first, (tk <= steps).then_some(tk));
            }
            let tk = schedule.activation_step(innermost).unwrap();
            for t in 1..=steps {
                let expect = unit * size as f64 * (t as f64 - tk as f64 + 1.0).max(0.0);
                prop_assert_eq!(dynamics::pattern_strength(trace, innermost, t).unwrap(), expect);
            }
        }
        let again = dynamics::run_detailed(&spec, &schedule, steps, mode).unwrap();
        prop_assert_eq!(scenario::write_trace(&again.trace), scenario::write_trace(trace));
    }

    #[test]
    fn zero_inhibition_closed_form(
        layout in forest(),
        unit in prop::sample::select(vec![0.5, 1.0, 3.0]),
        offsets in prop::collection::vec(1usize..6, 8),
        steps in 1usize..12,
    ) {
        let spec = EnsembleSpec::new(&layout, unit, 0.0).unwrap();
        let schedule = Schedule::explicit(offsets[..layout.len()].to_vec()).unwrap();
        let trace = dynamics::run(&spec, &schedule, steps, Mode::Scheduled).unwrap();
        for p in 0..spec.pattern_count() {
            let tk = schedule.activation_step(p).unwrap() as f64;
            let size = spec.size(p).unwrap() as f64;
            for t in 1..=steps {
                let expect = unit * size * (t as f64 - tk + 1.0).max(0.0);
                prop_assert_eq!(dynamics::pattern_strength(&trace, p, t).unwrap(), expect);
            }
            prop_assert_eq!(dynamics::first_zero_step(&trace, p).unwrap(), None);
        }
    }

    #[test]
    fn counter_lifecycle(depth in 1usize..60, extra in 0usize..10) {
        let spec = CounterSpec::new(depth);
        let (events, last) = counter::run_counter(&spec).unwrap();
        prop_assert_eq!(events.len(), depth);
        for (i, e) in events.iter().enumerate() {
            prop_assert_eq!((e.level, e.tick), (i + 1, i + 1));
        }
        prop_assert_eq!(last.tick, depth + 2);
        let mut s = last.clone();
        for _ in 0..extra {
            s = counter::tick(&s, &spec);
        }
        prop_assert_eq!(s, last);

        // no emission outside the cascade phase
        let mut s = counter::start(&spec).unwrap();
        while s.phase != Phase::Quiescent {
            let before = s.emissions.len();
            s = counter::tick(&s, &spec);
            let emitted = s.emissions.len() > before;
            prop_assert_eq!(emitted, matches!(s.phase, Phase::Cascading(_)));
        }
    }

    #[test]
    fn product_rule_matches_oracle(weights in chain_weights()) {
        let chain = WeightChain::new(weights).unwrap();
        prop_assert_eq!(
            energy::chain_source_firings(&chain).unwrap(),
            energy::event_oracle(&chain.to_chain()).unwrap()
        );
    }

    #[test]
    fn lossy_chains_match_oracle(hops in prop::collection::vec((0u32..8, 1u32..20), 1..5)) {
        // distance d in tenths with attenuation 0.1 per unit; impulse 1 keeps arriving > 0
        let hops: Vec<HopSpec> = hops
            .into_iter()
            .map(|(d, t)| HopSpec::new(d as f64, 0.1, t as f64 / 4.0, 1.0).unwrap())
            .collect();
        let chain = energy::ChainSpec::new(hops).unwrap();
        let weights = WeightChain::from_chain(&chain).unwrap();
        prop_assert_eq!(
            energy::chain_source_firings(&weights).unwrap(),
            energy::event_oracle(&chain).unwrap()
        );
    }

    #[test]
    fn appending_never_lowers_cost(weights in chain_weights(), w in 1u64..=5) {
        let before = WeightChain::new(weights.clone()).unwrap();
        let mut longer = weights;
        longer.push(w);
        let after = WeightChain::new(longer).unwrap();
        for p in 0..before.neurons() {
            prop_assert!(centering_cost(&after, p).unwrap() >= centering_cost(&before, p).unwrap());
        }
    }

    #[test]
    fn reversal_mirrors_costs(weights in chain_weights()) {
        let chain = WeightChain::new(weights.clone()).unwrap();
        let rev = WeightChain::new(weights.iter().rev().copied().collect()).unwrap();
        let a = centering_costs(&chain).unwrap();
        let mut b = centering_costs(&rev).unwrap();
        b.reverse();
        prop_assert_eq!(&a, &b);

        let mut pal = weights.clone();
        pal.extend(weights.iter().rev());
        let pal = WeightChain::new(pal).unwrap();
        let costs = centering_costs(&pal).unwrap();
        let best = best_center(&pal).unwrap();
        let n = pal.neurons();
        prop_assert!(best <= (n - 1) / 2);
        prop_assert_eq!(costs[best], costs[n - 1 - best]);
        prop_assert_eq!(costs[best], *costs.iter().min().unwrap());
    }

    #[test]
    fn hop_monotonicity(
        d in 0.0f64..5.0, dd in 0.0f64..3.0,
        t in 0.5f64..10.0, dt in 0.0f64..5.0,
        i in 1.0f64..3.0, di in 0.0f64..2.0,
        demand in 0.0f64..10.0,
    ) {
        let alpha = 0.1;
        let base = HopSpec::new(d, alpha, t, i).unwrap();
        // affine in distance
        let r = |dist: f64| required_output(&HopSpec { distance: dist, ..base }, demand);
        prop_assert!((r(d + dd) - r(d) - dd * alpha).abs() < 1e-9);
        prop_assert!((r(0.0) - demand).abs() < 1e-12);

        let f = |h: HopSpec| firings_per_hop(&h).unwrap();
        let n = f(base);
        let stronger = f(HopSpec { impulse: i + di, ..base });
        let higher = f(HopSpec { threshold: t + dt, ..base });
        let farther = f(HopSpec { distance: d + dd, ..base });
        prop_assert!(stronger <= n);
        prop_assert!(higher >= n);
        prop_assert!(farther >= n);
    }

    #[test]
    fn reinforcement_scales_with_energy(
        lengths in prop::collection::vec(0.5f64..20.0, 1..6),
        cycles in 0usize..30,
        energy in 0.1f64..5.0,
        c in 0.1f64..10.0,
    ) {
        let routes = RouteSet::from_lengths(&lengths);
        let base = energy::stigmergy_reinforce(&routes, cycles, energy);
        let scaled = energy::stigmergy_reinforce(&routes, cycles, energy * c);
        for (a, b) in base.routes.iter().zip(&scaled.routes) {
            prop_assert!((b.reinforcement - c * a.reinforcement).abs() <= 1e-9 * (1.0 + b.reinforcement));
        }
        if cycles > 0 {
            let shortest = lengths
                .iter()
                .enumerate()
                .fold(0, |b, (i, &l)| if l < lengths[b] { i } else { b });
            prop_assert_eq!(base.most_reinforced(), Some(shortest));
            prop_assert_eq!(scaled.most_reinforced(), Some(shortest));
            for x in 0..lengths.len() {
                for y in 0..lengths.len() {
                    if lengths[x] < lengths[y] {
                        prop_assert!(base.routes[x].reinforcement > base.routes[y].reinforcement);
                    }
                }
            }
        }
    }

    #[test]
    fn inward_beats_outward(seed in any::<u64>()) {
        for t in batch::layout_trials(8, seed).unwrap() {
            prop_assert!(t.separation > 2.0 * t.radius);
            prop_assert!(t.inward_shorter(), "{:?}", t);
        }
    }

    #[test]
    fn scenario_round_trip(
        depth in 1usize..8,
        size in 1usize..8,
        unit in prop::sample::select(vec![0.5, 1.0, 1.25]),
        delta in prop::sample::select(vec![0.0, 0.3, 0.5]),
        explicit in any::<bool>(),
        steps in 1usize..30,
        free in any::<bool>(),
    ) {
        let file = ScenarioFile {
            ensemble: scenario::EnsembleSection {
                depth: Some(depth),
                pattern_size: Some(size),
                patterns: None,
                excitatory_unit: unit,
                inhibitory_weight: delta,
                nesting: Nesting::Linear,
            },
            schedule: if explicit {
                ScheduleSection::Explicit { steps: (1..=depth).collect() }
            } else {
                ScheduleSection::Staggered { interval: 2 }
            },
            steps,
            mode: if free { ModeName::FreeRun } else { ModeName::Scheduled },
            drive_until: None,
        };
        let text = scenario::write_scenario(&file);
        prop_assert_eq!(&scenario::parse_scenario_file(&text).unwrap(), &file);
        let parsed = scenario::parse_scenario(&text).unwrap();
        let trace = parsed.run().unwrap();
        prop_assert_eq!(scenario::read_trace(&scenario::write_trace(&trace)).unwrap(), trace);
    }

    #[test]
    fn golden_comparison_symmetric(cells in prop::collection::vec(prop::sample::select(vec![0.0, 2.5, 5.0, 7.5]), 75), tol in 0.0f64..3.0) {
        let mut grid = [[0.0; 3]; 25];
        for (i, v) in cells.iter().enumerate() {
            grid[i / 3][i % 3] = *v;
        }
        let fixture = scenario::table1_fixture();
        let ab = scenario::compare_grids(&grid, &fixture, tol);
        let ba = scenario::compare_grids(&fixture, &grid, tol);
        prop_assert_eq!(ab.pass, ba.pass);
        prop_assert_eq!(ab.mismatches.len(), ba.mismatches.len());
        prop_assert_eq!(ab.pass, ab.max_abs_error <= tol);
        prop_assert_eq!(ab.pass, ab.mismatches.is_empty());
        prop_assert!(scenario::compare_grids(&grid, &grid, 0.0).pass);
    }
}

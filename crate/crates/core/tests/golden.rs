//! Golden-table checks against a neuron-level reference loop.
//!
//! The reference walks every (sender, receiver) neuron pair: a firing neuron
//! sends one excitatory unit to each neuron of its own pattern (itself
//! included) and a delta-weighted unit to each neuron of every enclosing
//! pattern. It shares nothing with the pattern-level implementation.

use nestfire_core::dynamics::{self, Mode, Schedule};
use nestfire_core::scenario::{self, compare_golden, table1_fixture};
use nestfire_core::topology::EnsembleSpec;

fn reference_linear(
    depth: usize,
    size: usize,
    unit: f64,
    delta: f64,
    steps: usize,
) -> Vec<Vec<f64>> {
    let n = depth * size;
    let pattern = |i: usize| i / size;
    let mut x = vec![0.0f64; n];
    let mut rows = Vec::new();
    for t in 1..=steps {
        // staggered: pattern k (0-based) fires from step k + 1
        let fires = |i: usize| t > pattern(i);
        let mut delta_x = vec![0.0f64; n];
        for sender in (0..n).filter(|&j| fires(j)) {
            for (receiver, dx) in delta_x.iter_mut().enumerate() {
                if pattern(receiver) == pattern(sender) {
                    *dx += unit;
                } else if pattern(receiver) < pattern(sender) {
                    *dx -= delta * unit;
                }
            }
        }
        for i in 0..n {
            x[i] = (x[i] + delta_x[i]).max(0.0);
        }
        rows.push(x.clone());
    }
    rows
}

#[test]
fn reference_reproduces_fixture() {
    let rows = reference_linear(5, 5, 1.0, 0.5, 5);
    let fixture = table1_fixture();
    for (i, expected) in fixture.iter().enumerate() {
        let got = [rows[2][i], rows[3][i], rows[4][i]];
        assert_eq!(&got, expected, "neuron {}", i + 1);
    }
}

#[test]
fn implementation_matches_reference() {
    for depth in 1..=6 {
        for size in 1..=4 {
            for &delta in &[0.0, 0.25, 0.4, 0.5, 1.0] {
                for &unit in &[0.5, 1.0, 2.0] {
                    let spec = EnsembleSpec::build_linear(depth, size, unit, delta).unwrap();
                    let schedule = Schedule::staggered(depth, 1).unwrap();
                    let trace = dynamics::run(&spec, &schedule, 9, Mode::Scheduled).unwrap();
                    let reference = reference_linear(depth, size, unit, delta, 9);
                    for (t, (a, b)) in trace.values.iter().zip(&reference).enumerate() {
                        for (i, (x, y)) in a.iter().zip(b).enumerate() {
                            assert!(
                                (x - y).abs() <= 1e-9,
                                "depth {depth} size {size} delta {delta} t {} neuron {}: {x} vs {y}",
                                t + 1,
                                i + 1
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn other_inhibition_weight_fails_golden() {
    // expected count frozen from the reference loop
    let rows = reference_linear(5, 5, 1.0, 0.4, 5);
    let fixture = table1_fixture();
    let reference_mismatches = fixture
        .iter()
        .enumerate()
        .flat_map(|(i, e)| (0..3).map(move |c| (i, c, e[c])))
        .filter(|&(i, c, e)| (rows[c + 2][i] - e).abs() > 1e-9)
        .count();
    assert_eq!(reference_mismatches, 45);

    let spec = EnsembleSpec::build_linear(5, 5, 1.0, 0.4).unwrap();
    let schedule = Schedule::staggered(5, 1).unwrap();
    let trace = dynamics::run(&spec, &schedule, 5, Mode::Scheduled).unwrap();
    let report = compare_golden(&trace, &fixture, 1e-9).unwrap();
    assert!(!report.pass);
    assert_eq!(report.mismatches.len(), 45);
}

#[test]
fn fixture_file_is_the_printed_table() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/table1.csv"))
        .unwrap();
    assert_eq!(text, scenario::TABLE1_FIXTURE);
    assert_eq!(text.lines().count(), 26);
    assert_eq!(text.lines().nth(13).unwrap(), "13,5.0,7.5,7.5");
    assert_eq!(text.lines().nth(22).unwrap(), "22,0.0,0.0,5.0");
}

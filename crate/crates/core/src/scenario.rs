//! Scenario files, trace CSV, and golden-table comparison.
//!
//! Scenarios are strict JSON: unknown keys are rejected. Traces and the
//! golden fixture are CSV with 1-based neuron and pattern labels.

use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{self, Drive, DynamicsError, GoldenGrid, Mode, Schedule, TraceTable};
use crate::topology::{EnsembleSpec, TopologyError, Violation};

/// Scenario reproducing the 25-neuron published run.
pub const TABLE1_SCENARIO: &str = include_str!("../scenarios/table1.scenario");

/// Published strengths of neurons 1..=25 at steps 3, 4 and 5.
pub const TABLE1_FIXTURE: &str = include_str!("../fixtures/table1.csv");

pub const TRACE_HEADER: &str = "step,neuron,pattern,strength";
pub const GOLDEN_HEADER: &str = "neuron,t3,t4,t5";

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scenario: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Validation(Vec<String>),
    #[error("csv: {0}")]
    Csv(String),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

impl From<serde_json::Error> for ScenarioError {
    fn from(e: serde_json::Error) -> Self {
        ScenarioError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for ScenarioError {
    fn from(e: csv::Error) -> Self {
        ScenarioError::Csv(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Nesting {
    Linear,
    /// Explicit `patterns` list with 1-based parent references.
    Tree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternEntry {
    #[serde(default)]
    pub parent: Option<usize>,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub patterns: Option<Vec<PatternEntry>>,
    pub excitatory_unit: f64,
    pub inhibitory_weight: f64,
    pub nesting: Nesting,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleSection {
    Staggered { interval: usize },
    Explicit { steps: Vec<usize> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeName {
    Scheduled,
    FreeRun,
}

/// On-disk scenario document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub ensemble: EnsembleSection,
    pub schedule: ScheduleSection,
    pub steps: usize,
    pub mode: ModeName,
    /// Free-run only: last step at which the root patterns are driven.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drive_until: Option<usize>,
}

/// A validated, runnable scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub spec: EnsembleSpec,
    pub schedule: Schedule,
    pub steps: usize,
    pub mode: Mode,
}

impl Scenario {
    pub fn run(&self) -> Result<TraceTable, DynamicsError> {
        dynamics::run(&self.spec, &self.schedule, self.steps, self.mode)
    }
}

impl ScenarioFile {
    /// Checks the document and builds the runnable scenario, collecting every problem.
    pub fn validate(&self) -> Result<Scenario, ScenarioError> {
        let mut problems = Vec::new();
        let e = &self.ensemble;
        let layout: Option<Vec<(Option<usize>, usize)>> = match e.nesting {
            Nesting::Linear => {
                if e.patterns.is_some() {
                    problems.push("`patterns` is only allowed with tree nesting".to_string());
                }
                match (e.depth, e.pattern_size) {
                    (Some(d), Some(s)) => {
                        if d == 0 {
                            problems.push("depth must be >= 1".into());
                        }
                        Some((0..d).map(|k| (k.checked_sub(1), s)).collect())
                    }
                    _ => {
                        problems.push("linear nesting needs `depth` and `pattern_size`".into());
                        None
                    }
                }
            }
            Nesting::Tree => {
                if e.depth.is_some() || e.pattern_size.is_some() {
                    problems
                        .push("tree nesting takes `patterns`, not `depth`/`pattern_size`".into());
                }
                match &e.patterns {
                    Some(list) => {
                        let mut out = Vec::with_capacity(list.len());
                        for (i, p) in list.iter().enumerate() {
                            let parent = match p.parent {
                                Some(0) => {
                                    problems
                                        .push(format!("pattern {}: parents are 1-based", i + 1));
                                    None
                                }
                                other => other.map(|x| x - 1),
                            };
                            out.push((parent, p.size));
                        }
                        Some(out)
                    }
                    None => {
                        problems.push("tree nesting needs `patterns`".into());
                        None
                    }
                }
            }
        };

        let spec = layout.map(|l| EnsembleSpec::new(&l, e.excitatory_unit, e.inhibitory_weight));
        let spec = match spec {
            Some(Ok(s)) => Some(s),
            Some(Err(TopologyError::Invalid(v))) => {
                problems.extend(v.iter().map(label_violation));
                None
            }
            Some(Err(other)) => {
                problems.push(other.to_string());
                None
            }
            None => None,
        };

        let schedule = spec.as_ref().and_then(|spec| {
            let s = match &self.schedule {
                ScheduleSection::Staggered { interval } => {
                    Schedule::staggered(spec.pattern_count(), *interval)
                }
                ScheduleSection::Explicit { steps } => {
                    if steps.len() != spec.pattern_count() {
                        problems.push(format!(
                            "explicit schedule lists {} steps for {} patterns",
                            steps.len(),
                            spec.pattern_count()
                        ));
                        return None;
                    }
                    Schedule::explicit(steps.clone())
                }
            };
            s.map_err(|err| problems.push(err.to_string())).ok()
        });

        if self.steps == 0 {
            problems.push("steps must be >= 1".into());
        }
        let mode = match (self.mode, self.drive_until) {
            (ModeName::Scheduled, None) => Mode::Scheduled,
            (ModeName::Scheduled, Some(_)) => {
                problems.push("`drive_until` only applies to free_run mode".into());
                Mode::Scheduled
            }
            (ModeName::FreeRun, None) => Mode::FreeRun(Drive::Always),
            (ModeName::FreeRun, Some(n)) => Mode::FreeRun(Drive::Until(n)),
        };

        match (spec, schedule) {
            (Some(spec), Some(schedule)) if problems.is_empty() => Ok(Scenario {
                spec,
                schedule,
                steps: self.steps,
                mode,
            }),
            _ => Err(ScenarioError::Validation(problems)),
        }
    }
}

// violations carry 0-based indices; scenario authors see 1-based ones
fn label_violation(v: &Violation) -> String {
    match v {
        Violation::EmptyPattern { pattern } => format!("empty pattern {}", pattern + 1),
        Violation::UnknownParent { pattern, parent } => {
            format!(
                "pattern {} names unknown parent {}",
                pattern + 1,
                parent + 1
            )
        }
        Violation::NestingCycle { pattern } => {
            format!("nesting cycle through pattern {}", pattern + 1)
        }
        other => other.to_string(),
    }
}

pub fn parse_scenario_file(text: &str) -> Result<ScenarioFile, ScenarioError> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    parse_scenario_file(text)?.validate()
}

pub fn write_scenario(file: &ScenarioFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("scenario serializes");
    s.push('\n');
    s
}

pub fn standard_scenario() -> Scenario {
    parse_scenario(TABLE1_SCENARIO).expect("shipped scenario is valid")
}

/// Long-form CSV, one row per (step, neuron).
pub fn write_trace(trace: &TraceTable) -> String {
    let mut out = String::with_capacity(24 * (trace.steps() * trace.neurons() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for (r, row) in trace.values.iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            // Debug gives the shortest round-trip form and keeps the `.0`
            let _ = writeln!(
                out,
                "{},{},{},{:?}",
                r + 1,
                i + 1,
                trace.pattern_of[i] + 1,
                v
            );
        }
    }
    out
}

pub fn read_trace(text: &str) -> Result<TraceTable, ScenarioError> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    check_header(rdr.headers()?, TRACE_HEADER)?;
    let mut values: Vec<Vec<f64>> = Vec::new();
    let mut pattern_of: Vec<usize> = Vec::new();
    for (n, rec) in rdr.deserialize::<(usize, usize, usize, f64)>().enumerate() {
        let (step, neuron, pattern, strength) = rec?;
        let bad = |what: &str| ScenarioError::Csv(format!("row {}: {what}", n + 2));
        if step == 0 || neuron == 0 || pattern == 0 {
            return Err(bad("indices are 1-based"));
        }
        if step == values.len() + 1 && neuron == 1 {
            values.push(Vec::new());
        }
        let current = values.len();
        let row = match values.last_mut() {
            Some(row) if step == current => row,
            _ => return Err(bad("steps out of order")),
        };
        if neuron != row.len() + 1 {
            return Err(bad("neurons out of order"));
        }
        row.push(strength);
        if step == 1 {
            pattern_of.push(pattern - 1);
        } else if pattern_of.get(neuron - 1) != Some(&(pattern - 1)) {
            return Err(bad("neuron changes pattern"));
        }
    }
    if values.iter().any(|r| r.len() != pattern_of.len()) {
        return Err(ScenarioError::Csv("ragged trace".into()));
    }
    Ok(TraceTable { values, pattern_of })
}

fn check_header(found: &csv::StringRecord, expected: &str) -> Result<(), ScenarioError> {
    let found = found.iter().collect::<Vec<_>>().join(",");
    if found == expected {
        Ok(())
    } else {
        Err(ScenarioError::Csv(format!(
            "header `{found}`, expected `{expected}`"
        )))
    }
}

pub fn read_golden(text: &str) -> Result<GoldenGrid, ScenarioError> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    check_header(rdr.headers()?, GOLDEN_HEADER)?;
    let mut grid = [[0.0; 3]; dynamics::GOLDEN_NEURONS];
    let mut seen = 0;
    for rec in rdr.deserialize::<(usize, f64, f64, f64)>() {
        let (neuron, a, b, c) = rec?;
        if neuron != seen + 1 || neuron > grid.len() {
            return Err(ScenarioError::Csv(format!("unexpected neuron {neuron}")));
        }
        grid[seen] = [a, b, c];
        seen += 1;
    }
    if seen != grid.len() {
        return Err(ScenarioError::Csv(format!(
            "{seen} rows, expected {}",
            grid.len()
        )));
    }
    Ok(grid)
}

pub fn table1_fixture() -> GoldenGrid {
    read_golden(TABLE1_FIXTURE).expect("shipped fixture is valid")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mismatch {
    /// 1-based.
    pub neuron: usize,
    pub step: usize,
    pub expected: f64,
    pub actual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenReport {
    pub max_abs_error: f64,
    pub mismatches: Vec<Mismatch>,
    pub pass: bool,
}

impl fmt::Display for GoldenReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass {
            write!(f, "pass max_abs_error={}", self.max_abs_error)
        } else {
            write!(
                f,
                "fail max_abs_error={} mismatches={}",
                self.max_abs_error,
                self.mismatches.len()
            )?;
            for m in &self.mismatches {
                write!(
                    f,
                    "\nmismatch neuron={} t={} expected={:?} actual={:?}",
                    m.neuron, m.step, m.expected, m.actual
                )?;
            }
            Ok(())
        }
    }
}

/// Element-wise comparison of two grids (`actual` against `expected`).
pub fn compare_grids(actual: &GoldenGrid, expected: &GoldenGrid, tolerance: f64) -> GoldenReport {
    let mut max_abs_error: f64 = 0.0;
    let mut mismatches = Vec::new();
    for (i, (a_row, e_row)) in actual.iter().zip(expected).enumerate() {
        for (c, (&a, &e)) in a_row.iter().zip(e_row).enumerate() {
            let err = (a - e).abs();
            if err.is_nan() || err > tolerance {
                mismatches.push(Mismatch {
                    neuron: i + 1,
                    step: dynamics::GOLDEN_STEPS[c],
                    expected: e,
                    actual: a,
                });
            }
            max_abs_error = if err.is_nan() {
                f64::NAN
            } else {
                max_abs_error.max(err)
            };
        }
    }
    GoldenReport {
        pass: mismatches.is_empty(),
        max_abs_error,
        mismatches,
    }
}

pub fn compare_golden(
    trace: &TraceTable,
    fixture: &GoldenGrid,
    tolerance: f64,
) -> Result<GoldenReport, ScenarioError> {
    let grid = dynamics::golden_table(trace)?;
    Ok(compare_grids(&grid, fixture, tolerance))
}

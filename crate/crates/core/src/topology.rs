//! Nested ensemble structure.
//!
//! An ensemble is an ordered list of patterns. Each pattern owns a contiguous
//! block of neurons and optionally names an enclosing (parent) pattern, so the
//! nesting forms a forest. Excitation stays inside a pattern; inhibition flows
//! from a firing pattern to every pattern that encloses it.

use std::fmt;
use std::ops::Range;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error("invalid dimension: {0}")]
    InvalidDimension(&'static str),
    #[error("unknown pattern {index} (ensemble has {count})")]
    UnknownPattern { index: usize, count: usize },
    #[error("invalid ensemble: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// One broken ensemble invariant, as reported by [`EnsembleSpec::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptyPattern { pattern: usize },
    UnknownParent { pattern: usize, parent: usize },
    NestingCycle { pattern: usize },
    NonPositiveExcitatoryUnit(f64),
    NegativeInhibitoryWeight(f64),
    NoPatterns,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyPattern { pattern } => write!(f, "empty pattern {pattern}"),
            Violation::UnknownParent { pattern, parent } => {
                write!(f, "pattern {pattern} names unknown parent {parent}")
            }
            Violation::NestingCycle { pattern } => {
                write!(f, "nesting cycle through pattern {pattern}")
            }
            Violation::NonPositiveExcitatoryUnit(s) => write!(f, "excitatory unit {s} must be > 0"),
            Violation::NegativeInhibitoryWeight(d) => {
                write!(f, "inhibitory weight {d} must be >= 0")
            }
            Violation::NoPatterns => write!(f, "ensemble has no patterns"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternSpec {
    pub id: usize,
    pub parent: Option<usize>,
    pub size: usize,
}

/// Patterns, their nesting, and the signal weights shared by every neuron.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    patterns: Vec<PatternSpec>,
    excitatory_unit: f64,
    inhibitory_weight: f64,
    // offsets[p]..offsets[p + 1] are the neurons of pattern p
    offsets: Vec<usize>,
}

impl EnsembleSpec {
    /// Builds an ensemble from `(parent, size)` pairs in pattern order.
    ///
    /// The result is checked with [`validate`](Self::validate); every
    /// violation is returned at once.
    pub fn new(
        patterns: &[(Option<usize>, usize)],
        excitatory_unit: f64,
        inhibitory_weight: f64,
    ) -> Result<Self, TopologyError> {
        let spec = Self::new_unchecked(patterns, excitatory_unit, inhibitory_weight);
        let violations = spec.validate();
        if violations.is_empty() {
            Ok(spec)
        } else {
            Err(TopologyError::Invalid(violations))
        }
    }

    /// Builds without validation. Only useful for exercising [`validate`](Self::validate).
    pub fn new_unchecked(
        patterns: &[(Option<usize>, usize)],
        excitatory_unit: f64,
        inhibitory_weight: f64,
    ) -> Self {
        let patterns: Vec<PatternSpec> = patterns
            .iter()
            .enumerate()
            .map(|(id, &(parent, size))| PatternSpec { id, parent, size })
            .collect();
        let mut offsets = Vec::with_capacity(patterns.len() + 1);
        let mut acc = 0;
        offsets.push(acc);
        for p in &patterns {
            acc += p.size;
            offsets.push(acc);
        }
        Self {
            patterns,
            excitatory_unit,
            inhibitory_weight,
            offsets,
        }
    }

    /// A single chain of `depth` patterns, each nested directly in the previous one.
    pub fn build_linear(
        depth: usize,
        size: usize,
        excitatory_unit: f64,
        inhibitory_weight: f64,
    ) -> Result<Self, TopologyError> {
        if depth == 0 {
            return Err(TopologyError::InvalidDimension("depth must be >= 1"));
        }
        if size == 0 {
            return Err(TopologyError::InvalidDimension("pattern size must be >= 1"));
        }
        let patterns: Vec<_> = (0..depth).map(|k| (k.checked_sub(1), size)).collect();
        Self::new(&patterns, excitatory_unit, inhibitory_weight)
    }

    pub fn patterns(&self) -> &[PatternSpec] {
        &self.patterns
    }

    pub fn pattern_count(&self) -> usize {
        self.patterns.len()
    }

    pub fn neuron_count(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn excitatory_unit(&self) -> f64 {
        self.excitatory_unit
    }

    pub fn inhibitory_weight(&self) -> f64 {
        self.inhibitory_weight
    }

    pub fn size(&self, pattern: usize) -> Result<usize, TopologyError> {
        self.check(pattern).map(|_| self.patterns[pattern].size)
    }

    pub fn parent(&self, pattern: usize) -> Result<Option<usize>, TopologyError> {
        self.check(pattern).map(|_| self.patterns[pattern].parent)
    }

    fn check(&self, pattern: usize) -> Result<(), TopologyError> {
        if pattern < self.patterns.len() {
            Ok(())
        } else {
            Err(TopologyError::UnknownPattern {
                index: pattern,
                count: self.patterns.len(),
            })
        }
    }

    /// Enclosing patterns from the immediate parent up to the root.
    ///
    /// These are the patterns that receive inhibition when `pattern` fires.
    pub fn ancestors(&self, pattern: usize) -> Result<Vec<usize>, TopologyError> {
        self.check(pattern)?;
        let mut out = Vec::new();
        let mut cur = self.patterns[pattern].parent;
        while let Some(p) = cur {
            // guards against cycles in unchecked specs
            if out.len() >= self.patterns.len() || p >= self.patterns.len() {
                break;
            }
            out.push(p);
            cur = self.patterns[p].parent;
        }
        Ok(out)
    }

    /// Neuron indices of `pattern`, the targets of its excitatory output.
    pub fn members(&self, pattern: usize) -> Result<Range<usize>, TopologyError> {
        self.check(pattern)?;
        Ok(self.offsets[pattern]..self.offsets[pattern + 1])
    }

    /// Pattern owning each neuron, in neuron order.
    pub fn pattern_of_neurons(&self) -> Vec<usize> {
        self.patterns
            .iter()
            .flat_map(|p| std::iter::repeat_n(p.id, p.size))
            .collect()
    }

    /// Number of enclosing patterns.
    pub fn nesting_depth(&self, pattern: usize) -> Result<usize, TopologyError> {
        self.ancestors(pattern).map(|a| a.len())
    }

    /// Checks every ensemble invariant and reports all violations.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.patterns.is_empty() {
            out.push(Violation::NoPatterns);
        }
        if !self.excitatory_unit.is_finite() || self.excitatory_unit <= 0.0 {
            out.push(Violation::NonPositiveExcitatoryUnit(self.excitatory_unit));
        }
        if !self.inhibitory_weight.is_finite() || self.inhibitory_weight < 0.0 {
            out.push(Violation::NegativeInhibitoryWeight(self.inhibitory_weight));
        }
        let n = self.patterns.len();
        for p in &self.patterns {
            if p.size == 0 {
                out.push(Violation::EmptyPattern { pattern: p.id });
            }
            match p.parent {
                Some(parent) if parent >= n => out.push(Violation::UnknownParent {
                    pattern: p.id,
                    parent,
                }),
                Some(_) => {
                    let mut cur = p.parent;
                    let mut hops = 0;
                    while let Some(q) = cur {
                        if q == p.id || hops > n {
                            out.push(Violation::NestingCycle { pattern: p.id });
                            break;
                        }
                        if q >= n {
                            break;
                        }
                        cur = self.patterns[q].parent;
                        hops += 1;
                    }
                }
                None => {}
            }
        }
        out
    }
}

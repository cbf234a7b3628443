//! Command dispatch for the `nestfire` binary.
//!
//! [`run`] never touches the process streams: it returns the exit status and
//! the text destined for stdout and stderr, so every subcommand can be
//! exercised in-process.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{error::ErrorKind, Parser, Subcommand};

use nestfire_core::batch::{self, DEFAULT_SEED};
use nestfire_core::counter::{self, CounterSpec};
use nestfire_core::energy::{self, WeightChain};
use nestfire_core::scenario;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Tolerance for the built-in golden comparison.
pub const TABLE1_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "nestfire",
    version,
    about = "Nested pattern ensemble simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario file and write its trace as CSV.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        /// Trace destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the built-in 25-neuron run against the shipped table.
    #[command(name = "verify-table1")]
    VerifyTable1,
    /// Print the count events of a nested-chain counter.
    Counter {
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        label: Option<String>,
    },
    /// Source firings for a chain of per-hop requirements.
    Chain {
        #[arg(long, value_delimiter = ',', required = true)]
        hops: Vec<u64>,
    },
    /// Centering cost at every position of a line and the cheapest one.
    Center {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
    },
    /// Inward vs outward terminal distance over random layouts.
    Layout {
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            status: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(msg: impl std::fmt::Display) -> Self {
        Self {
            status: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

/// Parses `args` (including the program name) and dispatches.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(&cli),
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(e.to_string()),
            _ => {
                let text = e.to_string();
                let line = text
                    .lines()
                    .find(|l| !l.trim().is_empty())
                    .unwrap_or("invalid usage")
                    .trim_start_matches("error: ");
                Outcome::usage(line)
            }
        },
    }
}

pub fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Simulate { scenario, out } => simulate(scenario, out.as_ref()),
        Command::VerifyTable1 => verify_table1(),
        Command::Counter { depth, label } => run_counter(*depth, label.clone()),
        Command::Chain { hops } => chain(hops),
        Command::Center { weights } => center(weights),
        Command::Layout { trials, seed } => layout(*trials, *seed),
    }
}

fn simulate(path: &PathBuf, out: Option<&PathBuf>) -> Outcome {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Outcome::usage(format!("{}: {e}", path.display())),
    };
    let scenario = match scenario::parse_scenario(&text) {
        Ok(s) => s,
        Err(e) => return Outcome::usage(format!("{}: {e}", path.display())),
    };
    let trace = match scenario.run() {
        Ok(t) => t,
        Err(e) => return Outcome::usage(e),
    };
    let csv = scenario::write_trace(&trace);
    match out {
        Some(dest) => match std::fs::write(dest, csv) {
            Ok(()) => Outcome::ok(format!(
                "steps={} neurons={} out={}\n",
                trace.steps(),
                trace.neurons(),
                dest.display()
            )),
            Err(e) => Outcome {
                status: EXIT_FAILED,
                stdout: String::new(),
                stderr: format!("error: {}: {e}\n", dest.display()),
            },
        },
        None => Outcome::ok(csv),
    }
}

fn verify_table1() -> Outcome {
    let report = scenario::standard_scenario()
        .run()
        .map_err(scenario::ScenarioError::from)
        .and_then(|trace| {
            scenario::compare_golden(&trace, &scenario::table1_fixture(), TABLE1_TOLERANCE)
        });
    match report {
        Ok(r) => Outcome {
            status: if r.pass { EXIT_OK } else { EXIT_FAILED },
            stdout: format!("{r}\n"),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            status: EXIT_FAILED,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn run_counter(depth: usize, label: Option<String>) -> Outcome {
    let spec = CounterSpec { depth, label };
    let (events, last) = match counter::run_counter(&spec) {
        Ok(r) => r,
        Err(e) => return Outcome::usage(e),
    };
    let mut out = String::new();
    for e in &events {
        match &spec.label {
            Some(l) => writeln!(out, "{e} label={l}"),
            None => writeln!(out, "{e}"),
        }
        .unwrap();
    }
    writeln!(out, "quiescent tick={}", last.tick).unwrap();
    Outcome::ok(out)
}

fn chain(hops: &[u64]) -> Outcome {
    let chain = match WeightChain::new(hops.to_vec()) {
        Ok(c) => c,
        Err(e) => return Outcome::usage(e),
    };
    let product = energy::chain_source_firings(&chain);
    let oracle = energy::event_oracle(&chain.to_chain());
    match (product, oracle) {
        (Ok(p), Ok(o)) => Outcome {
            status: if p == o { EXIT_OK } else { EXIT_FAILED },
            stdout: format!("product={p} oracle={o}\n"),
            stderr: String::new(),
        },
        (Err(e), _) | (_, Err(e)) => Outcome::usage(e),
    }
}

fn center(weights: &[u64]) -> Outcome {
    let chain = match WeightChain::new(weights.to_vec()) {
        Ok(c) => c,
        Err(e) => return Outcome::usage(e),
    };
    let result =
        energy::centering_costs(&chain).and_then(|c| Ok((c, energy::best_center(&chain)?)));
    match result {
        Ok((costs, best)) => {
            let list = costs
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",");
            Outcome::ok(format!("costs={list}\nbest={}\n", best + 1))
        }
        Err(e) => Outcome::usage(e),
    }
}

fn layout(trials: usize, seed: u64) -> Outcome {
    let results = match batch::layout_trials(trials, seed) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                status: EXIT_FAILED,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    let pass = results.iter().filter(|t| t.inward_shorter()).count();
    let fail = results.len() - pass;
    Outcome {
        status: if fail == 0 { EXIT_OK } else { EXIT_FAILED },
        stdout: format!("seed={seed} trials={trials}\ninward<outward pass={pass} fail={fail}\n"),
        stderr: String::new(),
    }
}

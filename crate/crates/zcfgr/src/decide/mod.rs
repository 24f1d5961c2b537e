//! Top-level decision procedures: reachability and coverability via the
//! compiled reach formula, grammar inclusion via the universal/existential
//! reach-set sentence, and the matrix form of single-nonterminal inclusion.

mod queries;
mod solver;

pub use queries::{decide_cover, decide_inclusion, decide_reach, decide_zvas_inclusion};
pub use solver::{check_sat, SatResult, SolverError, SolverSession, DEFAULT_TIMEOUT, SOLVER_ENV_VAR};

use std::time::Duration;

use thiserror::Error;

use crate::config::{Configuration, Valuation};
use crate::parikh::{CompileError, ReachWitness, WitnessError};
use crate::reductions::ReductionError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Answer::Yes => write!(f, "yes"),
            Answer::No => write!(f, "no"),
            Answer::Unknown => write!(f, "unknown"),
        }
    }
}

/// Evidence attached to a verdict: a replayable run for positive
/// reachability/coverability, or a separating point for failed inclusions.
#[derive(Debug, Clone)]
pub enum Witness {
    Reach(ReachWitness),
    /// A counter valuation reachable on the left but not on the right.
    InclusionCounterexample(Valuation),
    /// A universal-side vector with no existential completion.
    ZvasCounterexample(Vec<i64>),
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub answer: Answer,
    pub witness: Option<Witness>,
    pub solver_time: Duration,
    pub formula_size: usize,
}

impl Verdict {
    fn new(answer: Answer) -> Self {
        Self { answer, witness: None, solver_time: Duration::ZERO, formula_size: 0 }
    }
}

#[derive(Debug, Error)]
pub enum DecideError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("witness reconstruction failed (this indicates a compiler bug): {0}")]
    Witness(#[from] WitnessError),
    #[error("witness run ends at `{got}` instead of the queried `{want}` (compiler bug)")]
    WitnessEndpoint { want: String, got: String },
    #[error("inclusion queries need identical counter sets")]
    CounterSetMismatch,
    #[error("solver counterexample failed confirmation: {0}")]
    CounterexampleUnconfirmed(String),
    #[error("start word must be the bare axiom for reach-set queries, got `{0}`")]
    BadStartConfiguration(Configuration),
}

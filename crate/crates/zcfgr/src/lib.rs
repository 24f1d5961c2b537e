//! Reachability, coverability and inclusion for context-free commutative
//! grammars with integer counters and resets.
//!
//! Queries are compiled to Presburger-arithmetic formulas, discharged with an
//! external SMT-LIB2 solver, and positive answers are validated by replaying
//! a reconstructed run through the operational semantics. The crate also
//! ships the subset-sum-based hardness instance generators used as
//! benchmarks, and bounded brute-force oracles for testing.

pub mod config;
pub mod decide;
pub mod explore;
pub mod gpi;
pub mod grammar;
pub mod hardness;
pub mod parikh;
pub mod parse;
pub mod presburger;
pub mod reductions;
pub mod semantics;
pub mod word;

pub use config::{Configuration, Valuation};
pub use grammar::{classify, Grammar, GrammarClass, Production};
pub use word::CommutativeWord;

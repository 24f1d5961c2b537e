//! Compilation of grammars into Presburger formulas.
//!
//! The compiled formulas characterize, per grammar: Parikh images of
//! word-level runs, generalized Parikh images (including the permutation and
//! start-index machinery), the counter effect ladder, full reachability
//! between configurations, and the reachability set from a fixed start.
//! [`realize_run`] reconstructs a concrete run from a solver model.

mod compile;
mod witness;

pub use compile::{
    build_counters_formula, build_gpi_formula, build_parikh_formula, build_perm_formula,
    build_reach_formula, build_reach_set_formula, build_runs_formula, build_words_formula,
    run_length_bound_formula, CompileError,
};
pub use witness::{realize_run, ReachWitness, WitnessError, REALIZE_BUDGET};

use crate::grammar::Grammar;
use crate::presburger::Var;

/// Deterministic names for every formula variable a grammar's compilation
/// uses. Positions (`i`, `j`) are 1-based to match the emitted clause
/// structure; production arguments take the 0-based production index.
///
/// Naming scheme: `s_<nt>`, `t_<nt>`, `u_<ctr>`, `v_<ctr>`, `alpha_<i>_<p>`,
/// `sigma_<i>`, `m`, `d_<nt>` (segment copies `d_<i>_<nt>`), `beta_<j>_<ctr>`,
/// `delta_<j>_<ctr>`, `sw_<i>_<nt>`, `tw_<i>_<nt>`.
pub struct VariableLayout<'g> {
    g: &'g Grammar,
}

impl<'g> VariableLayout<'g> {
    pub fn new(g: &'g Grammar) -> Self {
        Self { g }
    }

    pub fn grammar(&self) -> &'g Grammar {
        self.g
    }

    /// Start-word component for a nonterminal.
    pub fn s(&self, nt: &str) -> Var {
        Var::nat(format!("s_{nt}"))
    }

    /// End-word component for a nonterminal.
    pub fn t(&self, nt: &str) -> Var {
        Var::nat(format!("t_{nt}"))
    }

    /// Initial counter value.
    pub fn u(&self, counter: &str) -> Var {
        Var::int(format!("u_{counter}"))
    }

    /// Final counter value.
    pub fn v(&self, counter: &str) -> Var {
        Var::int(format!("v_{counter}"))
    }

    /// Parikh count of production `p` in segment `i`.
    pub fn alpha(&self, i: usize, p: usize) -> Var {
        Var::nat(format!("alpha_{i}_{}", self.g.production(p).id))
    }

    /// Parikh count of production `p` in the standalone word formula.
    pub fn alpha_flat(&self, p: usize) -> Var {
        Var::nat(format!("alpha_{}", self.g.production(p).id))
    }

    /// Position-`i` entry of the last-occurrence permutation (1-based value).
    pub fn sigma(&self, i: usize) -> Var {
        Var::nat(format!("sigma_{i}"))
    }

    /// First non-padding position, in `[1, k]`.
    pub fn m(&self) -> Var {
        Var::nat("m")
    }

    /// Connectivity distance for the standalone word formula.
    pub fn dist(&self, nt: &str) -> Var {
        Var::nat(format!("d_{nt}"))
    }

    /// Connectivity distance inside segment `i`.
    pub fn seg_dist(&self, i: usize, nt: &str) -> Var {
        Var::nat(format!("d_{i}_{nt}"))
    }

    /// Start word of segment `i`.
    pub fn seg_s(&self, i: usize, nt: &str) -> Var {
        Var::nat(format!("sw_{i}_{nt}"))
    }

    /// End word of segment `i`.
    pub fn seg_t(&self, i: usize, nt: &str) -> Var {
        Var::nat(format!("tw_{i}_{nt}"))
    }

    /// Counter ladder accumulator after position `j`, for `j` in `[0, k]`.
    pub fn beta(&self, j: usize, counter: &str) -> Var {
        Var::int(format!("beta_{j}_{counter}"))
    }

    /// Counter ladder value after segment `j` but before its separator.
    pub fn delta(&self, j: usize, counter: &str) -> Var {
        Var::int(format!("delta_{j}_{counter}"))
    }
}

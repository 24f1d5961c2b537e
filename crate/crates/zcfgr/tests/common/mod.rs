//! Shared helpers for the integration and acceptance suites: seeded random
//! generators for grammars, runs and formulas, plus solver discovery.

#![allow(dead_code)]

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use zcfgr::config::{Configuration, Valuation};
use zcfgr::decide::{SolverSession, DEFAULT_TIMEOUT};
use zcfgr::grammar::{Grammar, Production};
use zcfgr::presburger::{Formula, Logic, Sort, Term, Var};
use zcfgr::word::CommutativeWord;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn solver(logic: Logic) -> SolverSession {
    SolverSession::from_env(DEFAULT_TIMEOUT, logic)
        .expect("no SMT solver available: set ZCFGR_SOLVER or install z3 on PATH")
}

pub struct GrammarShape {
    pub max_nonterminals: usize,
    pub max_counters: usize,
    pub max_productions: usize,
    pub max_rhs_len: u64,
    pub max_update: i64,
    pub reset_probability: f64,
}

impl Default for GrammarShape {
    fn default() -> Self {
        Self {
            max_nonterminals: 3,
            max_counters: 3,
            max_productions: 4,
            max_rhs_len: 2,
            max_update: 3,
            reset_probability: 0.3,
        }
    }
}

/// A random grammar within the shape bounds; every production's left-hand
/// side is drawn uniformly, so derivations can die out or branch.
pub fn random_grammar(rng: &mut ChaCha8Rng, shape: &GrammarShape) -> Grammar {
    let n = rng.gen_range(1..=shape.max_nonterminals);
    let c = rng.gen_range(0..=shape.max_counters);
    let k = rng.gen_range(1..=shape.max_productions);
    let nonterminals: Vec<String> = (0..n).map(|i| format!("N{i}")).collect();
    let counters: Vec<String> = (0..c).map(|i| format!("c{i}")).collect();
    let productions = (0..k)
        .map(|idx| {
            let lhs = nonterminals[rng.gen_range(0..n)].clone();
            let rhs_len = rng.gen_range(0..=shape.max_rhs_len);
            let mut rhs = CommutativeWord::empty();
            for _ in 0..rhs_len {
                rhs.insert(nonterminals[rng.gen_range(0..n)].clone(), 1);
            }
            let resets = counters
                .iter()
                .filter(|_| rng.gen_bool(shape.reset_probability))
                .cloned()
                .collect();
            let update = counters
                .iter()
                .map(|c| (c.clone(), rng.gen_range(-shape.max_update..=shape.max_update)))
                .collect();
            Production { id: format!("p{}", idx + 1), lhs, resets, update, rhs }
        })
        .collect();
    Grammar::new(nonterminals, counters, productions, "N0".into()).expect("generated grammar is valid")
}

pub fn random_valuation(rng: &mut ChaCha8Rng, g: &Grammar, magnitude: i64) -> Valuation {
    Valuation::new(
        g.counters()
            .iter()
            .map(|c| (c.clone(), rng.gen_range(-magnitude..=magnitude))),
    )
}

pub fn axiom_config(g: &Grammar, counters: Valuation) -> Configuration {
    Configuration::new(
        CommutativeWord::singleton(g.axiom()),
        counters.complete_for(g).expect("counters fit the grammar"),
    )
}

/// A random run of up to `max_len` steps starting from `c0`, following
/// enabled productions uniformly. May be shorter if the word dies out.
pub fn random_run(
    rng: &mut ChaCha8Rng,
    g: &Grammar,
    c0: &Configuration,
    max_len: usize,
) -> Vec<usize> {
    let mut run = Vec::new();
    let mut current = c0.clone();
    for _ in 0..max_len {
        let enabled: Vec<usize> = (0..g.production_count())
            .filter(|&p| current.word.contains(&g.production(p).lhs))
            .collect();
        let Some(&p) = enabled.choose(rng) else { break };
        current = zcfgr::semantics::step_indexed(g, &current, p).expect("enabled production steps");
        run.push(p);
    }
    run
}

/// A random two-sorted formula of bounded depth over the given free
/// variables; quantifiers introduce fresh bound variables.
pub fn random_formula(
    rng: &mut ChaCha8Rng,
    free: &[Var],
    depth: usize,
    next_bound: &mut usize,
) -> Formula {
    let mut scope: Vec<Var> = free.to_vec();
    build_random_formula(rng, &mut scope, depth, next_bound)
}

fn random_term(rng: &mut ChaCha8Rng, scope: &[Var]) -> Term {
    let mut term = Term::constant(rng.gen_range(-4..=4));
    if scope.is_empty() {
        return term;
    }
    for _ in 0..rng.gen_range(1..=2usize.min(scope.len())) {
        let v = scope[rng.gen_range(0..scope.len())].clone();
        term.add_coeff(v, rng.gen_range(-2..=2));
    }
    term
}

fn build_random_formula(
    rng: &mut ChaCha8Rng,
    scope: &mut Vec<Var>,
    depth: usize,
    next_bound: &mut usize,
) -> Formula {
    let atom = |rng: &mut ChaCha8Rng, scope: &[Var]| {
        let term = random_term(rng, scope);
        if rng.gen_bool(0.5) {
            Formula::Atom(zcfgr::presburger::Atom::Eq(term))
        } else {
            Formula::Atom(zcfgr::presburger::Atom::Ge(term))
        }
    };
    if depth == 0 {
        return atom(rng, scope);
    }
    match rng.gen_range(0..6) {
        0 => atom(rng, scope),
        1 => Formula::and_all(vec![
            build_random_formula(rng, scope, depth - 1, next_bound),
            build_random_formula(rng, scope, depth - 1, next_bound),
        ]),
        2 => Formula::or_all(vec![
            build_random_formula(rng, scope, depth - 1, next_bound),
            build_random_formula(rng, scope, depth - 1, next_bound),
        ]),
        3 => Formula::not(build_random_formula(rng, scope, depth - 1, next_bound)),
        4 => Formula::implies(
            build_random_formula(rng, scope, depth - 1, next_bound),
            build_random_formula(rng, scope, depth - 1, next_bound),
        ),
        _ => {
            let sort = if rng.gen_bool(0.5) { Sort::Nat } else { Sort::Int };
            let var = Var { name: format!("q{}", *next_bound), sort };
            *next_bound += 1;
            scope.push(var.clone());
            let body = build_random_formula(rng, scope, depth - 1, next_bound);
            scope.pop();
            if rng.gen_bool(0.5) {
                Formula::exists(vec![var], body)
            } else {
                Formula::forall(vec![var], body)
            }
        }
    }
}

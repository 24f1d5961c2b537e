//! The decision procedures themselves.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use crate::config::{Configuration, Valuation};
use crate::grammar::Grammar;
use crate::hardness::LinearInclusionInstance;
use crate::parikh::{
    build_reach_formula, build_reach_set_formula, realize_run, VariableLayout, REALIZE_BUDGET,
};
use crate::presburger::{
    prenex, rename_vars_except, substitute, Assignment, Formula, Term, Var,
};
use crate::reductions::{cover_to_reach, CoverQuery, ReachQuery};
use crate::word::CommutativeWord;

use super::solver::{SatResult, SolverSession};
use super::{Answer, DecideError, Verdict, Witness};

/// Prenexes the query and opens its leading existential blocks: the freed
/// variables become declared constants, so a sat model values every internal
/// variable and witness reconstruction can read them back.
fn open_query(f: &Formula) -> Formula {
    let mut p = prenex(f);
    while let Formula::Exists(_, body) = p {
        p = *body;
    }
    p
}

fn timed_check(
    session: &SolverSession,
    f: &Formula,
    elapsed: &mut Duration,
) -> Result<SatResult, DecideError> {
    let start = Instant::now();
    let result = session.check_sat(f);
    *elapsed += start.elapsed();
    Ok(result?)
}

/// Substitutes the four endpoint vectors of the reach formula.
fn endpoint_binding(g: &Grammar, from: &Configuration, to: &Configuration) -> Assignment {
    let layout = VariableLayout::new(g);
    let mut binding = Assignment::default();
    for a in g.nonterminals() {
        binding.set(layout.s(a).name, from.word.count(a) as i64);
        binding.set(layout.t(a).name, to.word.count(a) as i64);
    }
    for c in g.counters() {
        binding.set(layout.u(c).name, from.counters.get(c));
        binding.set(layout.v(c).name, to.counters.get(c));
    }
    binding
}

/// Decides whether `q.to` is reachable from `q.from`. A positive answer
/// carries a run reconstructed from the solver model and replayed through the
/// semantics; the replay must end exactly at `q.to`.
pub fn decide_reach(q: &ReachQuery, session: &SolverSession) -> Result<Verdict, DecideError> {
    if q.from == q.to {
        let mut verdict = Verdict::new(Answer::Yes);
        verdict.witness = Some(Witness::Reach(crate::parikh::ReachWitness::empty(q.to.clone())));
        return Ok(verdict);
    }
    if q.grammar.production_count() == 0 {
        return Ok(Verdict::new(Answer::No));
    }
    let phi = build_reach_formula(&q.grammar)?;
    let query = substitute(&phi, &endpoint_binding(&q.grammar, &q.from, &q.to))
        .expect("endpoint variables are free in the reach formula");
    let formula_size = query.size();
    let opened = open_query(&query);

    let mut solver_time = Duration::ZERO;
    let answer = match timed_check(session, &opened, &mut solver_time)? {
        SatResult::Sat(model) => {
            let witness = realize_run(&q.grammar, &q.from, &model, REALIZE_BUDGET)?;
            if witness.end != q.to {
                return Err(DecideError::WitnessEndpoint {
                    want: q.to.to_string(),
                    got: witness.end.to_string(),
                });
            }
            let mut verdict = Verdict::new(Answer::Yes);
            verdict.witness = Some(Witness::Reach(witness));
            verdict
        }
        SatResult::Unsat => Verdict::new(Answer::No),
        SatResult::Unknown => Verdict::new(Answer::Unknown),
    };
    Ok(Verdict { solver_time, formula_size, ..answer })
}

/// Decides coverability through the lossy-counter reduction; the witness run
/// lives in the transformed grammar (decrement steps included).
pub fn decide_cover(q: &CoverQuery, session: &SolverSession) -> Result<Verdict, DecideError> {
    let reach = cover_to_reach(q)?;
    decide_reach(&reach, session)
}

/// Decides `reach(g, u) ⊆ reach(h, v)` for grammars over the same counters.
///
/// The satisfiability query asks for a separating valuation: reachable on the
/// left, unreachable on the right. Unsat means inclusion holds. A sat model
/// is only reported after two confirmation queries pin the counterexample
/// down independently.
pub fn decide_inclusion(
    g: &Grammar,
    u: &Valuation,
    h: &Grammar,
    v: &Valuation,
    session: &SolverSession,
) -> Result<Verdict, DecideError> {
    let g_counters: BTreeSet<&String> = g.counters().iter().collect();
    let h_counters: BTreeSet<&String> = h.counters().iter().collect();
    if g_counters != h_counters {
        return Err(DecideError::CounterSetMismatch);
    }

    let start_of = |grammar: &Grammar, counters: &Valuation| -> Result<Configuration, DecideError> {
        let counters = counters
            .clone()
            .complete_for(grammar)
            .map_err(|_| DecideError::CounterSetMismatch)?;
        Ok(Configuration::new(CommutativeWord::singleton(grammar.axiom()), counters))
    };
    let from_g = start_of(g, u)?;
    let from_h = start_of(h, v)?;

    let left = build_reach_set_formula(g, &from_g)?;
    let right = build_reach_set_formula(h, &from_h)?;
    let layout = VariableLayout::new(g);
    let shared: BTreeSet<String> = g.counters().iter().map(|c| layout.v(c).name).collect();
    let left = rename_vars_except(&left, &shared, &|name| format!("g__{name}"));
    let right = rename_vars_except(&right, &shared, &|name| format!("h__{name}"));
    let query = Formula::and_all(vec![left.clone(), Formula::not(right.clone())]);
    let formula_size = query.size();
    let opened = open_query(&query);

    let mut solver_time = Duration::ZERO;
    let verdict = match timed_check(session, &opened, &mut solver_time)? {
        SatResult::Unsat => Verdict::new(Answer::Yes),
        SatResult::Unknown => Verdict::new(Answer::Unknown),
        SatResult::Sat(model) => {
            let mut separating = Valuation::default();
            let mut binding = Assignment::default();
            for c in g.counters() {
                let name = layout.v(c).name;
                let value = model.get(&name).unwrap_or(0);
                separating.set(c.clone(), value);
                binding.set(name, value);
            }
            // The counterexample must be reachable on the left...
            let confirm_left = substitute(&left, &binding)
                .expect("the shared variables are free in the reach-set formula");
            match timed_check(session, &open_query(&confirm_left), &mut solver_time)? {
                SatResult::Sat(_) => {}
                other => {
                    return Err(DecideError::CounterexampleUnconfirmed(format!(
                        "left reach-set query returned {other:?}"
                    )))
                }
            }
            // ...and unreachable on the right.
            let confirm_right = substitute(&right, &binding)
                .expect("the shared variables are free in the reach-set formula");
            match timed_check(session, &open_query(&confirm_right), &mut solver_time)? {
                SatResult::Unsat => {}
                other => {
                    return Err(DecideError::CounterexampleUnconfirmed(format!(
                        "right reach-set query returned {other:?}"
                    )))
                }
            }
            let mut verdict = Verdict::new(Answer::No);
            verdict.witness = Some(Witness::InclusionCounterexample(separating));
            verdict
        }
    };
    Ok(Verdict { solver_time, formula_size, ..verdict })
}

/// Decides `∀x ∈ ℕ^r ∃y ∈ ℕ^s. A·x + B·y = v` by handing the solver the
/// negated sentence `∃x ∀y. ¬(...)`: a model of the negation is a failing
/// universal vector, unsat of the negation proves the sentence.
pub fn decide_zvas_inclusion(
    inst: &LinearInclusionInstance,
    session: &SolverSession,
) -> Result<Verdict, DecideError> {
    let (d, r, s) = inst.dimensions();
    let x_var = |j: usize| Var::nat(format!("x_{}", j + 1));
    let y_var = |j: usize| Var::nat(format!("y_{}", j + 1));

    let mut rows = Vec::with_capacity(d);
    for row in 0..d {
        let mut term = Term::default();
        for j in 0..r {
            term.add_coeff(x_var(j), inst.a.get(row, j));
        }
        for j in 0..s {
            term.add_coeff(y_var(j), inst.b.get(row, j));
        }
        rows.push(Formula::eq(term, Term::constant(inst.v[row])));
    }
    let negated = Formula::not(Formula::and_all(rows));
    let query = Formula::forall((0..s).map(y_var).collect(), negated);
    let formula_size = query.size();

    let mut solver_time = Duration::ZERO;
    let verdict = match timed_check(session, &query, &mut solver_time)? {
        SatResult::Unsat => Verdict::new(Answer::Yes),
        SatResult::Unknown => Verdict::new(Answer::Unknown),
        SatResult::Sat(model) => {
            let witness: Vec<i64> = (0..r).map(|j| model.get(&x_var(j).name).unwrap_or(0)).collect();
            let mut verdict = Verdict::new(Answer::No);
            verdict.witness = Some(Witness::ZvasCounterexample(witness));
            verdict
        }
    };
    Ok(Verdict { solver_time, formula_size, ..verdict })
}

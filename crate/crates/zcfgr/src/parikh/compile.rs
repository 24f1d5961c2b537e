//! Formula builders: word-level Parikh reachability, the generalized Parikh
//! image characterization, the counter ladder, and the reach-set formula.

use thiserror::Error;

use crate::config::Configuration;
use crate::grammar::Grammar;
use crate::presburger::{substitute, Assignment, Formula, Term, Var};
use crate::word::CommutativeWord;

use super::VariableLayout;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompileError {
    #[error("grammar has no productions; only the empty run exists")]
    EmptyProductionSet,
    #[error("reach-set start word must be the axiom, got `{0}`")]
    NotAxiomStart(String),
}

/// 1-based value a production index takes inside sigma variables.
fn position_value(p: usize) -> i64 {
    p as i64 + 1
}

/// Word-level Parikh reachability with caller-chosen variables.
///
/// Balance: each nonterminal's end count is its start count plus the net
/// production effect. Connectivity: distance certificates witness that every
/// applied production's left-hand side is derivable from the start word's
/// support using applied productions only. The distance variables are
/// existentially quantified here.
fn parikh_core(
    g: &Grammar,
    s_of: &dyn Fn(&str) -> Var,
    t_of: &dyn Fn(&str) -> Var,
    alpha_of: &dyn Fn(usize) -> Var,
    dist_of: &dyn Fn(&str) -> Var,
) -> Formula {
    let n = g.nonterminals().len() as i64;
    let mut balance = Vec::new();
    for a in g.nonterminals() {
        let mut rhs = Term::var(s_of(a));
        for (p, prod) in g.productions().iter().enumerate() {
            let coeff = prod.rhs.count(a) as i64 - i64::from(prod.lhs == *a);
            rhs.add_coeff(alpha_of(p), coeff);
        }
        balance.push(Formula::eq(Term::var(t_of(a)), rhs));
    }

    let mut connectivity = Vec::new();
    for a in g.nonterminals() {
        connectivity.push(Formula::le(Term::var(dist_of(a)), Term::constant(n)));
    }
    for (p, prod) in g.productions().iter().enumerate() {
        connectivity.push(Formula::implies(
            Formula::ge(Term::var(alpha_of(p)), Term::constant(1)),
            Formula::ge(Term::var(dist_of(&prod.lhs)), Term::constant(1)),
        ));
    }
    for a in g.nonterminals() {
        let d_a = Term::var(dist_of(a));
        let mut cases = vec![Formula::and_all(vec![
            Formula::ge(Term::var(s_of(a)), Term::constant(1)),
            Formula::eq(d_a.clone(), Term::constant(1)),
        ])];
        for (p, prod) in g.productions().iter().enumerate() {
            if prod.rhs.count(a) >= 1 {
                let d_lhs = Term::var(dist_of(&prod.lhs));
                cases.push(Formula::and_all(vec![
                    Formula::ge(Term::var(alpha_of(p)), Term::constant(1)),
                    Formula::ge(d_lhs.clone(), Term::constant(1)),
                    Formula::eq(d_a.clone(), d_lhs.plus(&Term::constant(1))),
                ]));
            }
        }
        connectivity.push(Formula::implies(
            Formula::ge(d_a, Term::constant(1)),
            Formula::or_all(cases),
        ));
    }

    let dist_vars: Vec<Var> = g.nonterminals().iter().map(|a| dist_of(a)).collect();
    Formula::and_all(vec![
        Formula::and_all(balance),
        Formula::exists(dist_vars, Formula::and_all(connectivity)),
    ])
}

/// The word-level Parikh formula over `s_<nt>`, `t_<nt>`, `alpha_<p>`: models
/// are exactly the triples `(s, t, α)` such that some run with Parikh image
/// `α` rewrites `s` into `t`, counters ignored. The zero vector with `s = t`
/// is accepted (the empty run).
pub fn build_parikh_formula(g: &Grammar) -> Formula {
    let layout = VariableLayout::new(g);
    parikh_core(
        g,
        &|a| layout.s(a),
        &|a| layout.t(a),
        &|p| layout.alpha_flat(p),
        &|a| layout.dist(a),
    )
}

/// Satisfied exactly by the permutations of `[1, k]` over `sigma_1..sigma_k`.
pub fn build_perm_formula(k: usize) -> Result<Formula, CompileError> {
    if k == 0 {
        return Err(CompileError::EmptyProductionSet);
    }
    let sigma = |i: usize| Term::var(Var::nat(format!("sigma_{i}")));
    let mut clauses = Vec::new();
    for i in 1..=k {
        let mut per_i = vec![
            Formula::ge(sigma(i), Term::constant(1)),
            Formula::le(sigma(i), Term::constant(k as i64)),
        ];
        for j in 1..=k {
            if i != j {
                per_i.push(Formula::ne(sigma(i), sigma(j)));
            }
        }
        clauses.push(Formula::and_all(per_i));
    }
    Ok(Formula::and_all(clauses))
}

/// Ties the segment boundary words together: the first segment starts at the
/// queried word, padding positions pass their word through unchanged, and at
/// every real position the production assigned by sigma rewrites the
/// segment's end word into the next segment's start word.
pub fn build_words_formula(g: &Grammar) -> Result<Formula, CompileError> {
    let k = g.production_count();
    if k == 0 {
        return Err(CompileError::EmptyProductionSet);
    }
    let layout = VariableLayout::new(g);
    let m = Term::var(layout.m());
    let mut clauses = Vec::new();

    for a in g.nonterminals() {
        clauses.push(Formula::eq(Term::var(layout.seg_s(1, a)), Term::var(layout.s(a))));
    }

    // The production fired at the last position rewrites tw_k into t.
    for (p, prod) in g.productions().iter().enumerate() {
        let mut body = vec![Formula::gt(
            Term::var(layout.seg_t(k, &prod.lhs)),
            Term::constant(0),
        )];
        for b in g.nonterminals() {
            let mut rhs = Term::var(layout.seg_t(k, b));
            rhs.add_constant(prod.rhs.count(b) as i64 - i64::from(prod.lhs == *b));
            body.push(Formula::eq(Term::var(layout.t(b)), rhs));
        }
        clauses.push(Formula::implies(
            Formula::eq(Term::var(layout.sigma(k)), Term::constant(position_value(p))),
            Formula::and_all(body),
        ));
    }

    for i in 1..k {
        let mut pass_through = Vec::new();
        for a in g.nonterminals() {
            pass_through.push(Formula::eq(
                Term::var(layout.seg_s(i, a)),
                Term::var(layout.seg_t(i, a)),
            ));
            pass_through.push(Formula::eq(
                Term::var(layout.seg_t(i, a)),
                Term::var(layout.seg_s(i + 1, a)),
            ));
        }
        clauses.push(Formula::implies(
            Formula::ge(m.clone(), Term::constant(i as i64 + 1)),
            Formula::and_all(pass_through),
        ));

        let mut fire = Vec::new();
        for (p, prod) in g.productions().iter().enumerate() {
            let mut body = vec![Formula::gt(
                Term::var(layout.seg_t(i, &prod.lhs)),
                Term::constant(0),
            )];
            for b in g.nonterminals() {
                let mut rhs = Term::var(layout.seg_t(i, b));
                rhs.add_constant(prod.rhs.count(b) as i64 - i64::from(prod.lhs == *b));
                body.push(Formula::eq(Term::var(layout.seg_s(i + 1, b)), rhs));
            }
            fire.push(Formula::implies(
                Formula::eq(Term::var(layout.sigma(i)), Term::constant(position_value(p))),
                Formula::and_all(body),
            ));
        }
        clauses.push(Formula::implies(
            Formula::le(m.clone(), Term::constant(i as i64)),
            Formula::and_all(fire),
        ));
    }

    Ok(Formula::and_all(clauses))
}

/// Constrains the segment Parikh vectors: padding segments are zero, real
/// segments satisfy the word-level Parikh formula between their boundary
/// words, and no production may occur in a segment after its last occurrence
/// has passed.
pub fn build_runs_formula(g: &Grammar) -> Result<Formula, CompileError> {
    let k = g.production_count();
    if k == 0 {
        return Err(CompileError::EmptyProductionSet);
    }
    let layout = VariableLayout::new(g);
    let m = Term::var(layout.m());
    let mut clauses = Vec::new();

    for i in 1..=k {
        let zeros = g
            .productions()
            .iter()
            .enumerate()
            .map(|(p, _)| Formula::eq(Term::var(layout.alpha(i, p)), Term::constant(0)))
            .collect();
        clauses.push(Formula::implies(
            Formula::ge(m.clone(), Term::constant(i as i64 + 1)),
            Formula::and_all(zeros),
        ));

        let segment = parikh_core(
            g,
            &|a| layout.seg_s(i, a),
            &|a| layout.seg_t(i, a),
            &|p| layout.alpha(i, p),
            &|a| layout.seg_dist(i, a),
        );
        let mut body = vec![segment];
        for j in 1..i {
            for (p, _) in g.productions().iter().enumerate() {
                body.push(Formula::implies(
                    Formula::eq(Term::var(layout.sigma(j)), Term::constant(position_value(p))),
                    Formula::eq(Term::var(layout.alpha(i, p)), Term::constant(0)),
                ));
            }
        }
        clauses.push(Formula::implies(
            Formula::le(m.clone(), Term::constant(i as i64)),
            Formula::and_all(body),
        ));
    }

    Ok(Formula::and_all(clauses))
}

/// The generalized-Parikh-image formula: its models, projected to
/// `(alpha, sigma, m)`, are exactly the generalized Parikh images of nonempty
/// runs from `s` to `t`. The boundary words are existentially quantified.
pub fn build_gpi_formula(g: &Grammar) -> Result<Formula, CompileError> {
    let k = g.production_count();
    if k == 0 {
        return Err(CompileError::EmptyProductionSet);
    }
    let layout = VariableLayout::new(g);
    let m = Term::var(layout.m());
    let body = Formula::and_all(vec![
        Formula::ge(m.clone(), Term::constant(1)),
        Formula::le(m, Term::constant(k as i64)),
        build_perm_formula(k)?,
        build_words_formula(g)?,
        build_runs_formula(g)?,
    ]);
    let mut word_vars = Vec::new();
    for i in 1..=k {
        for a in g.nonterminals() {
            word_vars.push(layout.seg_s(i, a));
        }
    }
    for i in 1..=k {
        for a in g.nonterminals() {
            word_vars.push(layout.seg_t(i, a));
        }
    }
    Ok(Formula::exists(word_vars, body))
}

/// Formula for "counter `c` is reset at or after position `x`", where `x` is
/// either the variable `m` or a concrete position: some position `j ≥ x`
/// holds a production resetting `c`. The sigma case split excludes exactly
/// the productions that do not reset `c`.
fn reset_at_or_after(g: &Grammar, layout: &VariableLayout, c: &str, x: ResetBound) -> Formula {
    let k = g.production_count();
    let lower = match x {
        ResetBound::Position(j0) => j0,
        ResetBound::StartVariable => 1,
    };
    let mut cases = Vec::new();
    for j in lower..=k {
        let mut conj = Vec::new();
        if let ResetBound::StartVariable = x {
            // j ≥ m
            conj.push(Formula::ge(Term::constant(j as i64), Term::var(layout.m())));
        }
        for (p, prod) in g.productions().iter().enumerate() {
            if !prod.resets.contains(c) {
                conj.push(Formula::ne(
                    Term::var(layout.sigma(j)),
                    Term::constant(position_value(p)),
                ));
            }
        }
        cases.push(Formula::and_all(conj));
    }
    Formula::or_all(cases)
}

#[derive(Clone, Copy)]
enum ResetBound {
    /// Concrete 1-based position.
    Position(usize),
    /// The variable `m`.
    StartVariable,
}

/// The counter ladder: intermediate variables accumulate, position by
/// position, the segment effects and separator updates that survive later
/// resets. The initial value enters only if the counter is never reset from
/// the start position on; separators contribute only from the start position
/// on and only if the counter is not reset strictly later.
pub fn build_counters_formula(g: &Grammar) -> Result<Formula, CompileError> {
    let k = g.production_count();
    if k == 0 {
        return Err(CompileError::EmptyProductionSet);
    }
    let layout = VariableLayout::new(g);
    let m = Term::var(layout.m());
    let mut clauses = Vec::new();

    for c in g.counters() {
        let reset_from_start = reset_at_or_after(g, &layout, c, ResetBound::StartVariable);
        clauses.push(Formula::implies(
            reset_from_start.clone(),
            Formula::eq(Term::var(layout.beta(0, c)), Term::constant(0)),
        ));
        clauses.push(Formula::implies(
            Formula::not(reset_from_start),
            Formula::eq(Term::var(layout.beta(0, c)), Term::var(layout.u(c))),
        ));

        clauses.push(Formula::eq(Term::var(layout.v(c)), Term::var(layout.beta(k, c))));

        for j in 1..=k {
            // Segment effect: suppressed if c is reset at or after position j,
            // or if j is still inside the padding.
            let segment_suppressed = Formula::or_all(vec![
                reset_at_or_after(g, &layout, c, ResetBound::Position(j)),
                Formula::ge(m.clone(), Term::constant(j as i64 + 1)),
            ]);
            clauses.push(Formula::implies(
                segment_suppressed.clone(),
                Formula::eq(Term::var(layout.delta(j, c)), Term::var(layout.beta(j - 1, c))),
            ));
            let mut with_effect = Term::var(layout.beta(j - 1, c));
            for (p, prod) in g.productions().iter().enumerate() {
                with_effect.add_coeff(layout.alpha(j, p), prod.update_of(c));
            }
            clauses.push(Formula::implies(
                Formula::not(segment_suppressed),
                Formula::eq(Term::var(layout.delta(j, c)), with_effect),
            ));

            // Separator update: suppressed if c is reset strictly after
            // position j, or if j is inside the padding. (Position k is never
            // padding and nothing is reset after it.)
            let separator_case_split = || -> Vec<Formula> {
                g.productions()
                    .iter()
                    .enumerate()
                    .map(|(p, prod)| {
                        Formula::implies(
                            Formula::eq(
                                Term::var(layout.sigma(j)),
                                Term::constant(position_value(p)),
                            ),
                            Formula::eq(
                                Term::var(layout.beta(j, c)),
                                Term::var(layout.delta(j, c)).plus(&Term::constant(prod.update_of(c))),
                            ),
                        )
                    })
                    .collect()
            };
            if j < k {
                let separator_suppressed = Formula::or_all(vec![
                    reset_at_or_after(g, &layout, c, ResetBound::Position(j + 1)),
                    Formula::ge(m.clone(), Term::constant(j as i64 + 1)),
                ]);
                clauses.push(Formula::implies(
                    separator_suppressed.clone(),
                    Formula::eq(Term::var(layout.beta(j, c)), Term::var(layout.delta(j, c))),
                ));
                clauses.push(Formula::implies(
                    Formula::not(separator_suppressed),
                    Formula::and_all(separator_case_split()),
                ));
            } else {
                clauses.push(Formula::and_all(separator_case_split()));
            }
        }
    }

    let mut ladder_vars = Vec::new();
    for c in g.counters() {
        for j in 0..=k {
            ladder_vars.push(layout.beta(j, c));
        }
        for j in 1..=k {
            ladder_vars.push(layout.delta(j, c));
        }
    }
    Ok(Formula::exists(ladder_vars, Formula::and_all(clauses)))
}

/// Full reachability: models correspond exactly to nonempty runs
/// `(s, u) → (t, v)` paired with a generalized Parikh image of the run.
pub fn build_reach_formula(g: &Grammar) -> Result<Formula, CompileError> {
    Ok(Formula::and_all(vec![build_gpi_formula(g)?, build_counters_formula(g)?]))
}

/// The reachability-set formula over the free variables `v_<ctr>`: the start
/// word is the axiom and the start counters are substituted from `from`. An
/// explicit disjunct accepts the empty run, so the start valuation is always
/// a model; the end word is projected away.
pub fn build_reach_set_formula(g: &Grammar, from: &Configuration) -> Result<Formula, CompileError> {
    let layout = VariableLayout::new(g);
    if from.word != CommutativeWord::singleton(g.axiom()) {
        return Err(CompileError::NotAxiomStart(from.word.to_string()));
    }
    let empty_run = Formula::and_all(
        g.counters()
            .iter()
            .map(|c| {
                Formula::eq(Term::var(layout.v(c)), Term::constant(from.counters.get(c)))
            })
            .collect(),
    );
    let k = g.production_count();
    if k == 0 {
        return Ok(empty_run);
    }

    let mut binding = Assignment::default();
    for a in g.nonterminals() {
        binding.set(layout.s(a).name, i64::from(a == g.axiom()));
    }
    for c in g.counters() {
        binding.set(layout.u(c).name, from.counters.get(c));
    }
    let reach = substitute(&build_reach_formula(g)?, &binding)
        .expect("start variables are free in the reach formula");

    let mut closed_vars = Vec::new();
    for a in g.nonterminals() {
        closed_vars.push(layout.t(a));
    }
    for i in 1..=k {
        for (p, _) in g.productions().iter().enumerate() {
            closed_vars.push(layout.alpha(i, p));
        }
    }
    for i in 1..=k {
        closed_vars.push(layout.sigma(i));
    }
    closed_vars.push(layout.m());

    Ok(Formula::or_all(vec![empty_run, Formula::exists(closed_vars, reach)]))
}

/// Bounds the total run length encoded in a reach-formula model:
/// `Σ alpha_<i>_<p> + (k − m + 1) ≤ bound`. Conjoin with the reach formula to
/// compare against the bounded oracle.
pub fn run_length_bound_formula(g: &Grammar, bound: u64) -> Result<Formula, CompileError> {
    let k = g.production_count();
    if k == 0 {
        return Err(CompileError::EmptyProductionSet);
    }
    let layout = VariableLayout::new(g);
    let mut total = Term::constant(k as i64 + 1);
    total.add_coeff(layout.m(), -1);
    for i in 1..=k {
        for (p, _) in g.productions().iter().enumerate() {
            total.add_coeff(layout.alpha(i, p), 1);
        }
    }
    Ok(Formula::le(total, Term::constant(bound as i64)))
}

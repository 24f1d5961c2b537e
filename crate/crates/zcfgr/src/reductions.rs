//! Reductions between coverability and reachability, and the embedding of
//! linear Diophantine feasibility into single-nonterminal reachability.
//!
//! Coverability reduces to reachability by making counters lossy: one
//! decrement self-loop on the axiom per counter. Reachability reduces to
//! coverability by mirroring every counter with a negated copy, so covering
//! the mirrored target pins the exact value. Both constructions preserve the
//! structural subclass of the input grammar.

use thiserror::Error;

use crate::config::{Configuration, Valuation};
use crate::grammar::{Grammar, GrammarError, Production};
use crate::word::CommutativeWord;

/// Is there a run from `from` to exactly `to`?
#[derive(Debug, Clone)]
pub struct ReachQuery {
    pub grammar: Grammar,
    pub from: Configuration,
    pub to: Configuration,
}

/// Is there a run from `from` to word `to.word` with counters ≥ `to.counters`?
#[derive(Debug, Clone)]
pub struct CoverQuery {
    pub grammar: Grammar,
    pub from: Configuration,
    pub to: Configuration,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("symbol `{0}` collides with a name the construction needs")]
    SymbolCollision(String),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
}

/// Adds one decrement self-loop `dec_<c>: S -> S add c -1` per counter and
/// pads both endpoint words with the axiom so the loops are always enabled.
/// The cover answer for the input equals the reach answer for the output.
pub fn cover_to_reach(q: &CoverQuery) -> Result<ReachQuery, ReductionError> {
    let g = &q.grammar;
    let mut productions = g.productions().to_vec();
    for c in g.counters() {
        let id = format!("dec_{c}");
        if g.production_by_id(&id).is_some() {
            return Err(ReductionError::SymbolCollision(id));
        }
        productions.push(Production {
            id,
            lhs: g.axiom().to_string(),
            resets: Default::default(),
            update: [(c.clone(), -1i64)].into_iter().collect(),
            rhs: CommutativeWord::singleton(g.axiom()),
        });
    }
    let grammar = Grammar::new(
        g.nonterminals().to_vec(),
        g.counters().to_vec(),
        productions,
        g.axiom().to_string(),
    )?;
    let axiom = CommutativeWord::singleton(g.axiom());
    Ok(ReachQuery {
        grammar,
        from: Configuration::new(q.from.word.add(&axiom), q.from.counters.clone()),
        to: Configuration::new(q.to.word.add(&axiom), q.to.counters.clone()),
    })
}

fn mirror_name(c: &str) -> String {
    format!("~{c}")
}

/// Doubles the counters with mirrored copies `~c` holding the negated value:
/// every production resets and updates both halves symmetrically, so covering
/// `(v, -v)` forces reaching exactly `v`. The reach answer for the input
/// equals the cover answer for the output.
pub fn reach_to_cover(q: &ReachQuery) -> Result<CoverQuery, ReductionError> {
    let g = &q.grammar;
    for c in g.counters() {
        if g.is_counter(&mirror_name(c)) {
            return Err(ReductionError::SymbolCollision(mirror_name(c)));
        }
    }
    let mut counters = g.counters().to_vec();
    counters.extend(g.counters().iter().map(|c| mirror_name(c)));

    let productions = g
        .productions()
        .iter()
        .map(|p| {
            let mut resets = p.resets.clone();
            resets.extend(p.resets.iter().map(|c| mirror_name(c)));
            let mut update = p.update.clone();
            for (c, &z) in &p.update {
                update.insert(mirror_name(c), -z);
            }
            Production { id: p.id.clone(), lhs: p.lhs.clone(), resets, update, rhs: p.rhs.clone() }
        })
        .collect();

    let grammar = Grammar::new(
        g.nonterminals().to_vec(),
        counters,
        productions,
        g.axiom().to_string(),
    )?;

    let mirrored = |val: &Valuation| {
        let mut out = Valuation::default();
        for c in g.counters() {
            out.set(c.clone(), val.get(c));
            out.set(mirror_name(c), -val.get(c));
        }
        out
    };
    Ok(CoverQuery {
        grammar,
        from: Configuration::new(q.from.word.clone(), mirrored(&q.from.counters)),
        to: Configuration::new(q.to.word.clone(), mirrored(&q.to.counters)),
    })
}

/// Embeds `∃x ≥ 0. A·x = u` into single-nonterminal reachability: one
/// self-loop per column of `A`, asking whether `(S, -u)` reaches `(S, 0)`.
pub fn diophantine_to_reach(a: &[Vec<i64>], u: &[i64]) -> Result<ReachQuery, ReductionError> {
    let rows = a.len();
    assert_eq!(rows, u.len(), "matrix and target dimensions must agree");
    let columns = a.first().map_or(0, Vec::len);
    let counters: Vec<String> = (1..=rows).map(|i| format!("c{i}")).collect();
    let productions = (0..columns)
        .map(|j| Production {
            id: format!("p{}", j + 1),
            lhs: "S".into(),
            resets: Default::default(),
            update: counters
                .iter()
                .enumerate()
                .map(|(i, c)| (c.clone(), a[i][j]))
                .collect(),
            rhs: CommutativeWord::singleton("S"),
        })
        .collect();
    let grammar = Grammar::new(vec!["S".into()], counters.clone(), productions, "S".into())?;
    let from = Configuration::new(
        CommutativeWord::singleton("S"),
        Valuation::new(counters.iter().enumerate().map(|(i, c)| (c.clone(), -u[i]))),
    );
    let to = Configuration::new(
        CommutativeWord::singleton("S"),
        Valuation::new(counters.iter().map(|c| (c.clone(), 0i64))),
    );
    Ok(ReachQuery { grammar, from, to })
}

//! Run reconstruction from solver models of the reach formula.

use std::collections::HashSet;

use thiserror::Error;

use crate::config::Configuration;
use crate::gpi::{GeneralizedParikhImage, GpiError};
use crate::grammar::Grammar;
use crate::presburger::Assignment;
use crate::semantics::simulate_indexed;
use crate::word::CommutativeWord;

use super::VariableLayout;

/// Search budget for segment reconstruction, counted in visited
/// (word, remaining-counts) states.
pub const REALIZE_BUDGET: usize = 1_000_000;

/// A validated reachability witness.
#[derive(Debug, Clone)]
pub struct ReachWitness {
    /// The generalized Parikh image the model encodes; absent for the
    /// trivial empty-run witness.
    pub gpi: Option<GeneralizedParikhImage>,
    /// Boundary words `(s_i, t_i)` of the real segments.
    pub boundary_words: Vec<(CommutativeWord, CommutativeWord)>,
    /// The reconstructed run, as production ids.
    pub run: Vec<String>,
    /// The configuration the run ends in, per the operational semantics.
    pub end: Configuration,
}

impl ReachWitness {
    /// The trivial witness for `from = to` queries.
    pub fn empty(end: Configuration) -> Self {
        Self { gpi: None, boundary_words: Vec::new(), run: Vec::new(), end }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("model has no value for `{0}`")]
    MissingValue(String),
    #[error("model value for `{name}` is out of range: {value}")]
    ValueOutOfRange { name: String, value: i64 },
    #[error("model does not encode a generalized Parikh image: {0}")]
    MalformedImage(#[from] GpiError),
    #[error("segment {segment} admits no run matching its Parikh vector")]
    SegmentSearchFailed { segment: usize },
    #[error("segment search budget exceeded")]
    BudgetExceeded,
    #[error("reconstructed run fails validation: {0}")]
    Validation(String),
}

fn model_value(model: &Assignment, name: &str) -> Result<i64, WitnessError> {
    model.get(name).ok_or_else(|| WitnessError::MissingValue(name.to_string()))
}

fn model_nat(model: &Assignment, name: &str) -> Result<u64, WitnessError> {
    let value = model_value(model, name)?;
    u64::try_from(value).map_err(|_| WitnessError::ValueOutOfRange { name: name.to_string(), value })
}

fn model_word(
    model: &Assignment,
    g: &Grammar,
    var_of: impl Fn(&str) -> String,
) -> Result<CommutativeWord, WitnessError> {
    let mut word = CommutativeWord::empty();
    for a in g.nonterminals() {
        word.insert(a.clone(), model_nat(model, &var_of(a))?);
    }
    Ok(word)
}

/// Depth-first search for a run from `word` using each production exactly
/// `remaining[p]` more times. Failed states are memoized; every visited state
/// consumes budget.
fn find_segment(
    g: &Grammar,
    word: &CommutativeWord,
    goal: &CommutativeWord,
    remaining: &mut Vec<u64>,
    failed: &mut HashSet<(CommutativeWord, Vec<u64>)>,
    budget: &mut usize,
) -> Result<Option<Vec<usize>>, WitnessError> {
    if remaining.iter().all(|&n| n == 0) {
        return Ok(if word == goal { Some(Vec::new()) } else { None });
    }
    if failed.contains(&(word.clone(), remaining.clone())) {
        return Ok(None);
    }
    if *budget == 0 {
        return Err(WitnessError::BudgetExceeded);
    }
    *budget -= 1;
    for p in 0..g.production_count() {
        if remaining[p] == 0 {
            continue;
        }
        let prod = g.production(p);
        let Some(reduced) = word.remove_one(&prod.lhs) else {
            continue;
        };
        let next = reduced.add(&prod.rhs);
        remaining[p] -= 1;
        let found = find_segment(g, &next, goal, remaining, failed, budget)?;
        remaining[p] += 1;
        if let Some(mut tail) = found {
            tail.insert(0, p);
            return Ok(Some(tail));
        }
    }
    failed.insert((word.clone(), remaining.clone()));
    Ok(None)
}

/// Reconstructs a run from a model of the reach formula and validates it by
/// simulation from `from`. The model must assign every layout variable the
/// solver was handed, including the opened existential ones.
pub fn realize_run(
    g: &Grammar,
    from: &Configuration,
    model: &Assignment,
    budget: usize,
) -> Result<ReachWitness, WitnessError> {
    let layout = VariableLayout::new(g);
    let k = g.production_count();

    let m = model_nat(model, &layout.m().name)? as usize;
    if m < 1 || m > k {
        return Err(WitnessError::ValueOutOfRange { name: layout.m().name, value: m as i64 });
    }
    let mut sigma = Vec::with_capacity(k);
    for i in 1..=k {
        let value = model_nat(model, &layout.sigma(i).name)? as usize;
        if value < 1 || value > k {
            return Err(WitnessError::ValueOutOfRange {
                name: layout.sigma(i).name,
                value: value as i64,
            });
        }
        sigma.push(value - 1);
    }
    let mut alphas = Vec::with_capacity(k);
    for i in 1..=k {
        let mut alpha = Vec::with_capacity(k);
        for p in 0..k {
            alpha.push(model_nat(model, &layout.alpha(i, p).name)?);
        }
        alphas.push(alpha);
    }
    let gpi = GeneralizedParikhImage::new(alphas.clone(), sigma.clone(), m - 1)?;

    let mut boundary_words = Vec::new();
    for i in m..=k {
        let s_i = model_word(model, g, |a| layout.seg_s(i, a).name.clone())?;
        let t_i = model_word(model, g, |a| layout.seg_t(i, a).name.clone())?;
        boundary_words.push((s_i, t_i));
    }
    if boundary_words[0].0 != from.word {
        return Err(WitnessError::Validation(format!(
            "model start word `{}` differs from the queried `{}`",
            boundary_words[0].0, from.word
        )));
    }

    let mut run: Vec<usize> = Vec::new();
    let mut budget = budget;
    let mut failed = HashSet::new();
    for (offset, (s_i, t_i)) in boundary_words.iter().enumerate() {
        let i = m + offset;
        let mut remaining = alphas[i - 1].clone();
        let segment = find_segment(g, s_i, t_i, &mut remaining, &mut failed, &mut budget)?
            .ok_or(WitnessError::SegmentSearchFailed { segment: i })?;
        run.extend(segment);
        run.push(sigma[i - 1]);
        failed.clear();
    }

    let end = simulate_indexed(g, from, &run)
        .map_err(|e| WitnessError::Validation(e.to_string()))?;
    let ids = run.iter().map(|&p| g.production(p).id.clone()).collect();
    Ok(ReachWitness { gpi: Some(gpi), boundary_words, run: ids, end })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Valuation;
    use crate::grammar::Production;

    fn tree_grammar() -> Grammar {
        Grammar::new(
            vec!["S".into(), "A".into()],
            vec![],
            vec![
                Production {
                    id: "p1".into(),
                    lhs: "S".into(),
                    resets: Default::default(),
                    update: Default::default(),
                    rhs: CommutativeWord::from_counts([("A", 2u64)]),
                },
                Production {
                    id: "p2".into(),
                    lhs: "A".into(),
                    resets: Default::default(),
                    update: Default::default(),
                    rhs: CommutativeWord::empty(),
                },
            ],
            "S".into(),
        )
        .unwrap()
    }

    /// Hand-written model of the reach formula for run p1 p2 p2.
    fn tree_model() -> Assignment {
        let mut a = Assignment::default();
        a.set("m", 1);
        a.set("sigma_1", 1);
        a.set("sigma_2", 2);
        for (name, value) in [
            ("alpha_1_p1", 0i64),
            ("alpha_1_p2", 0),
            ("alpha_2_p1", 0),
            ("alpha_2_p2", 1),
            ("sw_1_S", 1),
            ("sw_1_A", 0),
            ("tw_1_S", 1),
            ("tw_1_A", 0),
            ("sw_2_S", 0),
            ("sw_2_A", 2),
            ("tw_2_S", 0),
            ("tw_2_A", 1),
        ] {
            a.set(name, value);
        }
        a
    }

    #[test]
    fn reconstructs_and_validates_tree_run() {
        let g = tree_grammar();
        let from = Configuration::new(CommutativeWord::singleton("S"), Valuation::default());
        let witness = realize_run(&g, &from, &tree_model(), REALIZE_BUDGET).unwrap();
        assert_eq!(witness.run, vec!["p1", "p2", "p2"]);
        assert!(witness.end.word.is_empty());
        assert_eq!(witness.gpi.as_ref().unwrap().m(), 1);
    }

    #[test]
    fn corrupted_model_fails_validation() {
        let g = tree_grammar();
        let from = Configuration::new(CommutativeWord::singleton("S"), Valuation::default());
        let mut model = tree_model();
        // break the balance: claim segment 2 uses p2 three times
        model.set("alpha_2_p2", 3);
        let err = realize_run(&g, &from, &model, REALIZE_BUDGET).unwrap_err();
        assert!(matches!(err, WitnessError::SegmentSearchFailed { segment: 2 }));
    }

    #[test]
    fn missing_values_are_reported() {
        let g = tree_grammar();
        let from = Configuration::new(CommutativeWord::singleton("S"), Valuation::default());
        let err = realize_run(&g, &from, &Assignment::default(), REALIZE_BUDGET).unwrap_err();
        assert_eq!(err, WitnessError::MissingValue("m".into()));
    }

    #[test]
    fn single_production_model_yields_power_run() {
        // p1: S -> S add c +1; alpha_1 = (n−1) forces the run p1^n
        let g = Grammar::new(
            vec!["S".into()],
            vec!["c".into()],
            vec![Production {
                id: "p1".into(),
                lhs: "S".into(),
                resets: Default::default(),
                update: [("c".to_string(), 1i64)].into_iter().collect(),
                rhs: CommutativeWord::singleton("S"),
            }],
            "S".into(),
        )
        .unwrap();
        let from = Configuration::new(CommutativeWord::singleton("S"), Valuation::new([("c", 0i64)]));
        let mut model = Assignment::default();
        model.set("m", 1);
        model.set("sigma_1", 1);
        model.set("alpha_1_p1", 4);
        model.set("sw_1_S", 1);
        model.set("tw_1_S", 1);
        let witness = realize_run(&g, &from, &model, REALIZE_BUDGET).unwrap();
        assert_eq!(witness.run.len(), 5);
        assert_eq!(witness.end.counters.get("c"), 5);
    }
}

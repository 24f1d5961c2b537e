//! Bounded breadth-first exploration of the configuration space.
//!
//! Counter values are unbounded, so this explorer is a test oracle, not a
//! decision procedure: it enumerates exactly the configurations reachable by
//! runs of length at most `depth`, or reports that the node budget was hit.

use std::collections::{BTreeSet, HashSet, VecDeque};

use thiserror::Error;

use crate::config::Configuration;
use crate::grammar::Grammar;
use crate::semantics::step_indexed;

pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExploreError {
    #[error("node budget of {budget} exceeded after depth {completed_depth}")]
    BudgetExceeded { budget: usize, completed_depth: usize },
}

/// All configurations reachable from `c0` by runs of length ≤ `depth`.
///
/// Distinguishes a complete closure from a budget hit: if more than `budget`
/// distinct configurations are discovered the search stops with an error.
pub fn reach_set_bounded(
    g: &Grammar,
    c0: &Configuration,
    depth: usize,
    budget: usize,
) -> Result<BTreeSet<Configuration>, ExploreError> {
    let mut seen: HashSet<Configuration> = HashSet::new();
    let mut queue: VecDeque<(Configuration, usize)> = VecDeque::new();
    seen.insert(c0.clone());
    queue.push_back((c0.clone(), 0));
    while let Some((c, d)) = queue.pop_front() {
        if d == depth {
            continue;
        }
        for p in 0..g.production_count() {
            if let Ok(next) = step_indexed(g, &c, p) {
                if seen.contains(&next) {
                    continue;
                }
                if seen.len() >= budget {
                    return Err(ExploreError::BudgetExceeded { budget, completed_depth: d });
                }
                seen.insert(next.clone());
                queue.push_back((next, d + 1));
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Like [`reach_set_bounded`] but also reports the minimal run length for each
/// configuration, which the formula-completeness tests slice by.
pub fn reach_depths_bounded(
    g: &Grammar,
    c0: &Configuration,
    depth: usize,
    budget: usize,
) -> Result<Vec<(Configuration, usize)>, ExploreError> {
    let mut seen: HashSet<Configuration> = HashSet::new();
    let mut out: Vec<(Configuration, usize)> = Vec::new();
    let mut queue: VecDeque<(Configuration, usize)> = VecDeque::new();
    seen.insert(c0.clone());
    out.push((c0.clone(), 0));
    queue.push_back((c0.clone(), 0));
    while let Some((c, d)) = queue.pop_front() {
        if d == depth {
            continue;
        }
        for p in 0..g.production_count() {
            if let Ok(next) = step_indexed(g, &c, p) {
                if seen.contains(&next) {
                    continue;
                }
                if seen.len() >= budget {
                    return Err(ExploreError::BudgetExceeded { budget, completed_depth: d });
                }
                seen.insert(next.clone());
                out.push((next.clone(), d + 1));
                queue.push_back((next, d + 1));
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Valuation;
    use crate::grammar::Production;
    use crate::word::CommutativeWord;

    fn prod(id: &str, lhs: &str, update: &[(&str, i64)], rhs: &[&str]) -> Production {
        Production {
            id: id.into(),
            lhs: lhs.into(),
            resets: Default::default(),
            update: update.iter().map(|(c, v)| (c.to_string(), *v)).collect(),
            rhs: CommutativeWord::from_counts(rhs.iter().map(|s| (s.to_string(), 1u64))),
        }
    }

    #[test]
    fn arithmetic_progression() {
        let g = Grammar::new(
            vec!["S".into()],
            vec!["c".into()],
            vec![prod("p1", "S", &[("c", 2)], &["S"])],
            "S".into(),
        )
        .unwrap();
        let c0 = Configuration::new(CommutativeWord::singleton("S"), Valuation::new([("c", 0i64)]));
        let set = reach_set_bounded(&g, &c0, 2, 1000).unwrap();
        let values: Vec<i64> = set.iter().map(|c| c.counters.get("c")).collect();
        assert_eq!(values, vec![0, 2, 4]);
    }

    #[test]
    fn depth_zero_is_just_the_start() {
        let g = Grammar::new(vec!["S".into()], vec![], vec![prod("p1", "S", &[], &["S"])], "S".into()).unwrap();
        let c0 = Configuration::new(CommutativeWord::singleton("S"), Valuation::default());
        let set = reach_set_bounded(&g, &c0, 0, 1000).unwrap();
        assert_eq!(set.len(), 1);
        assert!(set.contains(&c0));
    }

    #[test]
    fn word_multisets_from_tree_grammar() {
        let g = Grammar::new(
            vec!["S".into(), "A".into()],
            vec![],
            vec![prod("p1", "S", &[], &["A", "A"]), prod("p2", "A", &[], &[])],
            "S".into(),
        )
        .unwrap();
        let c0 = Configuration::new(CommutativeWord::singleton("S"), Valuation::default());
        let set = reach_set_bounded(&g, &c0, 3, 1000).unwrap();
        let words: BTreeSet<String> = set.iter().map(|c| c.word.to_string()).collect();
        let expected: BTreeSet<String> =
            ["S", "A A", "A", "eps"].iter().map(|s| s.to_string()).collect();
        assert_eq!(words, expected);
    }

    #[test]
    fn monotone_in_depth() {
        let g = Grammar::new(
            vec!["S".into()],
            vec!["c".into()],
            vec![prod("p1", "S", &[("c", 1)], &["S"]), prod("p2", "S", &[("c", -3)], &["S"])],
            "S".into(),
        )
        .unwrap();
        let c0 = Configuration::new(CommutativeWord::singleton("S"), Valuation::new([("c", 0i64)]));
        let mut previous = BTreeSet::new();
        for depth in 0..5 {
            let set = reach_set_bounded(&g, &c0, depth, 10_000).unwrap();
            assert!(set.is_superset(&previous));
            previous = set;
        }
    }

    #[test]
    fn budget_hit_is_an_error() {
        let g = Grammar::new(
            vec!["S".into()],
            vec!["c".into()],
            vec![prod("p1", "S", &[("c", 1)], &["S"])],
            "S".into(),
        )
        .unwrap();
        let c0 = Configuration::new(CommutativeWord::singleton("S"), Valuation::new([("c", 0i64)]));
        let err = reach_set_bounded(&g, &c0, 100, 10).unwrap_err();
        assert!(matches!(err, ExploreError::BudgetExceeded { budget: 10, .. }));
    }
}

//! Invariants of the formula compiler beyond the acceptance criteria:
//! exhaustive permutation-formula correctness, reach-set reflexivity, and
//! inclusion-procedure sanity on enumerable reach sets.

mod common;

use common::{axiom_config, random_grammar, random_valuation, rng, solver, GrammarShape};
use rand::Rng;
use zcfgr::decide::{decide_inclusion, Answer, SatResult};
use zcfgr::explore::reach_set_bounded;
use zcfgr::grammar::{Grammar, Production};
use zcfgr::parikh::{build_perm_formula, build_reach_set_formula, VariableLayout};
use zcfgr::presburger::{evaluate, substitute, Assignment, Logic};
use zcfgr::word::CommutativeWord;

#[test]
fn perm_formula_exhaustive_up_to_five() {
    for k in 1..=5usize {
        let f = build_perm_formula(k).unwrap();
        let mut tuple = vec![1i64; k];
        loop {
            let mut a = Assignment::default();
            for (i, &v) in tuple.iter().enumerate() {
                a.set(format!("sigma_{}", i + 1), v);
            }
            let is_permutation = {
                let mut seen = vec![false; k];
                tuple.iter().all(|&v| {
                    let ok = (1..=k as i64).contains(&v) && !seen[(v - 1) as usize];
                    if ok {
                        seen[(v - 1) as usize] = true;
                    }
                    ok
                })
            };
            assert_eq!(
                evaluate(&f, &a, 0).unwrap(),
                is_permutation,
                "k={k}, tuple={tuple:?}"
            );
            // advance over [1, k]^k
            let mut idx = 0;
            loop {
                if idx == k {
                    break;
                }
                if tuple[idx] < k as i64 {
                    tuple[idx] += 1;
                    break;
                }
                tuple[idx] = 1;
                idx += 1;
            }
            if idx == k {
                break;
            }
        }
    }
}

#[test]
fn reach_set_formula_is_reflexive() {
    let session = solver(Logic::QfLia);
    let mut rng = rng(301);
    for _ in 0..20 {
        let g = random_grammar(&mut rng, &GrammarShape::default());
        let from = axiom_config(&g, random_valuation(&mut rng, &g, 5));
        let f = build_reach_set_formula(&g, &from).unwrap();
        let layout = VariableLayout::new(&g);
        let mut binding = Assignment::default();
        for c in g.counters() {
            binding.set(layout.v(c).name, from.counters.get(c));
        }
        let closed = substitute(&f, &binding).unwrap();
        match session.check_sat(&closed).unwrap() {
            SatResult::Sat(_) => {}
            other => panic!("start valuation must satisfy its own reach-set formula, got {other:?}"),
        }
    }
}

#[test]
fn inclusion_is_reflexive_on_random_grammars() {
    let session = solver(Logic::Lia);
    let shape = GrammarShape {
        max_nonterminals: 2,
        max_counters: 2,
        max_productions: 2,
        max_rhs_len: 2,
        max_update: 2,
        reset_probability: 0.3,
    };
    let mut rng = rng(302);
    for _ in 0..8 {
        let g = random_grammar(&mut rng, &shape);
        let u = random_valuation(&mut rng, &g, 3);
        let verdict = decide_inclusion(&g, &u, &g, &u, &session).unwrap();
        assert_eq!(verdict.answer, Answer::Yes, "reach(G,u) must include itself: {g:?}");
    }
}

/// Grammars whose reach sets are finite and exactly enumerable: acyclic
/// word productions, so every run terminates within a known bound.
fn enumerable_grammar(rng: &mut rand_chacha::ChaCha8Rng) -> Grammar {
    let counters = vec!["c".to_string()];
    let k = rng.gen_range(1..=3);
    let productions = (0..k)
        .map(|idx| {
            let rhs = if idx == 0 && rng.gen_bool(0.5) {
                CommutativeWord::singleton("B")
            } else {
                CommutativeWord::empty()
            };
            let lhs = if idx == 0 { "A" } else if rng.gen_bool(0.5) { "A" } else { "B" };
            Production {
                id: format!("p{}", idx + 1),
                lhs: lhs.into(),
                resets: if rng.gen_bool(0.3) { ["c".to_string()].into() } else { Default::default() },
                update: [("c".to_string(), rng.gen_range(-3..=3i64))].into(),
                rhs,
            }
        })
        .collect();
    Grammar::new(vec!["A".into(), "B".into()], counters, productions, "A".into()).unwrap()
}

#[test]
fn inclusion_agrees_with_enumerated_reach_sets() {
    let session = solver(Logic::Lia);
    let mut rng = rng(303);
    let mut yes_seen = 0;
    let mut no_seen = 0;
    for round in 0..25 {
        let g = enumerable_grammar(&mut rng);
        let u = random_valuation(&mut rng, &g, 2);
        // every third pair extends g with one production, so inclusion holds
        // by construction and the corpus exercises both verdicts
        let (h, v) = if round % 3 == 0 {
            let mut productions = g.productions().to_vec();
            productions.push(Production {
                id: "extra".into(),
                lhs: "A".into(),
                resets: Default::default(),
                update: [("c".to_string(), 7i64)].into(),
                rhs: CommutativeWord::singleton("A"),
            });
            let h = Grammar::new(
                g.nonterminals().to_vec(),
                g.counters().to_vec(),
                productions,
                g.axiom().to_string(),
            )
            .unwrap();
            (h, u.clone())
        } else {
            let h = enumerable_grammar(&mut rng);
            let v = random_valuation(&mut rng, &h, 2);
            (h, v)
        };
        // runs terminate within 2 steps (axiom expands to at most one B)
        let reach_of = |grammar: &Grammar, init: &zcfgr::config::Valuation| {
            let from = axiom_config(grammar, init.clone());
            let set = reach_set_bounded(grammar, &from, 4, 100_000).unwrap();
            set.into_iter().map(|c| c.counters.get("c")).collect::<std::collections::BTreeSet<i64>>()
        };
        let expected = reach_of(&g, &u).is_subset(&reach_of(&h, &v));
        let verdict = decide_inclusion(&g, &u, &h, &v, &session).unwrap();
        let got = match verdict.answer {
            Answer::Yes => true,
            Answer::No => false,
            Answer::Unknown => panic!("unknown on an enumerable inclusion instance"),
        };
        assert_eq!(expected, got, "set-level inclusion mismatch: {g:?} vs {h:?}");
        if expected {
            yes_seen += 1;
        } else {
            no_seen += 1;
        }
    }
    assert!(yes_seen >= 3 && no_seen >= 3, "corpus must exercise both verdicts ({yes_seen}/{no_seen})");
}

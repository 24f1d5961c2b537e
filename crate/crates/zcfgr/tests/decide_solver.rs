//! End-to-end decision tests against the external solver.

mod common;

use common::solver;
use zcfgr::config::Valuation;
use zcfgr::decide::{decide_cover, decide_inclusion, decide_reach, decide_zvas_inclusion, Answer, Witness};
use zcfgr::hardness::{LinearInclusionInstance, Matrix};
use zcfgr::parse::{parse_configuration, parse_grammar};
use zcfgr::presburger::Logic;
use zcfgr::reductions::{CoverQuery, ReachQuery};
use zcfgr::semantics::simulate;

fn reach_query(grammar_text: &str, from: &str, to: &str) -> ReachQuery {
    let grammar = parse_grammar(grammar_text).unwrap();
    let from = parse_configuration(from, &grammar).unwrap();
    let to = parse_configuration(to, &grammar).unwrap();
    ReachQuery { grammar, from, to }
}

const RESET_LOOP: &str = "\
zcfgr 1
counters c
nonterminals S
axiom S
rule p1: S -> S | reset c | add c +1
";

#[test]
fn reach_reset_loop_positive_with_witness() {
    let q = reach_query(RESET_LOOP, "S ; c=100", "S ; c=1");
    let verdict = decide_reach(&q, &solver(Logic::QfLia)).unwrap();
    assert_eq!(verdict.answer, Answer::Yes);
    let Some(Witness::Reach(w)) = &verdict.witness else {
        panic!("expected a reach witness");
    };
    assert!(!w.run.is_empty());
    let end = simulate(&q.grammar, &q.from, &w.run).unwrap();
    assert_eq!(end, q.to);
}

#[test]
fn reach_reset_loop_negative() {
    // every nonempty run ends at c=1, and c=2 differs from the start
    let q = reach_query(RESET_LOOP, "S ; c=100", "S ; c=2");
    let verdict = decide_reach(&q, &solver(Logic::QfLia)).unwrap();
    assert_eq!(verdict.answer, Answer::No);
}

#[test]
fn reach_identical_endpoints_is_trivially_positive() {
    let q = reach_query(RESET_LOOP, "S ; c=7", "S ; c=7");
    let verdict = decide_reach(&q, &solver(Logic::QfLia)).unwrap();
    assert_eq!(verdict.answer, Answer::Yes);
    let Some(Witness::Reach(w)) = &verdict.witness else {
        panic!("expected a witness");
    };
    assert!(w.run.is_empty());
}

#[test]
fn reach_tree_grammar_to_empty_word() {
    let q = reach_query(
        "zcfgr 1\nnonterminals S A\naxiom S\nrule p1: S -> A A\nrule p2: A -> eps\n",
        "S",
        "eps",
    );
    let verdict = decide_reach(&q, &solver(Logic::QfLia)).unwrap();
    assert_eq!(verdict.answer, Answer::Yes);
    let Some(Witness::Reach(w)) = &verdict.witness else {
        panic!("expected a witness");
    };
    assert_eq!(w.run.len(), 3);
}

#[test]
fn reach_empty_grammar_needs_equality() {
    let q = reach_query("zcfgr 1\ncounters c\nnonterminals S\naxiom S\n", "S ; c=0", "S ; c=1");
    let verdict = decide_reach(&q, &solver(Logic::QfLia)).unwrap();
    assert_eq!(verdict.answer, Answer::No);
}

#[test]
fn unused_production_contributes_nothing() {
    // A run using only p2 (zero update) keeps c at 0; the padding position
    // holding the unused p1 must not leak its +5 update into the ladder.
    let text = "\
zcfgr 1
counters c
nonterminals S
axiom S
rule p1: S -> S | add c +5
rule p2: S -> S
";
    let session = solver(Logic::QfLia);
    let q = reach_query(text, "S ; c=0", "S ; c=5");
    let verdict = decide_reach(&q, &session).unwrap();
    assert_eq!(verdict.answer, Answer::Yes); // run p1 itself

    let q = reach_query(text, "S ; c=0", "S ; c=10");
    let verdict = decide_reach(&q, &session).unwrap();
    assert_eq!(verdict.answer, Answer::Yes); // run p1 p1

    let q = reach_query(text, "S ; c=0", "S ; c=4");
    let verdict = decide_reach(&q, &session).unwrap();
    assert_eq!(verdict.answer, Answer::No); // 4 is not a multiple of 5
}

#[test]
fn cover_through_reduction() {
    let g = parse_grammar("zcfgr 1\ncounters c\nnonterminals S\naxiom S\nrule p1: S -> S | add c +3\n")
        .unwrap();
    let from = parse_configuration("S ; c=0", &g).unwrap();
    let session = solver(Logic::QfLia);

    let to = parse_configuration("S ; c=5", &g).unwrap();
    let verdict =
        decide_cover(&CoverQuery { grammar: g.clone(), from: from.clone(), to }, &session).unwrap();
    assert_eq!(verdict.answer, Answer::Yes);

    // threshold below the start is covered by the empty run
    let to = parse_configuration("S ; c=-1", &g).unwrap();
    let verdict =
        decide_cover(&CoverQuery { grammar: g.clone(), from: from.clone(), to }, &session).unwrap();
    assert_eq!(verdict.answer, Answer::Yes);

    let g_dec =
        parse_grammar("zcfgr 1\ncounters c\nnonterminals S\naxiom S\nrule p1: S -> S | add c -1\n")
            .unwrap();
    let from = parse_configuration("S ; c=0", &g_dec).unwrap();
    let to = parse_configuration("S ; c=1", &g_dec).unwrap();
    let verdict = decide_cover(&CoverQuery { grammar: g_dec, from, to }, &session).unwrap();
    assert_eq!(verdict.answer, Answer::No);
}

#[test]
fn inclusion_even_numbers_in_naturals() {
    let even = parse_grammar("zcfgr 1\ncounters c\nnonterminals S\naxiom S\nrule p1: S -> S | add c +2\n")
        .unwrap();
    let all = parse_grammar("zcfgr 1\ncounters c\nnonterminals S\naxiom S\nrule p1: S -> S | add c +1\n")
        .unwrap();
    let zero = Valuation::new([("c", 0i64)]);
    let session = solver(Logic::Lia);

    let verdict = decide_inclusion(&even, &zero, &all, &zero, &session).unwrap();
    assert_eq!(verdict.answer, Answer::Yes);

    // swapped: 1 is reachable by +1 but not by +2
    let verdict = decide_inclusion(&all, &zero, &even, &zero, &session).unwrap();
    assert_eq!(verdict.answer, Answer::No);
    let Some(Witness::InclusionCounterexample(z)) = &verdict.witness else {
        panic!("expected a counterexample");
    };
    assert_eq!(z.get("c").rem_euclid(2), 1);
}

#[test]
fn inclusion_is_reflexive_on_reset_grammar() {
    let g = parse_grammar(RESET_LOOP).unwrap();
    let u = Valuation::new([("c", 100i64)]);
    let verdict = decide_inclusion(&g, &u, &g, &u, &solver(Logic::Lia)).unwrap();
    assert_eq!(verdict.answer, Answer::Yes);
}

#[test]
fn inclusion_reset_grammar_vs_decrementer() {
    // reach sets: {100, 1} vs {0, -1, -2, ...}; 1 separates them
    let g = parse_grammar(RESET_LOOP).unwrap();
    let h = parse_grammar("zcfgr 1\ncounters c\nnonterminals S\naxiom S\nrule p1: S -> S | add c -1\n")
        .unwrap();
    let verdict = decide_inclusion(
        &g,
        &Valuation::new([("c", 100i64)]),
        &h,
        &Valuation::new([("c", 0i64)]),
        &solver(Logic::Lia),
    )
    .unwrap();
    assert_eq!(verdict.answer, Answer::No);
    let Some(Witness::InclusionCounterexample(z)) = &verdict.witness else {
        panic!("expected a counterexample");
    };
    assert!(z.get("c") == 1 || z.get("c") == 100);
}

#[test]
fn zvas_inclusion_matrix_form() {
    let session = solver(Logic::Lia);

    // A=(1), B=(1 -1): pick y2 = x to hit 0 for every x
    let inst = LinearInclusionInstance::new(
        Matrix::from_rows(vec![vec![1]]).unwrap(),
        Matrix::from_rows(vec![vec![1, -1]]).unwrap(),
        vec![0],
    )
    .unwrap();
    let verdict = decide_zvas_inclusion(&inst, &session).unwrap();
    assert_eq!(verdict.answer, Answer::Yes);

    // A=(2), B=(1): 2x + y = 0 fails already at x=1
    let inst = LinearInclusionInstance::new(
        Matrix::from_rows(vec![vec![2]]).unwrap(),
        Matrix::from_rows(vec![vec![1]]).unwrap(),
        vec![0],
    )
    .unwrap();
    let verdict = decide_zvas_inclusion(&inst, &session).unwrap();
    assert_eq!(verdict.answer, Answer::No);
    let Some(Witness::ZvasCounterexample(x)) = &verdict.witness else {
        panic!("expected a failing x");
    };
    assert!(x[0] >= 1);
}

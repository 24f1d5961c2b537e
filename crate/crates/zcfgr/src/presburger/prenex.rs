//! Prenex normal form and quantifier-prefix classification.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use super::{Formula, Var};

/// The quantifier-prefix class of a formula: `Sigma(n)`/`Pi(n)` count the
/// alternation blocks of the outer prefix, starting existentially or
/// universally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefixClass {
    QuantifierFree,
    Sigma(u32),
    Pi(u32),
}

impl fmt::Display for PrefixClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrefixClass::QuantifierFree => write!(f, "Σ0"),
            PrefixClass::Sigma(n) => write!(f, "Σ{n}"),
            PrefixClass::Pi(n) => write!(f, "Π{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quant {
    Exists,
    Forall,
}

impl Quant {
    fn flip(self) -> Self {
        match self {
            Quant::Exists => Quant::Forall,
            Quant::Forall => Quant::Exists,
        }
    }
}

#[derive(Debug, Clone)]
struct Block {
    quant: Quant,
    vars: Vec<Var>,
}

fn fresh_name(base: &str, used: &BTreeSet<String>) -> String {
    for i in 1.. {
        let candidate = format!("{base}~{i}");
        if !used.contains(&candidate) {
            return candidate;
        }
    }
    unreachable!()
}

/// Renames binders so that no two binders share a name and no binder collides
/// with a free variable; occurrences follow their innermost binder.
fn freshen(f: &Formula, used: &mut BTreeSet<String>, scope: &mut Vec<(String, String)>) -> Formula {
    let rename_var = |v: &Var, scope: &Vec<(String, String)>| -> Var {
        for (old, new) in scope.iter().rev() {
            if *old == v.name {
                return Var { name: new.clone(), sort: v.sort };
            }
        }
        v.clone()
    };
    match f {
        Formula::Atom(atom) => {
            let mut term = super::Term::constant(atom.term().constant_part());
            for (v, c) in atom.term().coeffs() {
                term.add_coeff(rename_var(v, scope), c);
            }
            match atom {
                super::Atom::Eq(_) => Formula::Atom(super::Atom::Eq(term)),
                super::Atom::Ge(_) => Formula::Atom(super::Atom::Ge(term)),
            }
        }
        Formula::And(children) => {
            Formula::And(children.iter().map(|c| freshen(c, used, scope)).collect())
        }
        Formula::Or(children) => {
            Formula::Or(children.iter().map(|c| freshen(c, used, scope)).collect())
        }
        Formula::Not(inner) => Formula::not(freshen(inner, used, scope)),
        Formula::Implies(a, b) => {
            Formula::implies(freshen(a, used, scope), freshen(b, used, scope))
        }
        Formula::Exists(vars, body) | Formula::Forall(vars, body) => {
            let depth = scope.len();
            let mut fresh_vars = Vec::with_capacity(vars.len());
            for v in vars {
                let name = if used.contains(&v.name) {
                    fresh_name(&v.name, used)
                } else {
                    v.name.clone()
                };
                used.insert(name.clone());
                scope.push((v.name.clone(), name.clone()));
                fresh_vars.push(Var { name, sort: v.sort });
            }
            let body = freshen(body, used, scope);
            scope.truncate(depth);
            match f {
                Formula::Exists(..) => Formula::exists(fresh_vars, body),
                _ => Formula::forall(fresh_vars, body),
            }
        }
    }
}

/// Negation normal form: implications expanded, negation pushed to atoms.
fn nnf(f: &Formula, positive: bool) -> Formula {
    match f {
        Formula::Atom(_) => {
            if positive {
                f.clone()
            } else {
                Formula::not(f.clone())
            }
        }
        Formula::Not(inner) => nnf(inner, !positive),
        Formula::And(children) => {
            let mapped = children.iter().map(|c| nnf(c, positive)).collect();
            if positive {
                Formula::And(mapped)
            } else {
                Formula::Or(mapped)
            }
        }
        Formula::Or(children) => {
            let mapped = children.iter().map(|c| nnf(c, positive)).collect();
            if positive {
                Formula::Or(mapped)
            } else {
                Formula::And(mapped)
            }
        }
        Formula::Implies(a, b) => {
            if positive {
                Formula::Or(vec![nnf(a, false), nnf(b, true)])
            } else {
                Formula::And(vec![nnf(a, true), nnf(b, false)])
            }
        }
        Formula::Exists(vars, body) => {
            if positive {
                Formula::exists(vars.clone(), nnf(body, true))
            } else {
                Formula::forall(vars.clone(), nnf(body, false))
            }
        }
        Formula::Forall(vars, body) => {
            if positive {
                Formula::forall(vars.clone(), nnf(body, true))
            } else {
                Formula::exists(vars.clone(), nnf(body, false))
            }
        }
    }
}

/// Interleaves the children's quantifier prefixes, grouping blocks of equal
/// kind to keep the alternation count low. Sound because freshening made all
/// binder scopes disjoint.
fn merge_prefixes(prefixes: Vec<Vec<Block>>) -> Vec<Block> {
    let run = |start: Quant| -> Vec<Block> {
        let mut queues: Vec<VecDeque<Block>> =
            prefixes.iter().map(|p| p.iter().cloned().collect()).collect();
        let mut out: Vec<Block> = Vec::new();
        let mut kind = start;
        while queues.iter().any(|q| !q.is_empty()) {
            let mut vars = Vec::new();
            for q in &mut queues {
                while q.front().map(|b| b.quant) == Some(kind) {
                    vars.extend(q.pop_front().expect("front checked").vars);
                }
            }
            if !vars.is_empty() {
                out.push(Block { quant: kind, vars });
            }
            kind = kind.flip();
        }
        out
    };
    let first_kind = prefixes
        .iter()
        .find_map(|p| p.first().map(|b| b.quant))
        .unwrap_or(Quant::Exists);
    let a = run(first_kind);
    let b = run(first_kind.flip());
    if b.len() < a.len() {
        b
    } else {
        a
    }
}

fn hoist(f: &Formula) -> (Vec<Block>, Formula) {
    match f {
        Formula::Atom(_) | Formula::Not(_) => (Vec::new(), f.clone()),
        Formula::And(children) => {
            let (prefixes, matrices): (Vec<_>, Vec<_>) = children.iter().map(hoist).unzip();
            (merge_prefixes(prefixes), Formula::And(matrices))
        }
        Formula::Or(children) => {
            let (prefixes, matrices): (Vec<_>, Vec<_>) = children.iter().map(hoist).unzip();
            (merge_prefixes(prefixes), Formula::Or(matrices))
        }
        Formula::Exists(vars, body) => {
            let (mut prefix, matrix) = hoist(body);
            prefix.insert(0, Block { quant: Quant::Exists, vars: vars.clone() });
            (prefix, matrix)
        }
        Formula::Forall(vars, body) => {
            let (mut prefix, matrix) = hoist(body);
            prefix.insert(0, Block { quant: Quant::Forall, vars: vars.clone() });
            (prefix, matrix)
        }
        Formula::Implies(..) => unreachable!("implications are expanded by nnf"),
    }
}

fn rebuild(prefix: Vec<Block>, matrix: Formula) -> Formula {
    // Coalesce adjacent blocks of the same kind.
    let mut coalesced: Vec<Block> = Vec::new();
    for block in prefix {
        match coalesced.last_mut() {
            Some(last) if last.quant == block.quant => last.vars.extend(block.vars),
            _ => coalesced.push(block),
        }
    }
    coalesced.into_iter().rev().fold(matrix, |acc, block| match block.quant {
        Quant::Exists => Formula::exists(block.vars, acc),
        Quant::Forall => Formula::forall(block.vars, acc),
    })
}

/// Brings a formula into prenex normal form: all quantifiers in an outer
/// prefix over a quantifier-free matrix, logically equivalent to the input.
/// Binder names are kept unless they would collide.
pub fn prenex(f: &Formula) -> Formula {
    let mut used: BTreeSet<String> = f.free_vars().into_iter().map(|v| v.name).collect();
    let freshened = freshen(f, &mut used, &mut Vec::new());
    let normalized = nnf(&freshened, true);
    let (prefix, matrix) = hoist(&normalized);
    rebuild(prefix, matrix)
}

/// Classifies the outer quantifier prefix of a formula.
pub fn prefix_class(f: &Formula) -> PrefixClass {
    let mut blocks = 0u32;
    let mut first = None;
    let mut last = None;
    let mut current = f;
    loop {
        let quant = match current {
            Formula::Exists(_, body) => {
                current = body;
                Quant::Exists
            }
            Formula::Forall(_, body) => {
                current = body;
                Quant::Forall
            }
            _ => break,
        };
        if last != Some(quant) {
            blocks += 1;
            last = Some(quant);
            first.get_or_insert(quant);
        }
    }
    match first {
        None => PrefixClass::QuantifierFree,
        Some(Quant::Exists) => PrefixClass::Sigma(blocks),
        Some(Quant::Forall) => PrefixClass::Pi(blocks),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presburger::{evaluate, Assignment, Term};

    fn atom(name: &str) -> Formula {
        Formula::eq(Term::var(Var::nat(name)), Term::constant(0))
    }

    #[test]
    fn negated_exists_becomes_forall() {
        let f = Formula::not(Formula::exists(vec![Var::nat("x")], atom("x")));
        let p = prenex(&f);
        match &p {
            Formula::Forall(vars, body) => {
                assert_eq!(vars, &vec![Var::nat("x")]);
                assert!(matches!(**body, Formula::Not(_)));
            }
            other => panic!("expected a universal prefix, got {other:?}"),
        }
        assert_eq!(prefix_class(&p), PrefixClass::Pi(1));
    }

    #[test]
    fn scope_extrusion_merges_existentials() {
        // (∃x. x=0) ∧ (∃y. y=0) prenexes to a single Σ1 block
        let f = Formula::And(vec![
            Formula::exists(vec![Var::nat("x")], atom("x")),
            Formula::exists(vec![Var::nat("y")], atom("y")),
        ]);
        let p = prenex(&f);
        assert_eq!(prefix_class(&p), PrefixClass::Sigma(1));
        match &p {
            Formula::Exists(vars, body) => {
                assert_eq!(vars.len(), 2);
                assert!(body.is_quantifier_free());
            }
            other => panic!("expected an existential prefix, got {other:?}"),
        }
    }

    #[test]
    fn mixed_blocks_group_to_two() {
        // (∃x. _) ∧ (∀y. _) ∧ (∃z. _) needs only one alternation
        let f = Formula::And(vec![
            Formula::exists(vec![Var::nat("x")], atom("x")),
            Formula::forall(vec![Var::nat("y")], atom("y")),
            Formula::exists(vec![Var::nat("z")], atom("z")),
        ]);
        let p = prenex(&f);
        assert_eq!(prefix_class(&p), PrefixClass::Sigma(2));
    }

    #[test]
    fn capture_is_avoided() {
        // (∃x. x=0) ∧ x=0 with x also free: the binder is renamed,
        // and evaluation under x=1 agrees before and after.
        let f = Formula::And(vec![
            Formula::exists(vec![Var::nat("x")], atom("x")),
            atom("x"),
        ]);
        let p = prenex(&f);
        let a = Assignment::new([("x", 1i64)]);
        assert_eq!(evaluate(&f, &a, 2), evaluate(&p, &a, 2));
        assert_eq!(evaluate(&p, &a, 2), Ok(false));
        let a0 = Assignment::new([("x", 0i64)]);
        assert_eq!(evaluate(&p, &a0, 2), Ok(true));
    }

    #[test]
    fn sibling_binders_with_equal_names_are_split() {
        let f = Formula::And(vec![
            Formula::exists(vec![Var::nat("x")], atom("x")),
            Formula::forall(
                vec![Var::nat("x")],
                Formula::ge(Term::var(Var::nat("x")), Term::constant(0)),
            ),
        ]);
        let p = prenex(&f);
        p.well_sorted().expect("prenexed formula is well sorted");
        assert_eq!(evaluate(&p, &Assignment::default(), 3), Ok(true));
    }

    #[test]
    fn implication_antecedent_flips() {
        // (∃x. x=0) → y=0 is Π1 after prenexing
        let f = Formula::implies(Formula::exists(vec![Var::nat("x")], atom("x")), atom("y"));
        let p = prenex(&f);
        assert_eq!(prefix_class(&p), PrefixClass::Pi(1));
    }
}

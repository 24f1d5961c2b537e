//! Presburger arithmetic: linear terms, two-sorted formulas, bounded
//! evaluation, substitution, prenexing, integer elimination and SMT-LIB
//! emission.
//!
//! Variables are either `Nat` (values ≥ 0) or `Int`. Atoms are normalized to
//! `term = 0` and `term ≥ 0`.

mod encode;
mod eval;
mod prenex;
mod smt;
mod subst;

pub use encode::encode_int_as_nat_pair;
pub use eval::{evaluate, EvalError};
pub use prenex::{prefix_class, prenex, PrefixClass};
pub use smt::{emit_smt, emit_smt_with_logic, Logic, SmtError};
pub use subst::{rename_vars_except, substitute, SubstError};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Nat,
    Int,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: String,
    pub sort: Sort,
}

impl Var {
    pub fn nat(name: impl Into<String>) -> Self {
        Self { name: name.into(), sort: Sort::Nat }
    }

    pub fn int(name: impl Into<String>) -> Self {
        Self { name: name.into(), sort: Sort::Int }
    }
}

/// A linear term: a sum of integer-coefficient variables plus a constant.
/// Zero coefficients are dropped eagerly.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Term {
    coeffs: BTreeMap<Var, i64>,
    constant: i64,
}

impl Term {
    pub fn constant(value: i64) -> Self {
        Self { coeffs: BTreeMap::new(), constant: value }
    }

    pub fn var(v: Var) -> Self {
        Self::with_coeff(v, 1)
    }

    pub fn with_coeff(v: Var, coeff: i64) -> Self {
        let mut t = Self::default();
        t.add_coeff(v, coeff);
        t
    }

    pub fn add_coeff(&mut self, v: Var, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.coeffs.entry(v).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            let key = self
                .coeffs
                .iter()
                .find(|(_, &c)| c == 0)
                .map(|(v, _)| v.clone())
                .expect("zero entry present");
            self.coeffs.remove(&key);
        }
    }

    pub fn add_constant(&mut self, value: i64) {
        self.constant += value;
    }

    pub fn plus(&self, other: &Term) -> Term {
        let mut t = self.clone();
        for (v, &c) in &other.coeffs {
            t.add_coeff(v.clone(), c);
        }
        t.constant += other.constant;
        t
    }

    pub fn minus(&self, other: &Term) -> Term {
        self.plus(&other.scaled(-1))
    }

    pub fn scaled(&self, factor: i64) -> Term {
        if factor == 0 {
            return Term::default();
        }
        Term {
            coeffs: self.coeffs.iter().map(|(v, &c)| (v.clone(), c * factor)).collect(),
            constant: self.constant * factor,
        }
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Var, i64)> {
        self.coeffs.iter().map(|(v, &c)| (v, c))
    }

    pub fn constant_part(&self) -> i64 {
        self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Variable occurrences plus the constant, the symbol count used by
    /// [`Formula::size`].
    fn size(&self) -> usize {
        self.coeffs.len() + 1
    }
}

/// Atomic formulas, normalized to comparisons with zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    /// `term = 0`
    Eq(Term),
    /// `term ≥ 0`
    Ge(Term),
}

impl Atom {
    pub fn term(&self) -> &Term {
        match self {
            Atom::Eq(t) | Atom::Ge(t) => t,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Atom(Atom),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(Vec<Var>, Box<Formula>),
    Forall(Vec<Var>, Box<Formula>),
}

impl Formula {
    pub fn truth() -> Self {
        Formula::Atom(Atom::Ge(Term::constant(0)))
    }

    pub fn falsity() -> Self {
        Formula::Atom(Atom::Ge(Term::constant(-1)))
    }

    /// `a = b`
    pub fn eq(a: Term, b: Term) -> Self {
        Formula::Atom(Atom::Eq(a.minus(&b)))
    }

    /// `a ≥ b`
    pub fn ge(a: Term, b: Term) -> Self {
        Formula::Atom(Atom::Ge(a.minus(&b)))
    }

    /// `a > b`, i.e. `a − b − 1 ≥ 0` over the integers.
    pub fn gt(a: Term, b: Term) -> Self {
        let mut t = a.minus(&b);
        t.add_constant(-1);
        Formula::Atom(Atom::Ge(t))
    }

    pub fn le(a: Term, b: Term) -> Self {
        Formula::ge(b, a)
    }

    pub fn lt(a: Term, b: Term) -> Self {
        Formula::gt(b, a)
    }

    pub fn ne(a: Term, b: Term) -> Self {
        Formula::not(Formula::eq(a, b))
    }

    pub fn and_all(mut children: Vec<Formula>) -> Self {
        match children.len() {
            0 => Formula::truth(),
            1 => children.pop().expect("one child"),
            _ => Formula::And(children),
        }
    }

    pub fn or_all(mut children: Vec<Formula>) -> Self {
        match children.len() {
            0 => Formula::falsity(),
            1 => children.pop().expect("one child"),
            _ => Formula::Or(children),
        }
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(antecedent: Formula, consequent: Formula) -> Self {
        Formula::Implies(Box::new(antecedent), Box::new(consequent))
    }

    pub fn exists(vars: Vec<Var>, body: Formula) -> Self {
        if vars.is_empty() {
            body
        } else {
            Formula::Exists(vars, Box::new(body))
        }
    }

    pub fn forall(vars: Vec<Var>, body: Formula) -> Self {
        if vars.is_empty() {
            body
        } else {
            Formula::Forall(vars, Box::new(body))
        }
    }

    /// AST node count: variable occurrences, constants, relation symbols,
    /// connectives and quantified variables all count one.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(a) => a.term().size() + 1,
            Formula::And(children) | Formula::Or(children) => {
                children.iter().map(Formula::size).sum::<usize>() + children.len().saturating_sub(1)
            }
            Formula::Not(f) => f.size() + 1,
            Formula::Implies(a, b) => a.size() + b.size() + 1,
            Formula::Exists(vars, body) | Formula::Forall(vars, body) => 1 + vars.len() + body.size(),
        }
    }

    /// Free variables in first-occurrence order (depth-first, left to right).
    pub fn free_vars(&self) -> Vec<Var> {
        fn walk(f: &Formula, bound: &mut Vec<String>, seen: &mut BTreeSet<Var>, out: &mut Vec<Var>) {
            match f {
                Formula::Atom(a) => {
                    for (v, _) in a.term().coeffs() {
                        if !bound.iter().any(|b| *b == v.name) && seen.insert(v.clone()) {
                            out.push(v.clone());
                        }
                    }
                }
                Formula::And(children) | Formula::Or(children) => {
                    for c in children {
                        walk(c, bound, seen, out);
                    }
                }
                Formula::Not(f) => walk(f, bound, seen, out),
                Formula::Implies(a, b) => {
                    walk(a, bound, seen, out);
                    walk(b, bound, seen, out);
                }
                Formula::Exists(vars, body) | Formula::Forall(vars, body) => {
                    let n = bound.len();
                    bound.extend(vars.iter().map(|v| v.name.clone()));
                    walk(body, bound, seen, out);
                    bound.truncate(n);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut BTreeSet::new(), &mut out);
        out
    }

    /// Every variable name occurring anywhere, free or bound.
    pub fn all_names(&self) -> BTreeSet<String> {
        fn walk(f: &Formula, out: &mut BTreeSet<String>) {
            match f {
                Formula::Atom(a) => {
                    for (v, _) in a.term().coeffs() {
                        out.insert(v.name.clone());
                    }
                }
                Formula::And(children) | Formula::Or(children) => {
                    children.iter().for_each(|c| walk(c, out));
                }
                Formula::Not(f) => walk(f, out),
                Formula::Implies(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Formula::Exists(vars, body) | Formula::Forall(vars, body) => {
                    out.extend(vars.iter().map(|v| v.name.clone()));
                    walk(body, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut out);
        out
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::And(children) | Formula::Or(children) => {
                children.iter().all(Formula::is_quantifier_free)
            }
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::Implies(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    /// Checks that every variable name is used at one sort only and that no
    /// quantifier shadows an enclosing binding or a free occurrence's name.
    pub fn well_sorted(&self) -> Result<(), SortError> {
        fn walk(
            f: &Formula,
            bound: &mut BTreeMap<String, Sort>,
            free: &mut BTreeMap<String, Sort>,
        ) -> Result<(), SortError> {
            match f {
                Formula::Atom(a) => {
                    for (v, _) in a.term().coeffs() {
                        let expected = bound.get(&v.name).or_else(|| free.get(&v.name)).copied();
                        match expected {
                            Some(sort) if sort != v.sort => {
                                return Err(SortError::Conflict(v.name.clone()))
                            }
                            Some(_) => {}
                            None => {
                                free.insert(v.name.clone(), v.sort);
                            }
                        }
                    }
                    Ok(())
                }
                Formula::And(children) | Formula::Or(children) => {
                    children.iter().try_for_each(|c| walk(c, bound, free))
                }
                Formula::Not(f) => walk(f, bound, free),
                Formula::Implies(a, b) => {
                    walk(a, bound, free)?;
                    walk(b, bound, free)
                }
                Formula::Exists(vars, body) | Formula::Forall(vars, body) => {
                    let mut added = Vec::new();
                    for v in vars {
                        if bound.contains_key(&v.name) || free.contains_key(&v.name) {
                            return Err(SortError::Shadowed(v.name.clone()));
                        }
                        bound.insert(v.name.clone(), v.sort);
                        added.push(v.name.clone());
                    }
                    walk(body, bound, free)?;
                    for name in added {
                        bound.remove(&name);
                    }
                    Ok(())
                }
            }
        }
        walk(self, &mut BTreeMap::new(), &mut BTreeMap::new())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SortError {
    #[error("variable `{0}` is used at two different sorts")]
    Conflict(String),
    #[error("variable `{0}` shadows an enclosing occurrence")]
    Shadowed(String),
}

/// A variable assignment for evaluation and substitution.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    values: BTreeMap<String, i64>,
}

impl Assignment {
    pub fn new<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, i64)>,
        S: Into<String>,
    {
        Self { values: pairs.into_iter().map(|(n, v)| (n.into(), v)).collect() }
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.values.get(name).copied()
    }

    pub fn set(&mut self, name: impl Into<String>, value: i64) {
        self.values.insert(name.into(), value);
    }

    pub fn contains(&self, name: &str) -> bool {
        self.values.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i64)> {
        self.values.iter().map(|(n, &v)| (n.as_str(), v))
    }

    /// Right-biased union.
    pub fn merged(&self, other: &Assignment) -> Assignment {
        let mut merged = self.clone();
        for (name, value) in other.iter() {
            merged.set(name, value);
        }
        merged
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Nat => write!(f, "Nat"),
            Sort::Int => write!(f, "Int"),
        }
    }
}

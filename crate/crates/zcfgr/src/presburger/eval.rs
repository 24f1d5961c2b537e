//! Bounded-domain evaluation, for tests only.
//!
//! Quantified variables range over `[0, bound]` (`Nat`) or `[-bound, bound]`
//! (`Int`), so truth values are an approximation of real Presburger
//! semantics; production truth comes from the solver.

use thiserror::Error;

use super::{Assignment, Atom, Formula, Sort, Term, Var};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("free variable `{0}` has no assigned value")]
    Unassigned(String),
    #[error("sort violation: Nat variable `{0}` assigned a negative value")]
    SortViolation(String),
}

fn eval_term(t: &Term, a: &Assignment) -> Result<i64, EvalError> {
    let mut value = t.constant_part();
    for (v, c) in t.coeffs() {
        let x = a.get(&v.name).ok_or_else(|| EvalError::Unassigned(v.name.clone()))?;
        if v.sort == Sort::Nat && x < 0 {
            return Err(EvalError::SortViolation(v.name.clone()));
        }
        value += c * x;
    }
    Ok(value)
}

fn domain(sort: Sort, bound: u64) -> std::ops::RangeInclusive<i64> {
    let b = bound as i64;
    match sort {
        Sort::Nat => 0..=b,
        Sort::Int => -b..=b,
    }
}

fn eval_quantified(
    vars: &[Var],
    body: &Formula,
    a: &Assignment,
    bound: u64,
    existential: bool,
) -> Result<bool, EvalError> {
    match vars.split_first() {
        None => eval(body, a, bound),
        Some((v, rest)) => {
            for value in domain(v.sort, bound) {
                let mut a = a.clone();
                a.set(v.name.clone(), value);
                let inner = eval_quantified(rest, body, &a, bound, existential)?;
                if inner == existential {
                    return Ok(existential);
                }
            }
            Ok(!existential)
        }
    }
}

fn eval(f: &Formula, a: &Assignment, bound: u64) -> Result<bool, EvalError> {
    match f {
        Formula::Atom(Atom::Eq(t)) => Ok(eval_term(t, a)? == 0),
        Formula::Atom(Atom::Ge(t)) => Ok(eval_term(t, a)? >= 0),
        Formula::And(children) => {
            for c in children {
                if !eval(c, a, bound)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(children) => {
            for c in children {
                if eval(c, a, bound)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Not(f) => Ok(!eval(f, a, bound)?),
        Formula::Implies(p, q) => Ok(!eval(p, a, bound)? || eval(q, a, bound)?),
        Formula::Exists(vars, body) => eval_quantified(vars, body, a, bound, true),
        Formula::Forall(vars, body) => eval_quantified(vars, body, a, bound, false),
    }
}

/// Evaluates `f` under `a`, with quantifiers restricted to the bounded domain.
pub fn evaluate(f: &Formula, a: &Assignment, quant_bound: u64) -> Result<bool, EvalError> {
    eval(f, a, quant_bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::var(Var::nat("x"))
    }

    #[test]
    fn arithmetic() {
        // x + y = 3 with x=1, y=2
        let f = Formula::eq(x().plus(&Term::var(Var::nat("y"))), Term::constant(3));
        let a = Assignment::new([("x", 1i64), ("y", 2)]);
        assert_eq!(evaluate(&f, &a, 0), Ok(true));
    }

    #[test]
    fn nat_sort_excludes_negative_witnesses() {
        // ∃n:Nat. n + 1 = 0 is false at any bound
        let f = Formula::exists(
            vec![Var::nat("n")],
            Formula::eq(Term::var(Var::nat("n")).plus(&Term::constant(1)), Term::constant(0)),
        );
        for bound in [0, 1, 4, 16] {
            assert_eq!(evaluate(&f, &Assignment::default(), bound), Ok(false));
        }
    }

    #[test]
    fn int_sort_finds_negative_witness() {
        // ∃z:Int. z + 1 = 0 is true once the bound reaches 1
        let f = Formula::exists(
            vec![Var::int("z")],
            Formula::eq(Term::var(Var::int("z")).plus(&Term::constant(1)), Term::constant(0)),
        );
        assert_eq!(evaluate(&f, &Assignment::default(), 0), Ok(false));
        assert_eq!(evaluate(&f, &Assignment::default(), 1), Ok(true));
    }

    #[test]
    fn unassigned_and_sort_violations_are_errors() {
        let f = Formula::eq(x(), Term::constant(0));
        assert_eq!(
            evaluate(&f, &Assignment::default(), 0),
            Err(EvalError::Unassigned("x".into()))
        );
        let a = Assignment::new([("x", -1i64)]);
        assert_eq!(evaluate(&f, &a, 0), Err(EvalError::SortViolation("x".into())));
    }

    #[test]
    fn forall_over_bounded_domain() {
        // ∀n:Nat. n ≥ 0 holds; ∀n:Nat. n ≥ 1 fails at n=0
        let ge0 = Formula::forall(vec![Var::nat("n")], Formula::ge(Term::var(Var::nat("n")), Term::constant(0)));
        let ge1 = Formula::forall(vec![Var::nat("n")], Formula::ge(Term::var(Var::nat("n")), Term::constant(1)));
        assert_eq!(evaluate(&ge0, &Assignment::default(), 3), Ok(true));
        assert_eq!(evaluate(&ge1, &Assignment::default(), 3), Ok(false));
    }
}

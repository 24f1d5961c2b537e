//! Substitution of constants for free variables, and bulk renaming.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{Assignment, Atom, Formula, Term, Var};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubstError {
    #[error("cannot substitute bound variable `{0}`")]
    BoundVariable(String),
}

fn subst_term(t: &Term, binding: &Assignment, bound: &[String]) -> Term {
    let mut result = Term::constant(t.constant_part());
    for (v, c) in t.coeffs() {
        match binding.get(&v.name) {
            Some(value) if !bound.iter().any(|b| *b == v.name) => {
                result.add_constant(c * value);
            }
            _ => result.add_coeff(v.clone(), c),
        }
    }
    result
}

fn subst(f: &Formula, binding: &Assignment, bound: &mut Vec<String>) -> Result<Formula, SubstError> {
    Ok(match f {
        Formula::Atom(Atom::Eq(t)) => Formula::Atom(Atom::Eq(subst_term(t, binding, bound))),
        Formula::Atom(Atom::Ge(t)) => Formula::Atom(Atom::Ge(subst_term(t, binding, bound))),
        Formula::And(children) => Formula::And(
            children.iter().map(|c| subst(c, binding, bound)).collect::<Result<_, _>>()?,
        ),
        Formula::Or(children) => Formula::Or(
            children.iter().map(|c| subst(c, binding, bound)).collect::<Result<_, _>>()?,
        ),
        Formula::Not(inner) => Formula::not(subst(inner, binding, bound)?),
        Formula::Implies(a, b) => {
            Formula::implies(subst(a, binding, bound)?, subst(b, binding, bound)?)
        }
        Formula::Exists(vars, body) | Formula::Forall(vars, body) => {
            for v in vars {
                if binding.contains(&v.name) {
                    return Err(SubstError::BoundVariable(v.name.clone()));
                }
            }
            let n = bound.len();
            bound.extend(vars.iter().map(|v| v.name.clone()));
            let body = subst(body, binding, bound)?;
            bound.truncate(n);
            match f {
                Formula::Exists(..) => Formula::exists(vars.clone(), body),
                _ => Formula::forall(vars.clone(), body),
            }
        }
    })
}

/// Replaces free variables by the integer constants in `binding`. Replacement
/// is capture-free since only constants are introduced; binding a variable
/// that occurs bound anywhere is rejected.
pub fn substitute(f: &Formula, binding: &Assignment) -> Result<Formula, SubstError> {
    subst(f, binding, &mut Vec::new())
}

/// Renames every variable occurrence, free or bound, whose name is not in
/// `keep`, by applying `rename`. Used to give each compiled grammar its own
/// namespace inside a combined query.
pub fn rename_vars_except(f: &Formula, keep: &BTreeSet<String>, rename: &dyn Fn(&str) -> String) -> Formula {
    let map = |v: &Var| -> Var {
        if keep.contains(&v.name) {
            v.clone()
        } else {
            Var { name: rename(&v.name), sort: v.sort }
        }
    };
    let map_term = |t: &Term| -> Term {
        let mut result = Term::constant(t.constant_part());
        for (v, c) in t.coeffs() {
            result.add_coeff(map(v), c);
        }
        result
    };
    match f {
        Formula::Atom(Atom::Eq(t)) => Formula::Atom(Atom::Eq(map_term(t))),
        Formula::Atom(Atom::Ge(t)) => Formula::Atom(Atom::Ge(map_term(t))),
        Formula::And(children) => {
            Formula::And(children.iter().map(|c| rename_vars_except(c, keep, rename)).collect())
        }
        Formula::Or(children) => {
            Formula::Or(children.iter().map(|c| rename_vars_except(c, keep, rename)).collect())
        }
        Formula::Not(inner) => Formula::not(rename_vars_except(inner, keep, rename)),
        Formula::Implies(a, b) => Formula::implies(
            rename_vars_except(a, keep, rename),
            rename_vars_except(b, keep, rename),
        ),
        Formula::Exists(vars, body) => Formula::exists(
            vars.iter().map(&map).collect(),
            rename_vars_except(body, keep, rename),
        ),
        Formula::Forall(vars, body) => Formula::forall(
            vars.iter().map(&map).collect(),
            rename_vars_except(body, keep, rename),
        ),
    }
}

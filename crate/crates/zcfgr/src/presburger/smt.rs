//! Deterministic SMT-LIB2 emission.
//!
//! Free variables are declared as `Int` constants in first-occurrence order;
//! Nat-sorted variables get a `(>= v 0)` side assertion, and Nat-sorted
//! quantified variables are guarded inside their binder.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Atom, Formula, Sort, SortError, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Logic {
    QfLia,
    Lia,
}

impl Logic {
    pub fn as_str(self) -> &'static str {
        match self {
            Logic::QfLia => "QF_LIA",
            Logic::Lia => "LIA",
        }
    }

    /// Quantifier-free formulas declare `QF_LIA`, quantified ones `LIA`.
    pub fn for_formula(f: &Formula) -> Logic {
        if f.is_quantifier_free() {
            Logic::QfLia
        } else {
            Logic::Lia
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SmtError {
    #[error("formula is not well-sorted: {0}")]
    IllSorted(#[from] SortError),
}

fn int_literal(n: i64) -> String {
    if n < 0 {
        format!("(- {})", n.unsigned_abs())
    } else {
        n.to_string()
    }
}

fn monomial(name: &str, coeff: i64) -> String {
    match coeff {
        1 => name.to_string(),
        -1 => format!("(- {name})"),
        c => format!("(* {} {name})", int_literal(c)),
    }
}

fn sum(parts: Vec<String>) -> String {
    match parts.len() {
        0 => "0".to_string(),
        1 => parts.into_iter().next().expect("one part"),
        _ => format!("(+ {})", parts.join(" ")),
    }
}

/// Renders `term (rel) 0` as `lhs (rel) rhs` with the negative monomials
/// moved to the right-hand side, so `x - 1 = 0` prints as `(= x 1)`.
fn atom_sexp(rel: &str, term: &Term) -> String {
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for (v, c) in term.coeffs() {
        if c > 0 {
            lhs.push(monomial(&v.name, c));
        } else {
            rhs.push(monomial(&v.name, -c));
        }
    }
    let k = term.constant_part();
    if k > 0 {
        lhs.push(int_literal(k));
    } else if k < 0 {
        rhs.push(int_literal(-k));
    }
    format!("({rel} {} {})", sum(lhs), sum(rhs))
}

fn formula_sexp(f: &Formula, out: &mut String) {
    match f {
        Formula::Atom(Atom::Eq(t)) => out.push_str(&atom_sexp("=", t)),
        Formula::Atom(Atom::Ge(t)) => out.push_str(&atom_sexp(">=", t)),
        Formula::And(children) | Formula::Or(children) => {
            let op = if matches!(f, Formula::And(_)) { "and" } else { "or" };
            write!(out, "({op}").expect("write to string");
            for c in children {
                out.push(' ');
                formula_sexp(c, out);
            }
            out.push(')');
        }
        Formula::Not(inner) => {
            out.push_str("(not ");
            formula_sexp(inner, out);
            out.push(')');
        }
        Formula::Implies(a, b) => {
            out.push_str("(=> ");
            formula_sexp(a, out);
            out.push(' ');
            formula_sexp(b, out);
            out.push(')');
        }
        Formula::Exists(vars, body) | Formula::Forall(vars, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let binder = if universal { "forall" } else { "exists" };
            write!(out, "({binder} (").expect("write to string");
            for (i, v) in vars.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write!(out, "({} Int)", v.name).expect("write to string");
            }
            out.push_str(") ");
            let guards: Vec<String> = vars
                .iter()
                .filter(|v| v.sort == Sort::Nat)
                .map(|v| format!("(>= {} 0)", v.name))
                .collect();
            if guards.is_empty() {
                formula_sexp(body, out);
            } else {
                let guard = if guards.len() == 1 {
                    guards.into_iter().next().expect("one guard")
                } else {
                    format!("(and {})", guards.join(" "))
                };
                let connective = if universal { "=>" } else { "and" };
                write!(out, "({connective} {guard} ").expect("write to string");
                formula_sexp(body, out);
                out.push(')');
            }
            out.push(')');
        }
    }
}

/// Emits a complete SMT-LIB2 script for `f` under an explicit logic.
pub fn emit_smt_with_logic(f: &Formula, logic: Logic) -> Result<String, SmtError> {
    f.well_sorted()?;
    let mut script = String::new();
    writeln!(script, "(set-logic {})", logic.as_str()).expect("write to string");
    let free = f.free_vars();
    for v in &free {
        writeln!(script, "(declare-const {} Int)", v.name).expect("write to string");
    }
    for v in &free {
        if v.sort == Sort::Nat {
            writeln!(script, "(assert (>= {} 0))", v.name).expect("write to string");
        }
    }
    let mut body = String::new();
    formula_sexp(f, &mut body);
    writeln!(script, "(assert {body})").expect("write to string");
    script.push_str("(check-sat)\n(get-model)\n");
    Ok(script)
}

/// Emits a script with the logic chosen from the formula's shape.
pub fn emit_smt(f: &Formula) -> Result<String, SmtError> {
    emit_smt_with_logic(f, Logic::for_formula(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presburger::Var;

    #[test]
    fn nat_free_variable_gets_guard() {
        let f = Formula::eq(Term::var(Var::nat("x")), Term::constant(1));
        let script = emit_smt(&f).unwrap();
        assert!(script.contains("(set-logic QF_LIA)"));
        assert!(script.contains("(declare-const x Int)"));
        assert!(script.contains("(assert (>= x 0))"));
        assert!(script.contains("(assert (= x 1))"));
        assert!(script.contains("(check-sat)"));
        assert!(script.contains("(get-model)"));
    }

    #[test]
    fn universal_nat_variable_is_guarded_by_implication() {
        let f = Formula::forall(
            vec![Var::nat("i")],
            Formula::ge(Term::var(Var::nat("i")).plus(&Term::constant(1)), Term::constant(0)),
        );
        let script = emit_smt(&f).unwrap();
        assert!(script.contains("(set-logic LIA)"));
        assert!(script.contains("(assert (forall ((i Int)) (=> (>= i 0) (>= (+ i 1) 0))))"));
    }

    #[test]
    fn existential_nat_variable_is_guarded_by_conjunction() {
        let f = Formula::exists(
            vec![Var::nat("i")],
            Formula::eq(Term::var(Var::nat("i")), Term::constant(2)),
        );
        let script = emit_smt(&f).unwrap();
        assert!(script.contains("(exists ((i Int)) (and (>= i 0) (= i 2)))"));
    }

    #[test]
    fn emission_is_deterministic() {
        let f = Formula::And(vec![
            Formula::eq(
                Term::var(Var::nat("b")).plus(&Term::var(Var::nat("a")).scaled(-2)),
                Term::constant(-3),
            ),
            Formula::ge(Term::var(Var::int("z")), Term::var(Var::nat("a"))),
        ]);
        assert_eq!(emit_smt(&f).unwrap(), emit_smt(&f).unwrap());
        // declaration order follows the first atom that mentions a variable
        let script = emit_smt(&f).unwrap();
        let a_decl = script.find("(declare-const a Int)").unwrap();
        let z_decl = script.find("(declare-const z Int)").unwrap();
        assert!(script.contains("(declare-const b Int)"));
        assert!(a_decl < z_decl);
        // the Int variable has no nonnegativity guard
        assert!(!script.contains("(assert (>= z 0))"));
    }

    #[test]
    fn negative_terms_move_to_the_right_hand_side() {
        let f = Formula::eq(
            Term::var(Var::nat("x")).minus(&Term::var(Var::nat("y"))),
            Term::constant(1),
        );
        let script = emit_smt(&f).unwrap();
        assert!(script.contains("(assert (= x (+ y 1)))"));
    }
}

//! Elimination of integer-sorted variables: every Int variable becomes the
//! difference of two fresh Nat variables.

use std::collections::{BTreeMap, BTreeSet};

use super::{Atom, Formula, Sort, Term, Var};

fn pair_names(base: &str, used: &BTreeSet<String>) -> (String, String) {
    let mut suffix = String::new();
    loop {
        let pos = format!("{base}{suffix}_pos");
        let neg = format!("{base}{suffix}_neg");
        if !used.contains(&pos) && !used.contains(&neg) {
            return (pos, neg);
        }
        suffix.push('_');
    }
}

/// Replaces every Int variable `z`, free or bound, with `z_pos - z_neg` over
/// fresh Nat variables. The result contains no Int-sorted variables and its
/// models are exactly the natural-number encodings of the original models.
pub fn encode_int_as_nat_pair(f: &Formula) -> Formula {
    let used = f.all_names();
    let mut mapping: BTreeMap<String, (String, String)> = BTreeMap::new();
    let mut taken = used.clone();
    let mut map_of = |name: &str| -> (String, String) {
        if let Some(pair) = mapping.get(name) {
            return pair.clone();
        }
        let pair = pair_names(name, &taken);
        taken.insert(pair.0.clone());
        taken.insert(pair.1.clone());
        mapping.insert(name.to_string(), pair.clone());
        pair
    };

    fn rewrite(
        f: &Formula,
        map_of: &mut dyn FnMut(&str) -> (String, String),
    ) -> Formula {
        let rewrite_term = |t: &Term, map_of: &mut dyn FnMut(&str) -> (String, String)| -> Term {
            let mut result = Term::constant(t.constant_part());
            for (v, c) in t.coeffs() {
                match v.sort {
                    Sort::Nat => result.add_coeff(v.clone(), c),
                    Sort::Int => {
                        let (pos, neg) = map_of(&v.name);
                        result.add_coeff(Var::nat(pos), c);
                        result.add_coeff(Var::nat(neg), -c);
                    }
                }
            }
            result
        };
        let rewrite_vars = |vars: &[Var], map_of: &mut dyn FnMut(&str) -> (String, String)| -> Vec<Var> {
            let mut out = Vec::new();
            for v in vars {
                match v.sort {
                    Sort::Nat => out.push(v.clone()),
                    Sort::Int => {
                        let (pos, neg) = map_of(&v.name);
                        out.push(Var::nat(pos));
                        out.push(Var::nat(neg));
                    }
                }
            }
            out
        };
        match f {
            Formula::Atom(Atom::Eq(t)) => Formula::Atom(Atom::Eq(rewrite_term(t, map_of))),
            Formula::Atom(Atom::Ge(t)) => Formula::Atom(Atom::Ge(rewrite_term(t, map_of))),
            Formula::And(children) => {
                Formula::And(children.iter().map(|c| rewrite(c, map_of)).collect())
            }
            Formula::Or(children) => {
                Formula::Or(children.iter().map(|c| rewrite(c, map_of)).collect())
            }
            Formula::Not(inner) => Formula::not(rewrite(inner, map_of)),
            Formula::Implies(a, b) => Formula::implies(rewrite(a, map_of), rewrite(b, map_of)),
            Formula::Exists(vars, body) => {
                Formula::exists(rewrite_vars(vars, map_of), rewrite(body, map_of))
            }
            Formula::Forall(vars, body) => {
                Formula::forall(rewrite_vars(vars, map_of), rewrite(body, map_of))
            }
        }
    }
    rewrite(f, &mut map_of)
}

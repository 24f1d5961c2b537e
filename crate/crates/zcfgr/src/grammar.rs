//! Grammars over commutative words with integer counters and resets.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::word::CommutativeWord;

/// A production rule: rewrites one occurrence of `lhs` into the commutative
/// word `rhs`, resetting the counters in `resets` to zero and then adding
/// `update` to all counters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Production {
    pub id: String,
    pub lhs: String,
    pub resets: BTreeSet<String>,
    /// Counter update vector, defined on exactly the grammar's counters.
    pub update: BTreeMap<String, i64>,
    pub rhs: CommutativeWord,
}

impl Production {
    pub fn update_of(&self, counter: &str) -> i64 {
        self.update.get(counter).copied().unwrap_or(0)
    }
}

/// A commutative grammar with integer counters and resets.
///
/// The declaration order of `counters` fixes how counter vectors are
/// serialized, and the order of `productions` fixes the index space used by
/// generalized Parikh images and the compiled formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    nonterminals: Vec<String>,
    counters: Vec<String>,
    productions: Vec<Production>,
    axiom: String,
    nt_index: HashMap<String, usize>,
    counter_index: HashMap<String, usize>,
    production_index: HashMap<String, usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GrammarError {
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("duplicate nonterminal `{0}`")]
    DuplicateNonterminal(String),
    #[error("duplicate counter `{0}`")]
    DuplicateCounter(String),
    #[error("duplicate production id `{0}`")]
    DuplicateProductionId(String),
    #[error("axiom `{0}` is not a declared nonterminal")]
    BadAxiom(String),
}

impl Grammar {
    /// Validates and builds a grammar. Production updates may mention only
    /// declared counters and are padded with zeros to cover all of them.
    pub fn new(
        nonterminals: Vec<String>,
        counters: Vec<String>,
        productions: Vec<Production>,
        axiom: String,
    ) -> Result<Self, GrammarError> {
        let mut nt_index = HashMap::new();
        for (i, nt) in nonterminals.iter().enumerate() {
            if nt_index.insert(nt.clone(), i).is_some() {
                return Err(GrammarError::DuplicateNonterminal(nt.clone()));
            }
        }
        let mut counter_index = HashMap::new();
        for (i, c) in counters.iter().enumerate() {
            if counter_index.insert(c.clone(), i).is_some() {
                return Err(GrammarError::DuplicateCounter(c.clone()));
            }
        }
        if !nt_index.contains_key(&axiom) {
            return Err(GrammarError::BadAxiom(axiom));
        }
        let mut production_index = HashMap::new();
        let mut productions = productions;
        for (i, p) in productions.iter_mut().enumerate() {
            if production_index.insert(p.id.clone(), i).is_some() {
                return Err(GrammarError::DuplicateProductionId(p.id.clone()));
            }
            if !nt_index.contains_key(&p.lhs) {
                return Err(GrammarError::UndeclaredSymbol(p.lhs.clone()));
            }
            for symbol in p.rhs.symbols() {
                if !nt_index.contains_key(symbol) {
                    return Err(GrammarError::UndeclaredSymbol(symbol.to_string()));
                }
            }
            for r in &p.resets {
                if !counter_index.contains_key(r) {
                    return Err(GrammarError::UndeclaredSymbol(r.clone()));
                }
            }
            for c in p.update.keys() {
                if !counter_index.contains_key(c) {
                    return Err(GrammarError::UndeclaredSymbol(c.clone()));
                }
            }
            for c in &counters {
                p.update.entry(c.clone()).or_insert(0);
            }
        }
        Ok(Self {
            nonterminals,
            counters,
            productions,
            axiom,
            nt_index,
            counter_index,
            production_index,
        })
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn counters(&self) -> &[String] {
        &self.counters
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn axiom(&self) -> &str {
        &self.axiom
    }

    /// Number of productions, the `k` of the formula machinery.
    pub fn production_count(&self) -> usize {
        self.productions.len()
    }

    pub fn production(&self, index: usize) -> &Production {
        &self.productions[index]
    }

    pub fn production_by_id(&self, id: &str) -> Option<(usize, &Production)> {
        let &i = self.production_index.get(id)?;
        Some((i, &self.productions[i]))
    }

    pub fn nt_index(&self, symbol: &str) -> Option<usize> {
        self.nt_index.get(symbol).copied()
    }

    pub fn counter_index(&self, counter: &str) -> Option<usize> {
        self.counter_index.get(counter).copied()
    }

    pub fn is_nonterminal(&self, symbol: &str) -> bool {
        self.nt_index.contains_key(symbol)
    }

    pub fn is_counter(&self, symbol: &str) -> bool {
        self.counter_index.contains_key(symbol)
    }
}

/// Structural subclasses of the grammar model.
///
/// `Zvass` grammars are left-linear (right-hand sides of length at most one)
/// and reset-free; `Zvas` grammars are additionally restricted to a singleton
/// nonterminal alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrammarClass {
    Zcfgr,
    Zvass,
    Zvas,
}

impl fmt::Display for GrammarClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrammarClass::Zcfgr => write!(f, "ZCFGR"),
            GrammarClass::Zvass => write!(f, "ZVASS"),
            GrammarClass::Zvas => write!(f, "ZVAS"),
        }
    }
}

/// Determines the tightest subclass the grammar belongs to.
pub fn classify(g: &Grammar) -> GrammarClass {
    let left_linear_reset_free = g
        .productions()
        .iter()
        .all(|p| p.resets.is_empty() && p.rhs.len() <= 1);
    if !left_linear_reset_free {
        return GrammarClass::Zcfgr;
    }
    if g.nonterminals().len() == 1 {
        GrammarClass::Zvas
    } else {
        GrammarClass::Zvass
    }
}

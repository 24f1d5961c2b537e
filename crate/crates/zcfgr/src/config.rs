//! Configurations: a commutative word paired with an integer counter valuation.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::grammar::Grammar;
use crate::word::CommutativeWord;

/// An integer valuation of a grammar's counters.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Valuation {
    values: BTreeMap<String, i64>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValuationError {
    #[error("valuation mentions undeclared counter `{0}`")]
    UndeclaredCounter(String),
}

impl Valuation {
    pub fn new<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, i64)>,
        S: Into<String>,
    {
        Self {
            values: pairs.into_iter().map(|(c, v)| (c.into(), v)).collect(),
        }
    }

    /// The all-zero valuation over the grammar's counters.
    pub fn zero(g: &Grammar) -> Self {
        Self::new(g.counters().iter().map(|c| (c.clone(), 0)))
    }

    /// Validates the counter names and pads missing counters with zero, so the
    /// result is defined on exactly the grammar's counter set.
    pub fn complete_for(mut self, g: &Grammar) -> Result<Self, ValuationError> {
        for c in self.values.keys() {
            if !g.is_counter(c) {
                return Err(ValuationError::UndeclaredCounter(c.clone()));
            }
        }
        for c in g.counters() {
            self.values.entry(c.clone()).or_insert(0);
        }
        Ok(self)
    }

    pub fn get(&self, counter: &str) -> i64 {
        self.values.get(counter).copied().unwrap_or(0)
    }

    pub fn set(&mut self, counter: impl Into<String>, value: i64) {
        self.values.insert(counter.into(), value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i64)> {
        self.values.iter().map(|(c, &v)| (c.as_str(), v))
    }

    /// Component-wise ≥, over the counters present in `threshold`.
    pub fn covers(&self, threshold: &Valuation) -> bool {
        threshold.iter().all(|(c, v)| self.get(c) >= v)
    }

    /// Renders in the grammar's counter declaration order: `c1=3 c2=-1`.
    pub fn display_with(&self, g: &Grammar) -> String {
        g.counters()
            .iter()
            .map(|c| format!("{c}={}", self.get(c)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A configuration of a grammar.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub word: CommutativeWord,
    pub counters: Valuation,
}

impl std::fmt::Display for Configuration {
    /// Counter order is alphabetical here; [`Configuration::display_with`]
    /// renders in a grammar's declaration order instead.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.word)?;
        let counters: Vec<String> = self.counters.iter().map(|(c, v)| format!("{c}={v}")).collect();
        if !counters.is_empty() {
            write!(f, " ; {}", counters.join(" "))?;
        }
        Ok(())
    }
}

impl Configuration {
    pub fn new(word: CommutativeWord, counters: Valuation) -> Self {
        Self { word, counters }
    }

    /// Renders as a configuration literal: `S A A ; c1=3 c2=-1`.
    pub fn display_with(&self, g: &Grammar) -> String {
        if g.counters().is_empty() {
            format!("{}", self.word)
        } else {
            format!("{} ; {}", self.word, self.counters.display_with(g))
        }
    }
}

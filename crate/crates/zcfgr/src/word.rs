//! Commutative words: multisets over a symbol alphabet.

use std::collections::BTreeMap;
use std::fmt;

/// A commutative word, i.e. a finite multiset of symbols.
///
/// Stored in canonical form: symbols with multiplicity zero are absent.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CommutativeWord {
    counts: BTreeMap<String, u64>,
}

impl CommutativeWord {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The word consisting of a single symbol.
    pub fn singleton(symbol: impl Into<String>) -> Self {
        let mut counts = BTreeMap::new();
        counts.insert(symbol.into(), 1);
        Self { counts }
    }

    pub fn from_counts<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut word = Self::empty();
        for (symbol, n) in pairs {
            word.insert(symbol.into(), n);
        }
        word
    }

    /// Adds `n` occurrences of `symbol`, keeping the canonical form.
    pub fn insert(&mut self, symbol: String, n: u64) {
        if n == 0 {
            return;
        }
        *self.counts.entry(symbol).or_insert(0) += n;
    }

    pub fn count(&self, symbol: &str) -> u64 {
        self.counts.get(symbol).copied().unwrap_or(0)
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.counts.contains_key(symbol)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Total number of symbol occurrences.
    pub fn len(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Distinct symbols with positive multiplicity, in sorted order.
    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.counts.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(s, &n)| (s.as_str(), n))
    }

    /// Component-wise sum.
    pub fn add(&self, other: &Self) -> Self {
        let mut result = self.clone();
        for (symbol, &n) in &other.counts {
            result.insert(symbol.clone(), n);
        }
        result
    }

    /// Component-wise difference; `None` if any multiplicity would go negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let mut counts = self.counts.clone();
        for (symbol, &n) in &other.counts {
            let have = counts.get_mut(symbol)?;
            if *have < n {
                return None;
            }
            *have -= n;
            if *have == 0 {
                counts.remove(symbol);
            }
        }
        Some(Self { counts })
    }

    /// Removes one occurrence of `symbol`; `None` if absent.
    pub fn remove_one(&self, symbol: &str) -> Option<Self> {
        self.checked_sub(&Self::singleton(symbol))
    }
}

impl fmt::Display for CommutativeWord {
    /// Symbols expanded and sorted, or `eps` for the empty word.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "eps");
        }
        let mut first = true;
        for (symbol, n) in &self.counts {
            for _ in 0..*n {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{symbol}")?;
                first = false;
            }
        }
        Ok(())
    }
}

//! Operational semantics: single steps and runs.

use thiserror::Error;

use crate::config::{Configuration, Valuation};
use crate::grammar::{Grammar, Production};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StepError {
    #[error("unknown production id `{0}`")]
    UnknownProduction(String),
    #[error("production `{id}` not enabled: `{lhs}` absent from the word")]
    NotEnabled { id: String, lhs: String },
    #[error("run disabled at position {position}: {source}")]
    DisabledAt {
        position: usize,
        #[source]
        source: Box<StepError>,
    },
}

fn apply(p: &Production, c: &Configuration) -> Result<Configuration, StepError> {
    let word = c.word.remove_one(&p.lhs).ok_or_else(|| StepError::NotEnabled {
        id: p.id.clone(),
        lhs: p.lhs.clone(),
    })?;
    let word = word.add(&p.rhs);
    // Reset first, then add: v = u_{|R} + z_p.
    let mut counters = Valuation::default();
    for (counter, value) in c.counters.iter() {
        let base = if p.resets.contains(counter) { 0 } else { value };
        counters.set(counter, base + p.update_of(counter));
    }
    Ok(Configuration::new(word, counters))
}

/// Applies one production, identified by id.
pub fn step(g: &Grammar, c: &Configuration, production_id: &str) -> Result<Configuration, StepError> {
    let (_, p) = g
        .production_by_id(production_id)
        .ok_or_else(|| StepError::UnknownProduction(production_id.to_string()))?;
    apply(p, c)
}

/// Applies one production, identified by index into the production sequence.
pub fn step_indexed(g: &Grammar, c: &Configuration, production: usize) -> Result<Configuration, StepError> {
    apply(g.production(production), c)
}

/// Left fold of [`step`] over a run of production ids. The empty run returns
/// the configuration unchanged. A disabled step is reported with its position.
pub fn simulate<I, S>(g: &Grammar, c: &Configuration, run: I) -> Result<Configuration, StepError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut current = c.clone();
    for (position, id) in run.into_iter().enumerate() {
        current = step(g, &current, id.as_ref()).map_err(|source| StepError::DisabledAt {
            position,
            source: Box::new(source),
        })?;
    }
    Ok(current)
}

/// Index-based variant of [`simulate`].
pub fn simulate_indexed(g: &Grammar, c: &Configuration, run: &[usize]) -> Result<Configuration, StepError> {
    let mut current = c.clone();
    for (position, &p) in run.iter().enumerate() {
        current = step_indexed(g, &current, p).map_err(|source| StepError::DisabledAt {
            position,
            source: Box::new(source),
        })?;
    }
    Ok(current)
}

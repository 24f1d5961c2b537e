//! Generalized Parikh images: the last-occurrence decomposition of a run.
//!
//! A run is decomposed at the last occurrence of each production it uses.
//! The decomposition records one Parikh vector per segment, the order in
//! which productions occur for the last time, and the index where the real
//! segments begin; positions before that index are padded with the unused
//! productions, in any order.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::config::Valuation;
use crate::grammar::Grammar;

/// The Parikh image of a run: occurrence counts per production index.
pub fn parikh_image(run: &[usize], k: usize) -> Vec<u64> {
    let mut counts = vec![0u64; k];
    for &p in run {
        counts[p] += 1;
    }
    counts
}

/// A generalized Parikh image over a grammar with `k` productions.
///
/// Positions and production indices are both 0-based; the paper-facing index
/// `m` is [`GeneralizedParikhImage::m`], which is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneralizedParikhImage {
    alphas: Vec<Vec<u64>>,
    sigma: Vec<usize>,
    start: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GpiError {
    #[error("run is empty")]
    EmptyRun,
    #[error("production index {0} out of range")]
    BadProductionIndex(usize),
    #[error("sigma is not a permutation")]
    NotAPermutation,
    #[error("start index {start} out of range for {k} productions")]
    BadStart { start: usize, k: usize },
    #[error("alpha vectors have wrong shape")]
    BadShape,
    #[error("alpha {0} must be zero (padding position)")]
    NonzeroPadding(usize),
    #[error("alpha {position} has support outside its tail (production {production})")]
    SupportOutsideTail { position: usize, production: usize },
}

impl GeneralizedParikhImage {
    /// Validates the shape conditions: `sigma` is a permutation, padding
    /// positions carry zero vectors, and each segment only uses productions
    /// whose last occurrence has not yet passed.
    pub fn new(alphas: Vec<Vec<u64>>, sigma: Vec<usize>, start: usize) -> Result<Self, GpiError> {
        let k = sigma.len();
        if alphas.len() != k || alphas.iter().any(|a| a.len() != k) {
            return Err(GpiError::BadShape);
        }
        if start >= k {
            return Err(GpiError::BadStart { start, k });
        }
        let mut seen = vec![false; k];
        for &p in &sigma {
            if p >= k {
                return Err(GpiError::BadProductionIndex(p));
            }
            if seen[p] {
                return Err(GpiError::NotAPermutation);
            }
            seen[p] = true;
        }
        for (i, alpha) in alphas.iter().enumerate() {
            if i < start {
                if alpha.iter().any(|&n| n > 0) {
                    return Err(GpiError::NonzeroPadding(i));
                }
                continue;
            }
            let tail: BTreeSet<usize> = sigma[i..].iter().copied().collect();
            for (p, &n) in alpha.iter().enumerate() {
                if n > 0 && !tail.contains(&p) {
                    return Err(GpiError::SupportOutsideTail { position: i, production: p });
                }
            }
        }
        Ok(Self { alphas, sigma, start })
    }

    pub fn k(&self) -> usize {
        self.sigma.len()
    }

    /// Paper-facing 1-based start index.
    pub fn m(&self) -> usize {
        self.start + 1
    }

    /// 0-based index of the first non-padding position.
    pub fn start(&self) -> usize {
        self.start
    }

    /// Segment Parikh vectors; `alphas()[i]` belongs to position `i`.
    pub fn alphas(&self) -> &[Vec<u64>] {
        &self.alphas
    }

    /// Position-to-production assignment (both 0-based).
    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    /// Sum of all segment vectors plus one occurrence of each separator:
    /// the plain Parikh image of any run this image decomposes.
    pub fn total_parikh(&self) -> Vec<u64> {
        let k = self.k();
        let mut total = vec![0u64; k];
        for alpha in &self.alphas {
            for (p, &n) in alpha.iter().enumerate() {
                total[p] += n;
            }
        }
        for i in self.start..k {
            total[self.sigma[i]] += 1;
        }
        total
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut result = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, x);
            result.push(tail);
        }
    }
    result
}

fn decompose(g: &Grammar, run: &[usize]) -> Result<(Vec<Vec<u64>>, Vec<usize>, usize, Vec<usize>), GpiError> {
    let k = g.production_count();
    if run.is_empty() {
        return Err(GpiError::EmptyRun);
    }
    for &p in run {
        if p >= k {
            return Err(GpiError::BadProductionIndex(p));
        }
    }
    let mut last = vec![None; k];
    for (pos, &p) in run.iter().enumerate() {
        last[p] = Some(pos);
    }
    // Used productions ordered by last occurrence; the cut points split the run.
    let mut cuts: Vec<(usize, usize)> = last
        .iter()
        .enumerate()
        .filter_map(|(p, pos)| pos.map(|pos| (pos, p)))
        .collect();
    cuts.sort_unstable();
    let used = cuts.len();
    let start = k - used;

    let mut alphas = vec![vec![0u64; k]; k];
    let mut sigma = vec![usize::MAX; k];
    let mut segment_begin = 0;
    for (j, &(pos, p)) in cuts.iter().enumerate() {
        sigma[start + j] = p;
        alphas[start + j] = parikh_image(&run[segment_begin..pos], k);
        segment_begin = pos + 1;
    }
    let unused: Vec<usize> = (0..k).filter(|p| last[*p].is_none()).collect();
    Ok((alphas, sigma, start, unused))
}

/// All generalized Parikh images of a nonempty run over `g`'s productions.
///
/// The images agree on the segment vectors, the start index, and the order of
/// used productions; they differ only in the ordering of unused productions on
/// the padding positions. The first element is the canonical representative
/// (unused productions ascending by index).
pub fn gen_parikh_images(g: &Grammar, run: &[usize]) -> Result<Vec<GeneralizedParikhImage>, GpiError> {
    let (alphas, sigma, start, unused) = decompose(g, run)?;
    let mut images = Vec::new();
    for prefix in permutations(&unused) {
        let mut sigma = sigma.clone();
        sigma[..start].copy_from_slice(&prefix);
        images.push(GeneralizedParikhImage::new(alphas.clone(), sigma, start)?);
    }
    Ok(images)
}

/// The canonical generalized Parikh image of a nonempty run: unused
/// productions sit before the start index in ascending order.
pub fn canonical_parikh_image(g: &Grammar, run: &[usize]) -> Result<GeneralizedParikhImage, GpiError> {
    let (alphas, mut sigma, start, unused) = decompose(g, run)?;
    sigma[..start].copy_from_slice(&unused);
    GeneralizedParikhImage::new(alphas, sigma, start)
}

/// Evaluates the final counter valuation determined by a generalized Parikh
/// image: the initial valuation survives only on counters never reset, and
/// each segment and separator contributes its update on the counters not
/// reset later in the decomposition.
pub fn effect_from_gpi(g: &Grammar, u: &Valuation, gpi: &GeneralizedParikhImage) -> Valuation {
    let k = gpi.k();
    // reset_suffix[i] = counters reset by the productions at positions i..k.
    let mut reset_suffix: Vec<BTreeSet<&str>> = vec![BTreeSet::new(); k + 1];
    for i in (gpi.start()..k).rev() {
        let mut set = reset_suffix[i + 1].clone();
        for c in &g.production(gpi.sigma()[i]).resets {
            set.insert(c.as_str());
        }
        reset_suffix[i] = set;
    }

    let mut v = Valuation::default();
    for c in g.counters() {
        let c = c.as_str();
        let mut value = if reset_suffix[gpi.start()].contains(c) { 0 } else { u.get(c) };
        for i in gpi.start()..k {
            if !reset_suffix[i].contains(c) {
                let segment: i64 = gpi.alphas()[i]
                    .iter()
                    .enumerate()
                    .map(|(p, &n)| n as i64 * g.production(p).update_of(c))
                    .sum();
                value += segment;
            }
            if !reset_suffix[i + 1].contains(c) {
                value += g.production(gpi.sigma()[i]).update_of(c);
            }
        }
        v.set(c, value);
    }
    v
}

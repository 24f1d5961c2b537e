//! Exhaustive subset-sum oracles, budgeted by instance size.

use std::collections::HashSet;

use super::{HardnessError, Pi2SsInstance, SimSsInstance};

pub const DEFAULT_ELEMENT_BOUND: usize = 20;
pub const DEFAULT_EXPONENT_BOUND: u32 = 10;

fn subset_sums(elements: &[u64]) -> HashSet<u64> {
    let mut sums = HashSet::new();
    sums.insert(0);
    for &x in elements {
        let existing: Vec<u64> = sums.iter().copied().collect();
        for s in existing {
            sums.insert(s + x);
        }
    }
    sums
}

/// Checks every subset of `u` against every subset of `v`, exhaustively.
pub fn brute_force_pi2ss(p: &Pi2SsInstance, element_bound: usize) -> Result<bool, HardnessError> {
    if p.u.len() + p.v.len() > element_bound {
        return Err(HardnessError::BoundExceeded(format!(
            "|U| + |V| = {} > {element_bound}",
            p.u.len() + p.v.len()
        )));
    }
    let u: Vec<u64> = p.u.iter().copied().collect();
    let v_sums = subset_sums(&p.v.iter().copied().collect::<Vec<_>>());
    for mask in 0u64..(1 << u.len()) {
        let sum_u: u64 = u
            .iter()
            .enumerate()
            .filter(|(j, _)| mask >> j & 1 == 1)
            .map(|(_, &x)| x)
            .sum();
        let complement = match p.t.checked_sub(sum_u) {
            Some(c) => c,
            None => return Ok(false),
        };
        if !v_sums.contains(&complement) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks every target `t + i·h` for `i` in `[0, 2^m - 1]` against the
/// subset sums of `w`, exhaustively.
pub fn brute_force_simss(
    s: &SimSsInstance,
    element_bound: usize,
    exponent_bound: u32,
) -> Result<bool, HardnessError> {
    if s.w().len() > element_bound {
        return Err(HardnessError::BoundExceeded(format!(
            "|W| = {} > {element_bound}",
            s.w().len()
        )));
    }
    if s.m() > exponent_bound {
        return Err(HardnessError::BoundExceeded(format!("m = {} > {exponent_bound}", s.m())));
    }
    let sums = subset_sums(&s.w().iter().copied().collect::<Vec<_>>());
    for i in 0..(1u64 << s.m()) {
        let target = i
            .checked_mul(s.h())
            .and_then(|x| x.checked_add(s.t()))
            .ok_or(HardnessError::Overflow)?;
        if !sums.contains(&target) {
            return Ok(false);
        }
    }
    Ok(true)
}

//! Hardness-reduction instance generators and their brute-force oracles:
//! universally-quantified subset sum, simultaneous subset sum, the matrix
//! form of single-nonterminal inclusion, and the binary-to-unary transform.

mod format;
mod oracle;
mod reduce;
mod unary;

pub use format::{
    parse_inclusion_instance, parse_pi2ss_instance, parse_simss_instance,
    write_inclusion_instance, write_pi2ss_instance, write_simss_instance, FormatError,
};
pub use oracle::{brute_force_pi2ss, brute_force_simss, DEFAULT_ELEMENT_BOUND, DEFAULT_EXPONENT_BOUND};
pub use reduce::{pi2ss_to_simss, simss_to_inclusion};
pub use unary::{binary_expand, build_dm, build_emd, reverse, solve_dm, to_unary_instance};

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HardnessError {
    #[error("target {t} is not below the modulus {h}; the instance is trivially negative")]
    TriviallyNegative { t: u64, h: u64 },
    #[error("constructed element {0} collides with an existing element")]
    DuplicateElement(u64),
    #[error("arithmetic overflow while constructing the instance")]
    Overflow,
    #[error("component {value} does not fit in {bits} signed bits")]
    MagnitudeOverflow { value: i64, bits: u32 },
    #[error("vector length {len} is not {d} blocks of {m}")]
    LengthMismatch { len: usize, d: usize, m: u32 },
    #[error("matrix dimensions are invalid: {0}")]
    BadDimensions(String),
    #[error("instance exceeds the brute-force bound ({0})")]
    BoundExceeded(String),
}

/// For every subset of `u`, is there a subset of `v` completing the sum to `t`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pi2SsInstance {
    pub u: BTreeSet<u64>,
    pub v: BTreeSet<u64>,
    pub t: u64,
}

impl Pi2SsInstance {
    pub fn new<I, J>(u: I, v: J, t: u64) -> Self
    where
        I: IntoIterator<Item = u64>,
        J: IntoIterator<Item = u64>,
    {
        Self { u: u.into_iter().collect(), v: v.into_iter().collect(), t }
    }
}

/// For every `i` in `[0, 2^m - 1]`, is there a subset of `w` summing to
/// `t + i·h`? Requires `t < h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimSsInstance {
    w: BTreeSet<u64>,
    h: u64,
    m: u32,
    t: u64,
}

impl SimSsInstance {
    pub fn new<I>(w: I, h: u64, m: u32, t: u64) -> Result<Self, HardnessError>
    where
        I: IntoIterator<Item = u64>,
    {
        if t >= h {
            return Err(HardnessError::TriviallyNegative { t, h });
        }
        Ok(Self { w: w.into_iter().collect(), h, m, t })
    }

    pub fn w(&self) -> &BTreeSet<u64> {
        &self.w
    }

    pub fn h(&self) -> u64 {
        self.h
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn t(&self) -> u64 {
        self.t
    }
}

/// Does `∀x ∈ ℕ^r ∃y ∈ ℕ^s. A·x + B·y = v` hold?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearInclusionInstance {
    pub a: Matrix,
    pub b: Matrix,
    pub v: Vec<i64>,
}

impl LinearInclusionInstance {
    pub fn new(a: Matrix, b: Matrix, v: Vec<i64>) -> Result<Self, HardnessError> {
        if a.rows() != b.rows() || a.rows() != v.len() {
            return Err(HardnessError::BadDimensions(format!(
                "A has {} rows, B has {}, v has {}",
                a.rows(),
                b.rows(),
                v.len()
            )));
        }
        Ok(Self { a, b, v })
    }

    pub fn dimensions(&self) -> (usize, usize, usize) {
        (self.a.rows(), self.a.cols(), self.b.cols())
    }
}

/// A dense row-major integer matrix, sized for instance generation rather
/// than numerics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, HardnessError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(HardnessError::BadDimensions("ragged rows".into()));
        }
        Ok(Self { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: i64) {
        self.data[row * self.cols + col] = value;
    }

    pub fn column(&self, col: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    pub fn row(&self, row: usize) -> &[i64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = i64> + '_ {
        self.data.iter().copied()
    }

    pub fn negated(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| -x).collect() }
    }

    pub fn mul_vec(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// Horizontal concatenation; all parts must have equal row counts.
    pub fn hstack(parts: &[&Matrix]) -> Result<Self, HardnessError> {
        let rows = parts.first().map_or(0, |m| m.rows);
        if parts.iter().any(|m| m.rows != rows) {
            return Err(HardnessError::BadDimensions("hstack row mismatch".into()));
        }
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zero(rows, cols);
        let mut offset = 0;
        for part in parts {
            for r in 0..rows {
                for c in 0..part.cols {
                    out.set(r, offset + c, part.get(r, c));
                }
            }
            offset += part.cols;
        }
        Ok(out)
    }
}

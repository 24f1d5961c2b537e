//! Binary expansion, the reverse map, the weak-binary-representation
//! matrices, and the binary-to-unary instance transform.

use super::{HardnessError, LinearInclusionInstance, Matrix};

/// Signed binary expansion, most significant bit first: nonnegative
/// components expand over `{0,1}`, negative ones over `{-1,0}`. Every
/// component must satisfy `|x_i| < 2^m`.
pub fn binary_expand(x: &[i64], m: u32) -> Result<Vec<i64>, HardnessError> {
    let mut out = Vec::with_capacity(x.len() * m as usize);
    for &value in x {
        if m >= 63 {
            return Err(HardnessError::Overflow);
        }
        if value.unsigned_abs() >= 1u64 << m {
            return Err(HardnessError::MagnitudeOverflow { value, bits: m });
        }
        let sign = if value < 0 { -1 } else { 1 };
        let magnitude = value.unsigned_abs();
        for j in (0..m).rev() {
            out.push(sign * ((magnitude >> j) & 1) as i64);
        }
    }
    Ok(out)
}

/// The inverse reading of `d` blocks of `m` signed digits, most significant
/// first: `r_i = Σ_j y_i^(j)·2^j`. Arbitrary integer digits are accepted, so
/// this also evaluates weak binary representations.
pub fn reverse(y: &[i64], d: usize, m: u32) -> Result<Vec<i64>, HardnessError> {
    if y.len() != d * m as usize {
        return Err(HardnessError::LengthMismatch { len: y.len(), d, m });
    }
    let mut out = Vec::with_capacity(d);
    for block in y.chunks(m as usize) {
        let mut value = 0i64;
        for &digit in block {
            value = value * 2 + digit;
        }
        out.push(value);
    }
    Ok(out)
}

/// The `m × (m-1)` matrix with unit diagonal and `-2` subdiagonal; its image
/// is exactly the set of height-`m` weak binary representations of zero.
pub fn build_dm(m: u32) -> Result<Matrix, HardnessError> {
    if m < 2 {
        return Err(HardnessError::BadDimensions(format!("D_m needs m >= 2, got {m}")));
    }
    Ok(dm_unchecked(m))
}

fn dm_unchecked(m: u32) -> Matrix {
    let m = m as usize;
    let mut d = Matrix::zero(m, m.saturating_sub(1));
    for j in 0..m.saturating_sub(1) {
        d.set(j, j, 1);
        d.set(j + 1, j, -2);
    }
    d
}

/// Block-diagonal stack of `d` copies of `D_m`, extending the weak-zero
/// characterization to dimension-`d` vectors.
pub fn build_emd(m: u32, d: usize) -> Result<Matrix, HardnessError> {
    if m < 2 || d < 1 {
        return Err(HardnessError::BadDimensions(format!("E_m^d needs m >= 2 and d >= 1, got m={m}, d={d}")));
    }
    Ok(emd_unchecked(m, d))
}

fn emd_unchecked(m: u32, d: usize) -> Matrix {
    let block = dm_unchecked(m);
    let (bm, bn) = (block.rows(), block.cols());
    let mut e = Matrix::zero(d * bm, d * bn);
    for i in 0..d {
        for r in 0..bm {
            for c in 0..bn {
                e.set(i * bm + r, i * bn + c, block.get(r, c));
            }
        }
    }
    e
}

/// Solves `D_m · z = y` over the integers if a solution exists: the first
/// `m-1` rows determine `z` uniquely by forward substitution, and the last
/// row holds exactly when `y` is a weak binary representation of zero.
pub fn solve_dm(y: &[i64]) -> Option<Vec<i64>> {
    let m = y.len();
    if m == 0 {
        return Some(Vec::new());
    }
    if m == 1 {
        return (y[0] == 0).then(Vec::new);
    }
    let mut z = Vec::with_capacity(m - 1);
    z.push(y[0]);
    for i in 1..m - 1 {
        z.push(y[i] + 2 * z[i - 1]);
    }
    (-2 * z[m - 2] == y[m - 1]).then_some(z)
}

/// Minimal number of signed bits covering every entry of the instance.
fn minimal_bits(inst: &LinearInclusionInstance) -> u32 {
    let max = inst
        .a
        .entries()
        .chain(inst.b.entries())
        .chain(inst.v.iter().copied())
        .map(i64::unsigned_abs)
        .max()
        .unwrap_or(0);
    let mut m = 0;
    while 1u64 << m <= max {
        m += 1;
    }
    m
}

fn expand_columns(m: &Matrix, bits: u32) -> Result<Matrix, HardnessError> {
    let mut columns: Vec<Vec<i64>> = Vec::with_capacity(m.cols());
    for j in 0..m.cols() {
        columns.push(binary_expand(&m.column(j), bits)?);
    }
    let rows = m.rows() * bits as usize;
    let mut out = Matrix::zero(rows, m.cols());
    for (j, col) in columns.iter().enumerate() {
        for (r, &x) in col.iter().enumerate() {
            out.set(r, j, x);
        }
    }
    Ok(out)
}

/// Rewrites an instance so that every entry lies in `[-2, 2]`: matrix
/// entries and the target are expanded bitwise, and two mirrored
/// weak-representation blocks absorb carries. `bits_override`, when given,
/// must cover the widest entry and replaces the minimal bit count.
pub fn to_unary_instance(
    inst: &LinearInclusionInstance,
    bits_override: Option<u32>,
) -> Result<LinearInclusionInstance, HardnessError> {
    let bits = bits_override.unwrap_or_else(|| minimal_bits(inst));
    let d = inst.a.rows();
    let a = expand_columns(&inst.a, bits)?;
    let b_bits = expand_columns(&inst.b, bits)?;
    let e = if bits >= 1 { emd_unchecked(bits, d) } else { Matrix::zero(0, 0) };
    let b = Matrix::hstack(&[&b_bits, &e, &e.negated()])?;
    let v = binary_expand(&inst.v, bits)?;
    LinearInclusionInstance::new(a, b, v)
}

//! The reduction chain: universally-quantified subset sum to simultaneous
//! subset sum, and on to the `∀x∃y` matrix inclusion form.

use super::{HardnessError, LinearInclusionInstance, Matrix, Pi2SsInstance, SimSsInstance};

fn checked_pow2(exp: u32) -> Result<u64, HardnessError> {
    1u64.checked_shl(exp).filter(|_| exp < 63).ok_or(HardnessError::Overflow)
}

/// Tags the `j`-th universal element with the block value `2^(j-1)·h`, where
/// `h` exceeds every possible subset sum, so choosing tagged elements encodes
/// the binary expansion of the simultaneous target index. Elements of `u` are
/// taken in ascending order. Answer-preserving; requires `t < h`.
pub fn pi2ss_to_simss(p: &Pi2SsInstance) -> Result<SimSsInstance, HardnessError> {
    let sum_u: u64 = p.u.iter().try_fold(0u64, |acc, &x| acc.checked_add(x).ok_or(HardnessError::Overflow))?;
    let sum_v: u64 = p.v.iter().try_fold(0u64, |acc, &x| acc.checked_add(x).ok_or(HardnessError::Overflow))?;
    let h = sum_u
        .checked_add(sum_v)
        .and_then(|s| s.checked_add(1))
        .ok_or(HardnessError::Overflow)?;
    if p.t >= h {
        return Err(HardnessError::TriviallyNegative { t: p.t, h });
    }
    let r = p.u.len() as u32;
    let mut w = p.v.clone();
    for (j, &u_j) in p.u.iter().enumerate() {
        let block = checked_pow2(j as u32)?.checked_mul(h).ok_or(HardnessError::Overflow)?;
        let element = u_j.checked_add(block).ok_or(HardnessError::Overflow)?;
        if !w.insert(element) {
            return Err(HardnessError::DuplicateElement(element));
        }
    }
    SimSsInstance::new(w, h, r, p.t)
}

/// The matrix form: `r = 1`, `s = 2n + 1`, `d = n + 1` for `n = |W|`. The
/// first row encodes the target sum modulo `2^m·h`; the identity block pair
/// forces the subset-choice vector into `{0,1}^n`.
pub fn simss_to_inclusion(s: &SimSsInstance) -> Result<LinearInclusionInstance, HardnessError> {
    let w: Vec<i64> = s
        .w()
        .iter()
        .map(|&x| i64::try_from(x).map_err(|_| HardnessError::Overflow))
        .collect::<Result<_, _>>()?;
    let n = w.len();
    let h = i64::try_from(s.h()).map_err(|_| HardnessError::Overflow)?;
    let modulus = checked_pow2(s.m())?
        .checked_mul(s.h())
        .and_then(|x| i64::try_from(x).ok())
        .ok_or(HardnessError::Overflow)?;
    let t = i64::try_from(s.t()).map_err(|_| HardnessError::Overflow)?;

    let mut a = Matrix::zero(n + 1, 1);
    a.set(0, 0, -h);

    let mut b = Matrix::zero(n + 1, 2 * n + 1);
    for (j, &w_j) in w.iter().enumerate() {
        b.set(0, j, w_j);
    }
    b.set(0, 2 * n, modulus);
    for i in 0..n {
        b.set(i + 1, i, 1);
        b.set(i + 1, n + i, 1);
    }

    let mut v = vec![1i64; n + 1];
    v[0] = t;

    LinearInclusionInstance::new(a, b, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardness::{brute_force_pi2ss, brute_force_simss, DEFAULT_ELEMENT_BOUND, DEFAULT_EXPONENT_BOUND};

    #[test]
    fn worked_positive_instance() {
        // U={1}, V={1,2}, t=2: h=5, W={6,1,2}, m=1; both sides positive.
        let p = Pi2SsInstance::new([1], [1, 2], 2);
        let s = pi2ss_to_simss(&p).unwrap();
        assert_eq!(s.h(), 5);
        assert_eq!(s.m(), 1);
        assert_eq!(s.t(), 2);
        assert_eq!(s.w().iter().copied().collect::<Vec<_>>(), vec![1, 2, 6]);
        assert_eq!(brute_force_pi2ss(&p, DEFAULT_ELEMENT_BOUND), Ok(true));
        assert_eq!(brute_force_simss(&s, DEFAULT_ELEMENT_BOUND, DEFAULT_EXPONENT_BOUND), Ok(true));
    }

    #[test]
    fn worked_negative_instance() {
        // U={1}, V={2}, t=1: h=4, W={5,2}, m=1; both sides negative.
        let p = Pi2SsInstance::new([1], [2], 1);
        let s = pi2ss_to_simss(&p).unwrap();
        assert_eq!(s.h(), 4);
        assert_eq!(s.w().iter().copied().collect::<Vec<_>>(), vec![2, 5]);
        assert_eq!(brute_force_pi2ss(&p, DEFAULT_ELEMENT_BOUND), Ok(false));
        assert_eq!(brute_force_simss(&s, DEFAULT_ELEMENT_BOUND, DEFAULT_EXPONENT_BOUND), Ok(false));
    }

    #[test]
    fn empty_universal_side_degenerates_to_single_target() {
        let p = Pi2SsInstance::new([], [7], 7);
        let s = pi2ss_to_simss(&p).unwrap();
        assert_eq!(s.m(), 0);
        assert_eq!(brute_force_pi2ss(&p, DEFAULT_ELEMENT_BOUND), Ok(true));
        assert_eq!(brute_force_simss(&s, DEFAULT_ELEMENT_BOUND, DEFAULT_EXPONENT_BOUND), Ok(true));
    }

    #[test]
    fn oversized_target_is_rejected() {
        let p = Pi2SsInstance::new([1], [2], 10);
        assert_eq!(
            pi2ss_to_simss(&p).unwrap_err(),
            HardnessError::TriviallyNegative { t: 10, h: 4 }
        );
    }

    #[test]
    fn matrix_shape_of_worked_example() {
        // W={5,2}, h=4, m=1, t=1 yields the displayed 3x5 system.
        let s = SimSsInstance::new([5, 2], 4, 1, 1).unwrap();
        let inst = simss_to_inclusion(&s).unwrap();
        let (d, r, cols) = inst.dimensions();
        assert_eq!((d, r, cols), (3, 1, 5));
        assert_eq!(inst.a.column(0), vec![-4, 0, 0]);
        assert_eq!(inst.b.row(0), &[2, 5, 0, 0, 8]);
        assert_eq!(inst.b.row(1), &[1, 0, 1, 0, 0]);
        assert_eq!(inst.b.row(2), &[0, 1, 0, 1, 0]);
        assert_eq!(inst.v, vec![1, 1, 1]);
    }

    #[test]
    fn binary_block_forces_boolean_choice() {
        // any solution of the identity rows has y ∈ {0,1}^n
        let s = SimSsInstance::new([5, 2], 4, 1, 1).unwrap();
        let inst = simss_to_inclusion(&s).unwrap();
        let n = 2;
        for y0 in 0..=2i64 {
            for y1 in 0..=2i64 {
                for z0 in 0..=2i64 {
                    for z1 in 0..=2i64 {
                        let x = inst.b.mul_vec(&[y0, y1, z0, z1, 0]);
                        let rows_ok = x[1] == inst.v[1] && x[2] == inst.v[2];
                        if rows_ok {
                            assert!((0..=1).contains(&y0) && (0..=1).contains(&y1));
                            let _ = n;
                        }
                    }
                }
            }
        }
    }
}

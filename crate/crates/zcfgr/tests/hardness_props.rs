//! Invariants of the hardness generators beyond the acceptance criteria.

mod common;

use common::rng;
use rand::Rng;
use zcfgr::hardness::{
    binary_expand, build_emd, pi2ss_to_simss, reverse, simss_to_inclusion, Matrix, Pi2SsInstance,
};

/// The modulus dominates: every simultaneous target stays below `h·2^m`, and
/// a subset of the constructed set hits a target only if its tagged elements
/// spell out exactly the target index in binary.
#[test]
fn modulus_dominance_on_small_instances() {
    for u_mask in 0u32..8 {
        for v_mask in 0u32..8 {
            for t in 0..=10u64 {
                let u: Vec<u64> = [1u64, 3, 5]
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| u_mask >> i & 1 == 1)
                    .map(|(_, &x)| x)
                    .collect();
                let v: Vec<u64> = [2u64, 4, 6]
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| v_mask >> i & 1 == 1)
                    .map(|(_, &x)| x)
                    .collect();
                let p = Pi2SsInstance::new(u.iter().copied(), v.iter().copied(), t);
                let Ok(s) = pi2ss_to_simss(&p) else { continue };
                let r = p.u.len() as u32;
                let h = s.h();
                // targets stay below the modulus wrap
                for i in 0..(1u64 << s.m()) {
                    assert!(s.t() + i * h < h * (1 << s.m()));
                }
                // tagged elements spell the index: enumerate all subsets of W
                let tagged: Vec<u64> = p
                    .u
                    .iter()
                    .enumerate()
                    .map(|(j, &u_j)| u_j + (1u64 << j) * h)
                    .collect();
                let w: Vec<u64> = s.w().iter().copied().collect();
                for mask in 0u32..(1 << w.len()) {
                    let sum: u64 = w
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &x)| x)
                        .sum();
                    if sum < s.t() || (sum - s.t()) % h != 0 {
                        continue;
                    }
                    let i = (sum - s.t()) / h;
                    if i >= 1 << s.m() {
                        continue;
                    }
                    // the subset hit target i: its tagged members must be the bits of i
                    let chosen_tags: Vec<bool> = tagged
                        .iter()
                        .map(|tag| {
                            w.iter().enumerate().any(|(wi, x)| x == tag && mask >> wi & 1 == 1)
                        })
                        .collect();
                    for (j, &chosen) in chosen_tags.iter().enumerate() {
                        assert_eq!(
                            chosen,
                            i >> j & 1 == 1,
                            "tag {j} of {r} disagrees with index {i} in {p:?}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn reverse_is_linear_over_expanded_matrices() {
    // reverse(b(B)·y) = B·y for small matrices and y in [0,3]^s
    let mut rng = rng(401);
    for _ in 0..50 {
        let d = rng.gen_range(1..=3usize);
        let s = rng.gen_range(1..=3usize);
        let b = Matrix::from_rows(
            (0..d).map(|_| (0..s).map(|_| rng.gen_range(-5..=5i64)).collect()).collect(),
        )
        .unwrap();
        let bits = 4u32;
        let mut expanded_cols = Vec::new();
        for j in 0..s {
            expanded_cols.push(binary_expand(&b.column(j), bits).unwrap());
        }
        let mut expanded = Matrix::zero(d * bits as usize, s);
        for (j, col) in expanded_cols.iter().enumerate() {
            for (r, &x) in col.iter().enumerate() {
                expanded.set(r, j, x);
            }
        }
        let y: Vec<i64> = (0..s).map(|_| rng.gen_range(0..=3)).collect();
        let lifted = expanded.mul_vec(&y);
        assert_eq!(reverse(&lifted, d, bits).unwrap(), b.mul_vec(&y));
    }
}

#[test]
fn block_matrix_image_reverses_to_zero() {
    let mut rng = rng(402);
    for _ in 0..100 {
        let d = rng.gen_range(1..=4usize);
        let m = rng.gen_range(2..=4u32);
        let e = build_emd(m, d).unwrap();
        let z: Vec<i64> = (0..e.cols()).map(|_| rng.gen_range(-4..=4)).collect();
        let y = e.mul_vec(&z);
        assert_eq!(reverse(&y, d, m).unwrap(), vec![0; d]);
    }
}

#[test]
fn chain_preservation_spot_checks() {
    // tiny instances where both answers are known by hand
    let yes = Pi2SsInstance::new([1], [1, 2], 2);
    let s = pi2ss_to_simss(&yes).unwrap();
    let inst = simss_to_inclusion(&s).unwrap();
    let (d, r, cols) = inst.dimensions();
    assert_eq!((d, r, cols), (4, 1, 7));

    let no = Pi2SsInstance::new([1], [2], 1);
    let s = pi2ss_to_simss(&no).unwrap();
    let inst = simss_to_inclusion(&s).unwrap();
    // x = 1 requires sum 5 from {2,5,...}: only the tagged 5 works, but its
    // u-part 1 then misses t=1... the oracle agrees with "no"
    assert_eq!(inst.v[0], 1);
}

//! Vanishing pattern of the two-variable regulator on random Gram matrices.

use orthlab_core::regulators::{
    bidegree_projection, random_eigen_gram, regulator_det, vanishing_pattern_check, EigenGramMatrix,
};
use orthlab_core::{GradedElement, PAdicContext, PAdicScalar};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Oracle: `det` by the Leibniz formula over bivariate integer polynomials
/// in `(s, t)`, stored as coefficient vectors indexed by the `t`-degree.
fn leibniz(entries: &[Vec<(i64, i64)>]) -> Vec<i128> {
    let r = entries.len();
    let mut total = vec![0i128; r + 1];
    let mut perm: Vec<usize> = (0..r).collect();
    loop {
        let inversions = (0..r)
            .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        let mut poly = vec![0i128; r + 1];
        poly[0] = if inversions % 2 == 0 { 1 } else { -1 };
        for (i, &pi) in perm.iter().enumerate() {
            let (a, b) = entries[i][pi];
            let mut next = vec![0i128; r + 1];
            for (k, &c) in poly.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                next[k] += c * a as i128;
                if k < r {
                    next[k + 1] += c * b as i128;
                }
            }
            poly = next;
        }
        for k in 0..=r {
            total[k] += poly[k];
        }
        // next permutation
        let Some(i) = (0..r.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..r).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    total
}

fn as_integers(c: PAdicContext, g: &EigenGramMatrix) -> Vec<Vec<(i64, i64)>> {
    let int = |x: PAdicScalar| x.to_centered_integer().unwrap() as i64;
    let _ = c;
    g.entries()
        .to_rows()
        .iter()
        .map(|row| row.iter().map(|e: &GradedElement| (int(e.component(0)), int(e.component(1)))).collect())
        .collect()
}

#[test]
fn five_hundred_instances() {
    let c = PAdicContext::new(5, 8).unwrap();
    let mut count = 0;
    for seed in 0..500u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = 1 + (seed as usize % 5);
        let rp = (seed as usize / 5) % (r + 1);
        let g = random_eigen_gram(&mut rng, c, rp, r - rp).unwrap();
        let reg = regulator_det(&g).unwrap();
        assert!(vanishing_pattern_check(&g).unwrap().pass, "seed {seed}");
        let oracle = leibniz(&as_integers(c, &g));
        let m = rp.min(r - rp);
        for (j, &want) in oracle.iter().enumerate() {
            let got = bidegree_projection(&reg, j).unwrap();
            if j % 2 == 1 || j > 2 * m {
                assert!(got.is_exact_zero(), "seed {seed} j {j}: {got}");
                assert_eq!(want, 0, "oracle disagrees at forbidden j {j}");
            } else {
                let want = c.integer(want as i64);
                assert!(got.agrees(&want, 6), "seed {seed} ({rp},{}) j {j}: {got} vs {want}", r - rp);
            }
        }
        count += 1;
    }
    assert_eq!(count, 500);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn index_scales_by_inverse_square(seed in 0u64..10_000, t in 1i64..30) {
        let c = PAdicContext::new(5, 8).unwrap();
        prop_assume!(t % 5 != 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_eigen_gram(&mut rng, c, 2, 1).unwrap();
        let g2 = EigenGramMatrix::new(2, 1, c.integer(t), g.entries().clone()).unwrap();
        let a = regulator_det(&g).unwrap();
        let b = regulator_det(&g2).unwrap();
        let scale = c.integer(t * t).inv().unwrap();
        for j in 0..=3 {
            prop_assert_eq!(bidegree_projection(&b, j).unwrap(), bidegree_projection(&a, j).unwrap() * scale);
        }
    }
}

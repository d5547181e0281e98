use super::Matrix;
use crate::padic::{PAdicScalar, Valuation};

/// Column echelon reduction of `a` with full pivoting by valuation, applied
/// to `[a | I]` on the left so row operations are recorded.
fn reduce(a: &Matrix<PAdicScalar>) -> (Matrix<PAdicScalar>, Matrix<PAdicScalar>, usize) {
    let (m, n) = (a.rows(), a.cols());
    let ctx = a.entries().first().map(|x| x.context());
    let mut d = a.clone();
    let mut left = match ctx {
        Some(c) => Matrix::from_fn(m, m, |i, j| if i == j { c.one() } else { c.zero() }),
        None => return (d, Matrix::from_fn(m, m, |_, _| unreachable!()), 0),
    };
    let mut rank = 0;
    let mut col_used = vec![false; n];
    while rank < m {
        let mut best: Option<(usize, usize, i64)> = None;
        for i in rank..m {
            for (j, used) in col_used.iter().enumerate() {
                if *used {
                    continue;
                }
                let x = d.get(i, j);
                if x.is_zero() {
                    continue;
                }
                if let Valuation::Finite(v) = x.valuation() {
                    if best.is_none_or(|(_, _, bv)| v < bv) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        d.swap_rows(rank, pi);
        left.swap_rows(rank, pi);
        col_used[pj] = true;
        let inv = d.get(rank, pj).inv().expect("nonzero pivot");
        for i in 0..m {
            if i == rank || d.get(i, pj).is_zero() {
                continue;
            }
            let f = d.get(i, pj) * &inv;
            for j in 0..n {
                let v = d.get(i, j) - &(&f * d.get(rank, j));
                d.set(i, j, v);
            }
            for j in 0..m {
                let v = left.get(i, j) - &(&f * left.get(rank, j));
                left.set(i, j, v);
            }
        }
        rank += 1;
    }
    (d, left, rank)
}

/// Basis of `{x : x^T a = 0}` over `Q_p`.
pub fn kernel_left(a: &Matrix<PAdicScalar>) -> Vec<Vec<PAdicScalar>> {
    let (_, left, rank) = reduce(a);
    (rank..a.rows()).map(|i| left.row(i)).collect()
}

pub fn rank(a: &Matrix<PAdicScalar>) -> usize {
    reduce(a).2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PAdicContext;

    #[test]
    fn left_kernel_of_singular_matrix() {
        let c = PAdicContext::new(5, 8).unwrap();
        let a = Matrix::from_rows(vec![
            vec![c.integer(1), c.integer(2)],
            vec![c.integer(3), c.integer(6)],
            vec![c.integer(0), c.integer(5)],
        ])
        .unwrap();
        assert_eq!(rank(&a), 2);
        let k = kernel_left(&a);
        assert_eq!(k.len(), 1);
        let x = &k[0];
        for j in 0..2 {
            let mut acc = c.zero();
            for i in 0..3 {
                acc += &(&x[i] * a.get(i, j));
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn zero_matrix_has_full_kernel() {
        let c = PAdicContext::new(5, 8).unwrap();
        let a = Matrix::from_fn(3, 3, |_, _| c.zero());
        assert_eq!(kernel_left(&a).len(), 3);
    }
}

use super::Matrix;
use crate::error::{Error, Result};
use crate::series::weierstrass::{divrem, weierstrass_degree};
use crate::series::LineSeries;

/// Diagonal reduction `left * a * right = diag` over a line ring.
#[derive(Debug, Clone)]
pub struct LineSmith {
    pub diag: Vec<LineSeries>,
    pub left: Matrix<LineSeries>,
    pub right: Matrix<LineSeries>,
}

impl LineSmith {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }

    /// Rows of `left` killed by the diagonal form: a basis of the left kernel.
    pub fn left_kernel(&self) -> Vec<Vec<LineSeries>> {
        (0..self.left.rows())
            .filter(|&i| self.diag.get(i).is_none_or(LineSeries::is_zero))
            .map(|i| self.left.row(i))
            .collect()
    }

    /// Nonzero elementary divisors.
    pub fn torsion(&self) -> Vec<LineSeries> {
        self.diag.iter().filter(|d| !d.is_zero()).cloned().collect()
    }
}

/// Weierstrass degree, the size function of the Euclidean structure.
fn size(x: &LineSeries) -> Option<usize> {
    if x.is_zero() {
        None
    } else {
        weierstrass_degree(x).ok().map(|(_, l)| l)
    }
}

pub fn smith_line(a: &Matrix<LineSeries>) -> Result<LineSmith> {
    let (m, n) = (a.rows(), a.cols());
    let sample = a
        .entries()
        .first()
        .ok_or_else(|| Error::Dimension("empty presentation".into()))?
        .clone();
    let mut d = a.clone();
    let mut left = Matrix::identity_like(m, &sample);
    let mut right = Matrix::identity_like(n, &sample);
    let bound = 4 * (sample.len() + 2) * (m + n);

    'outer: for k in 0..m.min(n) {
        for _ in 0..bound {
            let mut best: Option<(usize, usize, usize)> = None;
            for i in k..m {
                for j in k..n {
                    if let Some(l) = size(d.get(i, j)) {
                        if best.is_none_or(|(_, _, bl)| l < bl) {
                            best = Some((i, j, l));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                break 'outer;
            };
            d.swap_rows(k, pi);
            left.swap_rows(k, pi);
            d.swap_cols(k, pj);
            right.swap_cols(k, pj);
            let pivot = d.get(k, k).clone();
            let mut clean = true;
            for i in k + 1..m {
                if d.get(i, k).is_zero() {
                    continue;
                }
                let (q, r) = divrem(d.get(i, k), &pivot)?;
                for j in 0..n {
                    let v = d.get(i, j).sub(&q.mul(d.get(k, j)));
                    d.set(i, j, v);
                }
                for j in 0..m {
                    let v = left.get(i, j).sub(&q.mul(left.get(k, j)));
                    left.set(i, j, v);
                }
                clean &= r.is_zero();
                d.set(i, k, r);
            }
            for j in k + 1..n {
                if d.get(k, j).is_zero() {
                    continue;
                }
                let (q, r) = divrem(d.get(k, j), &pivot)?;
                for i in 0..m {
                    let v = d.get(i, j).sub(&d.get(i, k).mul(&q));
                    d.set(i, j, v);
                }
                for i in 0..n {
                    let v = right.get(i, j).sub(&right.get(i, k).mul(&q));
                    right.set(i, j, v);
                }
                clean &= r.is_zero();
                d.set(k, j, r);
            }
            if clean {
                continue 'outer;
            }
        }
        return Err(Error::GcdBound(format!("diagonal reduction at step {k}")));
    }
    let diag = (0..m.min(n)).map(|k| d.get(k, k).clone()).collect();
    Ok(LineSmith { diag, left, right })
}

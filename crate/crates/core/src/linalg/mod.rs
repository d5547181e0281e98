//! Dense matrices over the coefficient rings, determinants, and the
//! characteristic ideals of presentations.

mod char_ideal;
mod field;
mod smith;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::PAdicScalar;
use crate::series::{GradedElement, IwasawaSeries, LineSeries};

pub use char_ideal::{char_gcd_two_var, char_ideal_line, maximal_minors};
pub use field::{kernel_left, rank as field_rank};
pub use smith::{smith_line, LineSmith};

/// The operations matrix code needs from its entries.
pub trait RingElement: Clone + fmt::Debug + fmt::Display {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Structurally zero: contributes nothing to products.
    fn is_exact_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn inverse(&self) -> Result<Self>;
    /// The involution `τ` of the coefficient ring.
    fn tau(&self) -> Self;
    /// Agreement of every coefficient modulo `p^floor`.
    fn agrees(&self, other: &Self, floor: i64) -> bool;
    /// Working precision `M` of the coefficient field.
    fn precision(&self) -> u32;
}

impl RingElement for PAdicScalar {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn zero_like(&self) -> Self {
        self.context().zero()
    }
    fn one_like(&self) -> Self {
        self.context().one()
    }
    fn is_zero(&self) -> bool {
        PAdicScalar::is_zero(self)
    }
    fn is_exact_zero(&self) -> bool {
        PAdicScalar::is_exact_zero(self)
    }
    fn is_unit(&self) -> bool {
        !PAdicScalar::is_zero(self)
    }
    fn inverse(&self) -> Result<Self> {
        self.inv()
    }
    fn tau(&self) -> Self {
        *self
    }
    fn agrees(&self, other: &Self, floor: i64) -> bool {
        PAdicScalar::agrees(self, other, floor)
    }
    fn precision(&self) -> u32 {
        self.context().precision()
    }
}

impl RingElement for IwasawaSeries {
    fn add(&self, other: &Self) -> Self {
        IwasawaSeries::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        IwasawaSeries::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        IwasawaSeries::mul(self, other)
    }
    fn neg(&self) -> Self {
        IwasawaSeries::neg(self)
    }
    fn zero_like(&self) -> Self {
        self.context().zero()
    }
    fn one_like(&self) -> Self {
        self.context().one()
    }
    fn is_zero(&self) -> bool {
        IwasawaSeries::is_zero(self)
    }
    fn is_exact_zero(&self) -> bool {
        IwasawaSeries::is_exact_zero(self)
    }
    fn is_unit(&self) -> bool {
        IwasawaSeries::is_unit(self)
    }
    fn inverse(&self) -> Result<Self> {
        IwasawaSeries::inverse(self)
    }
    fn tau(&self) -> Self {
        IwasawaSeries::tau(self)
    }
    fn agrees(&self, other: &Self, floor: i64) -> bool {
        IwasawaSeries::agrees(self, other, floor)
    }
    fn precision(&self) -> u32 {
        self.context().precision()
    }
}

impl RingElement for LineSeries {
    fn add(&self, other: &Self) -> Self {
        LineSeries::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        LineSeries::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        LineSeries::mul(self, other)
    }
    fn neg(&self) -> Self {
        LineSeries::neg(self)
    }
    fn zero_like(&self) -> Self {
        LineSeries::zero_like(self)
    }
    fn one_like(&self) -> Self {
        LineSeries::one_like(self)
    }
    fn is_zero(&self) -> bool {
        LineSeries::is_zero(self)
    }
    fn is_exact_zero(&self) -> bool {
        LineSeries::is_exact_zero(self)
    }
    fn is_unit(&self) -> bool {
        LineSeries::is_unit(self)
    }
    fn inverse(&self) -> Result<Self> {
        LineSeries::inverse(self)
    }
    fn tau(&self) -> Self {
        LineSeries::tau(self)
    }
    fn agrees(&self, other: &Self, floor: i64) -> bool {
        LineSeries::agrees(self, other, floor)
    }
    fn precision(&self) -> u32 {
        self.context().precision()
    }
}

impl RingElement for GradedElement {
    fn add(&self, other: &Self) -> Self {
        GradedElement::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        GradedElement::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        GradedElement::mul(self, other)
    }
    fn neg(&self) -> Self {
        GradedElement::neg(self)
    }
    fn zero_like(&self) -> Self {
        GradedElement::zero(self.context(), self.degree())
    }
    fn one_like(&self) -> Self {
        GradedElement::one(self.context())
    }
    fn is_zero(&self) -> bool {
        GradedElement::is_zero(self)
    }
    fn is_exact_zero(&self) -> bool {
        GradedElement::is_exact_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.degree() == 0 && !self.is_zero()
    }
    fn inverse(&self) -> Result<Self> {
        if self.degree() != 0 {
            return Err(Error::NotUnit(self.to_string()));
        }
        Ok(GradedElement::new(self.context(), 0, vec![self.component(0).inv()?]))
    }
    /// `s ↦ s`, `t ↦ -t`.
    fn tau(&self) -> Self {
        let comps = self
            .components()
            .iter()
            .enumerate()
            .map(|(j, c)| if j % 2 == 1 { -c } else { *c })
            .collect();
        GradedElement::new(self.context(), self.degree(), comps)
    }
    fn agrees(&self, other: &Self, floor: i64) -> bool {
        GradedElement::agrees(self, other, floor)
    }
    fn precision(&self) -> u32 {
        self.context().precision()
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Clone> Matrix<R> {
    pub fn new(rows: usize, cols: usize, data: Vec<R>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: R) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> Vec<R> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    pub fn map<Q: Clone>(&self, f: impl FnMut(&R) -> Q) -> Matrix<Q> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Keep the listed rows and columns, in order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }
}

impl<R: RingElement> Matrix<R> {
    pub fn identity_like(n: usize, sample: &R) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                sample.one_like()
            } else {
                sample.zero_like()
            }
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let sample = self.data.first().or(other.data.first()).cloned();
        let Some(sample) = sample else {
            return Ok(Self::from_fn(self.rows, other.cols, |_, _| unreachable!()));
        };
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = sample.zero_like();
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if a.is_exact_zero() || b.is_exact_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(b));
            }
            acc
        }))
    }

    /// Panics on a dimension mismatch.
    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("matrix dimensions")
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| x.mul(c))
    }

    /// Entrywise `τ`.
    pub fn tau(&self) -> Self {
        self.map(RingElement::tau)
    }

    pub fn apply(&self, v: &[R]) -> Vec<R> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = v[0].zero_like();
                for (j, x) in v.iter().enumerate() {
                    acc = acc.add(&self.get(i, j).mul(x));
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RingElement::is_zero)
    }

    /// Determinant by Laplace expansion along rows with memoised minors.
    pub fn det(&self) -> Result<R> {
        if !self.is_square() || self.rows == 0 {
            return Err(Error::Dimension(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(laplace_det(self).unwrap_or_else(|| self.get(0, 0).zero_like()))
    }

    /// Inverse by Gauss-Jordan elimination with unit pivots.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() || self.rows == 0 {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity_like(n, self.get(0, 0));
        for k in 0..n {
            let pivot = (k..n)
                .find(|&i| a.get(i, k).is_unit())
                .ok_or_else(|| Error::NotUnit(format!("no unit pivot in column {k}")))?;
            a.swap_rows(k, pivot);
            inv.swap_rows(k, pivot);
            let p_inv = a.get(k, k).inverse()?;
            for j in 0..n {
                a.set(k, j, a.get(k, j).mul(&p_inv));
                inv.set(k, j, inv.get(k, j).mul(&p_inv));
            }
            for i in 0..n {
                if i == k || a.get(i, k).is_exact_zero() {
                    continue;
                }
                let f = a.get(i, k).clone();
                for j in 0..n {
                    a.set(i, j, a.get(i, j).sub(&f.mul(a.get(k, j))));
                    inv.set(i, j, inv.get(i, j).sub(&f.mul(inv.get(k, j))));
                }
            }
        }
        Ok(inv)
    }
}

/// Row-by-row Laplace expansion; `dp[mask]` is the minor on the first
/// `popcount(mask)` rows and the columns in `mask`. Returns all minors of
/// full row size, keyed by column mask. `None` marks a structural zero.
pub fn minors_by_mask<R: RingElement>(m: &Matrix<R>) -> Vec<(u32, Option<R>)> {
    let (k, n) = (m.rows(), m.cols());
    assert!(n <= 24, "too many columns for subset expansion");
    let mut level: Vec<(u32, Option<R>)> = vec![(0, None)];
    let mut has_one = true;
    for r in 0..k {
        let mut next: std::collections::BTreeMap<u32, Option<R>> = Default::default();
        for (mask, val) in &level {
            for c in 0..n {
                if mask & (1 << c) != 0 {
                    continue;
                }
                let nm = mask | (1 << c);
                let entry = next.entry(nm).or_insert(None);
                let a = m.get(r, c);
                if a.is_exact_zero() {
                    continue;
                }
                let term = match (val, r == 0 && has_one) {
                    (_, true) => a.clone(),
                    (Some(v), false) => a.mul(v),
                    (None, false) => continue,
                };
                let above = (mask >> (c + 1)).count_ones();
                let term = if above % 2 == 1 { term.neg() } else { term };
                *entry = Some(match entry.take() {
                    Some(acc) => acc.add(&term),
                    None => term,
                });
            }
        }
        has_one = false;
        level = next.into_iter().collect();
    }
    level
}

pub fn laplace_det<R: RingElement>(m: &Matrix<R>) -> Option<R> {
    minors_by_mask(m).into_iter().next().and_then(|(_, v)| v)
}

impl<R: fmt::Display> fmt::Display for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PAdicContext;
    use crate::series::SeriesContext;

    fn ints(ctx: PAdicContext, rows: &[&[i64]]) -> Matrix<PAdicScalar> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| ctx.integer(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn integer_determinants() {
        let c = PAdicContext::new(7, 10).unwrap();
        let m = ints(c, &[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]);
        // 2(3-2) - 0 + 1(1-3) = 0
        assert!(m.det().unwrap().is_zero());
        let m = ints(c, &[&[0, 1], &[1, 0]]);
        assert_eq!(m.det().unwrap(), c.integer(-1));
        let m = ints(c, &[&[4, 3, 0], &[1, 5, 2], &[0, 6, 1]]);
        // 4(5-12) - 3(1-0) = -31
        assert_eq!(m.det().unwrap(), c.integer(-31));
    }

    #[test]
    fn maximal_minors_of_wide_matrix() {
        let c = PAdicContext::new(5, 8).unwrap();
        let m = ints(c, &[&[1, 2, 3], &[4, 5, 6]]);
        let minors: Vec<_> = minors_by_mask(&m)
            .into_iter()
            .map(|(mask, v)| (mask, v.unwrap().to_centered_integer().unwrap()))
            .collect();
        assert_eq!(minors, vec![(0b011, -3), (0b101, -6), (0b110, -3)]);
    }

    #[test]
    fn inverse_over_series() {
        let c = SeriesContext::new(5, 8, 8).unwrap();
        let m = Matrix::from_rows(vec![
            vec![c.one().add(&c.t()), c.s()],
            vec![c.t().pow(2), c.one()],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        let id = m.mul(&inv);
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { c.one() } else { c.zero() };
                assert!(id.get(i, j).agrees(&want, 7), "{id}");
            }
        }
    }

    #[test]
    fn graded_determinant_keeps_exact_zeros() {
        let c = PAdicContext::new(5, 8).unwrap();
        let s = GradedElement::linear(c.one(), c.zero());
        let z = GradedElement::zero(c, 1);
        let m = Matrix::from_rows(vec![
            vec![s.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), s.clone()],
            vec![z.clone(), s.clone(), z],
        ])
        .unwrap();
        let d = m.det().unwrap();
        assert_eq!(d.degree(), 3);
        assert_eq!(d.component(0), c.integer(-1));
        assert!(d.components()[1..].iter().all(PAdicScalar::is_exact_zero));
    }
}

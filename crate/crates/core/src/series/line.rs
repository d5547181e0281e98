use std::fmt;

use serde::{Deserialize, Serialize};

use super::SeriesContext;
use crate::error::{Error, Result};
use crate::padic::{PAdicScalar, Valuation};

/// Which line quotient a one-variable series lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Line {
    /// `Λ/(T)`, variable `S`.
    Cycl,
    /// `Λ/(S)`, variable `T`.
    Anti,
}

impl Line {
    pub fn variable(&self) -> &'static str {
        match self {
            Line::Cycl => "S",
            Line::Anti => "T",
        }
    }
}

/// A series in one variable, known modulo `X^len`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSeries {
    ctx: SeriesContext,
    line: Line,
    coeffs: Vec<PAdicScalar>,
}

impl LineSeries {
    pub fn zero(ctx: SeriesContext, line: Line, len: usize) -> Self {
        Self {
            ctx,
            line,
            coeffs: vec![ctx.padic().zero(); len],
        }
    }

    pub fn from_coeffs(ctx: SeriesContext, line: Line, coeffs: Vec<PAdicScalar>) -> Self {
        Self { ctx, line, coeffs }
    }

    pub fn context(&self) -> SeriesContext {
        self.ctx
    }

    pub fn line(&self) -> Line {
        self.line
    }

    /// Number of known coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[PAdicScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> PAdicScalar {
        self.coeffs
            .get(k)
            .copied()
            .unwrap_or_else(|| self.ctx.padic().zero())
    }

    pub fn set_coeff(&mut self, k: usize, c: PAdicScalar) {
        if k < self.coeffs.len() {
            self.coeffs[k] = c;
        }
    }

    pub fn constant_term(&self) -> PAdicScalar {
        self.coeff(0)
    }

    pub fn truncate(&self, len: usize) -> Self {
        let mut out = self.clone();
        out.coeffs.truncate(len);
        out
    }

    /// Pads with exact zeros (the series is taken to be a polynomial).
    pub fn extend_exact(&self, len: usize) -> Self {
        let mut out = self.clone();
        out.coeffs.resize(len.max(self.len()), self.ctx.padic().zero());
        out
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.line, other.line, "series on different lines");
        assert_eq!(self.ctx.padic(), other.ctx.padic(), "p-adic context mismatch");
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.line != other.line || self.ctx.padic() != other.ctx.padic() {
            return Err(Error::ContextMismatch(format!(
                "{:?} series vs {:?} series",
                self.line, other.line
            )));
        }
        Ok(self.mul(other))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let len = self.len().min(other.len());
        let coeffs = (0..len).map(|k| self.coeffs[k] + other.coeffs[k]).collect();
        Self { coeffs, ..*self }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let len = self.len().min(other.len());
        let coeffs = (0..len).map(|k| self.coeffs[k] - other.coeffs[k]).collect();
        Self { coeffs, ..*self }
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            ..*self
        }
    }

    pub fn scale(&self, c: &PAdicScalar) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            ..*self
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let len = self.len().min(other.len());
        let mut out = vec![self.ctx.padic().zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if b.is_exact_zero() {
                    continue;
                }
                out[i + j] += &(a * b);
            }
        }
        Self { coeffs: out, ..*self }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = self.one_like();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn one_like(&self) -> Self {
        let mut out = Self::zero(self.ctx, self.line, self.len());
        out.set_coeff(0, self.ctx.padic().one());
        out
    }

    pub fn zero_like(&self) -> Self {
        Self::zero(self.ctx, self.line, self.len())
    }

    /// Multiply by `X^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut out = self.zero_like();
        for i in 0..self.len().saturating_sub(k) {
            out.coeffs[i + k] = self.coeffs[i];
        }
        out
    }

    /// Every known coefficient is indistinguishable from zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact_zero())
    }

    /// Invertible in the line ring tensored with `Q_p`: nonzero constant term.
    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NotUnit(format!("constant term of {self} vanishes")));
        }
        let inv0 = c0.inv()?;
        let len = self.len();
        let mut out = vec![self.ctx.padic().zero(); len];
        if len == 0 {
            return Ok(self.clone());
        }
        out[0] = inv0;
        for k in 1..len {
            let mut acc = self.ctx.padic().zero();
            for i in 1..=k {
                let a = &self.coeffs[i];
                if a.is_exact_zero() {
                    continue;
                }
                acc += &(a * &out[k - i]);
            }
            out[k] = -(acc * inv0);
        }
        Ok(Self { coeffs: out, ..*self })
    }

    /// The involution: `T -> (1+T)^-1 - 1` on the anticyclotomic line, the
    /// identity on the cyclotomic line.
    pub fn tau(&self) -> Self {
        match self.line {
            Line::Cycl => self.clone(),
            Line::Anti => {
                let len = self.len();
                let tau_t = tau_of_variable(self.ctx, len);
                let mut out = Self::zero(self.ctx, self.line, len);
                let mut power = out.one_like();
                for k in 0..len {
                    let c = self.coeffs[k];
                    if !c.is_exact_zero() {
                        out = out.add(&power.scale(&c));
                    }
                    power = power.mul(&tau_t);
                }
                out
            }
        }
    }

    /// Minimal valuation over the known coefficients.
    pub fn valuation(&self) -> Valuation {
        self.coeffs
            .iter()
            .map(|c| c.valuation())
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    /// Whether every coefficient of `self - other` has valuation at least
    /// `floor` (on the common known range).
    pub fn agrees(&self, other: &Self, floor: i64) -> bool {
        let len = self.len().min(other.len());
        (0..len).all(|k| self.coeffs[k].agrees(&other.coeffs[k], floor))
    }

    /// Forget digits at or beyond `p^abs` in every coefficient.
    pub fn truncate_abs(&self, abs: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.truncate_abs(abs)).collect(),
            ..*self
        }
    }

    /// Smallest absolute precision over the coefficients.
    pub fn abs_precision(&self) -> i64 {
        self.coeffs
            .iter()
            .map(|c| c.abs_precision())
            .min()
            .unwrap_or(i64::MAX)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let len = self.len();
        let mut out = Self::zero(self.ctx, self.line, len.saturating_sub(1));
        for k in 1..len {
            out.coeffs[k - 1] = self.coeffs[k] * self.ctx.scalar(k as i64);
        }
        out
    }

    pub fn on_line(&self, line: Line) -> Self {
        Self { line, ..self.clone() }
    }
}

/// `(1+X)^-1 - 1` to `len` terms.
pub(crate) fn tau_of_variable(ctx: SeriesContext, len: usize) -> LineSeries {
    let mut out = LineSeries::zero(ctx, Line::Anti, len);
    for k in 1..len {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        out.coeffs[k] = ctx.scalar(sign);
    }
    out
}

pub(crate) fn fmt_scalar(c: &PAdicScalar) -> String {
    match c.to_centered_integer() {
        Some(n) if n.unsigned_abs() < 1_000_000 => n.to_string(),
        _ => format!("[{c}]"),
    }
}

impl fmt::Display for LineSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = self.line.variable();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let s = fmt_scalar(c);
            match k {
                0 => write!(f, "{s}")?,
                1 => write!(f, "{s}*{var}")?,
                _ => write!(f, "{s}*{var}^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({var}^{})", self.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> SeriesContext {
        SeriesContext::new(5, 8, 12).unwrap()
    }

    #[test]
    fn tau_of_t_alternates() {
        let t = ctx().line(Line::Anti).var();
        let tt = t.tau();
        assert_eq!(tt.coeff(1), ctx().scalar(-1));
        assert_eq!(tt.coeff(2), ctx().scalar(1));
        assert_eq!(tt.coeff(3), ctx().scalar(-1));
        assert!(tt.tau().agrees(&t, 8));
    }

    #[test]
    fn gamma_times_tau_gamma_is_one() {
        let lc = ctx().line(Line::Anti);
        let g = lc.gamma_power(3);
        assert!(g.mul(&g.tau()).agrees(&lc.one(), 8));
        assert!(lc.gamma_power(-2).mul(&lc.gamma_power(2)).agrees(&lc.one(), 8));
    }

    #[test]
    fn geometric_inverse() {
        let lc = ctx().line(Line::Cycl);
        let f = lc.from_integers(&[1, -1]);
        let inv = f.inverse().unwrap();
        for k in 0..12 {
            assert_eq!(inv.coeff(k), ctx().scalar(1));
        }
        assert!(lc.var().inverse().is_err());
    }
}

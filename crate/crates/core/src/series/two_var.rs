use std::fmt;

use super::line::{fmt_scalar, tau_of_variable};
use super::{GradedElement, Line, LineSeries, SeriesContext};
use crate::error::{Error, Result};
use crate::padic::{PAdicScalar, Valuation};

/// A power series in `S` and `T` known modulo `(S, T)^N`.
///
/// Coefficients are stored densely by total degree, then by `T`-degree.
#[derive(Debug, Clone, PartialEq)]
pub struct IwasawaSeries {
    ctx: SeriesContext,
    coeffs: Vec<PAdicScalar>,
}

#[inline]
fn idx(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

fn size(cap: usize) -> usize {
    cap * (cap + 1) / 2
}

impl IwasawaSeries {
    pub fn zero(ctx: SeriesContext) -> Self {
        Self {
            ctx,
            coeffs: vec![ctx.padic().zero(); size(ctx.cap())],
        }
    }

    pub fn constant(ctx: SeriesContext, c: PAdicScalar) -> Self {
        let mut f = Self::zero(ctx);
        f.coeffs[0] = c;
        f
    }

    pub fn context(&self) -> SeriesContext {
        self.ctx
    }

    pub fn cap(&self) -> usize {
        self.ctx.cap()
    }

    /// Coefficient of `S^i T^j`; exact zero past the cap.
    pub fn coeff(&self, i: usize, j: usize) -> PAdicScalar {
        if i + j < self.cap() {
            self.coeffs[idx(i, j)]
        } else {
            self.ctx.padic().zero()
        }
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, c: PAdicScalar) {
        if i + j < self.cap() {
            self.coeffs[idx(i, j)] = c;
        }
    }

    /// Nonzero terms as `(i, j, coeff)`, sorted by `(i, j)`.
    pub fn terms(&self) -> Vec<(usize, usize, PAdicScalar)> {
        let n = self.cap();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n - i {
                let c = self.coeffs[idx(i, j)];
                if !c.is_exact_zero() {
                    out.push((i, j, c));
                }
            }
        }
        out
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.ctx, other.ctx, "series context mismatch");
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch(format!(
                "{:?} vs {:?}",
                self.ctx, other.ctx
            )));
        }
        Ok(self.mul(other))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        Self {
            ctx: self.ctx,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        Self {
            ctx: self.ctx,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            ctx: self.ctx,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &PAdicScalar) -> Self {
        Self {
            ctx: self.ctx,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let n = self.cap();
        let mut out = Self::zero(self.ctx);
        let rhs = other.terms();
        for (i1, j1, a) in self.terms() {
            let room = n - (i1 + j1);
            for &(i2, j2, b) in &rhs {
                if i2 + j2 >= room {
                    continue;
                }
                let k = idx(i1 + i2, j1 + j2);
                out.coeffs[k] += &(a * b);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = self.ctx.one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn constant_term(&self) -> PAdicScalar {
        self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact_zero())
    }

    /// Units of `Z_p[[S,T]] ⊗ Q_p`: nonzero constant term.
    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NotUnit(format!("constant term of {self} vanishes")));
        }
        // f = c0 (1 - x)  =>  f^-1 = c0^-1 (1 + x + x^2 + ...)
        let inv0 = c0.inv()?;
        let mut x = self.scale(&inv0).neg();
        x.coeffs[0] = self.ctx.padic().zero();
        let mut acc = self.ctx.one();
        let mut power = self.ctx.one();
        for _ in 1..self.cap() {
            power = power.mul(&x);
            if power.is_exact_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc.scale(&inv0))
    }

    /// `S ↦ S`, `T ↦ (1+T)^-1 - 1`.
    pub fn tau(&self) -> Self {
        let n = self.cap();
        let tau_t = tau_of_variable(self.ctx, n);
        let mut powers = Vec::with_capacity(n);
        let mut p = tau_t.one_like();
        for _ in 0..n {
            powers.push(p.clone());
            p = p.mul(&tau_t);
        }
        let mut out = Self::zero(self.ctx);
        for (i, j, c) in self.terms() {
            let pw = &powers[j];
            for k in j..n - i {
                let d = pw.coeff(k);
                if d.is_exact_zero() {
                    continue;
                }
                out.coeffs[idx(i, k)] += &(c * d);
            }
        }
        out
    }

    /// Image in `Λ/(T)`.
    pub fn project_cycl(&self) -> LineSeries {
        let n = self.cap();
        LineSeries::from_coeffs(self.ctx, Line::Cycl, (0..n).map(|i| self.coeff(i, 0)).collect())
    }

    /// Image in `Λ/(S)`.
    pub fn project_anti(&self) -> LineSeries {
        self.s_coefficient(0)
    }

    pub fn project(&self, line: Line) -> LineSeries {
        match line {
            Line::Cycl => self.project_cycl(),
            Line::Anti => self.project_anti(),
        }
    }

    /// The augmentation `S = T = 0`.
    pub fn augmentation(&self) -> PAdicScalar {
        self.constant_term()
    }

    /// Coefficient of `S^k` as a series in `T` (known to `T^(N-k)`).
    pub fn s_coefficient(&self, k: usize) -> LineSeries {
        let n = self.cap();
        LineSeries::from_coeffs(
            self.ctx,
            Line::Anti,
            (0..n.saturating_sub(k)).map(|j| self.coeff(k, j)).collect(),
        )
    }

    /// Coefficient of `T^k` as a series in `S`.
    pub fn t_coefficient(&self, k: usize) -> LineSeries {
        let n = self.cap();
        LineSeries::from_coeffs(
            self.ctx,
            Line::Cycl,
            (0..n.saturating_sub(k)).map(|i| self.coeff(i, k)).collect(),
        )
    }

    /// Embeds a line series (a series in `S` or in `T` alone).
    pub fn from_line(f: &LineSeries) -> Self {
        let ctx = f.context();
        let mut out = Self::zero(ctx);
        for (k, c) in f.coeffs().iter().enumerate().take(ctx.cap()) {
            match f.line() {
                Line::Cycl => out.set_coeff(k, 0, *c),
                Line::Anti => out.set_coeff(0, k, *c),
            }
        }
        out
    }

    /// `Σ_k S^k a_k(T)`.
    pub fn from_s_coefficients(ctx: SeriesContext, parts: &[LineSeries]) -> Self {
        let mut out = Self::zero(ctx);
        for (i, a) in parts.iter().enumerate() {
            for (j, c) in a.coeffs().iter().enumerate() {
                out.set_coeff(i, j, *c);
            }
        }
        out
    }

    /// Multiply by `S^k`.
    pub fn shift_s(&self, k: usize) -> Self {
        let n = self.cap();
        let mut out = Self::zero(self.ctx);
        for (i, j, c) in self.terms() {
            if i + j + k < n {
                out.coeffs[idx(i + k, j)] = c;
            }
        }
        out
    }

    /// The lowest nonzero homogeneous part.
    pub fn leading_form(&self) -> Result<GradedElement> {
        let n = self.cap();
        for d in 0..n {
            if (0..=d).any(|j| !self.coeffs[idx(d - j, j)].is_zero()) {
                let comps = (0..=d).map(|j| self.coeffs[idx(d - j, j)]).collect();
                return Ok(GradedElement::new(self.ctx.padic(), d, comps));
            }
        }
        Err(Error::ZeroInput)
    }

    /// The class in `I_anti / I_anti^2`: the coefficient of `S^1`.
    pub fn anti_linear_term(&self) -> Result<LineSeries> {
        if !self.project_anti().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        Ok(self.s_coefficient(1))
    }

    /// The class in `I_cycl / I_cycl^2`: the coefficient of `T^1`.
    pub fn cycl_linear_term(&self) -> Result<LineSeries> {
        if !self.project_cycl().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        Ok(self.t_coefficient(1))
    }

    pub fn valuation(&self) -> Valuation {
        self.coeffs
            .iter()
            .map(|c| c.valuation())
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    pub fn agrees(&self, other: &Self, floor: i64) -> bool {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| a.agrees(b, floor))
    }

    /// Agreement restricted to total degree below `degree`.
    pub fn agrees_below(&self, other: &Self, floor: i64, degree: usize) -> bool {
        let n = self.cap().min(other.cap()).min(degree);
        (0..n).all(|d| (0..=d).all(|j| self.coeff(d - j, j).agrees(&other.coeff(d - j, j), floor)))
    }

    /// Drops every term of total degree `>= cap`.
    pub fn with_cap(&self, cap: usize) -> Self {
        let ctx = self.ctx.with_cap(cap);
        let mut out = Self::zero(ctx);
        for (i, j, c) in self.terms() {
            out.set_coeff(i, j, c);
        }
        out
    }

    /// `f(S, T + cS)`.
    pub fn shear(&self, c: &PAdicScalar) -> Self {
        let n = self.cap();
        let lin = self.ctx.t().add(&self.ctx.s().scale(c));
        let mut powers = Vec::with_capacity(n);
        let mut p = self.ctx.one();
        for _ in 0..n {
            powers.push(p.clone());
            p = p.mul(&lin);
        }
        let mut out = Self::zero(self.ctx);
        for (i, j, a) in self.terms() {
            out = out.add(&powers[j].shift_s(i).scale(&a));
        }
        out
    }

    /// `f(T, S)`.
    pub fn swap_variables(&self) -> Self {
        let mut out = Self::zero(self.ctx);
        for (i, j, c) in self.terms() {
            out.set_coeff(j, i, c);
        }
        out
    }

    pub fn truncate_abs(&self, abs: i64) -> Self {
        Self {
            ctx: self.ctx,
            coeffs: self.coeffs.iter().map(|c| c.truncate_abs(abs)).collect(),
        }
    }
}

impl fmt::Display for IwasawaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, j, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", fmt_scalar(&c))?;
            match i {
                0 => {}
                1 => write!(f, "*S")?,
                _ => write!(f, "*S^{i}")?,
            }
            match j {
                0 => {}
                1 => write!(f, "*T")?,
                _ => write!(f, "*T^{j}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

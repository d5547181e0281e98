use std::fmt;

use super::line::fmt_scalar;
use crate::error::{Error, Result};
use crate::padic::{PAdicContext, PAdicScalar};

/// A homogeneous form of degree `r` in `s`, `t`; component `j` is the
/// coefficient of `s^(r-j) t^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedElement {
    ctx: PAdicContext,
    degree: usize,
    comps: Vec<PAdicScalar>,
}

impl GradedElement {
    pub fn new(ctx: PAdicContext, degree: usize, mut comps: Vec<PAdicScalar>) -> Self {
        comps.resize(degree + 1, ctx.zero());
        Self { ctx, degree, comps }
    }

    pub fn zero(ctx: PAdicContext, degree: usize) -> Self {
        Self::new(ctx, degree, Vec::new())
    }

    pub fn one(ctx: PAdicContext) -> Self {
        Self::new(ctx, 0, vec![ctx.one()])
    }

    /// `a*s + b*t`.
    pub fn linear(a: PAdicScalar, b: PAdicScalar) -> Self {
        Self::new(a.context(), 1, vec![a, b])
    }

    pub fn context(&self) -> PAdicContext {
        self.ctx
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn component(&self, j: usize) -> PAdicScalar {
        self.comps.get(j).copied().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn components(&self) -> &[PAdicScalar] {
        &self.comps
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::Dimension(format!(
                "adding forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(self.add(other))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "graded degree mismatch");
        Self {
            ctx: self.ctx,
            degree: self.degree,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            comps: self.comps.iter().map(|c| -c).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &PAdicScalar) -> Self {
        Self {
            comps: self.comps.iter().map(|x| x * c).collect(),
            ..self.clone()
        }
    }

    /// Product in the graded algebra; exact zeros never contribute.
    pub fn mul(&self, other: &Self) -> Self {
        let degree = self.degree + other.degree;
        let mut comps = vec![self.ctx.zero(); degree + 1];
        for (i, a) in self.comps.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.comps.iter().enumerate() {
                if b.is_exact_zero() {
                    continue;
                }
                comps[i + j] += &(a * b);
            }
        }
        Self {
            ctx: self.ctx,
            degree,
            comps,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn is_exact_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_exact_zero())
    }

    pub fn agrees(&self, other: &Self, floor: i64) -> bool {
        self.degree == other.degree
            && self
                .comps
                .iter()
                .zip(&other.comps)
                .all(|(a, b)| a.agrees(b, floor))
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.degree;
        let mut first = true;
        for (j, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", fmt_scalar(c))?;
            match r - j {
                0 => {}
                1 => write!(f, "*s")?,
                e => write!(f, "*s^{e}")?,
            }
            match j {
                0 => {}
                1 => write!(f, "*t")?,
                e => write!(f, "*t^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_linear_forms() {
        let ctx = PAdicContext::new(5, 8).unwrap();
        let s = GradedElement::linear(ctx.one(), ctx.zero());
        let t = GradedElement::linear(ctx.zero(), ctx.one());
        let st = s.mul(&t);
        assert_eq!(st.degree(), 2);
        assert!(st.component(0).is_exact_zero());
        assert_eq!(st.component(1), ctx.one());
        assert!(st.component(2).is_exact_zero());
        assert_eq!(st.to_string(), "1*s*t");
    }
}

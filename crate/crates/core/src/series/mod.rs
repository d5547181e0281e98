//! Truncated power series models of the Iwasawa algebra and its line
//! quotients.

mod graded;
mod line;
mod two_var;

pub mod ideal;
pub mod prep2;
pub mod weierstrass;

pub use graded::GradedElement;
pub use line::{Line, LineSeries};
pub use two_var::IwasawaSeries;

use crate::error::{Error, Result};
use crate::padic::{PAdicContext, PAdicScalar};

/// `(p, M, N)`: coefficient precision and total-degree cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeriesContext {
    padic: PAdicContext,
    cap: usize,
}

impl SeriesContext {
    pub fn new(prime: u64, precision: u32, cap: usize) -> Result<Self> {
        if cap == 0 {
            return Err(Error::InvalidContext("degree cap must be positive".into()));
        }
        Ok(Self {
            padic: PAdicContext::new(prime, precision)?,
            cap,
        })
    }

    pub fn from_padic(padic: PAdicContext, cap: usize) -> Self {
        Self { padic, cap }
    }

    pub fn padic(&self) -> PAdicContext {
        self.padic
    }

    pub fn prime(&self) -> u64 {
        self.padic.prime()
    }

    pub fn precision(&self) -> u32 {
        self.padic.precision()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn with_cap(&self, cap: usize) -> Self {
        Self { cap, ..*self }
    }

    pub fn scalar(&self, n: i64) -> PAdicScalar {
        self.padic.integer(n)
    }

    pub fn zero(&self) -> IwasawaSeries {
        IwasawaSeries::zero(*self)
    }

    pub fn one(&self) -> IwasawaSeries {
        IwasawaSeries::constant(*self, self.padic.one())
    }

    pub fn constant(&self, c: PAdicScalar) -> IwasawaSeries {
        IwasawaSeries::constant(*self, c)
    }

    /// `c * S^i * T^j`.
    pub fn monomial(&self, i: usize, j: usize, c: PAdicScalar) -> IwasawaSeries {
        let mut f = self.zero();
        if i + j < self.cap {
            f.set_coeff(i, j, c);
        }
        f
    }

    pub fn s(&self) -> IwasawaSeries {
        self.monomial(1, 0, self.padic.one())
    }

    pub fn t(&self) -> IwasawaSeries {
        self.monomial(0, 1, self.padic.one())
    }

    /// `(1 + T)^k` for any integer `k`.
    pub fn gamma_anti_power(&self, k: i64) -> IwasawaSeries {
        IwasawaSeries::from_line(&self.line(Line::Anti).gamma_power(k))
    }

    pub fn line(&self, line: Line) -> LineContext {
        LineContext { ctx: *self, line }
    }
}

/// Constructors for one line quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineContext {
    ctx: SeriesContext,
    line: Line,
}

impl LineContext {
    pub fn zero(&self) -> LineSeries {
        LineSeries::zero(self.ctx, self.line, self.ctx.cap)
    }

    pub fn one(&self) -> LineSeries {
        self.constant(self.ctx.padic.one())
    }

    pub fn constant(&self, c: PAdicScalar) -> LineSeries {
        let mut f = self.zero();
        f.set_coeff(0, c);
        f
    }

    /// The line variable (`S` on the cyclotomic line, `T` on the other).
    pub fn var(&self) -> LineSeries {
        self.monomial(1, self.ctx.padic.one())
    }

    pub fn monomial(&self, k: usize, c: PAdicScalar) -> LineSeries {
        let mut f = self.zero();
        if k < self.ctx.cap {
            f.set_coeff(k, c);
        }
        f
    }

    pub fn from_integers(&self, coeffs: &[i64]) -> LineSeries {
        let mut f = self.zero();
        for (k, &c) in coeffs.iter().enumerate().take(self.ctx.cap) {
            f.set_coeff(k, self.ctx.scalar(c));
        }
        f
    }

    /// `(1 + X)^k` with the binomial series.
    pub fn gamma_power(&self, k: i64) -> LineSeries {
        let one = self.one();
        let base = one.add(&self.var());
        if k >= 0 {
            base.pow(k as u32)
        } else {
            base.inverse().expect("1 + X is a unit").pow((-k) as u32)
        }
    }
}

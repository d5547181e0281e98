//! Weierstrass preparation and division on a line, and the Euclidean
//! structure it induces.
//!
//! A line series known modulo `X^len` is handled through its polynomial
//! representative. Two representatives of the same class can have
//! distinguished parts that differ by terms of valuation at least
//! `slack_floor`, which every comparison and zero test takes into account.

use std::fmt;

use super::line::fmt_scalar;
use super::{Line, LineSeries, SeriesContext};
use crate::error::{Error, Result};
use crate::padic::{PAdicScalar, Valuation};

/// Stand-in for "no truncation loss".
pub const UNBOUNDED: i64 = i64::MAX / 4;

/// `X^λ + Σ_{k<λ} c_k X^k` with every `c_k` of positive valuation.
#[derive(Debug, Clone, PartialEq)]
pub struct DistinguishedPoly {
    ctx: SeriesContext,
    line: Line,
    lower: Vec<PAdicScalar>,
}

impl DistinguishedPoly {
    pub fn one(ctx: SeriesContext, line: Line) -> Self {
        Self {
            ctx,
            line,
            lower: Vec::new(),
        }
    }

    pub fn from_lower(ctx: SeriesContext, line: Line, lower: Vec<PAdicScalar>) -> Self {
        Self { ctx, line, lower }
    }

    /// `X^k`.
    pub fn monomial(ctx: SeriesContext, line: Line, k: usize) -> Self {
        Self {
            ctx,
            line,
            lower: vec![ctx.padic().zero(); k],
        }
    }

    pub fn degree(&self) -> usize {
        self.lower.len()
    }

    pub fn line(&self) -> Line {
        self.line
    }

    pub fn context(&self) -> SeriesContext {
        self.ctx
    }

    pub fn lower(&self) -> &[PAdicScalar] {
        &self.lower
    }

    pub fn is_one(&self) -> bool {
        self.lower.is_empty()
    }

    /// Coefficients from the constant term up, including the leading 1.
    pub fn coeffs(&self) -> Vec<PAdicScalar> {
        let mut c = self.lower.clone();
        c.push(self.ctx.padic().one());
        c
    }

    pub fn to_series(&self, len: usize) -> LineSeries {
        let mut coeffs = self.coeffs();
        coeffs.resize(len.max(coeffs.len()), self.ctx.padic().zero());
        coeffs.truncate(len);
        LineSeries::from_coeffs(self.ctx, self.line, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prod = poly_mul(&self.coeffs(), &other.coeffs(), self.ctx);
        let mut lower = prod;
        lower.pop();
        Self {
            ctx: self.ctx,
            line: self.line,
            lower,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.ctx, self.line);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `τ(P)` renormalised to a distinguished polynomial.
    pub fn tau(&self) -> Result<Self> {
        let len = self.ctx.cap().max(self.degree() + 1);
        let image = self.to_series(len).tau();
        Ok(prepare(&image)?.poly)
    }

    /// Lower bound for the valuation of the perturbation of a coefficient of
    /// degree `e` caused by not knowing the input past `X^len`.
    pub fn slack_floor(&self, len: usize, e: usize) -> i64 {
        let lam = self.degree();
        let span = len.saturating_sub(e) as i64;
        let mut best = UNBOUNDED;
        for (j, c) in self.lower.iter().enumerate() {
            if let Valuation::Finite(v) = c.valuation() {
                let v = v.max(0);
                let drop = (lam - j) as i64;
                let bound = (v * span + drop - 1) / drop;
                best = best.min(bound);
            }
        }
        best
    }
}

impl fmt::Display for DistinguishedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = self.line.variable();
        match self.degree() {
            0 => write!(f, "1")?,
            1 => write!(f, "{var}")?,
            d => write!(f, "{var}^{d}")?,
        }
        for (k, c) in self.lower.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = fmt_scalar(c);
            match k {
                0 => write!(f, " + {s}")?,
                1 => write!(f, " + {s}*{var}")?,
                _ => write!(f, " + {s}*{var}^{k}")?,
            }
        }
        Ok(())
    }
}

fn poly_mul(a: &[PAdicScalar], b: &[PAdicScalar], ctx: SeriesContext) -> Vec<PAdicScalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ctx.padic().zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_exact_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_exact_zero() {
                continue;
            }
            out[i + j] += &(x * y);
        }
    }
    out
}

/// `f = p^a * u * P`.
#[derive(Debug, Clone, PartialEq)]
pub struct Preparation {
    pub a: i64,
    pub unit: LineSeries,
    pub poly: DistinguishedPoly,
    /// Number of known coefficients of the input.
    pub len: usize,
}

impl Preparation {
    pub fn lambda(&self) -> usize {
        self.poly.degree()
    }

    pub fn recompose(&self) -> LineSeries {
        let ctx = self.unit.context();
        self.unit
            .mul(&self.poly.to_series(self.len))
            .scale(&ctx.padic().prime_power(self.a))
    }

    pub fn slack_floor(&self, e: usize) -> i64 {
        self.poly.slack_floor(self.len, e)
    }
}

/// Content valuation `a` and Weierstrass degree `λ` of a nonzero series.
pub fn weierstrass_degree(f: &LineSeries) -> Result<(i64, usize)> {
    let a = f.valuation().finite().ok_or(Error::ZeroInput)?;
    let lam = f
        .coeffs()
        .iter()
        .position(|c| c.valuation() == Valuation::Finite(a))
        .expect("minimal valuation is attained");
    Ok((a, lam))
}

/// Weierstrass preparation `f = p^a * u * P`.
pub fn prepare(f: &LineSeries) -> Result<Preparation> {
    let ctx = f.context();
    let pctx = ctx.padic();
    let len = f.len();
    let (a, lam) = weierstrass_degree(f)?;
    if lam >= len.max(1) {
        return Err(Error::DegreeTooLarge {
            degree: lam,
            cap: len,
        });
    }
    let g = f.scale(&pctx.prime_power(-a));
    if lam == 0 {
        return Ok(Preparation {
            a,
            unit: g,
            poly: DistinguishedPoly::one(ctx, f.line()),
            len,
        });
    }

    // Work with the polynomial representative at a length where the
    // truncation no longer reaches the working precision.
    let m = pctx.precision() as usize;
    let ext = len + lam * (m + 2);
    let g_ext = g.extend_exact(ext);
    let floor = g.abs_precision().min(UNBOUNDED);
    let high = LineSeries::from_coeffs(ctx, f.line(), g_ext.coeffs()[lam..].to_vec());
    let low: Vec<PAdicScalar> = g_ext.coeffs()[..lam].to_vec();
    let high_inv = high.inverse()?;

    // X^λ = q g + r; iterate r <- low(r) - (high(r) / high(g)) * low(g).
    let mut r = vec![pctx.zero(); ext];
    r[lam] = pctx.one();
    let max_iter = 4 * (m + ext) + 8;
    let mut converged = false;
    for _ in 0..max_iter {
        let h = LineSeries::from_coeffs(ctx, f.line(), r[lam..].to_vec());
        let done = h.coeffs().iter().all(|c| match c.valuation() {
            Valuation::Infinite => true,
            Valuation::Finite(v) => v >= floor,
        });
        if done {
            converged = true;
            break;
        }
        let delta = h.mul(&high_inv);
        let mut next = vec![pctx.zero(); ext];
        next[..lam].copy_from_slice(&r[..lam]);
        for (i, d) in delta.coeffs().iter().enumerate() {
            if d.is_exact_zero() {
                continue;
            }
            for (j, b) in low.iter().enumerate() {
                if i + j >= ext || b.is_exact_zero() {
                    continue;
                }
                next[i + j] = next[i + j] - d * b;
            }
        }
        r = next;
    }
    if !converged {
        return Err(Error::Unsupported(format!(
            "Weierstrass iteration did not settle for {f}"
        )));
    }
    let lower: Vec<PAdicScalar> = r[..lam].iter().map(|c| -c).collect();
    let poly = DistinguishedPoly::from_lower(ctx, f.line(), lower);
    let (unit, _rem) = poly_divrem(&g, &poly);
    Ok(Preparation { a, unit, poly, len })
}

/// Long division of the polynomial representative of `f` by the monic `p`.
/// Returns `(q, r)` with `f = q p + r` exactly and `deg r < deg p`.
pub fn poly_divrem(f: &LineSeries, p: &DistinguishedPoly) -> (LineSeries, LineSeries) {
    let ctx = f.context();
    let len = f.len();
    let lam = p.degree();
    let mut rem = f.coeffs().to_vec();
    let mut q = vec![ctx.padic().zero(); len];
    if lam == 0 {
        let zero = f.zero_like();
        return (f.clone(), zero);
    }
    for k in (lam..len).rev() {
        let c = rem[k];
        if c.is_exact_zero() {
            continue;
        }
        q[k - lam] = c;
        rem[k] = ctx.padic().zero();
        for (i, b) in p.lower().iter().enumerate() {
            if b.is_exact_zero() {
                continue;
            }
            let t = k - lam + i;
            rem[t] = rem[t] - c * *b;
        }
    }
    (
        LineSeries::from_coeffs(ctx, f.line(), q),
        LineSeries::from_coeffs(ctx, f.line(), rem),
    )
}

/// Division with remainder in the line ring: `f = q g + r` with `r` of
/// Weierstrass degree below that of `g`. Digits of `r` beyond what the
/// truncation determines are forgotten.
pub fn divrem(f: &LineSeries, g: &LineSeries) -> Result<(LineSeries, LineSeries)> {
    let prep = prepare(g)?;
    if f.is_zero() {
        return Ok((f.zero_like(), f.clone()));
    }
    let pctx = f.context().padic();
    let (q0, _) = poly_divrem(f, &prep.poly);
    let q = q0
        .mul(&prep.unit.inverse()?)
        .scale(&pctx.prime_power(-prep.a));
    let r = f.sub(&q.mul(g));
    let vf = f.valuation().finite().unwrap_or(0);
    let lam = prep.lambda();
    let slack = if lam == 0 {
        UNBOUNDED
    } else {
        prep.poly.slack_floor(f.len().min(g.len()), lam - 1)
    };
    let r = if slack < UNBOUNDED {
        r.truncate_abs(vf.saturating_add(slack))
    } else {
        r
    };
    Ok((q, r))
}

/// Generator of the ideal `(f, g)` of the line ring, as a distinguished
/// polynomial.
pub fn line_gcd(f: &LineSeries, g: &LineSeries) -> Result<DistinguishedPoly> {
    let ctx = f.context();
    let mut a = f.clone();
    let mut b = g.clone();
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroInput);
    }
    for _ in 0..(4 * ctx.cap() + 8) {
        if b.is_zero() {
            return Ok(prepare(&a)?.poly);
        }
        if a.is_zero() {
            return Ok(prepare(&b)?.poly);
        }
        let (_, lb) = weierstrass_degree(&b)?;
        if lb == 0 {
            return Ok(DistinguishedPoly::one(ctx, f.line()));
        }
        let (_, r) = divrem(&a, &b)?;
        a = b;
        b = r;
    }
    Err(Error::GcdBound(format!("line gcd of {f} and {g}")))
}

/// Exact quotient of a polynomial by a distinguished polynomial dividing it.
fn exact_quotient(f: &LineSeries, p: &DistinguishedPoly) -> LineSeries {
    poly_divrem(f, p).0
}

/// Squarefree decomposition `P = Π s_k^k` (Yun), with `s_k` distinguished.
pub fn squarefree_decomposition(p: &DistinguishedPoly) -> Result<Vec<DistinguishedPoly>> {
    let ctx = p.context();
    let len = ctx.cap().max(p.degree() + 2);
    if p.is_one() {
        return Ok(Vec::new());
    }
    let ps = p.to_series(len);
    let dp = ps.derivative().extend_exact(len);
    let a = line_gcd(&ps, &dp)?;
    let mut b = exact_quotient(&ps, &a);
    let mut c = exact_quotient(&dp, &a);
    let mut d = c.sub(&b.derivative().extend_exact(len));
    let mut out = Vec::new();
    for _ in 0..=p.degree() {
        let b_poly = prepare(&b)?.poly;
        if b_poly.is_one() {
            return Ok(out);
        }
        let s = if d.is_zero() {
            b_poly
        } else {
            line_gcd(&b, &d)?
        };
        b = exact_quotient(&b, &s);
        c = exact_quotient(&d, &s);
        d = c.sub(&b.derivative().extend_exact(len));
        out.push(s);
    }
    Err(Error::GcdBound(format!("squarefree decomposition of {p}")))
}

/// `Π s_k^ceil(k/2)` for a squarefree decomposition `[s_1, s_2, ...]`.
pub fn ceil_half(parts: &[DistinguishedPoly], ctx: SeriesContext, line: Line) -> DistinguishedPoly {
    let mut acc = DistinguishedPoly::one(ctx, line);
    for (i, s) in parts.iter().enumerate() {
        let k = (i + 1) as u32;
        acc = acc.mul(&s.pow(k.div_ceil(2)));
    }
    acc
}

/// Outcome of comparing two distinguished polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyComparison {
    pub equal: bool,
    /// Lowest per-coefficient floor used.
    pub floor: i64,
    pub detail: String,
}

/// Coefficientwise agreement at `min(target, slack)` per coefficient.
pub fn compare_polys(
    a: &DistinguishedPoly,
    a_len: usize,
    b: &DistinguishedPoly,
    b_len: usize,
    target: i64,
) -> PolyComparison {
    if a.degree() != b.degree() {
        return PolyComparison {
            equal: false,
            floor: target,
            detail: format!("degrees differ: {} vs {}", a.degree(), b.degree()),
        };
    }
    let mut lowest = target;
    for e in 0..a.degree() {
        let floor = target
            .min(a.slack_floor(a_len, e))
            .min(b.slack_floor(b_len, e));
        lowest = lowest.min(floor);
        if !a.lower()[e].agrees(&b.lower()[e], floor) {
            return PolyComparison {
                equal: false,
                floor: lowest,
                detail: format!(
                    "coefficient {e} differs at p^{floor}: {} vs {}",
                    a.lower()[e],
                    b.lower()[e]
                ),
            };
        }
    }
    PolyComparison {
        equal: true,
        floor: lowest,
        detail: format!("agree at p^{lowest}"),
    }
}

/// Distinguished polynomial with the given integer lower coefficients.
pub fn distinguished_from_integers(ctx: SeriesContext, line: Line, lower: &[i64]) -> DistinguishedPoly {
    DistinguishedPoly::from_lower(ctx, line, lower.iter().map(|&c| ctx.scalar(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> SeriesContext {
        SeriesContext::new(p, 8, 12).unwrap()
    }

    fn anti(c: SeriesContext, coeffs: &[i64]) -> LineSeries {
        c.line(Line::Anti).from_integers(coeffs)
    }

    #[test]
    fn unit_case() {
        let c = ctx(5);
        let f = anti(c, &[2, 1]);
        let prep = prepare(&f).unwrap();
        assert_eq!(prep.a, 0);
        assert!(prep.poly.is_one());
        assert_eq!(prep.unit, f);
    }

    #[test]
    fn already_distinguished() {
        let c = ctx(5);
        let f = anti(c, &[5, 1]);
        let prep = prepare(&f).unwrap();
        assert_eq!(prep.a, 0);
        assert_eq!(prep.poly, distinguished_from_integers(c, Line::Anti, &[5]));
        assert!(prep.unit.agrees(&c.line(Line::Anti).one(), 8));
    }

    #[test]
    fn cubic_at_three() {
        // p^2 + pT + T^2 + T^3 at p = 3
        let c = ctx(3);
        let f = anti(c, &[9, 3, 1, 1]);
        let prep = prepare(&f).unwrap();
        assert_eq!(prep.a, 0);
        assert_eq!(prep.lambda(), 2);
        for b in prep.poly.lower() {
            assert!(b.valuation() >= Valuation::Finite(1));
        }
        assert!(prep.unit.is_unit());
        assert!(prep.recompose().agrees(&f, 6));
    }

    #[test]
    fn content_is_extracted() {
        let c = ctx(5);
        let f = anti(c, &[125, 25]);
        let prep = prepare(&f).unwrap();
        assert_eq!(prep.a, 2);
        assert_eq!(prep.poly, distinguished_from_integers(c, Line::Anti, &[5]));
    }

    #[test]
    fn zero_is_rejected() {
        let c = ctx(5);
        assert_eq!(prepare(&c.line(Line::Anti).zero()), Err(Error::ZeroInput));
    }

    #[test]
    fn gcd_of_coprime_and_shared() {
        let c = ctx(5);
        let t = anti(c, &[0, 1]);
        let tp = anti(c, &[5, 1]);
        assert!(line_gcd(&t, &tp).unwrap().is_one());
        let t2 = t.mul(&t);
        let g = line_gcd(&t2.mul(&tp), &t2.scale(&c.scalar(3))).unwrap();
        assert_eq!(g, DistinguishedPoly::monomial(c, Line::Anti, 2));
    }

    #[test]
    fn squarefree_parts_and_half_exponents() {
        let c = ctx(5);
        let t = DistinguishedPoly::monomial(c, Line::Anti, 1);
        let tp = distinguished_from_integers(c, Line::Anti, &[5]);
        // C = T^2 (T + p)^4  ->  J = T (T + p)^2
        let cpoly = t.pow(2).mul(&tp.pow(4));
        let parts = squarefree_decomposition(&cpoly).unwrap();
        assert_eq!(parts.len(), 4);
        let j = ceil_half(&parts, c, Line::Anti);
        let expect = t.mul(&tp.pow(2));
        assert!(compare_polys(&j, 12, &expect, 12, 6).equal, "{j}");
        // T^4 -> T^2
        let parts = squarefree_decomposition(&t.pow(4)).unwrap();
        assert_eq!(ceil_half(&parts, c, Line::Anti), t.pow(2));
    }

    #[test]
    fn slack_floor_of_linear() {
        let c = ctx(5);
        let tp = distinguished_from_integers(c, Line::Anti, &[5]);
        assert_eq!(tp.slack_floor(2, 0), 2);
        let t2 = DistinguishedPoly::monomial(c, Line::Anti, 2);
        assert_eq!(t2.slack_floor(12, 0), UNBOUNDED);
    }
}

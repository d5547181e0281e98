//! Weierstrass preparation in `S` over `Z_p[[T]]`, and gcds in the
//! two-variable ring built on it.

use std::fmt;

use super::weierstrass::{line_gcd, poly_divrem, UNBOUNDED};
use super::{IwasawaSeries, LineSeries};
use crate::error::{Error, Result};
use crate::padic::{PAdicScalar, Valuation};

/// A linear change of variables used to make a series `S`-regular.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordinateChange {
    Identity,
    /// `T -> T + cS`.
    Shear(i64),
    /// `S <-> T`.
    Swap,
    /// Swap, then shear.
    SwapShear(i64),
}

impl CoordinateChange {
    pub fn apply(&self, f: &IwasawaSeries) -> IwasawaSeries {
        let ctx = f.context();
        match *self {
            CoordinateChange::Identity => f.clone(),
            CoordinateChange::Shear(c) => f.shear(&ctx.scalar(c)),
            CoordinateChange::Swap => f.swap_variables(),
            CoordinateChange::SwapShear(c) => f.swap_variables().shear(&ctx.scalar(c)),
        }
    }

    pub fn invert(&self, f: &IwasawaSeries) -> IwasawaSeries {
        let ctx = f.context();
        match *self {
            CoordinateChange::Identity => f.clone(),
            CoordinateChange::Shear(c) => f.shear(&ctx.scalar(-c)),
            CoordinateChange::Swap => f.swap_variables(),
            CoordinateChange::SwapShear(c) => f.shear(&ctx.scalar(-c)).swap_variables(),
        }
    }

    fn candidates(p: u64) -> Vec<Self> {
        let mut out = vec![CoordinateChange::Identity];
        out.extend((1..p as i64).map(CoordinateChange::Shear));
        out.push(CoordinateChange::Swap);
        out.extend((1..p as i64).map(CoordinateChange::SwapShear));
        out
    }
}

impl fmt::Display for CoordinateChange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoordinateChange::Identity => write!(f, "identity"),
            CoordinateChange::Shear(c) => write!(f, "T -> T + {c}S"),
            CoordinateChange::Swap => write!(f, "S <-> T"),
            CoordinateChange::SwapShear(c) => write!(f, "S <-> T, T -> T + {c}S"),
        }
    }
}

/// Order of `S`-regularity of an integral series with unit content: the
/// first `i` with `f(S, 0)` having a unit coefficient at `S^i`.
pub fn s_regular_order(f: &IwasawaSeries) -> Option<usize> {
    (0..f.cap()).find(|&i| f.coeff(i, 0).valuation() == Valuation::Finite(0))
}

/// `f = p^a * u * φ^-1(P)` with `P = S^d + Σ_{i<d} S^i a_i(T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Preparation2 {
    pub a: i64,
    pub change: CoordinateChange,
    pub d: usize,
    /// `P` in the changed coordinates, known below total degree `cap - d`.
    pub poly: IwasawaSeries,
    pub unit: IwasawaSeries,
    /// Cap of the input.
    pub cap: usize,
}

impl Preparation2 {
    /// Total degree below which `poly` is meaningful.
    pub fn region(&self) -> usize {
        self.cap.saturating_sub(self.d)
    }

    /// Lower bound on the valuation of the truncation-induced perturbation
    /// of a coefficient of total degree `e`.
    pub fn slack_floor(&self, e: usize) -> i64 {
        let d = self.d;
        let span = self.cap.saturating_sub(e) as i64;
        let mut best = UNBOUNDED;
        for (i, j, c) in self.poly.terms() {
            if i >= d || i + j >= d {
                continue;
            }
            if let Valuation::Finite(v) = c.valuation() {
                let drop = (d - i - j) as i64;
                best = best.min((v.max(0) * span + drop - 1) / drop);
            }
        }
        best
    }

    /// The distinguished part in the original coordinates.
    pub fn generator(&self) -> IwasawaSeries {
        self.change.invert(&self.poly)
    }
}

/// Weierstrass preparation in `S`, after a change of coordinates if needed.
pub fn prepare2(f: &IwasawaSeries) -> Result<Preparation2> {
    let ctx = f.context();
    let pctx = ctx.padic();
    let cap = ctx.cap();
    let a = f.valuation().finite().ok_or(Error::ZeroInput)?;
    let g = f.scale(&pctx.prime_power(-a));

    let mut best: Option<(usize, CoordinateChange, IwasawaSeries)> = None;
    for change in CoordinateChange::candidates(ctx.prime()) {
        let h = change.apply(&g);
        if let Some(d) = s_regular_order(&h) {
            if best.as_ref().is_none_or(|(bd, _, _)| d < *bd) {
                best = Some((d, change, h));
            }
            if d == 0 {
                break;
            }
        }
    }
    let (d, change, h) = best.ok_or_else(|| {
        Error::Unsupported(format!("no coordinate change makes {f} S-regular"))
    })?;
    if d == 0 {
        return Ok(Preparation2 {
            a,
            change,
            d,
            poly: ctx.one(),
            unit: h,
            cap,
        });
    }
    if d >= cap {
        return Err(Error::DegreeTooLarge { degree: d, cap });
    }

    let mut high = ctx.zero();
    let mut low = ctx.zero();
    for (i, j, c) in h.terms() {
        if i >= d {
            high.set_coeff(i - d, j, c);
        } else {
            low.set_coeff(i, j, c);
        }
    }
    let high_inv = high.inverse()?;
    let floor = h
        .terms()
        .iter()
        .map(|(_, _, c)| c.abs_precision())
        .min()
        .unwrap_or(UNBOUNDED)
        .min(UNBOUNDED);

    let m = pctx.precision() as usize;
    let mut r = ctx.monomial(d, 0, pctx.one());
    let mut q = ctx.zero();
    let mut converged = false;
    for _ in 0..(4 * (m + cap) + 8) {
        let mut hr = ctx.zero();
        let mut lr = ctx.zero();
        for (i, j, c) in r.terms() {
            if i >= d {
                hr.set_coeff(i - d, j, c);
            } else {
                lr.set_coeff(i, j, c);
            }
        }
        let done = hr.terms().iter().all(|(_, _, c)| match c.valuation() {
            Valuation::Infinite => true,
            Valuation::Finite(v) => v >= floor,
        });
        if done {
            converged = true;
            r = lr;
            break;
        }
        let delta = hr.mul(&high_inv);
        q = q.add(&delta);
        r = lr.sub(&delta.mul(&low));
    }
    if !converged {
        return Err(Error::Unsupported(format!(
            "S-adic preparation did not settle for {f}"
        )));
    }
    let region = cap - d;
    let poly = ctx.monomial(d, 0, pctx.one()).sub(&r).with_cap(region);
    let unit = q.with_cap(region).inverse()?;
    Ok(Preparation2 {
        a,
        change,
        d,
        poly,
        unit,
        cap,
    })
}

/// Long division in `S` by a monic `P` of `S`-degree `d`: `g = q P + r` with
/// `r` of `S`-degree below `d`.
pub fn divrem_s(g: &IwasawaSeries, poly: &IwasawaSeries, d: usize) -> (IwasawaSeries, IwasawaSeries) {
    let cap = g.cap().min(poly.cap());
    let g = g.with_cap(cap);
    let poly = poly.with_cap(cap);
    let ctx = g.context();
    let mut rem = g.clone();
    let mut q = ctx.zero();
    let lower: Vec<(usize, usize, PAdicScalar)> =
        poly.terms().into_iter().filter(|(i, _, _)| *i < d).collect();
    for k in (d..cap).rev() {
        let ck = rem.s_coefficient(k);
        if ck.is_exact_zero() {
            continue;
        }
        for (j, c) in ck.coeffs().iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            q.set_coeff(k - d, j, q.coeff(k - d, j) + *c);
            rem.set_coeff(k, j, ctx.padic().zero());
            for &(i, jj, b) in &lower {
                let (si, tj) = (k - d + i, j + jj);
                if si + tj < cap {
                    rem.set_coeff(si, tj, rem.coeff(si, tj) - *c * b);
                }
            }
        }
    }
    (q, rem)
}

/// Comparison of two prepared series as ideals.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison2 {
    pub equal: bool,
    pub floor: i64,
    pub detail: String,
}

pub fn compare_prepared(a: &Preparation2, b: &Preparation2, target: i64) -> Comparison2 {
    if a.change != b.change || a.d != b.d {
        return Comparison2 {
            equal: false,
            floor: target,
            detail: format!(
                "regularity differs: ({}, order {}) vs ({}, order {})",
                a.change, a.d, b.change, b.d
            ),
        };
    }
    let region = a.region().min(b.region());
    let mut lowest = target;
    for e in 0..region {
        let floor = target.min(a.slack_floor(e)).min(b.slack_floor(e));
        for j in 0..=e {
            let i = e - j;
            if i >= a.d {
                continue;
            }
            let (x, y) = (a.poly.coeff(i, j), b.poly.coeff(i, j));
            if !x.agrees(&y, floor) {
                return Comparison2 {
                    equal: false,
                    floor: floor.min(lowest),
                    detail: format!("coefficient of S^{i} T^{j} differs at p^{floor}: {x} vs {y}"),
                };
            }
        }
        lowest = lowest.min(floor);
    }
    Comparison2 {
        equal: true,
        floor: lowest,
        detail: format!("distinguished parts agree below degree {region} at p^{lowest}"),
    }
}

fn strip_content(f: &IwasawaSeries) -> IwasawaSeries {
    match f.valuation() {
        Valuation::Finite(a) => f.scale(&f.context().padic().prime_power(-a)),
        Valuation::Infinite => f.clone(),
    }
}

/// Generator of the divisorial hull of `(f, g)`.
pub fn gcd2(f: &IwasawaSeries, g: &IwasawaSeries) -> Result<IwasawaSeries> {
    gcd2_inner(f, g, 0)
}

fn gcd2_inner(f: &IwasawaSeries, g: &IwasawaSeries, depth: usize) -> Result<IwasawaSeries> {
    let cap = f.cap().min(g.cap());
    if depth > 2 * cap + 4 || cap == 0 {
        return Err(Error::GcdBound(format!("gcd of {f} and {g}")));
    }
    let f = strip_content(&f.with_cap(cap));
    let g = strip_content(&g.with_cap(cap));
    let ctx = f.context();
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroInput);
    }
    if f.is_zero() {
        return Ok(prepare2(&g)?.generator());
    }
    if g.is_zero() {
        return Ok(prepare2(&f)?.generator());
    }
    if f.is_unit() || g.is_unit() {
        return Ok(ctx.one());
    }
    let pf = prepare2(&f)?;
    if pf.d == 0 {
        return Ok(ctx.one());
    }
    let gc = pf.change.apply(&g);
    let (_, rem) = divrem_s(&gc, &pf.poly, pf.d);
    let vg = rem.valuation().finite().unwrap_or(0);
    let mut r = rem.clone();
    for (i, j, c) in rem.terms() {
        let s = pf.slack_floor(i + j);
        if s < UNBOUNDED {
            r.set_coeff(i, j, c.truncate_abs(vg.saturating_add(s)));
        }
    }
    if r.is_zero() {
        return Ok(pf.generator());
    }
    // Content of r over Z_p[[T]]; it is prime to the monic P.
    let parts: Vec<LineSeries> = (0..pf.d).map(|i| r.s_coefficient(i)).collect();
    let mut content: Option<super::weierstrass::DistinguishedPoly> = None;
    for part in parts.iter().filter(|p| !p.is_zero()) {
        content = Some(match content {
            None => super::weierstrass::prepare(part)?.poly,
            Some(c) => line_gcd(&c.to_series(part.len()), part)?,
        });
    }
    let content = content.expect("remainder is nonzero");
    let primitive_parts: Vec<LineSeries> = parts
        .iter()
        .map(|p| poly_divrem(p, &content).0)
        .collect();
    let primitive = IwasawaSeries::from_s_coefficients(r.context(), &primitive_parts);
    let inner = gcd2_inner(&primitive, &pf.poly, depth + 1)?;
    Ok(pf.change.invert(&inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::SeriesContext;

    fn ctx() -> SeriesContext {
        SeriesContext::new(5, 8, 12).unwrap()
    }

    #[test]
    fn regular_series_prepares_without_change() {
        let c = ctx();
        // S + T^2
        let f = c.s().add(&c.t().pow(2));
        let prep = prepare2(&f).unwrap();
        assert_eq!(prep.change, CoordinateChange::Identity);
        assert_eq!(prep.d, 1);
        assert!(prep.poly.agrees(&f.with_cap(11), 8));
    }

    #[test]
    fn pure_t_needs_a_change() {
        let c = ctx();
        let prep = prepare2(&c.t()).unwrap();
        assert_ne!(prep.change, CoordinateChange::Identity);
        assert_eq!(prep.d, 1);
    }

    #[test]
    fn unit_multiple_has_same_distinguished_part() {
        let c = ctx();
        let f = c.s().mul(&c.s().add(&c.t().pow(2)));
        let u = c.one().add(&c.t()).add(&c.s().scale(&c.scalar(3)));
        let a = prepare2(&f).unwrap();
        let b = prepare2(&f.mul(&u).scale(&c.scalar(25))).unwrap();
        assert_eq!(b.a, 2);
        assert!(compare_prepared(&a, &b, 6).equal);
        let other = prepare2(&c.s().mul(&c.s().add(&c.t()))).unwrap();
        assert!(!compare_prepared(&a, &other, 6).equal);
    }

    #[test]
    fn gcd_of_coprime_pair_is_one() {
        let c = ctx();
        let g = gcd2(&c.s(), &c.t()).unwrap();
        assert!(g.is_unit());
    }

    #[test]
    fn gcd_with_common_factor() {
        let c = ctx();
        let common = c.s().add(&c.t().pow(2));
        let f = common.mul(&c.s());
        let g = common.mul(&c.t().add(&c.constant(c.scalar(5))));
        let h = gcd2(&f, &g).unwrap();
        let ph = prepare2(&h).unwrap();
        let pc = prepare2(&common.with_cap(h.cap())).unwrap();
        assert!(compare_prepared(&ph, &pc, 6).equal, "{h}");
    }
}

//! Principal ideals and the relation `≐` (equality up to a unit).

use std::fmt;

use serde::{Deserialize, Serialize};

use super::prep2::{compare_prepared, prepare2};
use super::weierstrass::{compare_polys, prepare, DistinguishedPoly};
use super::{IwasawaSeries, Line, LineSeries};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RingTag {
    Lambda,
    Cycl,
    Anti,
}

impl From<Line> for RingTag {
    fn from(line: Line) -> Self {
        match line {
            Line::Cycl => RingTag::Cycl,
            Line::Anti => RingTag::Anti,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Two(IwasawaSeries),
    Line(LineSeries),
}

/// A principal ideal, kept through a generator.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealGenerator {
    ring: RingTag,
    generator: Generator,
}

/// Outcome of an `≐` test.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealComparison {
    pub equal: bool,
    /// The weakest valuation floor at which coefficients were compared.
    pub floor: i64,
    pub detail: String,
}

impl IdealGenerator {
    pub fn two_var(f: IwasawaSeries) -> Self {
        Self {
            ring: RingTag::Lambda,
            generator: Generator::Two(f),
        }
    }

    pub fn line(f: LineSeries) -> Self {
        Self {
            ring: f.line().into(),
            generator: Generator::Line(f),
        }
    }

    pub fn from_poly(p: &DistinguishedPoly, len: usize) -> Self {
        Self::line(p.to_series(len))
    }

    pub fn ring(&self) -> RingTag {
        self.ring
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn is_zero(&self) -> bool {
        match &self.generator {
            Generator::Two(f) => f.is_zero(),
            Generator::Line(f) => f.is_zero(),
        }
    }

    /// The distinguished polynomial of a line ideal.
    pub fn distinguished(&self) -> Result<DistinguishedPoly> {
        match &self.generator {
            Generator::Line(f) => Ok(prepare(f)?.poly),
            Generator::Two(_) => Err(Error::Unsupported(
                "two-variable ideals have no single distinguished polynomial".into(),
            )),
        }
    }

    /// `self ≐ other`, comparing normal forms at valuation `target` (or the
    /// truncation limit, whichever is lower).
    pub fn equivalent(&self, other: &Self, target: i64) -> Result<IdealComparison> {
        if self.ring != other.ring {
            return Err(Error::ContextMismatch(format!(
                "ideals of {:?} and {:?}",
                self.ring, other.ring
            )));
        }
        match (&self.generator, &other.generator) {
            (Generator::Line(f), Generator::Line(g)) => {
                match (f.is_zero(), g.is_zero()) {
                    (true, true) => {
                        return Ok(IdealComparison {
                            equal: true,
                            floor: target,
                            detail: "both zero".into(),
                        })
                    }
                    (true, false) | (false, true) => {
                        return Ok(IdealComparison {
                            equal: false,
                            floor: target,
                            detail: "exactly one side is zero".into(),
                        })
                    }
                    _ => {}
                }
                let (pf, pg) = (prepare(f)?, prepare(g)?);
                let c = compare_polys(&pf.poly, pf.len, &pg.poly, pg.len, target);
                Ok(IdealComparison {
                    equal: c.equal,
                    floor: c.floor,
                    detail: format!("({}) vs ({}): {}", pf.poly, pg.poly, c.detail),
                })
            }
            (Generator::Two(f), Generator::Two(g)) => {
                match (f.is_zero(), g.is_zero()) {
                    (true, true) => {
                        return Ok(IdealComparison {
                            equal: true,
                            floor: target,
                            detail: "both zero".into(),
                        })
                    }
                    (true, false) | (false, true) => {
                        return Ok(IdealComparison {
                            equal: false,
                            floor: target,
                            detail: "exactly one side is zero".into(),
                        })
                    }
                    _ => {}
                }
                let cap = f.cap().min(g.cap());
                let (pf, pg) = (prepare2(&f.with_cap(cap))?, prepare2(&g.with_cap(cap))?);
                let c = compare_prepared(&pf, &pg, target);
                Ok(IdealComparison {
                    equal: c.equal,
                    floor: c.floor,
                    detail: c.detail,
                })
            }
            _ => Err(Error::ContextMismatch("line and two-variable generators".into())),
        }
    }
}

impl fmt::Display for IdealGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.generator {
            Generator::Two(g) => write!(f, "({g})"),
            Generator::Line(g) => match prepare(g) {
                Ok(p) => write!(f, "({})", p.poly),
                Err(_) => write!(f, "(0)"),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::SeriesContext;

    #[test]
    fn unit_multiples_are_equivalent() {
        let c = SeriesContext::new(5, 8, 12).unwrap();
        let lc = c.line(Line::Anti);
        let t2 = lc.var().pow(2);
        let a = IdealGenerator::line(t2.clone());
        let b = IdealGenerator::line(t2.mul(&lc.gamma_power(-2)).scale(&c.scalar(-10)));
        assert!(a.equivalent(&b, 6).unwrap().equal);
        let d = IdealGenerator::line(lc.var());
        assert!(!a.equivalent(&d, 6).unwrap().equal);
    }
}

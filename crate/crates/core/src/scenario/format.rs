//! On-disk JSON layout of a scenario.
//!
//! Series are sparse lists of `{i, j, coeff}` terms for `coeff · S^i T^j`.
//! Scalars are either JSON integers or strings accepted by
//! [`PAdicContext::parse`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::padic::{PAdicContext, PAdicScalar};
use crate::series::{GradedElement, IwasawaSeries, SeriesContext};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Int(i64),
    Text(String),
}

impl ScalarText {
    /// Small exact integers are written as JSON numbers.
    pub fn encode(x: &PAdicScalar) -> Self {
        if let Some(n) = x.to_centered_integer() {
            let ctx = x.context();
            let small = (ctx.prime() as i128).pow(ctx.precision() / 2);
            if let Ok(n) = i64::try_from(n) {
                if (n as i128).abs() < small && ctx.integer(n) == *x {
                    return ScalarText::Int(n);
                }
            }
        }
        ScalarText::Text(x.to_string())
    }

    pub fn decode(&self, ctx: PAdicContext) -> Result<PAdicScalar> {
        match self {
            ScalarText::Int(n) => Ok(ctx.integer(*n)),
            ScalarText::Text(s) => ctx.parse(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub i: usize,
    pub j: usize,
    pub coeff: ScalarText,
}

pub type SeriesFile = Vec<TermFile>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub rank: usize,
    pub tau_matrix: Vec<Vec<SeriesFile>>,
    pub gram: Vec<Vec<SeriesFile>>,
    pub gauge: SeriesFile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArithmeticFile {
    pub r_plus: u32,
    pub r_minus: u32,
    /// Modular degree `d`.
    pub d: ScalarText,
    pub sha: ScalarText,
    pub tamagawa: ScalarText,
    pub c_triv: ScalarText,
    pub t_idx: ScalarText,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedFile {
    pub s: ScalarText,
    pub t: ScalarText,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegulatorFile {
    pub r_plus: usize,
    pub r_minus: usize,
    pub t_idx: ScalarText,
    pub entries: Vec<Vec<GradedFile>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub prime: u64,
    pub coeff_prec: u32,
    pub degree_cap: usize,
    pub module: ModuleFile,
    pub arithmetic: ArithmeticFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regulator: Option<RegulatorFile>,
    #[serde(default)]
    pub checks: Vec<String>,
    #[serde(default)]
    pub seed: u64,
}

impl ScenarioFile {
    /// Parses JSON; syntax and shape errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialises")
    }
}

pub fn encode_series(f: &IwasawaSeries) -> SeriesFile {
    f.terms()
        .into_iter()
        .map(|(i, j, c)| TermFile {
            i,
            j,
            coeff: ScalarText::encode(&c),
        })
        .collect()
}

pub fn decode_series(ctx: SeriesContext, terms: &[TermFile], what: &str) -> Result<IwasawaSeries> {
    let mut f = ctx.zero();
    for t in terms {
        if t.i + t.j >= ctx.cap() {
            return Err(Error::Scenario(format!(
                "{what}: term S^{} T^{} has total degree {} >= degree_cap {}",
                t.i,
                t.j,
                t.i + t.j,
                ctx.cap()
            )));
        }
        let c = t
            .coeff
            .decode(ctx.padic())
            .map_err(|e| Error::Scenario(format!("{what}: {e}")))?;
        f.set_coeff(t.i, t.j, f.coeff(t.i, t.j) + c);
    }
    Ok(f)
}

pub fn encode_matrix(m: &Matrix<IwasawaSeries>) -> Vec<Vec<SeriesFile>> {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(encode_series).collect())
        .collect()
}

pub fn decode_matrix(
    ctx: SeriesContext,
    rows: &[Vec<SeriesFile>],
    rank: usize,
    what: &str,
) -> Result<Matrix<IwasawaSeries>> {
    if rows.len() != rank || rows.iter().any(|r| r.len() != rank) {
        return Err(Error::Scenario(format!("{what} must be {rank}x{rank}")));
    }
    let mut out = Vec::with_capacity(rank);
    for (i, row) in rows.iter().enumerate() {
        let mut r = Vec::with_capacity(rank);
        for (j, e) in row.iter().enumerate() {
            r.push(decode_series(ctx, e, &format!("{what}[{i}][{j}]"))?);
        }
        out.push(r);
    }
    Matrix::from_rows(out)
}

pub fn encode_graded(g: &GradedElement) -> GradedFile {
    GradedFile {
        s: ScalarText::encode(&g.component(0)),
        t: ScalarText::encode(&g.component(1)),
    }
}

pub fn decode_graded(ctx: PAdicContext, g: &GradedFile) -> Result<GradedElement> {
    Ok(GradedElement::linear(g.s.decode(ctx)?, g.t.decode(ctx)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_encoding_prefers_integers() {
        let c = PAdicContext::new(5, 8).unwrap();
        assert_eq!(ScalarText::encode(&c.integer(-3)), ScalarText::Int(-3));
        let half = c.rational(1, 2).unwrap();
        let enc = ScalarText::encode(&half);
        assert!(matches!(enc, ScalarText::Text(_)));
        assert_eq!(enc.decode(c).unwrap(), half);
        let low = c.integer(7).truncate_abs(3);
        assert_eq!(ScalarText::encode(&low).decode(c).unwrap(), low);
    }

    #[test]
    fn parse_error_has_position() {
        let err = ScenarioFile::from_json("{\n  \"prime\": 5,\n  \"coeff_prec\": x\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
    }
}

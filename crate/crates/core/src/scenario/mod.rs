//! Scenarios: an orthogonal module together with its arithmetic data,
//! their file format, generation and verification.

pub mod format;
pub mod generate;
pub mod golden;
pub mod report;
pub mod run;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::orthogonal::{OrthogonalModule, ORGANIZER_CHECKS};
use crate::padic::PAdicScalar;
use crate::regulators::EigenGramMatrix;
use crate::series::SeriesContext;
use crate::tau_modules::{HermitianPairing, SemiLinearModule, TauGauge};

pub use format::ScenarioFile;
pub use generate::{generate, GenerateParams};
pub use report::{Provenance, VerificationReport};
pub use run::run_verifications;

pub const REGULATOR_CHECKS: [&str; 3] = ["prop_deg_vanishing", "maximal_nondegeneracy", "two_variable_bsd"];

pub fn known_check(name: &str) -> bool {
    ORGANIZER_CHECKS.contains(&name) || REGULATOR_CHECKS.contains(&name)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Arithmetic {
    pub r_plus: u32,
    pub r_minus: u32,
    pub modular_degree: PAdicScalar,
    pub sha: PAdicScalar,
    pub tamagawa: PAdicScalar,
    pub c_triv: PAdicScalar,
    pub t_idx: PAdicScalar,
}

impl Arithmetic {
    pub fn rank(&self) -> u32 {
        self.r_plus + self.r_minus
    }

    /// `r = r⁺ + r⁻` must be odd, which also rules out `r⁺ = r⁻`.
    pub fn check_parity(&self) -> Result<()> {
        if self.rank() % 2 == 0 {
            return Err(Error::Parity(format!(
                "r+ + r- = {} + {} = {} is even; the Mordell-Weil rank over K must be odd",
                self.r_plus,
                self.r_minus,
                self.rank()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub context: SeriesContext,
    pub module: OrthogonalModule,
    pub arithmetic: Arithmetic,
    pub regulator: Option<EigenGramMatrix>,
    /// Requested checks; empty means all applicable ones.
    pub checks: Vec<String>,
    pub seed: u64,
}

impl Scenario {
    pub fn new(
        module: OrthogonalModule,
        arithmetic: Arithmetic,
        regulator: Option<EigenGramMatrix>,
        checks: Vec<String>,
        seed: u64,
    ) -> Result<Self> {
        arithmetic.check_parity()?;
        if let Some(name) = checks.iter().find(|c| !known_check(c)) {
            return Err(Error::Scenario(format!("unknown check {name:?}")));
        }
        Ok(Self {
            context: module.context(),
            module,
            arithmetic,
            regulator,
            checks,
            seed,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&ScenarioFile::from_json(text)?)
    }

    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }

    pub fn from_file(f: &ScenarioFile) -> Result<Self> {
        let ctx = SeriesContext::new(f.prime, f.coeff_prec, f.degree_cap)?;
        let pc = ctx.padic();
        let a = &f.arithmetic;
        let scalar = |x: &format::ScalarText, what: &str| {
            x.decode(pc).map_err(|e| Error::Scenario(format!("arithmetic.{what}: {e}")))
        };
        let arithmetic = Arithmetic {
            r_plus: a.r_plus,
            r_minus: a.r_minus,
            modular_degree: scalar(&a.d, "d")?,
            sha: scalar(&a.sha, "sha")?,
            tamagawa: scalar(&a.tamagawa, "tamagawa")?,
            c_triv: scalar(&a.c_triv, "c_triv")?,
            t_idx: scalar(&a.t_idx, "t_idx")?,
        };
        arithmetic.check_parity()?;
        let m = &f.module;
        if m.rank == 0 {
            return Err(Error::Scenario("module rank must be positive".into()));
        }
        let u = format::decode_matrix(ctx, &m.tau_matrix, m.rank, "module.tau_matrix")?;
        let g = format::decode_matrix(ctx, &m.gram, m.rank, "module.gram")?;
        let gauge = format::decode_series(ctx, &m.gauge, "module.gauge")?;
        let module = OrthogonalModule::new(
            SemiLinearModule::new(u)?,
            HermitianPairing::new(g)?,
            TauGauge::new(gauge)?,
        )?;
        let regulator = match &f.regulator {
            None => None,
            Some(r) => {
                let n = r.r_plus + r.r_minus;
                if r.entries.len() != n || r.entries.iter().any(|row| row.len() != n) {
                    return Err(Error::Scenario(format!("regulator.entries must be {n}x{n}")));
                }
                let rows = r
                    .entries
                    .iter()
                    .map(|row| row.iter().map(|e| format::decode_graded(pc, e)).collect())
                    .collect::<Result<Vec<Vec<_>>>>()?;
                let t = r.t_idx.decode(pc)?;
                Some(EigenGramMatrix::new(r.r_plus, r.r_minus, t, Matrix::from_rows(rows)?)?)
            }
        };
        Self::new(module, arithmetic, regulator, f.checks.clone(), f.seed)
    }

    pub fn to_file(&self) -> ScenarioFile {
        use format::ScalarText as S;
        let a = &self.arithmetic;
        ScenarioFile {
            prime: self.context.prime(),
            coeff_prec: self.context.precision(),
            degree_cap: self.context.cap(),
            module: format::ModuleFile {
                rank: self.module.rank(),
                tau_matrix: format::encode_matrix(self.module.tau_matrix()),
                gram: format::encode_matrix(self.module.gram()),
                gauge: format::encode_series(self.module.gauge().unit()),
            },
            arithmetic: format::ArithmeticFile {
                r_plus: a.r_plus,
                r_minus: a.r_minus,
                d: S::encode(&a.modular_degree),
                sha: S::encode(&a.sha),
                tamagawa: S::encode(&a.tamagawa),
                c_triv: S::encode(&a.c_triv),
                t_idx: S::encode(&a.t_idx),
            },
            regulator: self.regulator.as_ref().map(|g| format::RegulatorFile {
                r_plus: g.r_plus(),
                r_minus: g.r_minus(),
                t_idx: S::encode(&g.t_idx()),
                entries: g
                    .entries()
                    .to_rows()
                    .iter()
                    .map(|row| row.iter().map(format::encode_graded).collect())
                    .collect(),
            }),
            checks: self.checks.clone(),
            seed: self.seed,
        }
    }
}

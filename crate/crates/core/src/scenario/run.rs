use crate::error::{Error, Result};
use crate::orthogonal::{discriminant, verify_organizer, OrganizerInput, ORGANIZER_CHECKS};
use crate::regulators::{bsd_leading_term_check, nondegeneracy_report, vanishing_pattern_check, BsdData};
use crate::verdict::CheckResult;

use super::report::{Provenance, VerificationReport};
use super::{Scenario, REGULATOR_CHECKS};

/// Checks run when the scenario does not name any.
pub fn default_checks(s: &Scenario) -> Vec<String> {
    let mut out: Vec<String> = ORGANIZER_CHECKS.iter().map(|c| c.to_string()).collect();
    if s.regulator.is_some() {
        out.extend(REGULATOR_CHECKS.iter().map(|c| c.to_string()));
    }
    out
}

fn regulator_check(s: &Scenario, name: &str) -> CheckResult {
    let Some(g) = &s.regulator else {
        return CheckResult::skipped(name, "scenario has no regulator Gram matrix");
    };
    CheckResult::evaluate(name, || match name {
        "prop_deg_vanishing" => {
            let o = vanishing_pattern_check(g)?;
            Ok(CheckResult::new(name, o.pass, o.witness))
        }
        "maximal_nondegeneracy" => {
            let rep = nondegeneracy_report(g)?;
            let parts: Vec<String> = rep
                .components
                .iter()
                .map(|(j, nz)| format!("R^({},{j}) {}", g.rank() - j, if *nz { "≠ 0" } else { "= 0" }))
                .collect();
            Ok(CheckResult::new(name, rep.maximal, parts.join(", ")))
        }
        "two_variable_bsd" => {
            let a = &s.arithmetic;
            let l = discriminant(&s.module)?;
            let data = BsdData {
                sha: a.sha,
                tamagawa: a.tamagawa,
                c_triv: a.c_triv,
                rank: a.rank() as usize,
            };
            let o = bsd_leading_term_check(&l, g, &data)?;
            Ok(CheckResult::new(name, o.pass, o.witness))
        }
        other => Err(Error::Scenario(format!("unknown regulator check {other:?}"))),
    })
}

/// Runs the requested checks; each is evaluated independently.
pub fn run_verifications(s: &Scenario) -> VerificationReport {
    let requested = if s.checks.is_empty() {
        default_checks(s)
    } else {
        s.checks.clone()
    };
    let a = &s.arithmetic;
    let wants_organizer = requested.iter().any(|c| ORGANIZER_CHECKS.contains(&c.as_str()));
    let organizer = wants_organizer.then(|| {
        verify_organizer(
            &s.module,
            &OrganizerInput {
                r_plus: a.r_plus,
                r_minus: a.r_minus,
                modular_degree: a.modular_degree,
            },
        )
    });
    let mut flags = organizer.as_ref().map(|o| o.flags.clone()).unwrap_or_default();
    if let Some(g) = &s.regulator {
        if g.t_idx() != a.t_idx {
            flags.push(format!(
                "regulator index t = {} differs from arithmetic t_idx = {}",
                g.t_idx(),
                a.t_idx
            ));
        }
        if (g.r_plus(), g.r_minus()) != (a.r_plus as usize, a.r_minus as usize) {
            flags.push(format!(
                "regulator eigenspace split ({}, {}) differs from (r+, r-) = ({}, {})",
                g.r_plus(),
                g.r_minus(),
                a.r_plus,
                a.r_minus
            ));
        }
    }
    let checks = requested
        .iter()
        .map(|name| match ORGANIZER_CHECKS.iter().position(|c| c == name) {
            Some(i) => organizer.as_ref().expect("organizer evaluated").checks[i].clone(),
            None => regulator_check(s, name),
        })
        .collect();
    VerificationReport {
        checks,
        flags,
        provenance: Provenance::of(s),
    }
}

/// Parses and verifies scenario JSON in one step.
pub fn verify_json(text: &str) -> Result<VerificationReport> {
    Ok(run_verifications(&Scenario::from_json(text)?))
}

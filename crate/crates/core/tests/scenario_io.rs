mod common;

use orthlab_core::scenario::generate::generate;
use orthlab_core::scenario::{golden, run_verifications, GenerateParams, Scenario, ScenarioFile, VerificationReport};
use orthlab_core::Error;
use proptest::prelude::*;

fn golden_text(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn checked_in_golden_matches_builder() {
    let built = golden::rank3_worked(common::ctx()).unwrap().to_json();
    let on_disk = golden_text("rank3-worked.json");
    assert_eq!(
        ScenarioFile::from_json(&built).unwrap(),
        ScenarioFile::from_json(&on_disk).unwrap()
    );
    let s = Scenario::from_json(&on_disk).unwrap();
    assert!(run_verifications(&s).all_passed());
}

#[test]
fn scenario_round_trip_is_stable() {
    let s = generate(&GenerateParams::new(3, 1, 2, vec!["T".into()]), 9).unwrap();
    let text = s.to_json();
    let back = Scenario::from_json(&text).unwrap();
    assert_eq!(back.to_json(), text);
}

#[test]
fn report_round_trip() {
    let s = golden::rank3_negative(common::ctx()).unwrap();
    let rep = run_verifications(&s);
    let back = VerificationReport::from_json(&rep.to_json()).unwrap();
    assert_eq!(back.to_json(), rep.to_json());
    assert_eq!(back.digest(), rep.digest());
}

#[test]
fn truncated_file_reports_position() {
    let text = golden_text("rank3-worked.json");
    let cut = &text[..text.len() / 3];
    match Scenario::from_json(cut) {
        Err(Error::Parse(msg)) => assert!(msg.starts_with("line "), "{msg}"),
        other => panic!("expected a parse error, got {:?}", other.err()),
    }
}

#[test]
fn unknown_field_is_rejected() {
    let text = golden_text("rank3-worked.json").replacen("\"prime\"", "\"primes\"", 1);
    assert!(matches!(Scenario::from_json(&text), Err(Error::Parse(_))));
}

#[test]
fn generation_is_deterministic() {
    let p = GenerateParams::new(3, 2, 1, vec!["T^2".into()]);
    let a = generate(&p, 42).unwrap();
    let b = generate(&p, 42).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(run_verifications(&a).digest(), run_verifications(&b).digest());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn even_rank_never_loads(rp in 0u32..8, rm in 0u32..8) {
        let mut f = ScenarioFile::from_json(&golden_text("rank3-worked.json")).unwrap();
        f.arithmetic.r_plus = rp;
        f.arithmetic.r_minus = rm;
        let res = Scenario::from_file(&f);
        if (rp + rm) % 2 == 0 {
            prop_assert!(matches!(res, Err(Error::Parity(_))));
        } else {
            prop_assert!(res.is_ok());
        }
    }
}

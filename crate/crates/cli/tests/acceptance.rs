//! One verdict line per acceptance criterion; exits non-zero if any fails.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use orthlab_core::linalg::{char_gcd_two_var, char_ideal_line, Matrix};
use orthlab_core::orthogonal::{
    derived_pairing, heegner_l, heegner_l_for, heegner_submodule, kernel_sign, norm_kernel, selmer_cokernel,
    verify_exact_sequences, verify_norm_duality, DerivedPairingValue, Field, ORGANIZER_CHECKS,
};
use orthlab_core::regulators::{bidegree_projection, random_eigen_gram, regulator_det, vanishing_pattern_check};
use orthlab_core::scenario::generate::{generate, sample_params};
use orthlab_core::scenario::{golden, run_verifications, GenerateParams, Scenario, ScenarioFile};
use orthlab_core::series::ideal::IdealGenerator;
use orthlab_core::series::weierstrass::prepare;
use orthlab_core::tau_modules::{module_sign, validate_hermitian, validate_semilinear, SemiLinearModule};
use orthlab_core::verdict::Status;
use orthlab_core::{Error, IwasawaSeries, Line, LineSeries, SeriesContext};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_orthlab")
}

fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("orthlab runs")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("orthlab-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn ctx() -> SeriesContext {
    SeriesContext::new(5, 8, 12).unwrap()
}

/// `T^4 (1+T)^-2 = Σ (-1)^m (m+1) T^(m+4)`, written out coefficientwise.
fn t4_gamma_m2(len: usize) -> LineSeries {
    let mut coeffs = vec![0i64; len];
    for (k, c) in coeffs.iter_mut().enumerate().skip(4) {
        let m = (k - 4) as i64;
        *c = if m % 2 == 0 { m + 1 } else { -(m + 1) };
    }
    ctx().line(Line::Anti).from_integers(&coeffs)
}

fn line_equiv(a: &LineSeries, b: &LineSeries) -> bool {
    IdealGenerator::line(a.clone())
        .equivalent(&IdealGenerator::line(b.clone()), 6)
        .map(|c| c.equal)
        .unwrap_or(false)
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let c = ctx();
    let text = std::fs::read_to_string(scenario_path("rank3-worked.json")).map_err(|e| e.to_string())?;
    let s = Scenario::from_json(&text).map_err(|e| e.to_string())?;
    let v = &s.module;
    let disc = v.discriminant().map_err(|e| e.to_string())?;

    // Oracle: S (T² + S)(S + T² (1+T)^-2), multiplied out coefficientwise.
    let h = c.t().pow(2).add(&c.s());
    let t2g = IwasawaSeries::from_line(&{
        let mut co = vec![0i64; 12];
        for (k, x) in co.iter_mut().enumerate().skip(2) {
            let m = (k - 2) as i64;
            *x = if m % 2 == 0 { m + 1 } else { -(m + 1) };
        }
        c.line(Line::Anti).from_integers(&co)
    });
    let oracle = c.s().mul(&h).mul(&c.s().add(&t2g));
    ensure(disc.agrees(&oracle.neg(), 6), "disc differs from -S(T²+S)(S+T²γ⁻²)")?;
    let cmp = IdealGenerator::two_var(disc.clone())
        .equivalent(&IdealGenerator::two_var(oracle), 6)
        .map_err(|e| e.to_string())?;
    ensure(cmp.equal, format!("disc ideal: {}", cmp.detail))?;

    let snf = selmer_cokernel(v)
        .and_then(|p| p.smith(Line::Anti))
        .map_err(|e| e.to_string())?;
    let t2 = c.line(Line::Anti).var().pow(2);
    let torsion: Vec<&LineSeries> = snf.diag.iter().filter(|d| !d.is_zero() && !d.is_unit()).collect();
    ensure(
        v.rank() - snf.rank() == 1 && torsion.len() == 2 && torsion.iter().all(|d| line_equiv(d, &t2)),
        "M ⊗ Λ_anti is not Λ_anti ⊕ (Λ_anti/T²)²",
    )?;

    let anti = norm_kernel(v, Field::KAnti).map_err(|e| e.to_string())?;
    let cycl = norm_kernel(v, Field::KCycl).map_err(|e| e.to_string())?;
    ensure(anti.rank() == 1 && cycl.rank() == 0, "norm kernel ranks")?;
    let sign = kernel_sign(v, &anti.lifts[0]).map_err(|e| e.to_string())?;
    ensure(sign == 1, format!("sign {sign}"))?;

    let hd = heegner_submodule(v).map_err(|e| e.to_string())?;
    ensure(line_equiv(&hd.j, &t2), format!("J = {}", hd.j_poly))?;
    let l = heegner_l(v, &hd).map_err(|e| e.to_string())?;
    let want = t4_gamma_m2(l.len());
    ensure(l.agrees(&want, 6) || l.agrees(&want.neg(), 6), format!("𝓛 = {l}"))?;
    let lp = disc.anti_linear_term().map_err(|e| e.to_string())?;
    ensure(line_equiv(&lp, &want), format!("L' = {lp}"))?;

    let rep = run_verifications(&s);
    for name in ORGANIZER_CHECKS {
        let r = rep.checks.iter().find(|r| r.name == name).ok_or(format!("{name} missing"))?;
        ensure(r.passed(), format!("{name}: {}", r.witness))?;
    }
    let lf = disc.leading_form().map_err(|e| e.to_string())?;
    ensure(lf.to_string() == "-1*s^3", format!("leading form {lf}"))?;
    let bsd = rep.checks.iter().find(|r| r.name == "two_variable_bsd").ok_or("bsd missing")?;
    ensure(bsd.passed(), bsd.witness.clone())?;

    let cli_start = Instant::now();
    let out = run(&["verify", "--scenario", scenario_path("rank3-worked.json").to_str().unwrap()]);
    let cli_time = cli_start.elapsed();
    ensure(out.status.code() == Some(0), "CLI verify exit code")?;
    let total = start.elapsed();
    ensure(cli_time < Duration::from_secs(1), format!("CLI run took {cli_time:?}"))?;
    Ok(format!("12/12 checks, disc/J/𝓛/L' match oracles, CLI {:?}, in-process {:?}", cli_time, total - cli_time))
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    for seed in 0..200u64 {
        let params = sample_params(seed, 4);
        let s = generate(&params, seed).map_err(|e| format!("seed {seed}: {e}"))?;
        let v = &s.module;
        let c = v.context();
        for f in Field::ALL {
            let o = verify_exact_sequences(v, f).map_err(|e| e.to_string())?;
            ensure(o.pass, format!("seed {seed} exact {f}: {}", o.witness))?;
            let o = verify_norm_duality(v, f).map_err(|e| e.to_string())?;
            ensure(o.pass, format!("seed {seed} duality {f}: {}", o.witness))?;
        }
        let disc = v.discriminant().map_err(|e| e.to_string())?;
        let ch = char_gcd_two_var(v.gram()).map_err(|e| e.to_string())?;
        let cmp = IdealGenerator::two_var(disc).equivalent(&ch, 6).map_err(|e| e.to_string())?;
        ensure(cmp.equal, format!("seed {seed} disc vs char: {}", cmp.detail))?;

        let k = norm_kernel(v, Field::KAnti).map_err(|e| e.to_string())?;
        let x = &k.lifts[0];
        let shift = c.s().mul(&c.gamma_anti_power(1));
        let x2: Vec<IwasawaSeries> = x
            .iter()
            .enumerate()
            .map(|(i, e)| if i == seed as usize % x.len() { e.add(&shift) } else { e.clone() })
            .collect();
        let a = derived_pairing(v, Field::KAnti, x, x).map_err(|e| e.to_string())?;
        let b = derived_pairing(v, Field::KAnti, &x2, x).map_err(|e| e.to_string())?;
        match (&a, &b) {
            (DerivedPairingValue::Anti(p), DerivedPairingValue::Anti(q)) => {
                ensure(p.agrees(q, 5), format!("seed {seed}: lift dependence {p} vs {q}"))?
            }
            _ => return Err(format!("seed {seed}: unexpected derived values")),
        }

        let h = heegner_submodule(v).map_err(|e| e.to_string())?;
        let l = heegner_l(v, &h).map_err(|e| e.to_string())?;
        let unit = c.gamma_anti_power(seed as i64 % 5 - 2).neg();
        let moved: Vec<IwasawaSeries> = h.generator.iter().map(|e| e.mul(&unit)).collect();
        let l2 = heegner_l_for(v, &moved).map_err(|e| e.to_string())?;
        ensure(l.agrees(&l2, 5), format!("seed {seed}: 𝓛 moved"))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), format!("took {t:?}"))?;
    Ok(format!("200 modules of rank 1-4, 0 failures, {t:?}"))
}

fn criterion_3() -> Verdict {
    let c = orthlab_core::PAdicContext::new(5, 8).unwrap();
    let mut forbidden = 0;
    for seed in 0..500u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = 1 + seed as usize % 5;
        let rp = (seed as usize / 5) % (r + 1);
        let g = random_eigen_gram(&mut rng, c, rp, r - rp).map_err(|e| e.to_string())?;
        ensure(
            vanishing_pattern_check(&g).map_err(|e| e.to_string())?.pass,
            format!("seed {seed}: pattern"),
        )?;
        let reg = regulator_det(&g).map_err(|e| e.to_string())?;
        let m = rp.min(r - rp);
        for j in 0..=r {
            if j % 2 == 1 || j > 2 * m {
                forbidden += 1;
                let x = bidegree_projection(&reg, j).map_err(|e| e.to_string())?;
                ensure(x.is_exact_zero(), format!("seed {seed}: R^({},{j}) = {x}", r - j))?;
            }
        }
    }
    Ok(format!("500 instances, {forbidden} forbidden components exactly zero"))
}

fn criterion_4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 0..1000 {
        let p = [3u64, 5, 7][n % 3];
        let c = SeriesContext::new(p, 8, 16).unwrap();
        let pi = p as i64;
        let lam = rng.gen_range(0..6usize);
        let coeffs: Vec<i64> = (0..16)
            .map(|k| {
                let b = rng.gen_range(-300i64..=300);
                match k.cmp(&lam) {
                    std::cmp::Ordering::Less => b * pi,
                    std::cmp::Ordering::Equal => rng.gen_range(1..pi) + pi * b,
                    std::cmp::Ordering::Greater => b,
                }
            })
            .collect();
        let f = c.line(Line::Anti).from_integers(&coeffs);
        let prep = prepare(&f).map_err(|e| format!("case {n}: {e}"))?;
        let back = prep.recompose();
        for k in 0..back.len().min(f.len()) {
            let d = f.coeff(k) - back.coeff(k);
            ensure(
                d.valuation().finite().is_none_or(|v| v >= 6),
                format!("case {n} coefficient {k}"),
            )?;
        }
    }
    let c = ctx();
    let mut done = 0;
    while done < 200 {
        let n = rng.gen_range(1..=3usize);
        let a = Matrix::from_fn(n, n, |_, _| {
            let co: Vec<i64> = (0..3).map(|_| rng.gen_range(-6i64..=6)).collect();
            let f = c.line(Line::Anti).from_integers(&co);
            if rng.gen_bool(0.5) {
                f.mul(&c.line(Line::Anti).var())
            } else {
                f
            }
        });
        let det = a.det().map_err(|e| e.to_string())?;
        if det.is_zero() {
            continue;
        }
        let got = char_ideal_line(&a).map_err(|e| e.to_string())?;
        let cmp = got.equivalent(&IdealGenerator::line(det), 6).map_err(|e| e.to_string())?;
        ensure(cmp.equal, format!("presentation {done}: {}", cmp.detail))?;
        done += 1;
    }
    Ok("1000 round trips at p^6, 200 presentations char ≐ det".into())
}

fn criterion_5() -> Verdict {
    let c = ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let random_series = |rng: &mut ChaCha8Rng| {
        let mut f = c.zero();
        for i in 0..12 {
            for j in 0..12 - i {
                f.set_coeff(i, j, c.scalar(rng.gen_range(-50..=50)));
            }
        }
        f
    };
    for n in 0..1000 {
        let f = random_series(&mut rng);
        let g = random_series(&mut rng);
        ensure(f.tau().tau().agrees(&f, 8), format!("τ∘τ at {n}"))?;
        ensure(f.mul(&g).tau().agrees(&f.tau().mul(&g.tau()), 8), format!("τ(fg) at {n}"))?;
        ensure(f.add(&g).tau().agrees(&f.tau().add(&g.tau()), 8), format!("τ(f+g) at {n}"))?;
    }
    let s = golden::rank3_worked(c).map_err(|e| e.to_string())?;
    for n in 0..100 {
        let b = Matrix::from_fn(3, 3, |i, j| {
            if i == j {
                c.constant(c.scalar(rng.gen_range(1..5)))
                    .add(&c.t().scale(&c.scalar(rng.gen_range(-2..=2))))
            } else if i > j {
                c.s().scale(&c.scalar(rng.gen_range(-2..=2)))
                    .add(&c.constant(c.scalar(rng.gen_range(-2..=2))))
            } else {
                c.zero()
            }
        });
        let m = s.module.module().change_basis(&b).map_err(|e| e.to_string())?;
        let p = s.module.pairing().change_basis(&b).map_err(|e| e.to_string())?;
        ensure(validate_semilinear(&m).pass, format!("semilinear after change {n}"))?;
        let o = validate_hermitian(&p, &m);
        ensure(o.pass, format!("hermitian after change {n}: {}", o.witness))?;
    }
    let l = c.line(Line::Anti);
    for n in 0..100 {
        let eps = if n % 2 == 0 { 1 } else { -1 };
        let a = l.gamma_power(rng.gen_range(-3..=3)).scale(&c.scalar(eps));
        let m = SemiLinearModule::new(Matrix::from_rows(vec![vec![a]]).unwrap()).unwrap();
        let u = l.from_integers(&[rng.gen_range(1..5), rng.gen_range(-9..=9), rng.gen_range(-9..=9)]);
        let moved = m.change_basis(&Matrix::from_rows(vec![vec![u]]).unwrap()).map_err(|e| e.to_string())?;
        let (a, b) = (module_sign(&m).map_err(|e| e.to_string())?, module_sign(&moved).map_err(|e| e.to_string())?);
        ensure(a == b && a as i64 == eps, format!("sign changed at {n}"))?;
    }
    Ok("1000 τ-law cases, 100 basis changes, 100 sign cases".into())
}

fn criterion_6() -> Verdict {
    let text = std::fs::read_to_string(scenario_path("rank3-worked.json")).map_err(|e| e.to_string())?;
    let base = ScenarioFile::from_json(&text).map_err(|e| e.to_string())?;
    let mut rejected = 0;
    for rp in 0..6u32 {
        for rm in 0..6u32 {
            if (rp + rm) % 2 == 1 {
                continue;
            }
            let mut f = base.clone();
            f.arithmetic.r_plus = rp;
            f.arithmetic.r_minus = rm;
            match Scenario::from_file(&f) {
                Err(Error::Parity(msg)) if msg.contains("even") => rejected += 1,
                other => return Err(format!("({rp},{rm}) not rejected for parity: {:?}", other.err())),
            }
            match generate(&GenerateParams::new(3, rp, rm, vec!["T^2".into()]), 0) {
                Err(Error::Parity(_)) => {}
                other => return Err(format!("generator accepted ({rp},{rm}): {:?}", other.err())),
            }
        }
    }
    let path = tmp("even.json");
    let mut f = base.clone();
    f.arithmetic.r_minus = 1;
    std::fs::write(&path, f.to_json()).unwrap();
    let out = run(&["verify", "--scenario", path.to_str().unwrap()]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    ensure(out.status.code() != Some(0) && stderr.contains("parity"), format!("CLI: {stderr}"))?;
    Ok(format!("{rejected} even splits rejected by parser and generator; CLI cites parity"))
}

fn criterion_7() -> Verdict {
    let s = golden::rank3_negative(ctx()).map_err(|e| e.to_string())?;
    let rep = run_verifications(&s);
    let failing: Vec<&str> = rep
        .checks
        .iter()
        .filter(|r| r.status == Status::Fail)
        .map(|r| r.name.as_str())
        .collect();
    let expected = [
        "derived_pairing_surjective",
        "height_conjecture",
        "heegner_l_function",
        "lambda_adic_gross_zagier",
        "anticyclotomic_main_conjecture",
    ];
    ensure(failing == expected, format!("failure set {failing:?}"))?;
    ensure(rep.checks.iter().all(|r| r.status != Status::Skipped), "unexpected skip")?;

    let text = std::fs::read_to_string(scenario_path("rank3-worked.json")).map_err(|e| e.to_string())?;
    let mut f = ScenarioFile::from_json(&text).map_err(|e| e.to_string())?;
    f.arithmetic.c_triv = orthlab_core::scenario::format::ScalarText::Int(2);
    let path = tmp("perturbed.json");
    std::fs::write(&path, f.to_json()).unwrap();
    let out = run(&["verify", "--scenario", path.to_str().unwrap(), "--format", "json"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let bsd = report["checks"]
        .as_array()
        .and_then(|a| a.iter().find(|c| c["name"] == "two_variable_bsd"))
        .ok_or("bsd missing")?;
    ensure(bsd["status"] == "fail" && out.status.code() == Some(1), "perturbed L passed")?;

    let path = tmp("corrupt.json");
    std::fs::write(&path, &text[..text.len() / 2]).unwrap();
    let out = run(&["verify", "--scenario", path.to_str().unwrap()]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    ensure(
        out.status.code() != Some(0) && stderr.contains("parse error") && stderr.contains("line"),
        format!("corrupt file: {stderr}"),
    )?;
    Ok("failure set {3,4,5,6,7}; perturbed BSD fails (exit 1); corrupt file parse error (exit 2)".into())
}

fn criterion_8() -> Verdict {
    let mut outputs = Vec::new();
    for round in 0..2 {
        let scen = tmp(&format!("det-{round}.json"));
        let out = run(&[
            "generate", "--rank", "3", "--r-plus", "2", "--r-minus", "1", "--anti-torsion", "T^2", "--seed", "42",
            "--out", scen.to_str().unwrap(),
        ]);
        ensure(out.status.success(), "generate failed")?;
        let rep = run(&["verify", "--scenario", scen.to_str().unwrap(), "--format", "json"]);
        let batch = run(&["batch", "--seeds", "0..20", "--params", scenario_path("rank3-square-torsion.params.json").to_str().unwrap()]);
        ensure(batch.status.success(), "batch failed")?;
        outputs.push((std::fs::read(&scen).unwrap(), rep.stdout, batch.stdout));
    }
    ensure(outputs[0].0 == outputs[1].0, "scenario bytes differ")?;
    ensure(outputs[0].1 == outputs[1].1, "report bytes differ")?;
    ensure(outputs[0].2 == outputs[1].2, "batch bytes differ")?;
    let other = generate(&GenerateParams::new(3, 2, 1, vec!["T^2".into()]), 43).map_err(|e| e.to_string())?;
    ensure(other.to_json().as_bytes() != outputs[0].0.as_slice().trim_ascii_end(), "seed is ignored")?;
    Ok("scenario, report and batch summary byte-identical across two runs".into())
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("golden worked scenario", criterion_1),
        ("random orthogonal-module suite", criterion_2),
        ("vanishing-pattern suite", criterion_3),
        ("Weierstrass round trip and char ideals", criterion_4),
        ("involution and Hermitian laws", criterion_5),
        ("parity gate", criterion_6),
        ("negative controls", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match verdict {
            Ok(msg) => println!("criterion {} PASS {name}: {msg} [{t:.2?}]", i + 1),
            Err(msg) => {
                failures += 1;
                println!("criterion {} FAIL {name}: {msg} [{t:.2?}]", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}

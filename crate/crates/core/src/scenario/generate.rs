//! Random orthogonal modules with prescribed invariants: one rank-one block plus one block per torsion factor.
//!
//! The module is assembled block by block over `Λ` and then moved to a
//! random basis:
//!
//! * `[[S·g]]` with `τ̃ = ε(1+T)^k`, carrying the rank-one `V(K_anti)`;
//! * for each anticyclotomic factor `f` either a hyperbolic pair
//!   `[[0, x], [τx, 0]]` with `x = S·w + f·v` and `τ̃` swapping the two
//!   vectors, or a diagonal pair `diag(S·w + a·v, S·w' + a·v')` with
//!   `a = f + τf` and `τ̃ = ±1`;
//! * unit `1×1` blocks to reach the requested rank.
//!
//! The regulator Gram matrix is the `K`-derived pairing on an eigenbasis
//! of `τ̃` acting on `V(K)`, with the column twisted by its eigenvalue.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{field_rank, Matrix};
use crate::orthogonal::{derived_gram_k, discriminant, norm_kernel, Field, OrthogonalModule, ORGANIZER_CHECKS};
use crate::padic::PAdicScalar;
use crate::regulators::{regulator_det, EigenGramMatrix};
use crate::series::ideal::IdealGenerator;
use crate::series::{IwasawaSeries, Line, SeriesContext};
use crate::tau_modules::{guard_floor, HermitianPairing, SemiLinearModule, TauGauge};

use super::{Arithmetic, Scenario};

fn default_prime() -> u64 {
    5
}
fn default_prec() -> u32 {
    8
}
fn default_cap() -> usize {
    12
}
fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateParams {
    pub rank: usize,
    pub r_plus: u32,
    pub r_minus: u32,
    /// Cyclic factors `f` of `B`, as integer polynomials in `T`.
    #[serde(default)]
    pub anti_torsion: Vec<String>,
    /// Expected sign of `τ̃` on `V(K_anti)`, if constrained.
    #[serde(default)]
    pub sign: Option<i8>,
    #[serde(default = "default_prime")]
    pub prime: u64,
    #[serde(default = "default_prec")]
    pub coeff_prec: u32,
    #[serde(default = "default_cap")]
    pub degree_cap: usize,
    #[serde(default = "default_true")]
    pub randomize_basis: bool,
}

impl GenerateParams {
    pub fn new(rank: usize, r_plus: u32, r_minus: u32, anti_torsion: Vec<String>) -> Self {
        Self {
            rank,
            r_plus,
            r_minus,
            anti_torsion,
            sign: None,
            prime: default_prime(),
            coeff_prec: default_prec(),
            degree_cap: default_cap(),
            randomize_basis: true,
        }
    }
}

/// Splits `"T^2, T"` into factors; `""` and `"1"` mean no factors.
pub fn split_factor_list(text: &str) -> Vec<String> {
    text.split(',')
        .map(str::trim)
        .filter(|f| !f.is_empty() && *f != "1")
        .map(str::to_string)
        .collect()
}

/// Parses an integer polynomial in `T` such as `6T^2 - 25*T - 25`.
pub fn parse_poly(text: &str) -> Result<Vec<i64>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("cannot read polynomial {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, ch) in s.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut coeffs: Vec<i64> = Vec::new();
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, term.strip_prefix('+').unwrap_or(&term)),
        };
        let (c, k) = match body.find('T') {
            Some(pos) => {
                let c = body[..pos].trim_end_matches('*');
                let rest = &body[pos + 1..];
                let k = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?
                };
                (c, k)
            }
            None => (body, 0),
        };
        let c: i64 = if c.is_empty() { 1 } else { c.parse().map_err(|_| bad())? };
        if coeffs.len() <= k {
            coeffs.resize(k + 1, 0);
        }
        coeffs[k] += sign * c;
    }
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        return Err(Error::Parse(format!("polynomial {text:?} is zero")));
    }
    Ok(coeffs)
}

#[derive(Debug, Clone)]
struct Factor {
    text: String,
    /// `f` as a series in `T` only.
    f: IwasawaSeries,
    vanishing: bool,
    /// `f + τf` generates `(f)`.
    diagonal_ok: bool,
}

fn analyse_factor(ctx: SeriesContext, text: &str) -> Result<Factor> {
    let coeffs = parse_poly(text)?;
    if coeffs.len() > ctx.cap() {
        return Err(Error::Unrealizable(format!("factor {text} exceeds the degree cap")));
    }
    let line = ctx.line(Line::Anti).from_integers(&coeffs);
    if line.is_unit() {
        return Err(Error::Unrealizable(format!(
            "factor {text} has nonzero constant term and is invertible in the line ring"
        )));
    }
    let target = guard_floor(&line);
    let stable = IdealGenerator::line(line.clone()).equivalent(&IdealGenerator::line(line.tau()), target)?;
    if !stable.equal {
        return Err(Error::Unrealizable(format!(
            "factor {text} is not τ-stable, so J would not be τ-stable"
        )));
    }
    let ord = coeffs.iter().position(|&c| c != 0).unwrap_or(0);
    Ok(Factor {
        text: text.to_string(),
        f: IwasawaSeries::from_line(&line),
        vanishing: coeffs[0] == 0,
        diagonal_ok: ord % 2 == 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Hyperbolic,
    Diagonal(i8),
}

struct Block {
    gram: Vec<Vec<IwasawaSeries>>,
    tau: Vec<Vec<IwasawaSeries>>,
}

fn small_poly<R: Rng>(rng: &mut R, ctx: SeriesContext, deg: usize, with_constant: bool) -> IwasawaSeries {
    let mut f = ctx.zero();
    for i in 0..=deg {
        for j in 0..=deg - i {
            if i + j == 0 && !with_constant {
                continue;
            }
            if rng.gen_bool(0.5) {
                f.set_coeff(i, j, ctx.scalar(rng.gen_range(-3..=3)));
            }
        }
    }
    f
}

fn unit_constant<R: Rng>(rng: &mut R, ctx: SeriesContext) -> i64 {
    let p = ctx.prime() as i64;
    let m = rng.gen_range(1..p.min(7));
    if rng.gen_bool(0.5) {
        -m
    } else {
        m
    }
}

fn random_unit<R: Rng>(rng: &mut R, ctx: SeriesContext) -> IwasawaSeries {
    let c = unit_constant(rng, ctx);
    ctx.constant(ctx.scalar(c)).add(&small_poly(rng, ctx, 2, false))
}

fn random_tau_fixed_unit<R: Rng>(rng: &mut R, ctx: SeriesContext) -> IwasawaSeries {
    let c = unit_constant(rng, ctx);
    let h = small_poly(rng, ctx, 2, false);
    ctx.constant(ctx.scalar(c)).add(&h).add(&h.tau())
}

fn block_e1<R: Rng>(rng: &mut R, ctx: SeriesContext, eps: i8) -> Block {
    let g = ctx.s().mul(&random_tau_fixed_unit(rng, ctx));
    let k = rng.gen_range(-2..=2);
    let u = ctx.gamma_anti_power(k).scale(&ctx.scalar(eps as i64));
    Block {
        gram: vec![vec![g]],
        tau: vec![vec![u]],
    }
}

fn block_pair<R: Rng>(rng: &mut R, ctx: SeriesContext, f: &IwasawaSeries, role: Role) -> Block {
    let (z, o) = (ctx.zero(), ctx.one());
    match role {
        Role::Hyperbolic => {
            let x = ctx.s().mul(&random_unit(rng, ctx)).add(&f.mul(&random_unit(rng, ctx)));
            Block {
                gram: vec![vec![z.clone(), x.clone()], vec![x.tau(), z.clone()]],
                tau: vec![vec![z.clone(), o.clone()], vec![o, z]],
            }
        }
        Role::Diagonal(e) => {
            let a = f.add(&f.tau());
            let mut entry = || {
                ctx.s()
                    .mul(&random_tau_fixed_unit(rng, ctx))
                    .add(&a.mul(&random_tau_fixed_unit(rng, ctx)))
            };
            let (d1, d2) = (entry(), entry());
            let e = ctx.constant(ctx.scalar(e as i64));
            Block {
                gram: vec![vec![d1, z.clone()], vec![z.clone(), d2]],
                tau: vec![vec![e.clone(), z.clone()], vec![z, e]],
            }
        }
    }
}

fn block_unit<R: Rng>(rng: &mut R, ctx: SeriesContext) -> Block {
    Block {
        gram: vec![vec![random_tau_fixed_unit(rng, ctx)]],
        tau: vec![vec![ctx.one()]],
    }
}

fn assemble(ctx: SeriesContext, blocks: &[Block]) -> (Matrix<IwasawaSeries>, Matrix<IwasawaSeries>) {
    let n: usize = blocks.iter().map(|b| b.gram.len()).sum();
    let mut g = Matrix::from_fn(n, n, |_, _| ctx.zero());
    let mut u = g.clone();
    let mut at = 0;
    for b in blocks {
        let m = b.gram.len();
        for i in 0..m {
            for j in 0..m {
                g.set(at + i, at + j, b.gram[i][j].clone());
                u.set(at + i, at + j, b.tau[i][j].clone());
            }
        }
        at += m;
    }
    (g, u)
}

/// A random invertible matrix: permuted lower-unitriangular times upper
/// triangular with unit constants on the diagonal.
fn random_basis<R: Rng>(rng: &mut R, ctx: SeriesContext, n: usize) -> Matrix<IwasawaSeries> {
    let lower = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            ctx.one()
        } else if i > j && rng.gen_bool(0.5) {
            small_poly(rng, ctx, 1, true)
        } else {
            ctx.zero()
        }
    });
    let upper = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            ctx.constant(ctx.scalar(unit_constant(rng, ctx)))
        } else if i < j && rng.gen_bool(0.5) {
            small_poly(rng, ctx, 1, true)
        } else {
            ctx.zero()
        }
    });
    let mut b = lower.mul(&upper);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    for (i, &p) in perm.iter().enumerate() {
        if p > i {
            b.swap_rows(i, p);
        }
    }
    b
}

/// Greedy basis of the span of `vs`.
fn independent(vs: Vec<Vec<PAdicScalar>>) -> Vec<Vec<PAdicScalar>> {
    let mut out: Vec<Vec<PAdicScalar>> = Vec::new();
    for v in vs {
        let mut trial = out.clone();
        trial.push(v.clone());
        if field_rank(&Matrix::from_rows(trial).expect("rectangular")) > out.len() {
            out.push(v);
        }
    }
    out
}

/// Eigenbasis of `τ̃` on `V(K)`: `(plus, minus)` as constant lifts.
pub fn eigenbasis(v: &OrthogonalModule) -> Result<(Vec<Vec<IwasawaSeries>>, Vec<Vec<IwasawaSeries>>)> {
    let ctx = v.context();
    let k = norm_kernel(v, Field::K)?;
    let u0 = v.tau_matrix().map(IwasawaSeries::augmentation);
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for x in &k.lifts {
        let x0: Vec<PAdicScalar> = x.iter().map(IwasawaSeries::augmentation).collect();
        let ux = u0.apply(&x0);
        plus.push(x0.iter().zip(&ux).map(|(a, b)| *a + *b).collect());
        minus.push(x0.iter().zip(&ux).map(|(a, b)| *a - *b).collect());
    }
    let lift = |vs: Vec<Vec<PAdicScalar>>| -> Vec<Vec<IwasawaSeries>> {
        independent(vs)
            .into_iter()
            .map(|v| v.into_iter().map(|c| ctx.constant(c)).collect())
            .collect()
    };
    let (p, m) = (lift(plus), lift(minus));
    if p.len() + m.len() != k.rank() {
        return Err(Error::InvalidStructure("τ̃ is not diagonalisable on V(K)".into()));
    }
    Ok((p, m))
}

/// Twisted `K`-derived Gram matrix on an eigenbasis of `V(K)`.
pub fn eigen_regulator(v: &OrthogonalModule, t_idx: PAdicScalar) -> Result<EigenGramMatrix> {
    let (plus, minus) = eigenbasis(v)?;
    let (rp, rm) = (plus.len(), minus.len());
    let basis: Vec<Vec<IwasawaSeries>> = plus.into_iter().chain(minus).collect();
    let plain = derived_gram_k(v, &basis)?;
    let twisted = Matrix::from_fn(rp + rm, rp + rm, |i, j| {
        let e = plain.get(i, j).clone();
        if j < rp {
            e
        } else {
            e.neg()
        }
    });
    EigenGramMatrix::new(rp, rm, t_idx, twisted)
}

fn small_unit_scalar<R: Rng>(rng: &mut R, ctx: SeriesContext, max: i64) -> PAdicScalar {
    let p = ctx.prime() as i64;
    loop {
        let n = rng.gen_range(1..=max);
        if n % p != 0 {
            return ctx.scalar(n);
        }
    }
}

/// Realisable parameters of rank at most `max_rank`, chosen by `seed`.
pub fn sample_params(seed: u64, max_rank: usize) -> GenerateParams {
    const TABLE: &[(usize, u32, u32, &[&str])] = &[
        (1, 1, 0, &[]),
        (1, 0, 1, &[]),
        (2, 1, 0, &[]),
        (2, 0, 1, &[]),
        (3, 2, 1, &["T^2"]),
        (3, 1, 2, &["T"]),
        (3, 3, 0, &["T^2"]),
        (3, 0, 3, &["T^2"]),
        (4, 1, 0, &[]),
        (4, 2, 1, &["T"]),
        (4, 1, 2, &["T^3"]),
        (4, 3, 0, &["T^4"]),
        (4, 0, 1, &[]),
    ];
    let choices: Vec<_> = TABLE.iter().filter(|c| c.0 <= max_rank.max(1)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let (rank, rp, rm, f) = choices[rng.gen_range(0..choices.len())];
    GenerateParams::new(*rank, *rp, *rm, f.iter().map(|x| x.to_string()).collect())
}

pub fn generated_checks() -> Vec<String> {
    ORGANIZER_CHECKS
        .iter()
        .chain(&["prop_deg_vanishing", "two_variable_bsd"])
        .map(|c| c.to_string())
        .collect()
}

/// Generates a scenario with the requested invariants, or explains why
/// they cannot be realised.
pub fn generate(params: &GenerateParams, seed: u64) -> Result<Scenario> {
    let (rp, rm) = (params.r_plus, params.r_minus);
    let r = rp + rm;
    if r % 2 == 0 {
        return Err(Error::Parity(format!("r+ + r- = {r} is even; the rank must be odd")));
    }
    let eps: i8 = if rp > rm { 1 } else { -1 };
    if let Some(s) = params.sign {
        if s != eps {
            return Err(Error::Unrealizable(format!(
                "sign {s:+} contradicts r+ = {rp}, r- = {rm}, which force {eps:+}"
            )));
        }
    }
    let ctx = SeriesContext::new(params.prime, params.coeff_prec, params.degree_cap)?;
    let factors = params
        .anti_torsion
        .iter()
        .map(|t| analyse_factor(ctx, t))
        .collect::<Result<Vec<_>>>()?;
    let vanishing = factors.iter().filter(|f| f.vanishing).count() as u32;
    if r != 1 + 2 * vanishing {
        return Err(Error::Unrealizable(format!(
            "r+ + r- = {r} but the block shape forces 1 + 2·{vanishing} from the factors vanishing at T = 0"
        )));
    }
    let used = 1 + 2 * factors.len();
    if params.rank < used {
        return Err(Error::Unrealizable(format!(
            "rank {} is below 1 + 2·{} needed for the anticyclotomic factors",
            params.rank,
            factors.len()
        )));
    }

    let (lp, lm) = if eps > 0 { (rp - 1, rm) } else { (rp, rm - 1) };
    let mixed = lp.min(lm);
    let (pp, mm) = ((lp - mixed) / 2, (lm - mixed) / 2);
    let mut roles = vec![Role::Hyperbolic; factors.len()];
    let mut wanted: Vec<i8> = std::iter::repeat(1).take(pp as usize).chain(std::iter::repeat(-1).take(mm as usize)).collect();
    for (f, role) in factors.iter().zip(roles.iter_mut()) {
        if f.vanishing && f.diagonal_ok {
            if let Some(e) = wanted.pop() {
                *role = Role::Diagonal(e);
            }
        }
    }
    if !wanted.is_empty() {
        let odd: Vec<&str> = factors.iter().filter(|f| f.vanishing && !f.diagonal_ok).map(|f| f.text.as_str()).collect();
        return Err(Error::Unrealizable(format!(
            "(r+, r-) = ({rp}, {rm}) needs {} τ̃-definite pairs but only factors of even T-order admit them (odd: {})",
            pp + mm,
            odd.join(", ")
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = vec![block_e1(&mut rng, ctx, eps)];
    for (f, role) in factors.iter().zip(&roles) {
        blocks.push(block_pair(&mut rng, ctx, &f.f, *role));
    }
    for _ in used..params.rank {
        blocks.push(block_unit(&mut rng, ctx));
    }
    let (mut g, mut u) = assemble(ctx, &blocks);
    let mut gauge = random_unit(&mut rng, ctx);
    if params.randomize_basis {
        let b = random_basis(&mut rng, ctx, params.rank);
        let tb = b.tau();
        let bi = b.inverse()?;
        g = b.transpose().mul(&g).mul(&tb);
        u = bi.mul(&u).mul(&tb);
        let db = b.det()?;
        gauge = gauge.mul(&db.mul(&db.tau()).inverse()?);
    }
    let v = OrthogonalModule::new(
        SemiLinearModule::new(u)?,
        HermitianPairing::new(g)?,
        TauGauge::new(gauge)?,
    )?;

    let pc = ctx.padic();
    let t_idx = pc.one();
    let reg = eigen_regulator(&v, t_idx)?;
    if (reg.r_plus() as u32, reg.r_minus() as u32) != (rp, rm) {
        return Err(Error::InvalidStructure(format!(
            "constructed eigenspaces ({}, {}) differ from the requested ({rp}, {rm})",
            reg.r_plus(),
            reg.r_minus()
        )));
    }
    let sha = small_unit_scalar(&mut rng, ctx, 3).pow(2);
    let tamagawa = small_unit_scalar(&mut rng, ctx, 4);
    let modular_degree = small_unit_scalar(&mut rng, ctx, 6);
    let lf = discriminant(&v)?.leading_form()?;
    let rf = regulator_det(&reg)?.form().scale(&(sha * tamagawa));
    let j = (0..=rf.degree())
        .find(|&j| !rf.component(j).is_zero())
        .ok_or_else(|| Error::InvalidStructure("regulator vanishes".into()))?;
    if lf.degree() != rf.degree() {
        return Err(Error::InvalidStructure(format!(
            "leading form degree {} differs from r = {}",
            lf.degree(),
            rf.degree()
        )));
    }
    let c_triv = lf.component(j).div(&rf.component(j))?;
    Scenario::new(
        v,
        Arithmetic {
            r_plus: rp,
            r_minus: rm,
            modular_degree,
            sha,
            tamagawa,
            c_triv,
            t_idx,
        },
        Some(reg),
        generated_checks(),
        seed,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::run_verifications;

    #[test]
    fn polynomial_parser() {
        assert_eq!(parse_poly("T^2").unwrap(), vec![0, 0, 1]);
        assert_eq!(parse_poly("6T^2 - 25*T - 25").unwrap(), vec![-25, -25, 6]);
        assert_eq!(parse_poly("T+5").unwrap(), vec![5, 1]);
        assert!(parse_poly("T^x").is_err());
        assert_eq!(split_factor_list("T^2, T"), vec!["T^2", "T"]);
        assert!(split_factor_list("1").is_empty());
    }

    #[test]
    fn rank_one_trivial_b() {
        let s = generate(&GenerateParams::new(1, 1, 0, vec![]), 3).unwrap();
        assert_eq!(s.module.rank(), 1);
        let rep = run_verifications(&s);
        assert!(rep.all_passed(), "{}", rep.to_text());
    }

    #[test]
    fn rank_three_square_torsion() {
        for (rp, rm) in [(2, 1), (1, 2), (3, 0), (0, 3)] {
            let s = generate(&GenerateParams::new(3, rp, rm, vec!["T^2".into()]), 42).unwrap();
            let rep = run_verifications(&s);
            assert!(rep.all_passed(), "({rp},{rm})\n{}", rep.to_text());
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let p = GenerateParams::new(4, 2, 1, vec!["T".into()]);
        assert_eq!(generate(&p, 9).unwrap().to_json(), generate(&p, 9).unwrap().to_json());
        assert_ne!(generate(&p, 9).unwrap().to_json(), generate(&p, 10).unwrap().to_json());
    }

    #[test]
    fn unrealizable_requests() {
        let e = generate(&GenerateParams::new(3, 2, 2, vec!["T^2".into()]), 0).unwrap_err();
        assert!(matches!(e, Error::Parity(_)));
        let mut p = GenerateParams::new(3, 2, 1, vec!["T^2".into()]);
        p.sign = Some(-1);
        assert!(matches!(generate(&p, 0), Err(Error::Unrealizable(_))));
        let p = GenerateParams::new(3, 3, 0, vec!["T".into()]);
        assert!(matches!(generate(&p, 0), Err(Error::Unrealizable(_))));
        let p = GenerateParams::new(3, 1, 0, vec!["T^2".into()]);
        assert!(matches!(generate(&p, 0), Err(Error::Unrealizable(_))));
        let p = GenerateParams::new(3, 2, 1, vec!["T+5".into()]);
        assert!(matches!(generate(&p, 0), Err(Error::Unrealizable(_))));
    }
}

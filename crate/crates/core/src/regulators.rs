//! Height Gram matrices with values in `Γ ⊗ Q_p`, the two-variable
//! regulator and its bidegree components.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::padic::{PAdicContext, PAdicScalar};
use crate::series::{GradedElement, IwasawaSeries};
use crate::tau_modules::Outcome;

/// Gram matrix on a basis whose first `r_plus` vectors are `τ`-invariant
/// and whose last `r_minus` vectors are `τ`-anti-invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenGramMatrix {
    r_plus: usize,
    r_minus: usize,
    t_idx: PAdicScalar,
    entries: Matrix<GradedElement>,
}

impl EigenGramMatrix {
    /// Validates symmetry and the block pattern; components forbidden by
    /// the pattern are stored as exact zeros.
    pub fn new(
        r_plus: usize,
        r_minus: usize,
        t_idx: PAdicScalar,
        entries: Matrix<GradedElement>,
    ) -> Result<Self> {
        let r = r_plus + r_minus;
        if entries.rows() != r || entries.cols() != r || r == 0 {
            return Err(Error::Dimension(format!(
                "{}x{} Gram for r+ = {r_plus}, r- = {r_minus}",
                entries.rows(),
                entries.cols()
            )));
        }
        if t_idx.is_zero() {
            return Err(Error::InvalidStructure("index t must be nonzero".into()));
        }
        let ctx = t_idx.context();
        let floor = ctx.precision() as i64 - 2;
        let mut clean = entries.clone();
        for i in 0..r {
            for j in 0..r {
                let e = entries.get(i, j);
                if e.degree() != 1 {
                    return Err(Error::InvalidStructure(format!(
                        "entry ({i},{j}) has degree {}",
                        e.degree()
                    )));
                }
                if !e.agrees(entries.get(j, i), floor) {
                    return Err(Error::InvalidStructure(format!("entry ({i},{j}) is not symmetric")));
                }
                let same = (i < r_plus) == (j < r_plus);
                let forbidden = if same { 1 } else { 0 };
                if !e.component(forbidden).is_zero() {
                    let part = if same { "t" } else { "s" };
                    return Err(Error::InvalidStructure(format!(
                        "entry ({i},{j}) has a nonzero {part}-component, forbidden by the block pattern"
                    )));
                }
                let mut comps = e.components().to_vec();
                comps[forbidden] = ctx.zero();
                clean.set(i, j, GradedElement::new(ctx, 1, comps));
            }
        }
        Ok(Self {
            r_plus,
            r_minus,
            t_idx,
            entries: clean,
        })
    }

    pub fn r_plus(&self) -> usize {
        self.r_plus
    }

    pub fn r_minus(&self) -> usize {
        self.r_minus
    }

    pub fn rank(&self) -> usize {
        self.r_plus + self.r_minus
    }

    pub fn t_idx(&self) -> PAdicScalar {
        self.t_idx
    }

    pub fn entries(&self) -> &Matrix<GradedElement> {
        &self.entries
    }

    pub fn context(&self) -> PAdicContext {
        self.t_idx.context()
    }

    /// Whether component `j` may be nonzero.
    pub fn allowed(&self, j: usize) -> bool {
        j % 2 == 0 && j <= 2 * self.r_plus.min(self.r_minus)
    }
}

/// `R = t^-2 det⟨P_i, P_j⟩`, homogeneous of degree `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegulatorElement {
    form: GradedElement,
}

impl RegulatorElement {
    pub fn degree(&self) -> usize {
        self.form.degree()
    }

    pub fn form(&self) -> &GradedElement {
        &self.form
    }
}

pub fn regulator_det(g: &EigenGramMatrix) -> Result<RegulatorElement> {
    let ctx = g.context();
    let det = crate::linalg::laplace_det(g.entries())
        .unwrap_or_else(|| GradedElement::zero(ctx, g.rank()));
    let scale = g.t_idx.pow(2).inv()?;
    Ok(RegulatorElement {
        form: det.scale(&scale),
    })
}

/// The component `R^{r-j, j}`.
pub fn bidegree_projection(r: &RegulatorElement, j: usize) -> Result<PAdicScalar> {
    if j > r.degree() {
        return Err(Error::Dimension(format!("j = {j} exceeds degree {}", r.degree())));
    }
    Ok(r.form.component(j))
}

/// Forbidden components are exactly zero.
pub fn vanishing_pattern_check(g: &EigenGramMatrix) -> Result<Outcome> {
    let reg = regulator_det(g)?;
    for j in 0..=reg.degree() {
        if !g.allowed(j) && !reg.form.component(j).is_exact_zero() {
            return Ok(Outcome::fail(format!(
                "R^({},{j}) = {} is not exactly zero",
                reg.degree() - j,
                reg.form.component(j)
            )));
        }
    }
    Ok(Outcome::pass(format!(
        "R = {}; forbidden components exactly zero",
        reg.form
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NondegeneracyReport {
    /// `(j, nonzero)` for every allowed `j`.
    pub components: Vec<(usize, bool)>,
    pub maximal: bool,
}

pub fn nondegeneracy_report(g: &EigenGramMatrix) -> Result<NondegeneracyReport> {
    let reg = regulator_det(g)?;
    let components: Vec<(usize, bool)> = (0..=reg.degree())
        .filter(|&j| g.allowed(j))
        .map(|j| (j, !reg.form.component(j).is_zero()))
        .collect();
    let maximal = components.iter().all(|&(_, nz)| nz);
    Ok(NondegeneracyReport {
        components,
        maximal,
    })
}

/// Arithmetic constants entering the leading-term congruence.
#[derive(Debug, Clone, PartialEq)]
pub struct BsdData {
    pub sha: PAdicScalar,
    pub tamagawa: PAdicScalar,
    pub c_triv: PAdicScalar,
    pub rank: usize,
}

/// `L ∈ I^r` and `L ≡ c · #Ш · Π c_v · R mod I^{r+1}`.
pub fn bsd_leading_term_check(l: &IwasawaSeries, g: &EigenGramMatrix, data: &BsdData) -> Result<Outcome> {
    if data.rank % 2 == 0 {
        return Err(Error::Parity(format!("rank {} is even", data.rank)));
    }
    if data.rank != g.rank() {
        return Err(Error::Dimension(format!(
            "rank {} but the Gram matrix has size {}",
            data.rank,
            g.rank()
        )));
    }
    for (name, x) in [("sha", data.sha), ("tamagawa", data.tamagawa), ("c_triv", data.c_triv)] {
        if x.is_zero() {
            return Err(Error::InvalidStructure(format!("{name} is zero")));
        }
    }
    let lf = l.leading_form()?;
    let reg = regulator_det(g)?;
    let rhs = reg.form.scale(&(data.c_triv * data.sha * data.tamagawa));
    let r = data.rank;
    let floor = l.context().precision() as i64 - 2;
    if lf.degree() < r {
        return Ok(Outcome::fail(format!(
            "L has leading degree {} < r = {r}: leading form {lf}",
            lf.degree()
        )));
    }
    if lf.degree() > r {
        let ok = rhs.is_zero();
        return Ok(if ok {
            Outcome::pass(format!("L ∈ I^{} and the regulator vanishes", lf.degree()))
        } else {
            Outcome::fail(format!("L ∈ I^{} but c·#Ш·Πc_v·R = {rhs}", lf.degree()))
        });
    }
    let ok = lf.agrees(&rhs, floor);
    let msg = format!("leading form {lf} vs c·#Ш·Πc_v·R = {rhs}");
    Ok(if ok { Outcome::pass(msg) } else { Outcome::fail(msg) })
}

/// A random valid Gram matrix with small integer coefficients.
pub fn random_eigen_gram<R: Rng>(
    rng: &mut R,
    ctx: PAdicContext,
    r_plus: usize,
    r_minus: usize,
) -> Result<EigenGramMatrix> {
    let r = r_plus + r_minus;
    let mut rows = vec![vec![GradedElement::zero(ctx, 1); r]; r];
    for i in 0..r {
        for j in i..r {
            let c = ctx.integer(rng.gen_range(-20..=20));
            let same = (i < r_plus) == (j < r_plus);
            let e = if same {
                GradedElement::linear(c, ctx.zero())
            } else {
                GradedElement::linear(ctx.zero(), c)
            };
            rows[i][j] = e.clone();
            rows[j][i] = e;
        }
    }
    EigenGramMatrix::new(r_plus, r_minus, ctx.one(), Matrix::from_rows(rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::SeriesContext;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pc() -> PAdicContext {
        PAdicContext::new(5, 8).unwrap()
    }

    fn s(c: PAdicContext, a: i64) -> GradedElement {
        GradedElement::linear(c.integer(a), c.zero())
    }

    fn t(c: PAdicContext, b: i64) -> GradedElement {
        GradedElement::linear(c.zero(), c.integer(b))
    }

    #[test]
    fn rank_one_and_index() {
        let c = pc();
        let g = EigenGramMatrix::new(1, 0, c.one(), Matrix::from_rows(vec![vec![s(c, 7)]]).unwrap()).unwrap();
        let r = regulator_det(&g).unwrap();
        assert_eq!(bidegree_projection(&r, 0).unwrap(), c.integer(7));
        let g2 = EigenGramMatrix::new(1, 0, c.integer(2), g.entries().clone()).unwrap();
        let r2 = regulator_det(&g2).unwrap();
        assert_eq!(bidegree_projection(&r2, 0).unwrap(), c.rational(7, 4).unwrap());
    }

    #[test]
    fn worked_regulator() {
        let c = pc();
        let z = GradedElement::zero(c, 1);
        let m = Matrix::from_rows(vec![
            vec![s(c, 1), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), s(c, 1)],
            vec![z.clone(), s(c, 1), z],
        ])
        .unwrap();
        let g = EigenGramMatrix::new(3, 0, c.one(), m).unwrap();
        let r = regulator_det(&g).unwrap();
        assert_eq!(r.form().to_string(), "-1*s^3");
        assert_eq!(bidegree_projection(&r, 2).unwrap(), c.zero());
        let rep = nondegeneracy_report(&g).unwrap();
        assert_eq!(rep.components, vec![(0, true)]);
        assert!(rep.maximal);
        assert!(vanishing_pattern_check(&g).unwrap().pass);
    }

    #[test]
    fn pattern_violation_is_rejected() {
        let c = pc();
        let m = Matrix::from_rows(vec![vec![t(c, 1)]]).unwrap();
        assert!(EigenGramMatrix::new(1, 0, c.one(), m).is_err());
        let m = Matrix::from_rows(vec![vec![s(c, 1), s(c, 1)], vec![s(c, 1), s(c, 2)]]).unwrap();
        assert!(EigenGramMatrix::new(1, 1, c.one(), m).is_err());
    }

    #[test]
    fn mixed_block_degeneracy() {
        let c = pc();
        let z = GradedElement::zero(c, 1);
        let m = Matrix::from_rows(vec![
            vec![s(c, 2), z.clone(), z.clone()],
            vec![z.clone(), s(c, 3), z.clone()],
            vec![z.clone(), z, s(c, 5)],
        ])
        .unwrap();
        let g = EigenGramMatrix::new(2, 1, c.one(), m).unwrap();
        let rep = nondegeneracy_report(&g).unwrap();
        assert_eq!(rep.components, vec![(0, true), (2, false)]);
        assert!(!rep.maximal);
    }

    #[test]
    fn generic_two_one_split() {
        let c = pc();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = random_eigen_gram(&mut rng, c, 2, 1).unwrap();
        let r = regulator_det(&g).unwrap();
        // direct 3x3 expansion: rows (a s, b s, x t), (b s, d s, y t), (x t, y t, e s)
        let e = |i, j, k| g.entries().get(i, j).component(k);
        let (a, b, d, ee) = (e(0, 0, 0), e(0, 1, 0), e(1, 1, 0), e(2, 2, 0));
        let (x, y) = (e(0, 2, 1), e(1, 2, 1));
        let j0 = a * d * ee - b * b * ee;
        let j2 = -(a * y * y) + b * x * y + b * y * x - d * x * x;
        assert_eq!(r.form().component(0), j0);
        assert_eq!(r.form().component(2), j2);
        assert!(r.form().component(1).is_exact_zero());
        assert!(r.form().component(3).is_exact_zero());
    }

    #[test]
    fn bsd_checks() {
        let sc = SeriesContext::new(5, 8, 12).unwrap();
        let c = sc.padic();
        let z = GradedElement::zero(c, 1);
        let m = Matrix::from_rows(vec![
            vec![s(c, 1), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), s(c, 1)],
            vec![z.clone(), s(c, 1), z],
        ])
        .unwrap();
        let g = EigenGramMatrix::new(3, 0, c.one(), m).unwrap();
        let data = BsdData {
            sha: c.one(),
            tamagawa: c.one(),
            c_triv: c.one(),
            rank: 3,
        };
        let l = sc.s().pow(3).neg().add(&sc.s().pow(2).mul(&sc.t().pow(2)));
        assert!(bsd_leading_term_check(&l, &g, &data).unwrap().pass);
        let perturbed = l.add(&sc.s().pow(3));
        assert!(!bsd_leading_term_check(&perturbed, &g, &data).unwrap().pass);
        let deeper = sc.s().pow(4);
        assert!(!bsd_leading_term_check(&deeper, &g, &data).unwrap().pass);
        let even = BsdData { rank: 2, ..data };
        assert!(matches!(bsd_leading_term_check(&l, &g, &even), Err(Error::Parity(_))));
    }
}

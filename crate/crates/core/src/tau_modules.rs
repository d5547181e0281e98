//! Free modules with a semi-linear involution, `τ`-Hermitian pairings and
//! gauges.
//!
//! A module of rank `r` has standard basis `e_i`; the lift `τ̃` acts by
//! `τ̃(v) = U τ(v)`, so column `i` of `U` is `τ̃(e_i)`. The pairing is
//! `π(x ⊗ y) = Σ x_i τ(y_j) G_ij`, linear in the first slot and
//! `τ`-linear in the second.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, RingElement};
use crate::padic::PAdicScalar;
use crate::series::{IwasawaSeries, LineSeries};

/// Result of a structural check, with a witness when it fails.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub witness: String,
}

impl Outcome {
    pub fn pass(witness: impl Into<String>) -> Self {
        Self {
            pass: true,
            witness: witness.into(),
        }
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        Self {
            pass: false,
            witness: witness.into(),
        }
    }
}

/// Valuation floor used for "equal at working precision".
pub fn guard_floor<R: RingElement>(sample: &R) -> i64 {
    sample.precision() as i64 - 2
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemiLinearModule<R> {
    tau_matrix: Matrix<R>,
}

impl<R: RingElement> SemiLinearModule<R> {
    pub fn new(tau_matrix: Matrix<R>) -> Result<Self> {
        if !tau_matrix.is_square() || tau_matrix.rows() == 0 {
            return Err(Error::Dimension(format!(
                "τ-matrix must be square and nonempty, got {}x{}",
                tau_matrix.rows(),
                tau_matrix.cols()
            )));
        }
        Ok(Self { tau_matrix })
    }

    pub fn rank(&self) -> usize {
        self.tau_matrix.rows()
    }

    pub fn tau_matrix(&self) -> &Matrix<R> {
        &self.tau_matrix
    }

    /// `τ̃(v) = U τ(v)`.
    pub fn act(&self, v: &[R]) -> Vec<R> {
        let tv: Vec<R> = v.iter().map(RingElement::tau).collect();
        self.tau_matrix.apply(&tv)
    }

    /// The module in the basis given by the columns of `b`.
    pub fn change_basis(&self, b: &Matrix<R>) -> Result<Self> {
        let inv = b.inverse()?;
        Self::new(inv.mul(&self.tau_matrix).mul(&b.tau()))
    }
}

/// Checks `τ̃² = 1`, i.e. `U τ(U) = 1`.
pub fn validate_semilinear<R: RingElement>(m: &SemiLinearModule<R>) -> Outcome {
    let u = m.tau_matrix();
    let prod = u.mul(&u.tau());
    let floor = guard_floor(u.get(0, 0));
    let one = u.get(0, 0).one_like();
    let zero = u.get(0, 0).zero_like();
    for i in 0..m.rank() {
        for j in 0..m.rank() {
            let want = if i == j { &one } else { &zero };
            if !prod.get(i, j).agrees(want, floor) {
                return Outcome::fail(format!(
                    "(U τ(U))[{i}][{j}] = {} instead of {want}",
                    prod.get(i, j)
                ));
            }
        }
    }
    Outcome::pass(format!("U τ(U) = 1 at p^{floor}"))
}

/// The Gram matrix `G_ij = π(e_i ⊗ e_j)` of a pairing.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianPairing<R> {
    gram: Matrix<R>,
}

impl<R: RingElement> HermitianPairing<R> {
    pub fn new(gram: Matrix<R>) -> Result<Self> {
        if !gram.is_square() || gram.rows() == 0 {
            return Err(Error::Dimension("Gram matrix must be square and nonempty".into()));
        }
        Ok(Self { gram })
    }

    pub fn gram(&self) -> &Matrix<R> {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    /// `π(x ⊗ y) = x^T G τ(y)`.
    pub fn pair(&self, x: &[R], y: &[R]) -> R {
        let ty: Vec<R> = y.iter().map(RingElement::tau).collect();
        let gy = self.gram.apply(&ty);
        let mut acc = gy[0].zero_like();
        for (a, b) in x.iter().zip(&gy) {
            if a.is_exact_zero() || b.is_exact_zero() {
                continue;
            }
            acc = acc.add(&a.mul(b));
        }
        acc
    }

    /// Gram matrix in the basis given by the columns of `b`: `B^T G τ(B)`.
    pub fn change_basis(&self, b: &Matrix<R>) -> Result<Self> {
        Self::new(b.transpose().mul(&self.gram).mul(&b.tau()))
    }
}

fn basis_vector<R: RingElement>(sample: &R, n: usize, i: usize) -> Vec<R> {
    (0..n)
        .map(|k| if k == i { sample.one_like() } else { sample.zero_like() })
        .collect()
}

/// The law `π(m ⊗ n) = τ(π(n ⊗ m)) = π(τ̃n ⊗ τ̃m)` on every pair of basis
/// vectors.
pub fn validate_hermitian<R: RingElement>(
    pairing: &HermitianPairing<R>,
    module: &SemiLinearModule<R>,
) -> Outcome {
    let n = pairing.rank();
    if module.rank() != n {
        return Outcome::fail(format!(
            "pairing has rank {n} but the module has rank {}",
            module.rank()
        ));
    }
    let sample = pairing.gram().get(0, 0);
    let floor = guard_floor(sample);
    let basis: Vec<Vec<R>> = (0..n).map(|i| basis_vector(sample, n, i)).collect();
    let images: Vec<Vec<R>> = basis.iter().map(|e| module.act(e)).collect();
    for i in 0..n {
        for j in 0..n {
            let lhs = pairing.pair(&basis[i], &basis[j]);
            let swapped = pairing.pair(&basis[j], &basis[i]).tau();
            if !lhs.agrees(&swapped, floor) {
                return Outcome::fail(format!(
                    "π(e{i}⊗e{j}) = {lhs} but τπ(e{j}⊗e{i}) = {swapped}"
                ));
            }
            let moved = pairing.pair(&images[j], &images[i]);
            if !lhs.agrees(&moved, floor) {
                return Outcome::fail(format!(
                    "π(e{i}⊗e{j}) = {lhs} but π(τ̃e{j}⊗τ̃e{i}) = {moved}"
                ));
            }
        }
    }
    Outcome::pass(format!("{} basis pairs agree at p^{floor}", n * n))
}

/// Action of `τ̃` on the top exterior power: multiplication by `det U`.
pub fn det_semilinear<R: RingElement>(m: &SemiLinearModule<R>) -> Result<R> {
    m.tau_matrix().det()
}

/// `±1` from a scalar that should be one of them.
pub fn sign_of(x: &PAdicScalar) -> Result<i8> {
    let floor = x.context().precision() as i64 - 2;
    let one = x.context().one();
    if x.agrees(&one, floor) {
        Ok(1)
    } else if x.agrees(&-one, floor) {
        Ok(-1)
    } else {
        Err(Error::InvalidStructure(format!("{x} is not ±1")))
    }
}

/// Sign of `τ̃` on a rank-one module over the anticyclotomic line.
pub fn module_sign(m: &SemiLinearModule<LineSeries>) -> Result<i8> {
    if m.rank() != 1 {
        return Err(Error::Dimension(format!(
            "sign needs rank 1, module has rank {}",
            m.rank()
        )));
    }
    sign_of(&m.tau_matrix().get(0, 0).constant_term())
}

/// The isomorphism `det(V*) ≅ det(V^(τ))` in the standard bases.
#[derive(Debug, Clone, PartialEq)]
pub struct TauGauge {
    unit: IwasawaSeries,
}

impl TauGauge {
    pub fn new(unit: IwasawaSeries) -> Result<Self> {
        if !unit.is_unit() {
            return Err(Error::NotUnit(format!("gauge {unit}")));
        }
        Ok(Self { unit })
    }

    pub fn unit(&self) -> &IwasawaSeries {
        &self.unit
    }
}

impl fmt::Display for TauGauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.unit)
    }
}

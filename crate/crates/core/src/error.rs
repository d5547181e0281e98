use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid p-adic context: {0}")]
    InvalidContext(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("inversion of a value indistinguishable from zero")]
    DivisionByZero,
    #[error("input is indistinguishable from zero at working precision")]
    ZeroInput,
    #[error("not a unit: {0}")]
    NotUnit(String),
    #[error("Weierstrass degree {degree} is not below the degree cap {cap}")]
    DegreeTooLarge { degree: usize, cap: usize },
    #[error("cokernel is not torsion: {0}")]
    NotTorsion(String),
    #[error("nonzero anticyclotomic projection (constant term does not vanish)")]
    NonzeroConstantTerm,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("gcd did not stabilise within the degree bound: {0}")]
    GcdBound(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("vector is not in the norm kernel: {0}")]
    NotInKernel(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("unrealizable invariants: {0}")]
    Unrealizable(String),
    #[error("malformed scenario: {0}")]
    Scenario(String),
}

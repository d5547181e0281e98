//! Two-variable Iwasawa algebra computations for orthogonal τ-modules.

pub mod error;
pub mod padic;
pub mod series;

pub use error::{Error, Result};
pub use padic::{PAdicContext, PAdicScalar, Valuation};
pub use series::{GradedElement, IwasawaSeries, Line, LineSeries, SeriesContext};
pub mod linalg;
pub mod tau_modules;
pub mod orthogonal;
pub mod verdict;
pub mod regulators;
pub mod scenario;

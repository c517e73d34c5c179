//! Exact rational multivariate polynomials and the `f^s` power module on
//! which Cayley-type differentiation is performed.
//!
//! Everything here is exact: coefficients are arbitrary-precision rationals
//! and no floating point appears. Values are immutable and freely shareable.

mod poly;
mod power;
mod var;

pub use poly::MultiPoly;
pub use power::PowerElem;
pub use var::{Monomial, VarId};

/// Errors of the exact-algebra layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraError {
    /// Attempted to differentiate with respect to the formal symbol `s`.
    FormalSymbolDerivative,
    /// Two power elements with different bases were combined or compared.
    BaseMismatch,
    /// A power element was constructed over the zero polynomial.
    ZeroBase,
}

impl std::fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlgebraError::FormalSymbolDerivative => {
                write!(f, "the formal power symbol s cannot be differentiated")
            }
            AlgebraError::BaseMismatch => write!(f, "power elements have different bases"),
            AlgebraError::ZeroBase => write!(f, "power element base must be nonzero"),
        }
    }
}

impl std::error::Error for AlgebraError {}

//! Error type shared across the crate.
//!
//! Several "failures" here are meaningful mathematical answers rather than
//! bugs: a series whose exponent/parity combination has no closed form in
//! ℚ\[π\] reports [`Error::NotClosedForm`], and an integral that is not π
//! times a π-polynomial reports [`Error::NotPiPolynomial`]. Callers are
//! expected to match on these.

use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A polynomial in π exceeded the supported degree.
    #[error("degree {got} exceeds the maximum supported degree {max}")]
    DegreeTooLarge { got: usize, max: usize },

    /// A series term has an exponent/kind combination with no closed form
    /// in ℚ[π]: closed forms exist exactly for sin with odd p ≥ 1, cos with
    /// even p ≥ 2, and constant (frequency-zero) terms with even p ≥ 2.
    #[error("no closed form in Q[pi] for {detail}")]
    NotClosedForm { detail: String },

    /// A series does not converge (or has no bounded tail), e.g. Σ cos(βn)
    /// with p = 0, or Σ 1/n.
    #[error("series diverges: {detail}")]
    Divergent { detail: String },

    /// An exact quantity was expected to be π·(polynomial in π) but its
    /// constant term is nonzero, so dividing by π leaves ℚ[π].
    #[error("quantity is not pi times a polynomial in pi: constant term {constant} is nonzero")]
    NotPiPolynomial { constant: String },

    /// A piecewise function failed structural validation.
    #[error("invalid piecewise function: {detail}")]
    InvalidPiecewise { detail: String },

    /// A point lies outside the domain of a piecewise function.
    #[error("point {point} lies outside the function domain")]
    OutOfDomain { point: String },

    /// Generic invalid input with a human-readable explanation.
    #[error("invalid input: {detail}")]
    InvalidInput { detail: String },

    /// Lattice reduction received linearly dependent basis vectors.
    #[error("lattice basis is linearly dependent")]
    DependentBasis,

    /// A segment has too few samples (or too little rank) to determine its
    /// polynomial coefficients.
    #[error("underdetermined segment: {detail}")]
    UnderdeterminedSegment { detail: String },

    /// A fitted coefficient could not be recognized in the requested basis.
    #[error("coefficient {value} was not recognized in the basis (residual floor {residual})")]
    UnrecognizedCoefficient { value: String, residual: String },

    /// Parse error in the series expression mini-language.
    #[error("parse error at byte {position}: {detail}")]
    Parse { position: usize, detail: String },

    /// An identity id that is not in the catalog.
    #[error("unknown identity id {id:?}")]
    UnknownIdentity { id: String },

    /// JSON (de)serialization failure.
    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

impl Error {
    /// Shorthand for [`Error::InvalidInput`].
    pub fn invalid(detail: impl Into<String>) -> Self {
        Error::InvalidInput {
            detail: detail.into(),
        }
    }
}

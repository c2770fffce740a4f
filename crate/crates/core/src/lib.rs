//! Exact experimental mathematics for trigonometric series.
//!
//! This crate answers three kinds of question, all in exact arithmetic over
//! ℚ\[π\] (polynomials in π with rational coefficients):
//!
//! * **Summation.** Many series built from products and powers of
//!   sin(αn)/nᵖ have closed forms that are polynomials in π, e.g.
//!   Σₙ sin(n)/n = Σₙ (sin n / n)² = (π−1)/2. The [`closedform`] module
//!   expands such products into linear combinations of sin(βn)/nᵖ and
//!   cos(βn)/nᵖ and sums each one exactly via Bernoulli polynomials.
//! * **Expansion.** A piecewise polynomial on \[0, π\] or \[−π, π\] has
//!   Fourier coefficients that are again exact expressions of the same
//!   shape; the [`fourier`] module computes them symbolically, so e.g. the
//!   triangular pulse maps to coefficients sin(n)/n².
//! * **Recognition.** Going backwards: given only the numeric values of a
//!   series, [`reconstruct`] locates breakpoints from finite differences,
//!   fits exact rational polynomials per segment, recognizes the fitted
//!   numbers as elements of ℚ\[π\] by lattice reduction ([`relation`]), and
//!   closes the loop by re-expanding the candidate and comparing exactly.
//!
//! Floating point appears only where it is honest to use it: fast sampling
//! for plots and fitting. Everything that claims to be a *verification*
//! runs either in exact rational/π-polynomial arithmetic or in dyadic
//! interval arithmetic with rigorous error bounds ([`numeric`]).
//!
//! The [`catalog`] module ships a registry of classical identities (square
//! waves, sinc-power sums, Parseval checks, near-miss counterexamples) that
//! exercises every path above; the companion CLI exposes it as `sincsum
//! verify`.

pub mod catalog;
pub mod closedform;
pub mod error;
pub mod exactnum;
pub mod expr;
pub mod fourier;
pub mod numeric;
pub mod piecewise;
pub mod reconstruct;
pub mod relation;
pub mod series;

pub use catalog::{
    find_identity, list_identities, verify_all, verify_identity, verify_on_interval, Check,
    ExteriorPoint, Identity, Mode, Status, VerificationMode, VerificationReport,
};
pub use error::Error;
pub use exactnum::angle::Angle;
pub use exactnum::pipoly::{PiPoly, Sign};
pub use expr::{parse_constant, parse_product_expression};
pub use numeric::{GridSpec, PartialSumResult, SampleSet};
pub use piecewise::{DomainKind, Parity, Piece, PiecewiseFunction, XPolynomial};
pub use reconstruct::{
    detect_breakpoints, fit_segments, recognize_coefficients, reconstruct, verify_roundtrip,
    BreakpointCandidates, FitConstraints, PipelineConfig, PipelineResult, RoundtripReport,
    RoundtripVerdict, SegmentFit, SegmentationHypothesis,
};
pub use relation::{recognize_constant, Lattice, RecognitionResult};
pub use series::{CoefficientFormula, SeriesExpression, SineSeries, TrigKind, TrigTerm};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

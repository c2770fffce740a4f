//! Exact number types: rationals, dyadic interval arithmetic, polynomials
//! in π, and angles of the form r + s·π.
//!
//! The design premise is that every constant this crate manipulates lives
//! in ℚ\[π\], the ring of polynomials in π with rational coefficients. π is
//! transcendental, so a nonzero polynomial never evaluates to zero; signs
//! and decimal expansions can therefore be decided exactly by evaluating
//! with dyadic interval arithmetic at increasing precision until the
//! interval excludes zero (or pins down the requested digits).

pub mod angle;
pub mod dyadic;
pub mod pipoly;
pub mod rational;

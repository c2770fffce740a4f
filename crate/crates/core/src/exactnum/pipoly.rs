//! Polynomials in π with exact rational coefficients: the constant ring of
//! the whole crate.
//!
//! Because π is transcendental, the map (c₀, …, c_d) ↦ Σ cₖπᵏ is injective:
//! two values are equal iff their coefficient vectors are, and a nonzero
//! polynomial has a decidable sign (evaluate in interval arithmetic at
//! growing precision until zero is excluded). That turns "is this identity
//! exact?" into a finite computation.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as DeError;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

use crate::exactnum::dyadic::{Ctx, Iv};
use crate::exactnum::rational::{self, decimal_string, format_scaled_integer, Round};
use crate::error::Error;
use crate::Result;

/// Largest supported power of π. Every operation that could exceed it
/// returns [`Error::DegreeTooLarge`] instead of silently truncating.
pub const MAX_DEGREE: usize = 16;

/// Sign of an exact quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// A polynomial Σₖ cₖ πᵏ with rational cₖ, stored densely from degree 0 up,
/// with no trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiPoly {
    coeffs: Vec<BigRational>,
}

impl PiPoly {
    /// Builds a polynomial from coefficients (degree 0 first), trimming
    /// trailing zeros and enforcing the degree cap.
    pub fn new(mut coeffs: Vec<BigRational>) -> Result<Self> {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() > MAX_DEGREE + 1 {
            return Err(Error::DegreeTooLarge {
                got: coeffs.len() - 1,
                max: MAX_DEGREE,
            });
        }
        Ok(PiPoly { coeffs })
    }

    pub fn zero() -> Self {
        PiPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        PiPoly {
            coeffs: vec![BigRational::one()],
        }
    }

    /// The constant π.
    pub fn pi() -> Self {
        PiPoly {
            coeffs: vec![BigRational::zero(), BigRational::one()],
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        PiPoly::new(vec![r]).expect("degree 0")
    }

    pub fn from_int(n: i64) -> Self {
        PiPoly::from_rational(BigRational::from_integer(n.into()))
    }

    /// c·πᵏ.
    pub fn monomial(c: BigRational, k: usize) -> Result<Self> {
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.push(c);
        PiPoly::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Coefficient of πᵏ (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// All stored coefficients, degree 0 first, trailing zeros trimmed.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// The constant coefficient as an exact rational if the polynomial has
    /// degree 0 (or is zero).
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &PiPoly) -> PiPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        PiPoly::new(out).expect("addition cannot raise the degree")
    }

    pub fn sub(&self, other: &PiPoly) -> PiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PiPoly {
        PiPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &PiPoly) -> Result<PiPoly> {
        if self.is_zero() || other.is_zero() {
            return Ok(PiPoly::zero());
        }
        let deg = self.degree() + other.degree();
        if deg > MAX_DEGREE {
            return Err(Error::DegreeTooLarge {
                got: deg,
                max: MAX_DEGREE,
            });
        }
        let mut out = vec![BigRational::zero(); deg + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PiPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> Result<PiPoly> {
        let mut acc = PiPoly::one();
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Multiplies every coefficient by an exact rational.
    pub fn scale(&self, r: &BigRational) -> PiPoly {
        if r.is_zero() {
            return PiPoly::zero();
        }
        PiPoly {
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Divides by an exact nonzero rational.
    pub fn div_rational(&self, r: &BigRational) -> Result<PiPoly> {
        if r.is_zero() {
            return Err(Error::invalid("division by zero rational"));
        }
        Ok(self.scale(&r.recip()))
    }

    /// Divides by π. Defined only when the constant term vanishes; a
    /// nonzero constant term means the quotient leaves ℚ[π], which is a
    /// meaningful mathematical outcome reported as
    /// [`Error::NotPiPolynomial`].
    pub fn try_div_pi(&self) -> Result<PiPoly> {
        if self.is_zero() {
            return Ok(PiPoly::zero());
        }
        if !self.coeffs[0].is_zero() {
            return Err(Error::NotPiPolynomial {
                constant: rational::format_rational(&self.coeffs[0]),
            });
        }
        PiPoly::new(self.coeffs[1..].to_vec())
    }

    /// Interval enclosure of the value at the context's precision (Horner).
    pub fn eval_iv(&self, ctx: &Ctx) -> Iv {
        if self.is_zero() {
            return ctx.from_int(0);
        }
        let pi = ctx.pi();
        let mut acc = ctx.from_rational(self.coeffs.last().unwrap());
        for c in self.coeffs.iter().rev().skip(1) {
            acc = ctx.add(&ctx.mul(&acc, &pi), &ctx.from_rational(c));
        }
        acc
    }

    /// Fast floating-point estimate (not certified; use for sampling only).
    pub fn eval_f64(&self) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * std::f64::consts::PI + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// Exact sign. Degree-0 polynomials are decided by rational arithmetic;
    /// otherwise interval evaluation at doubling precision must terminate
    /// because a nonzero polynomial in π cannot vanish (π is
    /// transcendental).
    pub fn exact_sign(&self) -> Sign {
        if self.is_zero() {
            return Sign::Zero;
        }
        if let Some(r) = self.as_rational() {
            return match r.cmp(&BigRational::zero()) {
                Ordering::Less => Sign::Negative,
                Ordering::Equal => Sign::Zero,
                Ordering::Greater => Sign::Positive,
            };
        }
        let mut bits = 64u32;
        loop {
            let iv = self.eval_iv(&Ctx::new(bits));
            match iv.definite_sign() {
                Some(Ordering::Less) => return Sign::Negative,
                Some(Ordering::Greater) => return Sign::Positive,
                _ => {}
            }
            bits *= 2;
            assert!(
                bits <= (1 << 20),
                "sign of a nonzero pi-polynomial should be decidable: {self}"
            );
        }
    }

    /// Correctly rounded decimal expansion with `digits` digits after the
    /// point (round-to-nearest). Degree-0 values round exactly in rational
    /// arithmetic (ties away from zero); irrational values refine an
    /// interval until the rounding is unambiguous.
    pub fn to_decimal(&self, digits: u32) -> Result<String> {
        if let Some(r) = self.as_rational() {
            return Ok(decimal_string(&r, digits, Round::Nearest));
        }
        let mut bits = digits.saturating_mul(4) + 64;
        loop {
            let ctx = Ctx::new(bits);
            let iv = self.eval_iv(&ctx);
            if let Some(m) = ctx.decimal_mantissa(&iv, digits) {
                return Ok(format_scaled_integer(&m, digits));
            }
            bits = bits.saturating_mul(2);
            if bits > (1 << 21) {
                return Err(Error::invalid(format!(
                    "decimal rounding of {self} at {digits} digits did not stabilize"
                )));
            }
        }
    }

    /// Convenience comparisons via [`PiPoly::exact_sign`].
    pub fn is_positive(&self) -> bool {
        self.exact_sign() == Sign::Positive
    }

    pub fn is_negative(&self) -> bool {
        self.exact_sign() == Sign::Negative
    }

    /// Exact three-way comparison of two values in ℚ[π].
    pub fn exact_cmp(&self, other: &PiPoly) -> Ordering {
        match self.sub(other).exact_sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }

    /// A rational upper bound on |value|, used for error budgeting.
    pub fn abs_upper_bound(&self) -> BigRational {
        let ctx = Ctx::new(64);
        ctx.abs_hi_rational(&self.eval_iv(&ctx))
    }
}

impl fmt::Display for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign_str = if first {
                if c.is_negative() {
                    "-"
                } else {
                    ""
                }
            } else if c.is_negative() {
                " - "
            } else {
                " + "
            };
            let coeff_str = if k == 0 {
                mag.to_string()
            } else if mag.is_one() {
                String::new()
            } else if mag.denom().is_one() {
                format!("{}*", mag)
            } else {
                format!("({})*", mag)
            };
            let var_str = match k {
                0 => String::new(),
                1 => "pi".to_string(),
                _ => format!("pi^{k}"),
            };
            write!(f, "{sign_str}{coeff_str}{var_str}")?;
            first = false;
        }
        Ok(())
    }
}

impl Serialize for PiPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coeffs.iter().map(rational::format_rational).collect();
        let mut s = serializer.serialize_struct("PiPoly", 1)?;
        s.serialize_field("pi_coeffs", &strings)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for PiPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            pi_coeffs: Vec<String>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let coeffs = raw
            .pi_coeffs
            .iter()
            .map(|s| rational::parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| D::Error::custom(e.to_string()))?;
        PiPoly::new(coeffs).map_err(|e| D::Error::custom(e.to_string()))
    }
}

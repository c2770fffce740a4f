//! Angles of the form r + s·π with exact rational r, s.
//!
//! These are exactly the frequencies that appear when piecewise-polynomial
//! breakpoints (rational, or rational multiples of π) meet Fourier kernels
//! sin(nx), cos(nx). An angle is a degree-≤1 element of ℚ\[π\], so
//! comparisons, reduction modulo 2π, and boundary detection are all exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::Error as DeError;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

use crate::exactnum::dyadic::Ctx;
use crate::exactnum::pipoly::{PiPoly, Sign};
use crate::exactnum::rational;
use crate::Result;

/// The exact angle r + s·π.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Angle {
    pub r: BigRational,
    pub s: BigRational,
}

impl Angle {
    pub fn new(r: BigRational, s: BigRational) -> Self {
        Angle { r, s }
    }

    pub fn zero() -> Self {
        Angle::new(BigRational::zero(), BigRational::zero())
    }

    pub fn pi() -> Self {
        Angle::new(BigRational::zero(), BigRational::one())
    }

    pub fn two_pi() -> Self {
        Angle::new(BigRational::zero(), BigRational::from_integer(2.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Angle::new(r, BigRational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Angle::from_rational(BigRational::from_integer(n.into()))
    }

    /// r/1 + s·π built from small integers, for tests and the catalog.
    pub fn of(r_num: i64, r_den: i64, s_num: i64, s_den: i64) -> Self {
        Angle::new(
            BigRational::new(r_num.into(), r_den.into()),
            BigRational::new(s_num.into(), s_den.into()),
        )
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero()
    }

    /// This angle as a degree-≤1 polynomial in π.
    pub fn to_pipoly(&self) -> PiPoly {
        PiPoly::new(vec![self.r.clone(), self.s.clone()]).expect("degree <= 1")
    }

    pub fn exact_sign(&self) -> Sign {
        self.to_pipoly().exact_sign()
    }

    pub fn add(&self, other: &Angle) -> Angle {
        Angle::new(&self.r + &other.r, &self.s + &other.s)
    }

    pub fn sub(&self, other: &Angle) -> Angle {
        Angle::new(&self.r - &other.r, &self.s - &other.s)
    }

    pub fn neg(&self) -> Angle {
        Angle::new(-&self.r, -&self.s)
    }

    /// Scales by an exact rational.
    pub fn scale(&self, k: &BigRational) -> Angle {
        Angle::new(&self.r * k, &self.s * k)
    }

    pub fn mul_int(&self, n: i64) -> Angle {
        self.scale(&BigRational::from_integer(n.into()))
    }

    /// Exact three-way comparison.
    pub fn exact_cmp(&self, other: &Angle) -> Ordering {
        match self.sub(other).exact_sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }

    /// Deterministic structural ordering (s first, then r) used only to
    /// canonicalize term order; for value comparisons use
    /// [`Angle::exact_cmp`].
    pub fn struct_cmp(&self, other: &Angle) -> Ordering {
        self.s.cmp(&other.s).then_with(|| self.r.cmp(&other.r))
    }

    /// Floating-point estimate (sampling/diagnostics only).
    pub fn eval_f64(&self) -> f64 {
        self.r.to_f64().unwrap_or(f64::NAN)
            + self.s.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI
    }

    /// Reduces modulo 2π: returns (θ′, k, on_boundary) with θ = θ′ + 2πk,
    /// θ′ ∈ [0, 2π), and `on_boundary` true iff θ is an exact multiple of
    /// 2π (θ′ = 0). A floating-point guess locates k, then exact sign tests
    /// certify it; an exact bisection fallback covers values too large for
    /// the float path.
    pub fn reduce_mod_2pi(&self) -> (Angle, BigInt, bool) {
        let two_pi = Angle::two_pi();
        let guess = self.eval_f64() / (2.0 * std::f64::consts::PI);
        if guess.is_finite() && guess.abs() < 4.0e15 {
            let k0 = guess.floor() as i128;
            for delta in [0i128, -1, 1, -2, 2] {
                let k = BigInt::from(k0 + delta);
                if let Some(result) = self.try_reduction(&two_pi, &k) {
                    return result;
                }
            }
        }
        // Exact bisection on k: θ − 2πk is decreasing in k.
        let mut lo = BigInt::from(-1) << 200usize;
        let mut hi = BigInt::from(1) << 200usize;
        // invariant: θ − 2π·lo ≥ 0 > θ − 2π·(hi+1)... narrow until found.
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &hi) / 2;
            let shifted = self.sub(&two_pi.scale(&BigRational::from_integer(mid.clone())));
            match shifted.exact_sign() {
                Sign::Negative => hi = mid,
                _ => lo = mid,
            }
        }
        self.try_reduction(&two_pi, &lo)
            .expect("bisection establishes the reduction invariant")
    }

    fn try_reduction(&self, two_pi: &Angle, k: &BigInt) -> Option<(Angle, BigInt, bool)> {
        let theta = self.sub(&two_pi.scale(&BigRational::from_integer(k.clone())));
        let low_ok = theta.exact_sign();
        if low_ok == Sign::Negative {
            return None;
        }
        if theta.sub(two_pi).exact_sign() != Sign::Negative {
            return None;
        }
        let boundary = low_ok == Sign::Zero;
        Some((theta, k.clone(), boundary))
    }

    /// A rational enclosure midpoint of the angle at the given precision,
    /// used where downstream arithmetic needs a plain rational standing in
    /// for an angle containing π (e.g. fit constraint locations).
    pub fn to_rational_approx(&self, bits: u32) -> BigRational {
        let ctx = Ctx::new(bits);
        let iv = self.to_pipoly().eval_iv(&ctx);
        let mid = (&iv.lo + &iv.hi) / BigInt::from(2);
        ctx.mantissa_to_rational(&mid)
    }

    /// Dyadic enclosure of the angle's value at the context's precision.
    pub fn to_iv(&self, ctx: &Ctx) -> crate::exactnum::dyadic::Iv {
        self.to_pipoly().eval_iv(ctx)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_pipoly())
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Angle", 2)?;
        s.serialize_field("r", &rational::format_rational(&self.r))?;
        s.serialize_field("s", &rational::format_rational(&self.s))?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            r: String,
            s: String,
        }
        let raw = Raw::deserialize(deserializer)?;
        let parse = |s: &str| {
            rational::parse_rational(s).map_err(|e| D::Error::custom(e.to_string()))
        };
        Ok(Angle::new(parse(&raw.r)?, parse(&raw.s)?))
    }
}

/// Parses an angle literal used by the CLI: "pi", "-pi", "2pi", "pi/2",
/// "3/4*pi", "1", "-1/2", or a decimal like "2.5" (converted exactly).
pub fn parse_angle(s: &str) -> Result<Angle> {
    let t = s.trim();
    let (neg, t) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, t),
    };
    let angle = if let Some(idx) = t.find("pi") {
        let (before, after) = (t[..idx].trim(), t[idx + 2..].trim());
        let coeff_before = if before.is_empty() {
            BigRational::one()
        } else {
            let b = before.strip_suffix('*').unwrap_or(before).trim();
            rational::parse_rational(b)?
        };
        let coeff = if after.is_empty() {
            coeff_before
        } else if let Some(d) = after.strip_prefix('/') {
            &coeff_before / rational::parse_rational(d.trim())?
        } else {
            return Err(crate::error::Error::invalid(format!(
                "bad angle literal {s:?}"
            )));
        };
        Angle::new(BigRational::zero(), coeff)
    } else if t.contains('.') || t.contains('e') || t.contains('E') {
        Angle::from_rational(rational::parse_decimal(t)?)
    } else {
        Angle::from_rational(rational::parse_rational(t)?)
    };
    Ok(if neg { angle.neg() } else { angle })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> BigRational {
        rational::parse_rational(s).unwrap()
    }

    #[test]
    fn reduction_handles_interior_boundary_and_negative_angles() {
        // θ = 7: 7 − 2π ∈ [0, 2π), k = 1
        let (theta, k, boundary) = Angle::from_int(7).reduce_mod_2pi();
        assert_eq!(theta, Angle::new(rat("7"), rat("-2")));
        assert_eq!(k, BigInt::from(1));
        assert!(!boundary);
        // θ = 4π: lands exactly on the boundary, θ′ = 0, k = 2
        let (theta, k, boundary) = Angle::new(rat("0"), rat("4")).reduce_mod_2pi();
        assert!(theta.is_structurally_zero());
        assert_eq!(k, BigInt::from(2));
        assert!(boundary);
        // θ = −1: reduces to 2π − 1 with k = −1
        let (theta, k, _) = Angle::from_int(-1).reduce_mod_2pi();
        assert_eq!(theta, Angle::new(rat("-1"), rat("2")));
        assert_eq!(k, BigInt::from(-1));
        // θ already in range stays put
        let (theta, k, _) = Angle::of(1, 2, 0, 1).reduce_mod_2pi();
        assert_eq!(theta, Angle::of(1, 2, 0, 1));
        assert_eq!(k, BigInt::zero());
    }

    #[test]
    fn reduction_certifies_near_boundary_values() {
        // 355/113 exceeds π by about 2.7e-7, so 710/113 sits just above 2π
        // and must reduce with k = 1 to the sliver 710/113 − 2π.
        let (theta, k, boundary) = Angle::of(710, 113, 0, 1).reduce_mod_2pi();
        assert_eq!(k, BigInt::one());
        assert!(!boundary);
        assert_eq!(theta, Angle::of(710, 113, -2, 1));
        // 666/106 = 6.28301886... lies just below 2π and keeps k = 0.
        let (theta, k, boundary) = Angle::of(666, 106, 0, 1).reduce_mod_2pi();
        assert_eq!(k, BigInt::zero());
        assert!(!boundary);
        assert_eq!(theta, Angle::of(666, 106, 0, 1));
        // ...while 2π itself is a boundary.
        let (_, k, boundary) = Angle::two_pi().reduce_mod_2pi();
        assert_eq!(k, BigInt::one());
        assert!(boundary);
    }

    #[test]
    fn reduction_works_far_beyond_float_precision() {
        // θ = 10^40 (needs the certified search, not raw f64 rounding).
        let big = Angle::from_rational(BigRational::from_integer(rational::pow10(40)));
        let (theta, k, boundary) = big.reduce_mod_2pi();
        assert!(!boundary);
        assert_eq!(theta.exact_sign(), Sign::Positive);
        assert_eq!(theta.sub(&Angle::two_pi()).exact_sign(), Sign::Negative);
        // consistency: θ′ + 2πk = θ
        let back = theta.add(&Angle::two_pi().scale(&BigRational::from_integer(k)));
        assert_eq!(back, big);
    }

    #[test]
    fn exact_comparisons_and_ordering() {
        let a = Angle::of(0, 1, 1, 1); // π
        let b = Angle::of(22, 7, 0, 1); // 22/7 > π
        assert_eq!(a.exact_cmp(&b), Ordering::Less);
        assert_eq!(b.exact_cmp(&a), Ordering::Greater);
        assert_eq!(a.exact_cmp(&Angle::pi()), Ordering::Equal);
    }

    #[test]
    fn angle_literals_parse() {
        assert_eq!(parse_angle("pi").unwrap(), Angle::pi());
        assert_eq!(parse_angle("-pi").unwrap(), Angle::pi().neg());
        assert_eq!(parse_angle("2pi").unwrap(), Angle::two_pi());
        assert_eq!(parse_angle("2*pi").unwrap(), Angle::two_pi());
        assert_eq!(parse_angle("pi/2").unwrap(), Angle::of(0, 1, 1, 2));
        assert_eq!(parse_angle("3/4*pi").unwrap(), Angle::of(0, 1, 3, 4));
        assert_eq!(parse_angle("1").unwrap(), Angle::from_int(1));
        assert_eq!(parse_angle("-1/2").unwrap(), Angle::of(-1, 2, 0, 1));
        assert_eq!(parse_angle("0.5").unwrap(), Angle::of(1, 2, 0, 1));
        assert!(parse_angle("pie").is_err());
        assert!(parse_angle("").is_err());
    }

    #[test]
    fn json_schema_uses_r_and_s_strings() {
        let a = Angle::of(-1, 2, 3, 1);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"r":"-1/2","s":"3"}"#);
        let back: Angle = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }
}

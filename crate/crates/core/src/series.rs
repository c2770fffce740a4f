//! The term language for trigonometric series: linear combinations of
//! sin(βn)/nᵖ and cos(βn)/nᵖ, optionally with frequencies depending on a
//! free variable x.
//!
//! Everything reduces to this shape. Products of sines/cosines expand into
//! it by the product-to-sum identities; Fourier coefficient formulas are
//! read as functions of n in the same shape; and closed-form summation
//! consumes it term by term.
//!
//! # Canonical form
//!
//! A concrete (x-free) series is stored canonically:
//!
//! * every frequency β is reduced to \[0, π\], using first βn ↦ βn mod 2π
//!   and then the reflections sin((2π−β)n) = −sin(βn), cos((2π−β)n) =
//!   cos(βn);
//! * sine terms with β ∈ {0, π} vanish identically and are dropped;
//! * cos with β = 0 represents the constant sequence 1, and cos with β = π
//!   represents (−1)ⁿ;
//! * like terms (same kind, β, p) merge; zero coefficients drop; terms are
//!   sorted deterministically.
//!
//! Two canonical series with equal term lists denote the same sequence, so
//! structural equality is a sound (though not complete — it cannot see
//! relations like sin(πn/3) = sin(2πn/3) for all integer n) exactness test.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

use crate::exactnum::angle::Angle;
use crate::exactnum::pipoly::{PiPoly, Sign};
use crate::Result;

/// Which trigonometric kernel a term uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrigKind {
    Sin,
    Cos,
}

/// One canonical term c · kind(βn) / nᵖ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub c: PiPoly,
    pub kind: TrigKind,
    pub beta: Angle,
    pub p: u32,
}

/// A frequency that may depend on the free variable x: base + x_coeff·x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frequency {
    pub base: Angle,
    pub x_coeff: BigRational,
}

impl Frequency {
    pub fn concrete(base: Angle) -> Self {
        Frequency {
            base,
            x_coeff: BigRational::zero(),
        }
    }

    /// The frequency x itself (coefficient 1, zero base).
    pub fn x() -> Self {
        Frequency {
            base: Angle::zero(),
            x_coeff: BigRational::one(),
        }
    }

    pub fn is_concrete(&self) -> bool {
        self.x_coeff.is_zero()
    }

    pub fn add(&self, other: &Frequency) -> Frequency {
        Frequency {
            base: self.base.add(&other.base),
            x_coeff: &self.x_coeff + &other.x_coeff,
        }
    }

    pub fn sub(&self, other: &Frequency) -> Frequency {
        Frequency {
            base: self.base.sub(&other.base),
            x_coeff: &self.x_coeff - &other.x_coeff,
        }
    }

    pub fn neg(&self) -> Frequency {
        Frequency {
            base: self.base.neg(),
            x_coeff: -&self.x_coeff,
        }
    }

    pub fn scale_int(&self, k: i64) -> Frequency {
        Frequency {
            base: self.base.mul_int(k),
            x_coeff: &self.x_coeff * BigRational::from_integer(k.into()),
        }
    }

    /// Substitutes an exact angle for x.
    pub fn substitute(&self, x: &Angle) -> Angle {
        self.base.add(&x.scale(&self.x_coeff))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.base.eval_f64() + self.x_coeff.to_f64().unwrap_or(f64::NAN) * x
    }

    fn is_structurally_zero(&self) -> bool {
        self.x_coeff.is_zero() && self.base.is_structurally_zero()
    }

    /// Canonical-side test: a frequency is "negative" if its leading
    /// component (x coefficient, then base value) is negative; sin terms
    /// with negative frequency flip sign to normalize.
    fn is_negative(&self) -> bool {
        if !self.x_coeff.is_zero() {
            return self.x_coeff.is_negative();
        }
        self.base.exact_sign() == Sign::Negative
    }

    fn struct_cmp(&self, other: &Frequency) -> Ordering {
        self.x_coeff
            .cmp(&other.x_coeff)
            .then_with(|| self.base.struct_cmp(&other.base))
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.x_coeff.is_zero() {
            return write!(f, "{}", self.base);
        }
        let xpart = if self.x_coeff.is_one() {
            "x".to_string()
        } else {
            format!("({})*x", self.x_coeff)
        };
        if self.base.is_structurally_zero() {
            write!(f, "{xpart}")
        } else {
            write!(f, "{} + {xpart}", self.base)
        }
    }
}

/// One term of a possibly x-dependent series: c · kind(freq·n)/nᵖ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamTerm {
    pub c: PiPoly,
    pub kind: TrigKind,
    pub freq: Frequency,
    pub p: u32,
}

/// A series whose frequencies may contain the free variable x, in partially
/// normalized form (frequency signs fixed, bases reduced mod 2π, like terms
/// merged). Full reduction to [0, π] happens only on concrete series, where
/// reflection does not disturb the x part.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ParamSeries {
    terms: Vec<ParamTerm>,
}

impl ParamSeries {
    pub fn new(terms: Vec<ParamTerm>) -> Self {
        let mut flat: Vec<ParamTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            if t.c.is_zero() {
                continue;
            }
            let mut t = t;
            // Reduce the base modulo 2π: sin/cos of (β + cx)n shift by full
            // turns for every integer n.
            let (reduced, _, _) = t.freq.base.reduce_mod_2pi();
            t.freq.base = reduced;
            // Normalize the frequency sign via sin oddness / cos evenness.
            if t.freq.is_negative() {
                t.freq = t.freq.neg();
                if t.kind == TrigKind::Sin {
                    t.c = t.c.neg();
                }
                let (reduced, _, _) = t.freq.base.reduce_mod_2pi();
                t.freq.base = reduced;
            }
            if t.kind == TrigKind::Sin && t.freq.is_structurally_zero() {
                continue;
            }
            flat.push(t);
        }
        flat.sort_by(|a, b| {
            a.p.cmp(&b.p)
                .then_with(|| a.kind.cmp(&b.kind))
                .then_with(|| a.freq.struct_cmp(&b.freq))
        });
        let mut merged: Vec<ParamTerm> = Vec::with_capacity(flat.len());
        for t in flat {
            match merged.last_mut() {
                Some(last)
                    if last.p == t.p && last.kind == t.kind && last.freq == t.freq =>
                {
                    last.c = last.c.add(&t.c);
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.c.is_zero());
        ParamSeries { terms: merged }
    }

    pub fn terms(&self) -> &[ParamTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &ParamSeries) -> ParamSeries {
        let mut ts = self.terms.clone();
        ts.extend(other.terms.iter().cloned());
        ParamSeries::new(ts)
    }

    pub fn neg(&self) -> ParamSeries {
        ParamSeries::new(
            self.terms
                .iter()
                .map(|t| ParamTerm {
                    c: t.c.neg(),
                    ..t.clone()
                })
                .collect(),
        )
    }

    pub fn scale(&self, k: &PiPoly) -> Result<ParamSeries> {
        let mut ts = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            ts.push(ParamTerm {
                c: t.c.mul(k)?,
                ..t.clone()
            });
        }
        Ok(ParamSeries::new(ts))
    }

    /// Product of two series of the same index variable n, expanded to the
    /// canonical linear shape by the product-to-sum identities. The
    /// exponents p add; frequencies add/subtract.
    pub fn mul(&self, other: &ParamSeries) -> Result<ParamSeries> {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len() * 2);
        for a in &self.terms {
            for b in &other.terms {
                out.extend(mul_terms(a, b)?);
            }
        }
        Ok(ParamSeries::new(out))
    }

    /// Restriction to even indices, re-indexed: Σ over n even of t(n)
    /// becomes Σ over m of t(2m), i.e. frequencies double and 1/nᵖ
    /// contributes 1/2ᵖ.
    pub fn even_indexed(&self) -> ParamSeries {
        ParamSeries::new(
            self.terms
                .iter()
                .map(|t| ParamTerm {
                    c: t.c.scale(&BigRational::new(
                        BigInt::one(),
                        BigInt::one() << (t.p as usize),
                    )),
                    kind: t.kind,
                    freq: t.freq.scale_int(2),
                    p: t.p,
                })
                .collect(),
        )
    }

    /// Restriction to odd indices (as a difference: all minus even).
    pub fn odd_indexed(&self) -> ParamSeries {
        self.add(&self.even_indexed().neg())
    }

    /// Alternating version Σ (−1)ⁿ⁺¹ t(n), using (−1)ⁿ = cos(πn).
    pub fn alternating(&self) -> Result<ParamSeries> {
        let flip = ParamSeries::new(vec![ParamTerm {
            c: PiPoly::from_int(-1),
            kind: TrigKind::Cos,
            freq: Frequency::concrete(Angle::pi()),
            p: 0,
        }]);
        self.mul(&flip)
    }

    /// Concrete canonical form, if no term depends on x.
    pub fn to_concrete(&self) -> Option<SeriesExpression> {
        if self.terms.iter().any(|t| !t.freq.is_concrete()) {
            return None;
        }
        Some(SeriesExpression::new(
            self.terms
                .iter()
                .map(|t| TrigTerm {
                    c: t.c.clone(),
                    kind: t.kind,
                    beta: t.freq.base.clone(),
                    p: t.p,
                })
                .collect(),
        ))
    }

    /// Substitutes an exact angle for x and canonicalizes.
    pub fn substitute(&self, x: &Angle) -> SeriesExpression {
        SeriesExpression::new(
            self.terms
                .iter()
                .map(|t| TrigTerm {
                    c: t.c.clone(),
                    kind: t.kind,
                    beta: t.freq.substitute(x),
                    p: t.p,
                })
                .collect(),
        )
    }

    /// Floating-point value of the n-th term at a given x (sampling only).
    pub fn term_value_f64(&self, x: f64, n: u64) -> f64 {
        let nf = n as f64;
        self.terms
            .iter()
            .map(|t| {
                let arg = t.freq.eval_f64(x) * nf;
                let k = match t.kind {
                    TrigKind::Sin => arg.sin(),
                    TrigKind::Cos => arg.cos(),
                };
                t.c.eval_f64() * k / nf.powi(t.p as i32)
            })
            .sum()
    }
}

impl fmt::Display for ParamSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl fmt::Display for ParamTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kernel = match self.kind {
            TrigKind::Sin => format!("sin(({})*n)", self.freq),
            TrigKind::Cos => {
                if self.freq.is_structurally_zero() {
                    "1".to_string()
                } else {
                    format!("cos(({})*n)", self.freq)
                }
            }
        };
        let denom = match self.p {
            0 => String::new(),
            1 => "/n".to_string(),
            p => format!("/n^{p}"),
        };
        if self.c == PiPoly::one() {
            write!(f, "{kernel}{denom}")
        } else {
            write!(f, "({}) * {kernel}{denom}", self.c)
        }
    }
}

/// Product of two single terms via the product-to-sum identities; the
/// coefficient picks up the factor 1/2.
fn mul_terms(a: &ParamTerm, b: &ParamTerm) -> Result<Vec<ParamTerm>> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let c = a.c.mul(&b.c)?.scale(&half);
    let p = a.p + b.p;
    let sum = a.freq.add(&b.freq);
    let diff = a.freq.sub(&b.freq);
    use TrigKind::*;
    let parts: [(PiPoly, TrigKind, Frequency); 2] = match (a.kind, b.kind) {
        // sin A sin B = ½[cos(A−B) − cos(A+B)]
        (Sin, Sin) => [(c.clone(), Cos, diff), (c.neg(), Cos, sum)],
        // sin A cos B = ½[sin(A+B) + sin(A−B)]
        (Sin, Cos) => [(c.clone(), Sin, sum), (c, Sin, diff)],
        // cos A sin B = ½[sin(A+B) − sin(A−B)]
        (Cos, Sin) => [(c.clone(), Sin, sum), (c.neg(), Sin, diff)],
        // cos A cos B = ½[cos(A+B) + cos(A−B)]
        (Cos, Cos) => [(c.clone(), Cos, sum), (c, Cos, diff)],
    };
    Ok(parts
        .into_iter()
        .map(|(c, kind, freq)| ParamTerm { c, kind, freq, p })
        .collect())
}

/// A concrete series Σₙ Σ_terms c·kind(βn)/nᵖ in canonical form (see the
/// module documentation). Constructed via [`SeriesExpression::new`], which
/// canonicalizes; structural equality of canonical forms implies the two
/// series agree at every n ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SeriesExpression {
    terms: Vec<TrigTerm>,
}

/// A Fourier coefficient rule read as a function of n: the same canonical
/// data as a series, denoting n ↦ Σ_terms c·kind(βn)/nᵖ.
pub type CoefficientFormula = SeriesExpression;

impl SeriesExpression {
    /// Canonicalizes raw terms: reduce mod 2π, reflect into [0, π], drop
    /// vanishing sines, merge like terms, sort.
    pub fn new(terms: Vec<TrigTerm>) -> Self {
        let mut flat: Vec<TrigTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            if t.c.is_zero() {
                continue;
            }
            let (mut beta, _, _) = t.beta.reduce_mod_2pi();
            let mut c = t.c;
            // Reflect (π, 2π) down to (0, π).
            if beta.sub(&Angle::pi()).exact_sign() == Sign::Positive {
                beta = Angle::two_pi().sub(&beta);
                if t.kind == TrigKind::Sin {
                    c = c.neg();
                }
            }
            if t.kind == TrigKind::Sin {
                let at_zero = beta.is_structurally_zero();
                let at_pi = beta.exact_cmp(&Angle::pi()) == Ordering::Equal;
                if at_zero || at_pi {
                    continue; // sin(0·n) = sin(πn) = 0 for integer n
                }
            }
            flat.push(TrigTerm {
                c,
                kind: t.kind,
                beta,
                p: t.p,
            });
        }
        flat.sort_by(|a, b| {
            a.p.cmp(&b.p)
                .then_with(|| a.kind.cmp(&b.kind))
                .then_with(|| a.beta.struct_cmp(&b.beta))
        });
        let mut merged: Vec<TrigTerm> = Vec::with_capacity(flat.len());
        for t in flat {
            match merged.last_mut() {
                Some(last)
                    if last.p == t.p && last.kind == t.kind && last.beta == t.beta =>
                {
                    last.c = last.c.add(&t.c);
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.c.is_zero());
        SeriesExpression { terms: merged }
    }

    pub fn terms(&self) -> &[TrigTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// A single term c·kind(βn)/nᵖ.
    pub fn single(c: PiPoly, kind: TrigKind, beta: Angle, p: u32) -> Self {
        SeriesExpression::new(vec![TrigTerm { c, kind, beta, p }])
    }

    pub fn add(&self, other: &SeriesExpression) -> SeriesExpression {
        let mut ts = self.terms.clone();
        ts.extend(other.terms.iter().cloned());
        SeriesExpression::new(ts)
    }

    pub fn neg(&self) -> SeriesExpression {
        SeriesExpression::new(
            self.terms
                .iter()
                .map(|t| TrigTerm {
                    c: t.c.neg(),
                    ..t.clone()
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &SeriesExpression) -> SeriesExpression {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &PiPoly) -> Result<SeriesExpression> {
        Ok(self.to_param().scale(k)?.to_concrete().expect("concrete"))
    }

    /// Lifts to the parametric representation (x-free).
    pub fn to_param(&self) -> ParamSeries {
        ParamSeries::new(
            self.terms
                .iter()
                .map(|t| ParamTerm {
                    c: t.c.clone(),
                    kind: t.kind,
                    freq: Frequency::concrete(t.beta.clone()),
                    p: t.p,
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &SeriesExpression) -> Result<SeriesExpression> {
        Ok(self
            .to_param()
            .mul(&other.to_param())?
            .to_concrete()
            .expect("product of concrete series is concrete"))
    }

    /// Floating-point value of the n-th term (sampling/spot checks only).
    pub fn term_value_f64(&self, n: u64) -> f64 {
        let nf = n as f64;
        self.terms
            .iter()
            .map(|t| {
                let arg = t.beta.eval_f64() * nf;
                let k = match t.kind {
                    TrigKind::Sin => arg.sin(),
                    TrigKind::Cos => arg.cos(),
                };
                t.c.eval_f64() * k / nf.powi(t.p as i32)
            })
            .sum()
    }

    /// Smallest exponent p over the terms (u32::MAX when empty).
    pub fn min_p(&self) -> u32 {
        self.terms.iter().map(|t| t.p).min().unwrap_or(u32::MAX)
    }
}

impl fmt::Display for SeriesExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", term_display(t))?;
        }
        Ok(())
    }
}

fn term_display(t: &TrigTerm) -> String {
    let kernel = match t.kind {
        TrigKind::Sin => format!("sin(({})*n)", t.beta),
        TrigKind::Cos => {
            if t.beta.is_structurally_zero() {
                "1".to_string()
            } else {
                format!("cos(({})*n)", t.beta)
            }
        }
    };
    let denom = match t.p {
        0 => String::new(),
        1 => "/n".to_string(),
        p => format!("/n^{p}"),
    };
    let coeff = if t.c == PiPoly::one() {
        String::new()
    } else {
        format!("({}) * ", t.c)
    };
    format!("{coeff}{kernel}{denom}")
}

impl Serialize for SeriesExpression {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SeriesExpression {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TrigTerm>::deserialize(deserializer)?;
        for t in &terms {
            if t.p > 64 {
                return Err(D::Error::custom("exponent p too large"));
            }
        }
        Ok(SeriesExpression::new(terms))
    }
}

/// A sine series Σₙ bₙ sin(nx) described by the coefficient rule n ↦ bₙ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SineSeries {
    pub coeffs: CoefficientFormula,
}

impl SineSeries {
    pub fn new(coeffs: CoefficientFormula) -> Self {
        SineSeries { coeffs }
    }

    /// The series as a function of x: every coefficient term is multiplied
    /// by sin(xn), producing a parametric series in x.
    pub fn as_function_of_x(&self) -> Result<ParamSeries> {
        let sin_xn = ParamSeries::new(vec![ParamTerm {
            c: PiPoly::one(),
            kind: TrigKind::Sin,
            freq: Frequency::x(),
            p: 0,
        }]);
        self.coeffs.to_param().mul(&sin_xn)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn term(c: PiPoly, kind: TrigKind, beta: Angle, p: u32) -> TrigTerm {
        TrigTerm { c, kind, beta, p }
    }

    #[test]
    fn canonicalization_reduces_and_reflects() {
        // sin((2π−1)n) = −sin(n): the term sin((2π−1)n)/n² must normalize
        // to −sin(n)/n².
        let raw = SeriesExpression::new(vec![term(
            PiPoly::one(),
            TrigKind::Sin,
            Angle::new(rat(-1, 1), rat(2, 1)),
            2,
        )]);
        let expected = SeriesExpression::new(vec![term(
            PiPoly::from_int(-1),
            TrigKind::Sin,
            Angle::from_int(1),
            2,
        )]);
        assert_eq!(raw, expected);
        // cos is even under the same reflection.
        let raw_cos = SeriesExpression::new(vec![term(
            PiPoly::one(),
            TrigKind::Cos,
            Angle::new(rat(-1, 1), rat(2, 1)),
            2,
        )]);
        let expected_cos = SeriesExpression::new(vec![term(
            PiPoly::one(),
            TrigKind::Cos,
            Angle::from_int(1),
            2,
        )]);
        assert_eq!(raw_cos, expected_cos);
    }

    #[test]
    fn vanishing_sines_are_dropped_and_likes_merge() {
        let raw = SeriesExpression::new(vec![
            term(PiPoly::one(), TrigKind::Sin, Angle::pi(), 1),
            term(PiPoly::one(), TrigKind::Sin, Angle::zero(), 3),
            term(PiPoly::one(), TrigKind::Sin, Angle::from_int(1), 2),
            term(PiPoly::from_int(2), TrigKind::Sin, Angle::from_int(1), 2),
            term(PiPoly::one(), TrigKind::Sin, Angle::from_int(5), 2),
        ]);
        // sin(πn) and sin(0n) vanish; the two sin(n)/n² merge to 3;
        // sin(5n) reduces to sin((5−2π)... no: 5 < 2π so β=5 > π reflects
        // to 2π−5 with a sign flip.
        assert_eq!(raw.terms().len(), 2);
        assert_eq!(raw.terms()[0].c, PiPoly::from_int(3));
        assert_eq!(raw.terms()[0].beta, Angle::from_int(1));
        let reflected = &raw.terms()[1];
        assert_eq!(reflected.beta, Angle::new(rat(-5, 1), rat(2, 1)));
        assert_eq!(reflected.c, PiPoly::from_int(-1));
    }

    #[test]
    fn alternating_parity_splits_are_consistent_numerically() {
        let s = SeriesExpression::single(PiPoly::one(), TrigKind::Sin, Angle::from_int(1), 4);
        let p = s.to_param();
        let even = p.even_indexed();
        let odd = p.odd_indexed();
        let alt = p.alternating().unwrap();
        // even_indexed is re-indexed termwise: term m is the old term 2m.
        for m in 1..=8u64 {
            let lhs = even.term_value_f64(0.0, m);
            let rhs = s.term_value_f64(2 * m);
            assert!((lhs - rhs).abs() < 1e-12, "even reindex at {m}");
        }
        // odd_indexed is a sum-level identity (all minus even), so compare
        // converged sums, not individual terms.
        let direct_odd: f64 = (1..=3001u64)
            .filter(|n| n % 2 == 1)
            .map(|n| s.term_value_f64(n))
            .sum();
        let via_odd: f64 = (1..=3000u64).map(|m| odd.term_value_f64(0.0, m)).sum();
        assert!(
            (direct_odd - via_odd).abs() < 1e-9,
            "odd split sums disagree: {direct_odd} vs {via_odd}"
        );
        // alternating at n equals (−1)^{n+1}·(term at n), termwise.
        for n in 1..=12u64 {
            let want = if n % 2 == 1 { 1.0 } else { -1.0 } * s.term_value_f64(n);
            let got = alt.term_value_f64(0.0, n);
            assert!((want - got).abs() < 1e-12, "alternating at {n}");
        }
    }

    #[test]
    fn product_to_sum_matches_numeric_product() {
        // (sin(n)/n)·(sin(3n)/n): expand and compare numerically.
        let a = SeriesExpression::single(PiPoly::one(), TrigKind::Sin, Angle::from_int(1), 1);
        let b = SeriesExpression::single(PiPoly::one(), TrigKind::Sin, Angle::from_int(3), 1);
        let prod = a.mul(&b).unwrap();
        for n in 1..=15u64 {
            let want = a.term_value_f64(n) * b.term_value_f64(n);
            let got = prod.term_value_f64(n);
            assert!((want - got).abs() < 1e-12, "product at {n}: {want} vs {got}");
        }
        // sin²(n) = (1 − cos(2n))/2: squaring sin(n)/n must produce the
        // constant term 1/2 (cos with β=0) and −cos(2n)/2.
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.terms().len(), 2);
        assert_eq!(sq.terms()[0].kind, TrigKind::Cos);
        assert!(sq.terms()[0].beta.is_structurally_zero());
        assert_eq!(sq.terms()[0].c, PiPoly::from_rational(rat(1, 2)));
        assert_eq!(sq.terms()[1].beta, Angle::from_int(2));
        assert_eq!(sq.terms()[1].c, PiPoly::from_rational(rat(-1, 2)));
    }

    #[test]
    fn parametric_product_specializes_to_concrete_product() {
        // sin(n)·sin(xn)/n² at x = 2 must equal expanding with β = 2
        // directly.
        let coeff = SeriesExpression::single(PiPoly::one(), TrigKind::Sin, Angle::from_int(1), 2);
        let series = SineSeries::new(coeff.clone());
        let param = series.as_function_of_x().unwrap();
        let at2 = param.substitute(&Angle::from_int(2));
        let direct = coeff
            .mul(&SeriesExpression::single(
                PiPoly::one(),
                TrigKind::Sin,
                Angle::from_int(2),
                0,
            ))
            .unwrap();
        assert_eq!(at2, direct);
    }

    #[test]
    fn json_formula_roundtrip() {
        let formula = SeriesExpression::new(vec![
            term(PiPoly::one(), TrigKind::Sin, Angle::from_int(1), 2),
            term(
                PiPoly::from_rational(rat(-1, 2)),
                TrigKind::Cos,
                Angle::of(0, 1, 1, 2),
                3,
            ),
        ]);
        let json = serde_json::to_string(&formula).unwrap();
        let back: SeriesExpression = serde_json::from_str(&json).unwrap();
        assert_eq!(back, formula);
        // JSON shape: a plain array of term objects with c/kind/beta/p.
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(v.is_array());
        assert_eq!(v[0]["kind"], "sin");
        assert!(v[0]["c"]["pi_coeffs"].is_array());
        assert_eq!(v[0]["p"], 2);
    }

    #[test]
    fn even_odd_split_of_one_plus_minus_one_to_n() {
        // (1 + (−1)ⁿ)/2 selects even n: series sin(n)/n² times that factor
        // equals the even-indexed pick-out. Via terms: sin(n)(1+cos(πn))/2.
        let s = SeriesExpression::single(PiPoly::one(), TrigKind::Sin, Angle::from_int(1), 2);
        let half = PiPoly::from_rational(rat(1, 2));
        let one_plus = SeriesExpression::new(vec![
            term(half.clone(), TrigKind::Cos, Angle::zero(), 0),
            term(half, TrigKind::Cos, Angle::pi(), 0),
        ]);
        let picked = s.mul(&one_plus).unwrap();
        // Expect ½sin(n)/n² − ½sin((π−1)n)/n²: the pick-out keeps even
        // terms when summed over n, though termwise it is a new series.
        assert_eq!(picked.terms().len(), 2);
        assert_eq!(picked.terms()[0].beta, Angle::from_int(1));
        assert_eq!(picked.terms()[0].c, PiPoly::from_rational(rat(1, 2)));
        assert_eq!(picked.terms()[1].beta, Angle::new(rat(-1, 1), rat(1, 1)));
        assert_eq!(picked.terms()[1].c, PiPoly::from_rational(rat(-1, 2)));
    }
}

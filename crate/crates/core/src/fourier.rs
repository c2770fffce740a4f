//! Exact Fourier coefficients of piecewise polynomial functions.
//!
//! Integration by parts reduces ∫ xʲ·sin(nx) dx to a finite list of terms
//! q·xᵃ·trig(nx)/nᵈ with rational q, valid for every n ≥ 1 at once. At a
//! breakpoint x₀ = r + sπ the evaluated terms become trig(x₀·n)/nᵈ: the
//! endpoint 0 contributes constants, π contributes (−1)ⁿ = cos(πn), and a
//! rational endpoint like 1 contributes sin(n) and cos(n) terms. Coefficient
//! formulas therefore stay inside the canonical series algebra, where
//! identity of formulas is a syntactic check and Parseval's equation can be
//! settled exactly by the closed-form summation engine.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

use crate::closedform::sum_closed_form;
use crate::error::Error;
use crate::exactnum::angle::Angle;
use crate::exactnum::dyadic::{Ctx, Iv};
use crate::exactnum::pipoly::PiPoly;
use crate::exactnum::rational::{self, Round};
use crate::piecewise::{DomainKind, PiecewiseFunction, XPolynomial};
use crate::series::{CoefficientFormula, SeriesExpression, TrigKind, TrigTerm};
use crate::Result;

/// One symbolic antiderivative term q·x^xpow·kind(nx)/n^ndiv.
struct IntTerm {
    q: BigRational,
    xpow: usize,
    kind: TrigKind,
    ndiv: u32,
}

/// Antiderivative of xʲ·kind(nx), by integration by parts:
/// ∫xʲ sin(nx) = −xʲcos(nx)/n + (j/n)∫xʲ⁻¹cos(nx),
/// ∫xʲ cos(nx) =  xʲsin(nx)/n − (j/n)∫xʲ⁻¹sin(nx).
fn antiderivative(j: usize, kind: TrigKind) -> Vec<IntTerm> {
    let (lead_q, lead_kind, tail_sign) = match kind {
        TrigKind::Sin => (-BigRational::one(), TrigKind::Cos, BigRational::one()),
        TrigKind::Cos => (BigRational::one(), TrigKind::Sin, -BigRational::one()),
    };
    let mut terms = vec![IntTerm {
        q: lead_q,
        xpow: j,
        kind: lead_kind,
        ndiv: 1,
    }];
    if j > 0 {
        let jr = BigRational::from_usize(j).expect("small index");
        let other = match kind {
            TrigKind::Sin => TrigKind::Cos,
            TrigKind::Cos => TrigKind::Sin,
        };
        for t in antiderivative(j - 1, other) {
            terms.push(IntTerm {
                q: &tail_sign * &jr * t.q,
                xpow: t.xpow,
                kind: t.kind,
                ndiv: t.ndiv + 1,
            });
        }
    }
    terms
}

/// Exact ∫ poly(x)·kind(nx) dx over [lo, hi], as raw trig terms in n.
fn piece_integral(
    poly: &XPolynomial,
    lo: &Angle,
    hi: &Angle,
    kind: TrigKind,
) -> Result<Vec<TrigTerm>> {
    let mut out = Vec::new();
    for (j, cj) in poly.coeffs().iter().enumerate() {
        if cj.is_zero() {
            continue;
        }
        for t in antiderivative(j, kind) {
            for (endpoint, negate) in [(hi, false), (lo, true)] {
                let xpow = endpoint.to_pipoly().pow(t.xpow as u32)?;
                let mut c = cj.mul(&xpow)?.scale(&t.q);
                if negate {
                    c = c.neg();
                }
                out.push(TrigTerm {
                    c,
                    kind: t.kind,
                    beta: endpoint.clone(),
                    p: t.ndiv,
                });
            }
        }
    }
    Ok(out)
}

/// Scales every coefficient of a canonical formula by `factor`/π. The
/// canonical form has already dropped the identically-zero sin(0·n) and
/// sin(π·n) terms, so surviving coefficients must be divisible by π; when
/// one is not, the formula leaves ℚ[π] and the error says which constant
/// obstructed it.
fn scale_div_pi(e: &SeriesExpression, factor: i64) -> Result<SeriesExpression> {
    let f = BigRational::from_i64(factor).expect("small factor");
    let mut terms = Vec::with_capacity(e.terms().len());
    for t in e.terms() {
        terms.push(TrigTerm {
            c: t.c.scale(&f).try_div_pi()?,
            kind: t.kind,
            beta: t.beta.clone(),
            p: t.p,
        });
    }
    Ok(SeriesExpression::new(terms))
}

/// Exact Fourier sine coefficients bₙ = (2/π)∫₀^π f(x)·sin(nx) dx of a
/// half-domain function, as a formula valid for every n ≥ 1.
pub fn sine_coefficients(f: &PiecewiseFunction) -> Result<CoefficientFormula> {
    if f.domain() != DomainKind::Half {
        return Err(Error::invalid(
            "sine coefficients are computed for functions on [0, pi]; \
             use full_coefficients on [-pi, pi]",
        ));
    }
    let mut terms = Vec::new();
    for piece in f.pieces() {
        terms.extend(piece_integral(&piece.poly, &piece.lo, &piece.hi, TrigKind::Sin)?);
    }
    scale_div_pi(&SeriesExpression::new(terms), 2)
}

/// The full-domain coefficient triple: f ≈ a0/2 + Σ aₙcos(nx) + bₙsin(nx).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullCoefficients {
    pub a0: PiPoly,
    pub a: CoefficientFormula,
    pub b: CoefficientFormula,
}

/// Exact Fourier coefficients on [−π, π]: a0 = (1/π)∫f, aₙ = (1/π)∫f·cos(nx),
/// bₙ = (1/π)∫f·sin(nx). Parity is not used as a shortcut: an odd function
/// comes out with an empty cosine side because the integrals cancel exactly.
pub fn full_coefficients(f: &PiecewiseFunction) -> Result<FullCoefficients> {
    if f.domain() != DomainKind::Full {
        return Err(Error::invalid(
            "full coefficients are computed for functions on [-pi, pi]; \
             use sine_coefficients on [0, pi]",
        ));
    }
    let mut mean = PiPoly::zero();
    let mut cos_terms = Vec::new();
    let mut sin_terms = Vec::new();
    for piece in f.pieces() {
        mean = mean.add(&piece.poly.integral(&piece.lo, &piece.hi)?);
        cos_terms.extend(piece_integral(&piece.poly, &piece.lo, &piece.hi, TrigKind::Cos)?);
        sin_terms.extend(piece_integral(&piece.poly, &piece.lo, &piece.hi, TrigKind::Sin)?);
    }
    Ok(FullCoefficients {
        a0: mean.try_div_pi()?,
        a: scale_div_pi(&SeriesExpression::new(cos_terms), 1)?,
        b: scale_div_pi(&SeriesExpression::new(sin_terms), 1)?,
    })
}

/// A rigorously evaluated coefficient: `value` holds `digits` decimals and
/// `bound` the guaranteed error radius ("0" when the value was computed by
/// exact rational arithmetic).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientValue {
    pub value: String,
    pub bound: String,
}

fn bigint_pow(base: u64, e: u32) -> BigInt {
    let b = BigInt::from(base);
    let mut r = BigInt::one();
    for _ in 0..e {
        r *= &b;
    }
    r
}

/// sin/cos of t·π when the value is rational, per Niven's theorem: the only
/// rational values occur at multiples of π/6, and are 0, ±1/2, ±1.
fn exact_trig(kind: TrigKind, t_times_pi: &BigRational) -> Option<BigRational> {
    let two = BigRational::from_i32(2).expect("two");
    let six = BigRational::from_i32(6).expect("six");
    let t = t_times_pi - &two * (t_times_pi / &two).floor();
    let k6 = &t * &six;
    if !k6.is_integer() {
        return None;
    }
    let k = (k6.to_integer() % BigInt::from(12)).to_i32()?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let table = |v: i32| -> Option<BigRational> {
        match v {
            0 | 6 => Some(BigRational::zero()),
            1 | 5 => Some(half.clone()),
            3 => Some(BigRational::one()),
            7 | 11 => Some(-half.clone()),
            9 => Some(-BigRational::one()),
            _ => None, // ±√3/2
        }
    };
    match kind {
        TrigKind::Sin => table(k),
        TrigKind::Cos => table((k + 3) % 12),
    }
}

/// Exact rational value of the formula at index n, when every term admits
/// one (trig factor rational by Niven, and the scalar coefficient free of π
/// unless the trig factor vanishes).
fn exact_value(cf: &CoefficientFormula, n: u64) -> Option<BigRational> {
    let mut acc = BigRational::zero();
    for t in cf.terms() {
        if !t.beta.r.is_zero() {
            return None;
        }
        let sn = &t.beta.s * BigRational::from_u64(n)?;
        let tv = exact_trig(t.kind, &sn)?;
        if tv.is_zero() {
            continue;
        }
        let c = t.c.as_rational()?;
        acc += c * tv / BigRational::from(bigint_pow(n, t.p));
    }
    Some(acc)
}

/// Interval enclosure of the formula's value at index n.
fn formula_iv(cf: &CoefficientFormula, n: u64, ctx: &Ctx) -> Iv {
    let mut acc = ctx.from_int(0);
    for t in cf.terms() {
        let arg = t.beta.mul_int(n as i64).to_iv(ctx);
        let tv = match t.kind {
            TrigKind::Sin => ctx.sin(&arg),
            TrigKind::Cos => ctx.cos(&arg),
        };
        let prod = ctx.mul(&tv, &t.c.eval_iv(ctx));
        acc = ctx.add(&acc, &ctx.div_uint(&prod, &bigint_pow(n, t.p)));
    }
    acc
}

/// Evaluates a coefficient formula at index n to `digits` correct decimals.
/// Rational values (Niven angles, π-free coefficients) are computed exactly;
/// everything else goes through adaptive interval arithmetic.
pub fn coefficient_at(cf: &CoefficientFormula, n: u64, digits: u32) -> Result<CoefficientValue> {
    if n == 0 {
        return Err(Error::invalid("coefficient index n must be at least 1"));
    }
    if digits == 0 || digits > 1000 {
        return Err(Error::invalid("digits must be between 1 and 1000"));
    }
    if let Some(v) = exact_value(cf, n) {
        return Ok(CoefficientValue {
            value: rational::decimal_string(&v, digits, Round::Nearest),
            bound: "0".into(),
        });
    }
    let mut bits = digits * 4 + 64;
    let mut widest: Option<(Ctx, Iv)> = None;
    while bits <= digits * 4 + 8192 {
        let ctx = Ctx::new(bits);
        let iv = formula_iv(cf, n, &ctx);
        if let Some(m) = ctx.decimal_mantissa(&iv, digits) {
            return Ok(CoefficientValue {
                value: rational::format_scaled_integer(&m, digits),
                bound: format!("1e-{digits}"),
            });
        }
        widest = Some((ctx, iv));
        bits *= 2;
    }
    // The enclosure keeps pinching a rounding boundary; report the midpoint
    // with the honest doubled radius.
    let (ctx, iv) = widest.expect("at least one refinement ran");
    let mid = (&iv.lo + &iv.hi) / BigInt::from(2);
    let v = ctx.mantissa_to_rational(&mid);
    Ok(CoefficientValue {
        value: rational::decimal_string(&v, digits, Round::Nearest),
        bound: format!("2e-{digits}"),
    })
}

/// Fast float value of the formula at index n (plots, spot-checks).
pub fn coefficient_at_f64(cf: &CoefficientFormula, n: u64) -> f64 {
    cf.term_value_f64(n)
}

/// Verdict of the syntactic comparison of two canonical formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalEquality {
    /// Canonical forms coincide, hence the formulas agree at every n.
    Equal,
    /// Canonical forms differ. Frequencies that are rational multiples of π
    /// can alias over the integers, so callers follow up with a numeric
    /// spot-check before declaring the formulas semantically different.
    NotEqualFormally,
}

pub fn canonical_equal(x: &CoefficientFormula, y: &CoefficientFormula) -> CanonicalEquality {
    if x == y {
        CanonicalEquality::Equal
    } else {
        CanonicalEquality::NotEqualFormally
    }
}

/// Numeric follow-up to [`CanonicalEquality::NotEqualFormally`]: do the two
/// formulas agree within `tol` at n = 1..=count?
pub fn spot_check_agrees(x: &CoefficientFormula, y: &CoefficientFormula, count: u64, tol: f64) -> bool {
    (1..=count).all(|n| (x.term_value_f64(n) - y.term_value_f64(n)).abs() <= tol)
}

/// Both sides of Parseval's equation, exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsevalReport {
    /// (1/π)∫₋π^π f², from polynomial antiderivatives.
    pub lhs: PiPoly,
    /// a0²/2 + Σₙ (aₙ² + bₙ²), from squaring the coefficient formulas and
    /// summing in closed form.
    pub rhs: PiPoly,
    pub equal: bool,
}

/// Checks Parseval's equation for f: the exact square integral against the
/// exact sum of squared coefficients. Half-domain functions go through their
/// odd extension, i.e. the sine side only.
pub fn parseval_check(f: &PiecewiseFunction) -> Result<ParsevalReport> {
    let lhs = f.square_integral()?;
    let rhs = match f.domain() {
        DomainKind::Half => {
            let b = sine_coefficients(f)?;
            sum_closed_form(&b.mul(&b)?)?
        }
        DomainKind::Full => {
            let fc = full_coefficients(f)?;
            let two = BigRational::from_i32(2).expect("two");
            let mut rhs = fc.a0.mul(&fc.a0)?.div_rational(&two)?;
            rhs = rhs.add(&sum_closed_form(&fc.a.mul(&fc.a)?)?);
            rhs.add(&sum_closed_form(&fc.b.mul(&fc.b)?)?)
        }
    };
    let equal = lhs == rhs;
    Ok(ParsevalReport { lhs, rhs, equal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::parse_rational;
    use crate::piecewise::{Parity, Piece};
    use proptest::prelude::*;

    fn rat(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn poly(coeffs: &[&str]) -> PiPoly {
        PiPoly::new(coeffs.iter().map(|s| rat(s)).collect()).unwrap()
    }

    fn xpoly(coeffs: &[&[&str]]) -> XPolynomial {
        XPolynomial::new(coeffs.iter().map(|c| poly(c)).collect()).unwrap()
    }

    fn half_fn(pieces: Vec<Piece>) -> PiecewiseFunction {
        PiecewiseFunction::new(pieces, DomainKind::Half, Parity::None).unwrap()
    }

    /// (π−x)/2 on [0, π].
    fn sawtooth() -> PiecewiseFunction {
        half_fn(vec![Piece::new(
            Angle::zero(),
            Angle::pi(),
            xpoly(&[&["0", "1/2"], &["-1/2"]]),
        )
        .unwrap()])
    }

    /// x(π−b)/2 on [0,b], then b(π−x)/2 on [b,π], for rational b ∈ (0, π).
    fn ramp(b_num: i64, b_den: i64) -> PiecewiseFunction {
        let b = rat(&format!("{b_num}/{b_den}"));
        let rise = XPolynomial::new(vec![
            PiPoly::zero(),
            PiPoly::new(vec![-&b / rat("2"), rat("1/2")]).unwrap(),
        ])
        .unwrap();
        let fall = XPolynomial::new(vec![
            PiPoly::new(vec![BigRational::zero(), &b / rat("2")]).unwrap(),
            PiPoly::from_rational(-&b / rat("2")),
        ])
        .unwrap();
        let brk = Angle::of(b_num, b_den, 0, 1);
        half_fn(vec![
            Piece::new(Angle::zero(), brk.clone(), rise).unwrap(),
            Piece::new(brk, Angle::pi(), fall).unwrap(),
        ])
    }

    #[test]
    fn sawtooth_coefficients_are_one_over_n() {
        let cf = sine_coefficients(&sawtooth()).unwrap();
        let want = SeriesExpression::single(PiPoly::one(), TrigKind::Cos, Angle::zero(), 1);
        assert_eq!(cf, want);
    }

    #[test]
    fn ramp_coefficients_are_sin_bn_over_n2() {
        // b = 1: sin(n)/n²
        let cf = sine_coefficients(&ramp(1, 1)).unwrap();
        let want = SeriesExpression::single(PiPoly::one(), TrigKind::Sin, Angle::from_int(1), 2);
        assert_eq!(cf, want);
        // b = 1/3: sin(n/3)/n²
        let cf = sine_coefficients(&ramp(1, 3)).unwrap();
        let want = SeriesExpression::single(PiPoly::one(), TrigKind::Sin, Angle::of(1, 3, 0, 1), 2);
        assert_eq!(cf, want);
    }

    #[test]
    fn quadratic_pieces_give_the_sin_squared_expansion() {
        // −(π/8)x² + ((π−1)/2)x on [0,2], then (π−x)/2: the function whose
        // coefficients are sin²(n)/n³ = 1/(2n³) − cos(2n)/(2n³)
        let f = half_fn(vec![
            Piece::new(
                Angle::zero(),
                Angle::from_int(2),
                xpoly(&[&[], &["-1/2", "1/2"], &["0", "-1/8"]]),
            )
            .unwrap(),
            Piece::new(
                Angle::from_int(2),
                Angle::pi(),
                xpoly(&[&["0", "1/2"], &["-1/2"]]),
            )
            .unwrap(),
        ]);
        let cf = sine_coefficients(&f).unwrap();
        let want = SeriesExpression::new(vec![
            TrigTerm {
                c: poly(&["1/2"]),
                kind: TrigKind::Cos,
                beta: Angle::zero(),
                p: 3,
            },
            TrigTerm {
                c: poly(&["-1/2"]),
                kind: TrigKind::Cos,
                beta: Angle::from_int(2),
                p: 3,
            },
        ]);
        assert_eq!(cf, want);
    }

    #[test]
    fn cubic_pieces_give_the_sin_cubed_expansion() {
        // three pieces whose sine coefficients are sin³(n)/n⁴
        // = (3sin(n) − sin(3n))/(4n⁴)
        let f = half_fn(vec![
            Piece::new(
                Angle::zero(),
                Angle::from_int(1),
                xpoly(&[&[], &["-1/2", "3/8"], &[], &["0", "-1/24"]]),
            )
            .unwrap(),
            Piece::new(
                Angle::from_int(1),
                Angle::from_int(3),
                xpoly(&[
                    &["0", "-1/16"],
                    &["-1/2", "9/16"],
                    &["0", "-3/16"],
                    &["0", "1/48"],
                ]),
            )
            .unwrap(),
            Piece::new(
                Angle::from_int(3),
                Angle::pi(),
                xpoly(&[&["0", "1/2"], &["-1/2"]]),
            )
            .unwrap(),
        ]);
        let cf = sine_coefficients(&f).unwrap();
        let want = SeriesExpression::new(vec![
            TrigTerm {
                c: poly(&["3/4"]),
                kind: TrigKind::Sin,
                beta: Angle::from_int(1),
                p: 4,
            },
            TrigTerm {
                c: poly(&["-1/4"]),
                kind: TrigKind::Sin,
                beta: Angle::from_int(3),
                p: 4,
            },
        ]);
        assert_eq!(cf, want);
    }

    #[test]
    fn tent_coefficients_alternate_on_odd_n() {
        // πx/4 to π/2, then π(π−x)/4: coefficients sin(nπ/2)/n²
        let f = half_fn(vec![
            Piece::new(
                Angle::zero(),
                Angle::of(0, 1, 1, 2),
                xpoly(&[&[], &["0", "1/4"]]),
            )
            .unwrap(),
            Piece::new(
                Angle::of(0, 1, 1, 2),
                Angle::pi(),
                xpoly(&[&["0", "0", "1/4"], &["0", "-1/4"]]),
            )
            .unwrap(),
        ]);
        let cf = sine_coefficients(&f).unwrap();
        let want =
            SeriesExpression::single(PiPoly::one(), TrigKind::Sin, Angle::of(0, 1, 1, 2), 2);
        assert_eq!(cf, want);
    }

    #[test]
    fn full_coefficients_of_x_squared() {
        let f = PiecewiseFunction::new(
            vec![Piece::new(Angle::pi().neg(), Angle::pi(), xpoly(&[&[], &[], &["1"]])).unwrap()],
            DomainKind::Full,
            Parity::Even,
        )
        .unwrap();
        let fc = full_coefficients(&f).unwrap();
        assert_eq!(fc.a0, poly(&["0", "0", "2/3"]));
        let want_a = SeriesExpression::single(PiPoly::from_int(4), TrigKind::Cos, Angle::pi(), 2);
        assert_eq!(fc.a, want_a);
        assert!(fc.b.is_empty());
    }

    #[test]
    fn odd_extensions_have_an_empty_cosine_side() {
        let ext = ramp(1, 1).odd_extension().unwrap();
        let fc = full_coefficients(&ext).unwrap();
        assert!(fc.a0.is_zero());
        assert!(fc.a.is_empty());
        let want = SeriesExpression::single(PiPoly::one(), TrigKind::Sin, Angle::from_int(1), 2);
        assert_eq!(fc.b, want);
    }

    #[test]
    fn coefficient_values_are_rigorous() {
        // sin(n)/n² at n = 3: sin(3)/9 = 0.0156800008955408...
        let cf = SeriesExpression::single(PiPoly::one(), TrigKind::Sin, Angle::from_int(1), 2);
        let v = coefficient_at(&cf, 3, 10).unwrap();
        assert_eq!(v.value, "0.0156800009");
        assert_eq!(v.bound, "1e-10");
        // an exactly-rational value that sits on a rounding boundary:
        // cos(πn)/(8n) at n = 2 is 1/16 = 0.0625, which rounds half away
        // from zero to 0.063 — only exact arithmetic can decide that
        let tie = SeriesExpression::single(poly(&["1/8"]), TrigKind::Cos, Angle::pi(), 1);
        let v = coefficient_at(&tie, 2, 3).unwrap();
        assert_eq!(v.value, "0.063");
        assert_eq!(v.bound, "0");
        // (−1)ⁿ factor applied exactly at n = 4
        let alt = SeriesExpression::single(PiPoly::one(), TrigKind::Cos, Angle::pi(), 1);
        let v = coefficient_at(&alt, 4, 6).unwrap();
        assert_eq!(v.value, "0.250000");
        // Niven angle with a vanishing trig factor silences a π coefficient
        let silent = SeriesExpression::single(PiPoly::pi(), TrigKind::Sin, Angle::of(0, 1, 1, 2), 1);
        let v = coefficient_at(&silent, 2, 5).unwrap();
        assert_eq!(v.value, "0.00000");
        assert_eq!(v.bound, "0");
        // empty formula is zero at every index
        let v = coefficient_at(&SeriesExpression::new(vec![]), 7, 4).unwrap();
        assert_eq!(v.value, "0.0000");
    }

    #[test]
    fn coefficient_values_match_float_evaluation() {
        let cf = sine_coefficients(&ramp(1, 1)).unwrap();
        for n in 1..=10u64 {
            let exactish: f64 = coefficient_at(&cf, n, 15).unwrap().value.parse().unwrap();
            let fl = coefficient_at_f64(&cf, n);
            assert!((exactish - fl).abs() < 1e-12);
        }
    }

    #[test]
    fn canonical_equality_with_spot_checks() {
        // (1+(−1)ⁿ)·sin(n)/(2n²), expanded through the product algebra,
        // equals sin(n)/(2n²) − sin((π−1)n)/(2n²) canonically
        use crate::closedform::{ProductExpression, ProductFactor};
        use crate::series::Frequency;
        let product = ProductExpression::new(vec![
            crate::closedform::ProductTerm {
                c: poly(&["1/2"]),
                factors: vec![ProductFactor::sin(Frequency::concrete(Angle::from_int(1)), 1)],
                p: 2,
            },
            crate::closedform::ProductTerm {
                c: poly(&["1/2"]),
                factors: vec![
                    ProductFactor::sin(Frequency::concrete(Angle::from_int(1)), 1),
                    ProductFactor::cos(Frequency::concrete(Angle::pi()), 1),
                ],
                p: 2,
            },
        ]);
        let expanded = product.expand().unwrap().to_concrete().unwrap();
        let direct = SeriesExpression::new(vec![
            TrigTerm {
                c: poly(&["1/2"]),
                kind: TrigKind::Sin,
                beta: Angle::from_int(1),
                p: 2,
            },
            TrigTerm {
                c: poly(&["-1/2"]),
                kind: TrigKind::Sin,
                beta: Angle::of(-1, 1, 1, 1),
                p: 2,
            },
        ]);
        assert_eq!(canonical_equal(&expanded, &direct), CanonicalEquality::Equal);
        // different formulas are formally unequal and numerically separate
        let a = SeriesExpression::single(PiPoly::one(), TrigKind::Sin, Angle::from_int(1), 2);
        let b = SeriesExpression::single(PiPoly::one(), TrigKind::Sin, Angle::from_int(1), 3);
        assert_eq!(canonical_equal(&a, &b), CanonicalEquality::NotEqualFormally);
        assert!(!spot_check_agrees(&a, &b, 8, 1e-9));
        assert!(spot_check_agrees(&a, &a, 8, 1e-15));
    }

    #[test]
    fn parseval_holds_on_known_functions() {
        // Σ sin²(n)/n⁴ = (π−1)²/6
        let report = parseval_check(&ramp(1, 1)).unwrap();
        assert!(report.equal);
        assert_eq!(report.lhs, poly(&["1/6", "-1/3", "1/6"]));
        // sawtooth: Σ 1/n² = π²/6
        let report = parseval_check(&sawtooth()).unwrap();
        assert!(report.equal);
        assert_eq!(report.lhs, poly(&["0", "0", "1/6"]));
        // odd extension goes through the full-domain route to the same value
        let report = parseval_check(&ramp(1, 1).odd_extension().unwrap()).unwrap();
        assert!(report.equal);
        assert_eq!(report.lhs, poly(&["1/6", "-1/3", "1/6"]));
    }

    #[test]
    fn parseval_splits_even_and_odd_energies() {
        // plateau ramp: πx/4, then π/4, then π(π−x)/4 — coefficients
        // sin(n)(1−(−1)ⁿ)/(2n²), i.e. the odd-n half of sin(n)/n²:
        // Σ sin²(2n−1)/(2n−1)⁴ = π²/8 − π/6
        let plateau = half_fn(vec![
            Piece::new(Angle::zero(), Angle::from_int(1), xpoly(&[&[], &["0", "1/4"]])).unwrap(),
            Piece::new(
                Angle::from_int(1),
                Angle::of(-1, 1, 1, 1),
                xpoly(&[&["0", "1/4"]]),
            )
            .unwrap(),
            Piece::new(
                Angle::of(-1, 1, 1, 1),
                Angle::pi(),
                xpoly(&[&["0", "0", "1/4"], &["0", "-1/4"]]),
            )
            .unwrap(),
        ]);
        let report = parseval_check(&plateau).unwrap();
        assert!(report.equal);
        assert_eq!(report.lhs, poly(&["0", "-1/6", "1/8"]));

        // its complement: x(π−2)/4, then (π−2x)/4, then (x−π)(π−2)/4 —
        // coefficients land on even n: Σ sin²(2n)/(2n)⁴ = (π−2)²/24
        let even_part = half_fn(vec![
            Piece::new(
                Angle::zero(),
                Angle::from_int(1),
                xpoly(&[&[], &["-1/2", "1/4"]]),
            )
            .unwrap(),
            Piece::new(
                Angle::from_int(1),
                Angle::of(-1, 1, 1, 1),
                xpoly(&[&["0", "1/4"], &["-1/2"]]),
            )
            .unwrap(),
            Piece::new(
                Angle::of(-1, 1, 1, 1),
                Angle::pi(),
                xpoly(&[&["0", "1/2", "-1/4"], &["-1/2", "1/4"]]),
            )
            .unwrap(),
        ]);
        let report = parseval_check(&even_part).unwrap();
        assert!(report.equal);
        // (π−2)²/24 = 1/6 − π/6 + π²/24
        assert_eq!(report.lhs, poly(&["1/6", "-1/6", "1/24"]));

        // the two energies add up to the full (π−1)²/6
        let total = poly(&["0", "-1/6", "1/8"]).add(&poly(&["1/6", "-1/6", "1/24"]));
        assert_eq!(total, poly(&["1/6", "-1/3", "1/6"]));
    }

    #[test]
    fn corrupted_coefficients_fail_parseval() {
        let g = ramp(1, 1);
        let lhs = g.square_integral().unwrap();
        let corrupted =
            SeriesExpression::single(PiPoly::from_int(2), TrigKind::Sin, Angle::from_int(1), 2);
        let rhs = sum_closed_form(&corrupted.mul(&corrupted).unwrap()).unwrap();
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn coefficients_match_numeric_quadrature() {
        // midpoint quadrature piece-by-piece (each piece is smooth)
        let quad = |f: &PiecewiseFunction, n: u64| -> f64 {
            let mut total = 0.0;
            for p in f.pieces() {
                let (a, b) = (p.lo.eval_f64(), p.hi.eval_f64());
                let steps = 600_000u32;
                let h = (b - a) / steps as f64;
                let mut acc = 0.0;
                for i in 0..steps {
                    let x = a + (i as f64 + 0.5) * h;
                    acc += p.poly.eval_f64(x) * (n as f64 * x).sin();
                }
                total += acc * h;
            }
            2.0 * total / std::f64::consts::PI
        };
        for f in [sawtooth(), ramp(1, 1), ramp(2, 5)] {
            let cf = sine_coefficients(&f).unwrap();
            for n in 1..=10u64 {
                let direct = quad(&f, n);
                let formula = coefficient_at_f64(&cf, n);
                assert!(
                    (direct - formula).abs() < 1e-10,
                    "n={n}: quadrature {direct} vs formula {formula}"
                );
            }
        }
    }

    #[test]
    fn coefficients_are_linear_in_the_function() {
        // sawtooth refined onto the ramp's partition, so pieces align
        let saw = xpoly(&[&["0", "1/2"], &["-1/2"]]);
        let ramp_fn = ramp(1, 1);
        let combined = half_fn(
            ramp_fn
                .pieces()
                .iter()
                .map(|p| Piece::new(p.lo.clone(), p.hi.clone(), p.poly.add(&saw)).unwrap())
                .collect(),
        );
        let sum_formula = sine_coefficients(&combined).unwrap();
        let split = sine_coefficients(&ramp_fn)
            .unwrap()
            .add(&sine_coefficients(&sawtooth()).unwrap());
        assert_eq!(sum_formula, split);
    }

    proptest! {
        #[test]
        fn ramp_family_has_formula_sin_bn_over_n2(num in 1i64..62) {
            // breakpoints b = num/20 ∈ (0, π)
            let f = ramp(num, 20);
            let cf = sine_coefficients(&f).unwrap();
            let want = SeriesExpression::single(
                PiPoly::one(),
                TrigKind::Sin,
                Angle::of(num, 20, 0, 1),
                2,
            );
            prop_assert_eq!(cf, want);
        }
    }
}

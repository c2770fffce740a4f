//! Piecewise polynomial functions on [0, π] or [−π, π], exactly.
//!
//! A function is a contiguous list of pieces, each a polynomial in x whose
//! coefficients live in ℚ[π] and whose breakpoints are angles r + s·π. All
//! structural checks (contiguity, coverage, declared parity) are performed
//! symbolically, so a constructed [`PiecewiseFunction`] is valid by
//! construction, not by sampling. Values at a shared breakpoint follow the
//! Fourier convention: the average of the two one-sided limits.

use num_rational::BigRational;
use num_traits::FromPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use crate::exactnum::angle::Angle;
use crate::exactnum::pipoly::{PiPoly, Sign};
use crate::exactnum::rational;
use crate::error::Error;
use crate::Result;

/// Largest allowed power of x in a piece.
pub const MAX_X_DEGREE: usize = 12;

/// A polynomial in x with coefficients in ℚ[π], stored densely from the
/// constant term up, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XPolynomial {
    coeffs: Vec<PiPoly>,
}

impl XPolynomial {
    pub fn new(mut coeffs: Vec<PiPoly>) -> Result<Self> {
        while coeffs.last().map(PiPoly::is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.len() > MAX_X_DEGREE + 1 {
            return Err(Error::DegreeTooLarge {
                got: coeffs.len() - 1,
                max: MAX_X_DEGREE,
            });
        }
        Ok(XPolynomial { coeffs })
    }

    pub fn zero() -> Self {
        XPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: PiPoly) -> Self {
        XPolynomial::new(vec![c]).expect("constant is within the degree cap")
    }

    /// The monomial c·xᵏ.
    pub fn monomial(c: PiPoly, k: usize) -> Result<Self> {
        let mut coeffs = vec![PiPoly::zero(); k];
        coeffs.push(c);
        XPolynomial::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the convention that the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Coefficient of xᵏ (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> PiPoly {
        self.coeffs.get(k).cloned().unwrap_or_else(PiPoly::zero)
    }

    pub fn coeffs(&self) -> &[PiPoly] {
        &self.coeffs
    }

    pub fn add(&self, other: &XPolynomial) -> XPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k).add(&other.coeff(k))).collect();
        XPolynomial::new(coeffs).expect("sum does not raise the degree")
    }

    pub fn sub(&self, other: &XPolynomial) -> XPolynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> XPolynomial {
        XPolynomial {
            coeffs: self.coeffs.iter().map(PiPoly::neg).collect(),
        }
    }

    pub fn scale(&self, c: &PiPoly) -> Result<XPolynomial> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a.mul(c)?);
        }
        XPolynomial::new(coeffs)
    }

    pub fn mul(&self, other: &XPolynomial) -> Result<XPolynomial> {
        XPolynomial::new(mul_raw(&self.coeffs, &other.coeffs)?)
    }

    /// The reflected polynomial p(−x).
    pub fn compose_neg(&self) -> XPolynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { c.neg() } else { c.clone() })
            .collect();
        XPolynomial { coeffs }
    }

    /// Formal derivative.
    pub fn derivative(&self) -> XPolynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&BigRational::from_usize(k).expect("small index")))
            .collect();
        XPolynomial { coeffs }
    }

    /// Exact value at an angle x = r + sπ, as an element of ℚ[π].
    pub fn eval(&self, x: &Angle) -> Result<PiPoly> {
        eval_raw(&self.coeffs, x)
    }

    /// Exact definite integral over [lo, hi].
    pub fn integral(&self, lo: &Angle, hi: &Angle) -> Result<PiPoly> {
        integral_raw(&self.coeffs, lo, hi)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.eval_f64();
        }
        acc
    }
}

impl fmt::Display for XPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                _ => {
                    if c == &PiPoly::one() {
                        write!(f, "x")?;
                    } else {
                        write!(f, "({c})*x")?;
                    }
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Product of two dense coefficient lists, without the [`MAX_X_DEGREE`] cap
/// (intermediate squares may legitimately exceed it).
fn mul_raw(a: &[PiPoly], b: &[PiPoly]) -> Result<Vec<PiPoly>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let mut coeffs = vec![PiPoly::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            coeffs[i + j] = coeffs[i + j].add(&ai.mul(bj)?);
        }
    }
    Ok(coeffs)
}

/// Horner evaluation of a dense coefficient list at an angle.
fn eval_raw(coeffs: &[PiPoly], x: &Angle) -> Result<PiPoly> {
    let xp = x.to_pipoly();
    let mut acc = PiPoly::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(&xp)?.add(c);
    }
    Ok(acc)
}

/// ∫ p(x) dx from lo to hi for a dense coefficient list, exactly.
fn integral_raw(coeffs: &[PiPoly], lo: &Angle, hi: &Angle) -> Result<PiPoly> {
    let mut anti = vec![PiPoly::zero()];
    for (k, c) in coeffs.iter().enumerate() {
        anti.push(c.div_rational(&BigRational::from_usize(k + 1).expect("small index"))?);
    }
    Ok(eval_raw(&anti, hi)?.sub(&eval_raw(&anti, lo)?))
}

/// One polynomial piece on the closed interval [lo, hi].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub lo: Angle,
    pub hi: Angle,
    pub poly: XPolynomial,
}

impl Piece {
    pub fn new(lo: Angle, hi: Angle, poly: XPolynomial) -> Result<Self> {
        if hi.sub(&lo).exact_sign() != Sign::Positive {
            return Err(Error::InvalidPiecewise {
                detail: format!("piece [{lo}, {hi}] does not have positive width"),
            });
        }
        Ok(Piece { lo, hi, poly })
    }

    /// The mirror image: the piece [−hi, −lo] carrying ±p(−x).
    fn reflected(&self, negate: bool) -> Piece {
        let poly = if negate {
            self.poly.compose_neg().neg()
        } else {
            self.poly.compose_neg()
        };
        Piece {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            poly,
        }
    }
}

/// Which interval the function is defined on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    /// [0, π]
    Half,
    /// [−π, π]
    Full,
}

/// Symmetry the function is declared (and verified) to have.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
    None,
}

/// A piecewise polynomial function with exact breakpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseFunction {
    pieces: Vec<Piece>,
    domain: DomainKind,
    parity: Parity,
}

impl PiecewiseFunction {
    /// Validates contiguity, coverage of the declared domain, and (on the
    /// full domain) the declared parity, all by exact sign tests.
    pub fn new(pieces: Vec<Piece>, domain: DomainKind, parity: Parity) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidPiecewise {
                detail: "a piecewise function needs at least one piece".into(),
            });
        }
        for p in &pieces {
            if p.hi.sub(&p.lo).exact_sign() != Sign::Positive {
                return Err(Error::InvalidPiecewise {
                    detail: format!("piece [{}, {}] does not have positive width", p.lo, p.hi),
                });
            }
        }
        for w in pieces.windows(2) {
            if w[0].hi != w[1].lo {
                return Err(Error::InvalidPiecewise {
                    detail: format!(
                        "pieces are not contiguous: [{}] ends at {} but the next begins at {}",
                        w[0].poly, w[0].hi, w[1].lo
                    ),
                });
            }
        }
        let (want_lo, want_hi) = match domain {
            DomainKind::Half => (Angle::zero(), Angle::pi()),
            DomainKind::Full => (Angle::pi().neg(), Angle::pi()),
        };
        let first = &pieces.first().expect("nonempty").lo;
        let last = &pieces.last().expect("nonempty").hi;
        if *first != want_lo || *last != want_hi {
            return Err(Error::InvalidPiecewise {
                detail: format!(
                    "pieces cover [{first}, {last}] but the domain is [{want_lo}, {want_hi}]"
                ),
            });
        }
        let f = PiecewiseFunction {
            pieces,
            domain,
            parity,
        };
        if domain == DomainKind::Full {
            match parity {
                Parity::Odd => f.check_symmetry(true)?,
                Parity::Even => f.check_symmetry(false)?,
                Parity::None => {}
            }
        }
        Ok(f)
    }

    /// Reflecting every piece must reproduce the function exactly: with
    /// negation for odd parity, without for even.
    fn check_symmetry(&self, negate: bool) -> Result<()> {
        let mut mirrored: Vec<Piece> = self.pieces.iter().map(|p| p.reflected(negate)).collect();
        mirrored.reverse();
        if mirrored != self.pieces {
            let which = if negate { "odd" } else { "even" };
            return Err(Error::InvalidPiecewise {
                detail: format!("declared {which} parity fails the reflection check"),
            });
        }
        Ok(())
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn domain(&self) -> DomainKind {
        self.domain
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Domain endpoints as angles.
    pub fn domain_bounds(&self) -> (Angle, Angle) {
        match self.domain {
            DomainKind::Half => (Angle::zero(), Angle::pi()),
            DomainKind::Full => (Angle::pi().neg(), Angle::pi()),
        }
    }

    /// Exact value at x. Interior points of a piece evaluate that piece; a
    /// breakpoint shared by two pieces yields the average of the two
    /// one-sided values (the value a convergent Fourier series takes at a
    /// jump); domain endpoints are one-sided.
    pub fn evaluate(&self, x: &Angle) -> Result<PiPoly> {
        let mut touching: Vec<PiPoly> = Vec::new();
        for p in &self.pieces {
            let after_lo = x.sub(&p.lo).exact_sign();
            let before_hi = p.hi.sub(x).exact_sign();
            if after_lo == Sign::Negative || before_hi == Sign::Negative {
                continue;
            }
            if after_lo == Sign::Positive && before_hi == Sign::Positive {
                return p.poly.eval(x);
            }
            touching.push(p.poly.eval(x)?);
        }
        match touching.len() {
            0 => Err(Error::OutOfDomain {
                point: x.to_string(),
            }),
            1 => Ok(touching.pop().expect("one element")),
            _ => Ok(touching[0]
                .add(&touching[1])
                .div_rational(&BigRational::from_usize(2).expect("two"))?),
        }
    }

    /// Value at a float, for sampling and plots. Jump points inherit
    /// whichever piece the comparison lands in; exact averages only matter
    /// for symbolic evaluation.
    pub fn eval_f64(&self, x: f64) -> f64 {
        for p in &self.pieces {
            if x >= p.lo.eval_f64() && x <= p.hi.eval_f64() {
                return p.poly.eval_f64(x);
            }
        }
        f64::NAN
    }

    /// The odd extension of a half-domain function to [−π, π]: pieces on
    /// [−π, 0] are the mirrored negations −p(−x).
    pub fn odd_extension(&self) -> Result<PiecewiseFunction> {
        if self.domain != DomainKind::Half {
            return Err(Error::invalid(
                "odd_extension applies to functions on [0, pi]",
            ));
        }
        let mut pieces: Vec<Piece> = self.pieces.iter().map(|p| p.reflected(true)).collect();
        pieces.reverse();
        pieces.extend(self.pieces.iter().cloned());
        PiecewiseFunction::new(pieces, DomainKind::Full, Parity::Odd)
    }

    /// The Parseval left-hand side (1/π)∫₋π^π f(x)² dx, exactly. A
    /// half-domain function is integrated through its odd extension, which
    /// doubles the half-domain integral.
    pub fn square_integral(&self) -> Result<PiPoly> {
        let mut total = PiPoly::zero();
        for p in &self.pieces {
            let sq = mul_raw(p.poly.coeffs(), p.poly.coeffs())?;
            total = total.add(&integral_raw(&sq, &p.lo, &p.hi)?);
        }
        if self.domain == DomainKind::Half {
            total = total.scale(&BigRational::from_usize(2).expect("two"));
        }
        total.try_div_pi()
    }

    /// Piecewise formal derivative (jump discontinuities are simply not
    /// represented; each piece is differentiated on its own interval).
    pub fn derivative(&self) -> PiecewiseFunction {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                lo: p.lo.clone(),
                hi: p.hi.clone(),
                poly: p.poly.derivative(),
            })
            .collect();
        PiecewiseFunction {
            pieces,
            domain: self.domain,
            parity: Parity::None,
        }
    }
}

impl fmt::Display for PiecewiseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "on [{}, {}]: {}", p.lo, p.hi, p.poly)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PieceRepr {
    lo: Angle,
    hi: Angle,
    coeffs: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct FunctionRepr {
    domain: DomainKind,
    parity: Parity,
    pieces: Vec<PieceRepr>,
}

impl Serialize for PiecewiseFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pieces = self
            .pieces
            .iter()
            .map(|p| PieceRepr {
                lo: p.lo.clone(),
                hi: p.hi.clone(),
                coeffs: p
                    .poly
                    .coeffs()
                    .iter()
                    .map(|c| c.coeffs().iter().map(rational::format_rational).collect())
                    .collect(),
            })
            .collect();
        FunctionRepr {
            domain: self.domain,
            parity: self.parity,
            pieces,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PiecewiseFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let repr = FunctionRepr::deserialize(deserializer)?;
        let mut pieces = Vec::with_capacity(repr.pieces.len());
        for p in repr.pieces {
            let mut coeffs = Vec::with_capacity(p.coeffs.len());
            for c in p.coeffs {
                let rats = c
                    .iter()
                    .map(|s| rational::parse_rational(s))
                    .collect::<Result<Vec<BigRational>>>()
                    .map_err(DeError::custom)?;
                coeffs.push(PiPoly::new(rats).map_err(DeError::custom)?);
            }
            let poly = XPolynomial::new(coeffs).map_err(DeError::custom)?;
            pieces.push(Piece::new(p.lo, p.hi, poly).map_err(DeError::custom)?);
        }
        PiecewiseFunction::new(pieces, repr.domain, repr.parity).map_err(DeError::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::parse_rational;
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

    /// (π−x)/2 on [0, π]: the sawtooth limit of Σ sin(nx)/n.
    fn sawtooth() -> PiecewiseFunction {
        let p = xpoly(&[&["0", "1/2"], &["-1/2"]]);
        PiecewiseFunction::new(
            vec![Piece::new(Angle::zero(), Angle::pi(), p).unwrap()],
            DomainKind::Half,
            Parity::None,
        )
        .unwrap()
    }

    /// x(π−1)/2 on [0,1], then (π−x)/2 on [1, π]: the limit of Σ sin(n)sin(nx)/n².
    fn ramp_tooth() -> PiecewiseFunction {
        let a = xpoly(&[&["0"], &["-1/2", "1/2"]]);
        let b = xpoly(&[&["0", "1/2"], &["-1/2"]]);
        PiecewiseFunction::new(
            vec![
                Piece::new(Angle::zero(), Angle::from_int(1), a).unwrap(),
                Piece::new(Angle::from_int(1), Angle::pi(), b).unwrap(),
            ],
            DomainKind::Half,
            Parity::None,
        )
        .unwrap()
    }

    /// πx/4 up to π/2, then π(π−x)/4: the tent whose sine coefficients are
    /// sin(nπ/2)/n².
    fn tent() -> PiecewiseFunction {
        let up = xpoly(&[&["0"], &["0", "1/4"]]);
        let down = xpoly(&[&["0", "0", "1/4"], &["0", "-1/4"]]);
        let mid = Angle::of(0, 1, 1, 2);
        PiecewiseFunction::new(
            vec![
                Piece::new(Angle::zero(), mid.clone(), up).unwrap(),
                Piece::new(mid, Angle::pi(), down).unwrap(),
            ],
            DomainKind::Half,
            Parity::None,
        )
        .unwrap()
    }

    #[test]
    fn xpolynomial_trims_and_caps_degree() {
        let p = XPolynomial::new(vec![poly(&["1"]), PiPoly::zero(), PiPoly::zero()]).unwrap();
        assert_eq!(p.degree(), 0);
        let too_big = XPolynomial::monomial(PiPoly::one(), 13);
        assert!(matches!(too_big, Err(Error::DegreeTooLarge { .. })));
        assert!(XPolynomial::monomial(PiPoly::one(), 12).is_ok());
    }

    #[test]
    fn evaluation_follows_the_jump_convention() {
        let g = ramp_tooth();
        // interior points of each piece
        let half = Angle::of(1, 2, 0, 1);
        assert_eq!(g.evaluate(&half).unwrap(), poly(&["-1/4", "1/4"]));
        let two = Angle::from_int(2);
        assert_eq!(g.evaluate(&two).unwrap(), poly(&["-1", "1/2"]));
        // both pieces agree at the shared breakpoint x = 1
        assert_eq!(g.evaluate(&Angle::from_int(1)).unwrap(), poly(&["-1/2", "1/2"]));
        // one-sided values at the domain endpoints
        assert_eq!(g.evaluate(&Angle::zero()).unwrap(), PiPoly::zero());
        assert_eq!(g.evaluate(&Angle::pi()).unwrap(), PiPoly::zero());
        // outside the domain
        assert!(matches!(
            g.evaluate(&Angle::from_int(4)),
            Err(Error::OutOfDomain { .. })
        ));

        // the full sawtooth jumps from −π/2 to π/2 at 0; the value there is 0
        let full = sawtooth().odd_extension().unwrap();
        assert_eq!(full.evaluate(&Angle::zero()).unwrap(), PiPoly::zero());
        // sanity away from the jump: f(π/2) = π/4, f(−π/2) = −π/4
        let quarter = Angle::of(0, 1, 1, 2);
        assert_eq!(full.evaluate(&quarter).unwrap(), poly(&["0", "1/4"]));
        assert_eq!(
            full.evaluate(&quarter.neg()).unwrap(),
            poly(&["0", "-1/4"])
        );
    }

    #[test]
    fn odd_extension_mirrors_and_negates() {
        let g = ramp_tooth();
        let ext = g.odd_extension().unwrap();
        assert_eq!(ext.pieces().len(), 4);
        assert_eq!(ext.domain(), DomainKind::Full);
        assert_eq!(ext.parity(), Parity::Odd);
        // leftmost piece is −(π+x)/2 on [−π, −1]
        let leftmost = &ext.pieces()[0];
        assert_eq!(leftmost.lo, Angle::pi().neg());
        assert_eq!(leftmost.hi, Angle::from_int(-1));
        assert_eq!(
            leftmost.poly,
            xpoly(&[&["0", "-1/2"], &["-1/2"]])
        );
        // x(π−1)/2 is odd through the origin, so the reflected copy keeps
        // the same formula
        assert_eq!(ext.pieces()[1].poly, g.pieces()[0].poly);
    }

    #[test]
    fn square_integrals_match_known_values() {
        // (2/π)∫₀^π ((π−x)/2)² dx = π²/6
        assert_eq!(
            sawtooth().square_integral().unwrap(),
            poly(&["0", "0", "1/6"])
        );
        // the two-piece ramp gives (π−1)²/6
        assert_eq!(
            ramp_tooth().square_integral().unwrap(),
            poly(&["1/6", "-1/3", "1/6"])
        );
        // the tent with slope ±π/4 gives π⁴/96, and exercises a π breakpoint
        assert_eq!(
            tent().square_integral().unwrap(),
            poly(&["0", "0", "0", "0", "1/96"])
        );
        // the odd extension integrates to the same value
        assert_eq!(
            ramp_tooth().odd_extension().unwrap().square_integral().unwrap(),
            poly(&["1/6", "-1/3", "1/6"])
        );
        // all of these are nonnegative
        assert_eq!(
            tent().square_integral().unwrap().exact_sign(),
            Sign::Positive
        );
    }

    #[test]
    fn square_integral_matches_midpoint_quadrature() {
        for f in [sawtooth(), ramp_tooth()] {
            let exact = f.square_integral().unwrap().eval_f64();
            let n = 1_000_000u32;
            let h = std::f64::consts::PI / n as f64;
            let mut acc = 0.0;
            for i in 0..n {
                let x = (i as f64 + 0.5) * h;
                let v = f.eval_f64(x);
                acc += v * v;
            }
            let numeric = 2.0 * acc * h / std::f64::consts::PI;
            assert!(
                (exact - numeric).abs() < 1e-9,
                "exact {exact} vs quadrature {numeric}"
            );
        }
    }

    #[test]
    fn derivative_applies_the_power_rule() {
        // −(π/8)x² + ((π−1)/2)x → −(π/4)x + (π−1)/2
        let p = xpoly(&[&["0"], &["-1/2", "1/2"], &["0", "-1/8"]]);
        let want = xpoly(&[&["-1/2", "1/2"], &["0", "-1/4"]]);
        assert_eq!(p.derivative(), want);
        assert_eq!(XPolynomial::constant(PiPoly::pi()).derivative(), XPolynomial::zero());
    }

    #[test]
    fn parity_declarations_are_verified() {
        // x/2 on [−π, π] is odd
        let line = xpoly(&[&["0"], &["1/2"]]);
        let f = PiecewiseFunction::new(
            vec![Piece::new(Angle::pi().neg(), Angle::pi(), line.clone()).unwrap()],
            DomainKind::Full,
            Parity::Odd,
        );
        assert!(f.is_ok());
        // ...but it is not even
        let f = PiecewiseFunction::new(
            vec![Piece::new(Angle::pi().neg(), Angle::pi(), line).unwrap()],
            DomainKind::Full,
            Parity::Even,
        );
        assert!(matches!(f, Err(Error::InvalidPiecewise { .. })));
    }

    #[test]
    fn contiguity_and_coverage_are_enforced() {
        let one = XPolynomial::constant(PiPoly::one());
        // gap between pieces
        let gappy = PiecewiseFunction::new(
            vec![
                Piece::new(Angle::zero(), Angle::from_int(1), one.clone()).unwrap(),
                Piece::new(Angle::from_int(2), Angle::pi(), one.clone()).unwrap(),
            ],
            DomainKind::Half,
            Parity::None,
        );
        assert!(matches!(gappy, Err(Error::InvalidPiecewise { .. })));
        // does not reach π
        let short = PiecewiseFunction::new(
            vec![Piece::new(Angle::zero(), Angle::from_int(3), one.clone()).unwrap()],
            DomainKind::Half,
            Parity::None,
        );
        assert!(matches!(short, Err(Error::InvalidPiecewise { .. })));
        // reversed interval is rejected at the Piece level
        assert!(Piece::new(Angle::pi(), Angle::zero(), one).is_err());
    }

    #[test]
    fn json_matches_the_documented_schema() {
        let g = ramp_tooth();
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(
            json,
            r#"{"domain":"half","parity":"none","pieces":[{"lo":{"r":"0","s":"0"},"hi":{"r":"1","s":"0"},"coeffs":[[],["-1/2","1/2"]]},{"lo":{"r":"1","s":"0"},"hi":{"r":"0","s":"1"},"coeffs":[["0","1/2"],["-1/2"]]}]}"#
        );
        let back: PiecewiseFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
        // untrimmed zero coefficients are accepted on input
        let padded = r#"{"domain":"half","parity":"none","pieces":[{"lo":{"r":"0","s":"0"},"hi":{"r":"1","s":"0"},"coeffs":[["0","0"],["-1/2","1/2"]]},{"lo":{"r":"1","s":"0"},"hi":{"r":"0","s":"1"},"coeffs":[["0","1/2"],["-1/2"]]}]}"#;
        let from_padded: PiecewiseFunction = serde_json::from_str(padded).unwrap();
        assert_eq!(from_padded, g);
        // deserialization re-validates
        let bad = r#"{"domain":"half","parity":"none","pieces":[{"lo":{"r":"0","s":"0"},"hi":{"r":"1","s":"0"},"coeffs":[["1"]]}]}"#;
        assert!(serde_json::from_str::<PiecewiseFunction>(bad).is_err());
    }

    proptest! {
        #[test]
        fn odd_extension_is_odd_at_rational_points(num in 1i64..314, den in 100i64..101) {
            let ext = ramp_tooth().odd_extension().unwrap();
            let x = Angle::of(num, den, 0, 1);
            let plus = ext.evaluate(&x).unwrap();
            let minus = ext.evaluate(&x.neg()).unwrap();
            prop_assert_eq!(plus.neg(), minus);
        }

        #[test]
        fn square_integral_is_nonnegative(c0 in -5i64..5, c1 in -5i64..5, brk in 1i64..30) {
            // piece c₀ + c₁x up to (brk/30)π, then the constant value it
            // reached; a π-proportional breakpoint keeps (1/π)∫f² in ℚ[π]
            let b = Angle::of(0, 1, brk, 30);
            let p1 = XPolynomial::new(vec![
                PiPoly::from_int(c0),
                PiPoly::from_int(c1),
            ]).unwrap();
            let reached = p1.eval(&b).unwrap();
            let p2 = XPolynomial::constant(reached);
            let f = PiecewiseFunction::new(
                vec![
                    Piece::new(Angle::zero(), b.clone(), p1).unwrap(),
                    Piece::new(b, Angle::pi(), p2).unwrap(),
                ],
                DomainKind::Half,
                Parity::None,
            ).unwrap();
            let sq = f.square_integral().unwrap();
            prop_assert!(sq.exact_sign() != Sign::Negative);
        }
    }
}

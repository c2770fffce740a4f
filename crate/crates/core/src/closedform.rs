//! Exact closed forms for Σₙ sin(βn)/nᵖ and Σₙ cos(βn)/nᵖ, and for products
//! of such factors after expansion.
//!
//! For β reduced to \[0, 2π\] and p ≥ 1 the classical Fourier evaluations of
//! Bernoulli polynomials give, with t = β/(2π):
//!
//! * Σ sin(βn)/nᵖ = (−1)^(k+1) (2π)ᵖ B_p(t) / (2·p!) for odd p = 2k+1
//!   (for p = 1 this is (π−β)/2, valid on the open interval 0 < β < 2π);
//! * Σ cos(βn)/nᵖ = (−1)^(k+1) (2π)ᵖ B_p(t) / (2·p!) for even p = 2k ≥ 2,
//!   including β = 0 where it is ζ(p).
//!
//! Every other kind/parity combination (sin with even p, cos with odd p,
//! ζ(odd)) leaves ℚ\[π\] — Catalan-constant and odd-zeta territory — and is
//! reported as [`Error::NotClosedForm`], which callers treat as an answer,
//! not a failure.
//!
//! Products of factors sin(α·n)^a · cos(γ·n)^b / nᵖ reduce to the linear
//! case by repeated product-to-sum expansion ([`ProductExpression`]).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::exactnum::angle::Angle;
use crate::exactnum::pipoly::PiPoly;
use crate::series::{Frequency, ParamSeries, ParamTerm, SeriesExpression, TrigKind};
use crate::Result;

/// Largest Bernoulli index supported (well beyond the p ≤ 16 degree cap of
/// π-polynomials, which binds first).
pub const MAX_BERNOULLI: u32 = 20;

/// Binomial coefficient C(n, k) as a big integer.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// The Bernoulli numbers b₀..b_k (convention b₁ = −1/2), via the defining
/// recurrence b_k = −1/(k+1) · Σ_{j<k} C(k+1, j) b_j.
pub fn bernoulli_numbers(k: u32) -> Vec<BigRational> {
    assert!(k <= MAX_BERNOULLI, "bernoulli index {k} exceeds {MAX_BERNOULLI}");
    let mut b: Vec<BigRational> = Vec::with_capacity(k as usize + 1);
    for m in 0..=k {
        if m == 0 {
            b.push(BigRational::one());
            continue;
        }
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binomial(m + 1, j as u32)) * bj;
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// Coefficients (x⁰ first) of the Bernoulli polynomial
/// B_k(x) = Σ_m C(k, m) b_{k−m} x^m.
pub fn bernoulli_polynomial(k: u32) -> Vec<BigRational> {
    let b = bernoulli_numbers(k);
    (0..=k)
        .map(|m| BigRational::from_integer(binomial(k, m)) * &b[(k - m) as usize])
        .collect()
}

/// Exact value of Σ_{n≥1} kind(βn)/nᵖ for a canonical term (β ∈ [0, π],
/// sin ⟹ β ∉ {0, π}); `NotClosedForm` when the combination leaves ℚ[π].
fn sum_single(kind: TrigKind, beta: &Angle, p: u32) -> Result<PiPoly> {
    let closed = match kind {
        TrigKind::Sin => p % 2 == 1 && p >= 1,
        TrigKind::Cos => p % 2 == 0 && p >= 2,
    };
    if !closed {
        let name = match kind {
            TrigKind::Sin => "sin",
            TrigKind::Cos => "cos",
        };
        return Err(Error::NotClosedForm {
            detail: format!("{name}(({beta})*n)/n^{p}"),
        });
    }
    if p as usize > crate::exactnum::pipoly::MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            got: p as usize,
            max: crate::exactnum::pipoly::MAX_DEGREE,
        });
    }
    let k = p / 2; // p = 2k (cos) or 2k+1 (sin)
    let sign = if k % 2 == 0 {
        BigRational::from_integer((-1).into())
    } else {
        BigRational::one()
    };
    // (−1)^{k+1} (2π)^p B_p(β/2π) / (2·p!)
    //   = (−1)^{k+1}/(2·p!) Σ_m C(p,m) b_{p−m} 2^{p−m} π^{p−m} β^m
    let b = bernoulli_numbers(p);
    let mut factorial = BigRational::one();
    for i in 1..=p {
        factorial *= BigRational::from_integer(BigInt::from(i));
    }
    let scale = &sign / (BigRational::from_integer(2.into()) * factorial);
    let beta_poly = beta.to_pipoly();
    let mut total = PiPoly::zero();
    for m in 0..=p {
        let coeff = BigRational::from_integer(binomial(p, m))
            * &b[(p - m) as usize]
            * BigRational::from_integer(BigInt::one() << ((p - m) as usize))
            * &scale;
        if coeff.is_zero() {
            continue;
        }
        let pi_part = PiPoly::monomial(coeff, (p - m) as usize)?;
        let term = pi_part.mul(&beta_poly.pow(m)?)?;
        total = total.add(&term);
    }
    Ok(total)
}

/// Exact sum of a canonical concrete series, term by term.
///
/// Canonical form guarantees β ∈ \[0, π\] with sin-β strictly interior, so
/// the Bernoulli formulas apply on their closed validity ranges; the p = 1
/// sine case needs β ∈ (0, 2π), which canonicity also guarantees.
pub fn sum_closed_form(series: &SeriesExpression) -> Result<PiPoly> {
    let mut total = PiPoly::zero();
    for t in series.terms() {
        let v = sum_single(t.kind, &t.beta, t.p)?;
        total = total.add(&t.c.mul(&v)?);
    }
    Ok(total)
}

/// How the summation index runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexMode {
    /// Σ over all n ≥ 1.
    All,
    /// Σ over even n only (re-indexed internally).
    EvenOnly,
    /// Σ over odd n only.
    OddOnly,
    /// Σ (−1)^{n+1} over all n ≥ 1.
    Alternating,
}

/// Applies an index transform to a parametric series. The result is again
/// an honest series over all n ≥ 1 whose sum equals the transformed sum of
/// the original.
pub fn index_transform(series: &ParamSeries, mode: IndexMode) -> Result<ParamSeries> {
    Ok(match mode {
        IndexMode::All => series.clone(),
        IndexMode::EvenOnly => series.even_indexed(),
        IndexMode::OddOnly => series.odd_indexed(),
        IndexMode::Alternating => series.alternating()?,
    })
}

/// Concrete-series convenience wrapper over [`index_transform`].
pub fn index_transform_concrete(
    series: &SeriesExpression,
    mode: IndexMode,
) -> Result<SeriesExpression> {
    Ok(index_transform(&series.to_param(), mode)?
        .to_concrete()
        .expect("index transforms preserve concreteness"))
}

/// One multiplicative factor kind(freq·n)^power of a product term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductFactor {
    pub kind: TrigKind,
    pub freq: Frequency,
    pub power: u32,
}

impl ProductFactor {
    pub fn sin(freq: Frequency, power: u32) -> Self {
        ProductFactor {
            kind: TrigKind::Sin,
            freq,
            power,
        }
    }

    pub fn cos(freq: Frequency, power: u32) -> Self {
        ProductFactor {
            kind: TrigKind::Cos,
            freq,
            power,
        }
    }
}

/// One additive term c · Π factors / nᵖ of a product expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductTerm {
    pub c: PiPoly,
    pub factors: Vec<ProductFactor>,
    pub p: u32,
}

/// A sum of products of sine/cosine powers over nᵖ — the input language of
/// the summation engine (and the parse target of the expression syntax).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ProductExpression {
    pub terms: Vec<ProductTerm>,
}

/// Cap on the total trigonometric degree of one product term; beyond this
/// the expansion size and π-degree are no longer reasonable.
pub const MAX_TRIG_DEGREE: u32 = 64;

impl ProductExpression {
    pub fn new(terms: Vec<ProductTerm>) -> Self {
        ProductExpression { terms }
    }

    /// A single product c·Πfactors/nᵖ.
    pub fn product(c: PiPoly, factors: Vec<ProductFactor>, p: u32) -> Self {
        ProductExpression {
            terms: vec![ProductTerm { c, factors, p }],
        }
    }

    /// Fully expands into a linear combination of kind(freq·n)/nᵖ via the
    /// product-to-sum identities. Works symbolically in x when frequencies
    /// carry an x part.
    pub fn expand(&self) -> Result<ParamSeries> {
        let mut total = ParamSeries::default();
        for term in &self.terms {
            let degree: u32 = term.factors.iter().map(|f| f.power).sum();
            if degree > MAX_TRIG_DEGREE {
                return Err(Error::invalid(format!(
                    "trigonometric degree {degree} exceeds {MAX_TRIG_DEGREE}"
                )));
            }
            let mut acc = ParamSeries::new(vec![ParamTerm {
                c: term.c.clone(),
                kind: TrigKind::Cos,
                freq: Frequency::concrete(Angle::zero()),
                p: term.p,
            }]);
            for f in &term.factors {
                let unit = ParamSeries::new(vec![ParamTerm {
                    c: PiPoly::one(),
                    kind: f.kind,
                    freq: f.freq.clone(),
                    p: 0,
                }]);
                for _ in 0..f.power {
                    acc = acc.mul(&unit)?;
                }
            }
            total = total.add(&acc);
        }
        Ok(total)
    }

    /// Exact sum over n ≥ 1 (requires an x-free expression).
    pub fn evaluate_sum(&self) -> Result<PiPoly> {
        self.evaluate_sum_indexed(IndexMode::All)
    }

    /// Exact sum with an index transform applied first.
    pub fn evaluate_sum_indexed(&self, mode: IndexMode) -> Result<PiPoly> {
        let expanded = self.expand()?;
        let transformed = index_transform(&expanded, mode)?;
        let concrete = transformed.to_concrete().ok_or_else(|| {
            Error::invalid("expression contains the free variable x; substitute a value first")
        })?;
        sum_closed_form(&concrete)
    }

    /// Substitutes a concrete angle for x, returning the canonical series.
    pub fn substitute(&self, x: &Angle) -> Result<SeriesExpression> {
        Ok(self.expand()?.substitute(x))
    }

    /// True if any factor frequency involves the free variable x.
    pub fn has_free_variable(&self) -> bool {
        self.terms
            .iter()
            .any(|t| t.factors.iter().any(|f| !f.freq.is_concrete()))
    }
}

/// Builds Σ (sin(n)/n)^k · extra / n^p style products conveniently.
pub fn sinc_power(k: u32) -> ProductExpression {
    ProductExpression::product(
        PiPoly::one(),
        vec![ProductFactor::sin(
            Frequency::concrete(Angle::from_int(1)),
            k,
        )],
        k,
    )
}

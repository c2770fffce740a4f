//! Integer-relation detection by exact LLL lattice reduction, specialized
//! to recognizing decimals as elements of ℚ\[π\].
//!
//! To decide whether v ≈ (a + bπ)/q, build the lattice spanned by the rows
//! (eᵢ | round(10ᵈ·vᵢ)) where v₀ = v and the remaining vᵢ are the basis
//! constants (1, π, π², …). An integer relation m₀v + Σ mᵢvᵢ ≈ 0 makes the
//! vector (m | Σ mᵢ·round(10ᵈvᵢ)) unusually short, and LLL finds it. The
//! candidate −(Σ_{i≥1} mᵢvᵢ)/m₀ is then re-evaluated in interval arithmetic
//! and accepted only if it reproduces the input with four guard digits to
//! spare and all relation entries stay below a height cap, mirroring how a
//! human rejects absurd fractions that merely happen to fit.
//!
//! The reduction itself is the classical Lenstra–Lenstra–Lovász algorithm
//! run entirely in rational arithmetic: bases here have at most a handful
//! of rows, so exactness costs nothing and removes every floating-point
//! failure mode.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::exactnum::dyadic::Ctx;
use crate::exactnum::pipoly::PiPoly;
use crate::exactnum::rational::pow10;
use crate::Result;

/// An integer lattice given by basis rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub basis: Vec<Vec<BigInt>>,
}

impl Lattice {
    /// Validates shape: at least one row, equal positive dimensions.
    /// Independence is checked during reduction, where it is free.
    pub fn new(basis: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = match basis.first() {
            Some(row) if !row.is_empty() => row.len(),
            _ => return Err(Error::invalid("lattice needs at least one nonempty row")),
        };
        if basis.iter().any(|row| row.len() != dim) {
            return Err(Error::invalid("lattice rows must have equal dimension"));
        }
        Ok(Lattice { basis })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> usize {
        self.basis[0].len()
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dot_qq(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dot_zq(a: &[BigInt], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .map(|(x, y)| BigRational::from_integer(x.clone()) * y)
        .sum()
}

/// Nearest integer to a rational (ties toward +∞).
fn round_rational(r: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    (BigInt::from(2) * r.numer() + r.denom()).div_floor(&(two * r.denom()))
}

/// Gram–Schmidt data for an integer basis: squared norms Bᵢ of the
/// orthogonalized vectors and the projection coefficients μᵢⱼ.
struct GramSchmidt {
    norms: Vec<BigRational>,
    mu: Vec<Vec<BigRational>>,
}

fn gram_schmidt(basis: &[Vec<BigInt>]) -> Result<GramSchmidt> {
    let n = basis.len();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut norms: Vec<BigRational> = Vec::with_capacity(n);
    let mut mu: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let mut v: Vec<BigRational> = basis[i]
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        for j in 0..i {
            let m = dot_zq(&basis[i], &star[j]) / &norms[j];
            for (vk, sk) in v.iter_mut().zip(&star[j]) {
                *vk -= &m * sk;
            }
            mu[i][j] = m;
        }
        let norm = dot_qq(&v, &v);
        if norm.is_zero() {
            return Err(Error::DependentBasis);
        }
        star.push(v);
        norms.push(norm);
    }
    Ok(GramSchmidt { norms, mu })
}

/// Classical LLL reduction with parameter `delta` in (1/4, 1], entirely in
/// exact arithmetic. The output spans the same lattice, is size-reduced
/// (|μᵢⱼ| ≤ 1/2), and satisfies the Lovász condition. Bases here are tiny,
/// so the full Gram–Schmidt recomputation after every basis change is the
/// simplest correct choice.
pub fn lll_reduce(l: &Lattice, delta: &BigRational) -> Result<Lattice> {
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    if *delta <= quarter || *delta > BigRational::one() {
        return Err(Error::invalid("delta must lie in (1/4, 1]"));
    }
    let mut basis = l.basis.clone();
    let n = basis.len();
    if n == 1 {
        if basis[0].iter().all(|x| x.is_zero()) {
            return Err(Error::DependentBasis);
        }
        return Ok(Lattice { basis });
    }
    let mut gs = gram_schmidt(&basis)?;
    let mut k = 1usize;
    let mut steps = 0u64;
    while k < n {
        // size-reduce row k against rows k-1 .. 0
        for j in (0..k).rev() {
            let q = round_rational(&gs.mu[k][j]);
            if !q.is_zero() {
                let bj = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
                gs = gram_schmidt(&basis)?;
            }
        }
        // Lovász: ‖b*ₖ‖² ≥ (δ − μ²ₖ,ₖ₋₁)·‖b*ₖ₋₁‖²
        let m = &gs.mu[k][k - 1];
        if gs.norms[k] >= (delta - m * m) * &gs.norms[k - 1] {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            gs = gram_schmidt(&basis)?;
            k = k.max(2) - 1;
        }
        steps += 1;
        assert!(steps < 1_000_000, "LLL failed to terminate");
    }
    Ok(Lattice { basis })
}

/// A recognized constant: the exact candidate, the integer relation that
/// produced it, and how well it reproduces the input.
#[derive(Clone, Debug)]
pub struct RecognitionResult {
    /// The recognized element of ℚ[π].
    pub candidate: PiPoly,
    /// Integers (m₀, m₁, …) with m₀·input + Σ mᵢ·basisᵢ ≈ 0.
    pub relation: Vec<BigInt>,
    /// Certified upper bound on |candidate − input|; exactly zero when the
    /// candidate is rational and equals the input.
    pub residual: BigRational,
    /// floor(−log₁₀ residual); for a zero residual, the working precision
    /// plus 16 as a finite stand-in for "exact".
    pub confidence_digits: u32,
}

impl RecognitionResult {
    pub fn residual_f64(&self) -> f64 {
        crate::exactnum::rational::rational_to_f64(&self.residual)
    }
}

/// Number of correct leading decimal digits implied by an error bound:
/// the largest k ≤ cap with r ≤ 10⁻ᵏ.
fn leading_digits(r: &BigRational, cap: u32) -> u32 {
    if r.is_zero() {
        return cap;
    }
    let mut k = 0;
    while k < cap {
        let next = BigRational::new(BigInt::one(), pow10(k + 1));
        if *r <= next {
            k += 1;
        } else {
            break;
        }
    }
    k
}

/// Tries to identify a decimal as a small combination of the basis
/// constants. `digits` states how many decimals of `v` are meaningful;
/// four of them are demanded as guard digits, so a candidate is returned
/// only if it reproduces `v` to within 10^{−(digits−4)}, every relation
/// entry is at most `height_cap`, and the residual is far smaller than the
/// pigeonhole scale for relations of that height (see the plausibility
/// check below). `None` is the honest negative outcome.
pub fn recognize_constant(
    v: &BigRational,
    basis: &[PiPoly],
    digits: u32,
    height_cap: u64,
) -> Result<Option<RecognitionResult>> {
    if digits < 8 || digits > 100 {
        return Err(Error::invalid("recognition needs 8..=100 stated digits"));
    }
    if basis.is_empty() {
        return Err(Error::invalid("recognition needs a nonempty basis"));
    }
    if basis.iter().any(|b| b.is_zero()) {
        return Err(Error::invalid("basis constants must be nonzero"));
    }
    let scale = pow10(digits);
    let ctx = Ctx::new(digits * 10 / 3 + 48);

    // rows (identity | round(10^digits · value)); row 0 carries v itself
    let n = basis.len() + 1;
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    let mut values: Vec<BigRational> = Vec::with_capacity(n);
    values.push(v.clone());
    for b in basis {
        let iv = b.eval_iv(&ctx);
        let mid = (&iv.lo + &iv.hi) / BigInt::from(2);
        values.push(ctx.mantissa_to_rational(&mid));
    }
    for (i, val) in values.iter().enumerate() {
        let mut row = vec![BigInt::zero(); n + 1];
        row[i] = BigInt::one();
        row[n] = round_rational(&(val * BigRational::from_integer(scale.clone())));
        rows.push(row);
    }

    let reduced = lll_reduce(
        &Lattice::new(rows)?,
        &BigRational::new(BigInt::from(3), BigInt::from(4)),
    )?;

    // shortest reduced row that actually involves v
    let candidate_row = reduced
        .basis
        .iter()
        .filter(|row| !row[0].is_zero())
        .min_by_key(|row| dot(row, row));
    let row = match candidate_row {
        Some(r) => r,
        None => return Ok(None),
    };

    let relation: Vec<BigInt> = row[..n].to_vec();
    let cap = BigInt::from(height_cap);
    if relation.iter().any(|m| m.abs() > cap) {
        return Ok(None);
    }

    // candidate = −(Σ_{i≥1} mᵢ bᵢ) / m₀
    let mut acc = PiPoly::zero();
    for (m, b) in relation[1..].iter().zip(basis) {
        acc = acc.add(&b.scale(&BigRational::from_integer(m.clone())));
    }
    let candidate = acc
        .neg()
        .div_rational(&BigRational::from_integer(relation[0].clone()))?;

    // certified residual: exact for rational candidates, interval otherwise
    let diff = candidate.sub(&PiPoly::from_rational(v.clone()));
    let residual = match diff.as_rational() {
        Some(r) => r.abs(),
        None => ctx.abs_hi_rational(&diff.eval_iv(&ctx)),
    };
    let tolerance = BigRational::new(BigInt::one(), pow10(digits - 4));
    if residual > tolerance {
        return Ok(None);
    }
    // Plausibility: by a union bound over all coefficient vectors of height
    // ≤ H, a uniformly random input admits some relation with residual ≤ r
    // with probability on the order of r·Hⁿ. Every random decimal therefore
    // "has" relations with r·Hⁿ ≈ 1 (the pigeonhole scale), while genuine
    // identifications beat that scale by many orders of magnitude. Accept
    // only when the odds of a coincidence are below 10⁻³.
    let height = relation
        .iter()
        .map(|m| m.abs())
        .max()
        .expect("nonempty relation")
        .max(BigInt::one());
    let mut odds = residual.clone();
    for _ in 0..relation.len() {
        odds *= BigRational::from_integer(height.clone());
    }
    if odds > BigRational::new(BigInt::one(), BigInt::from(1000)) {
        return Ok(None);
    }
    let confidence_digits = leading_digits(&residual, digits + 16);
    Ok(Some(RecognitionResult {
        candidate,
        relation,
        residual,
        confidence_digits,
    }))
}

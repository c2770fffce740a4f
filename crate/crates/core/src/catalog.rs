//! Registry of verifiable series identities.
//!
//! Each [`Identity`] packages one checkable claim about sums of products and
//! powers of sin(αn)/nᵖ and cos(αn)/nᵖ: a list of series sharing one closed
//! form in ℚ\[π\], a rule that holds only on a stated interval of a free
//! variable, a piecewise function whose sine coefficients match a formula, a
//! Parseval energy identity, or a deliberate near miss whose value is close
//! to, but provably different from, the pattern its neighbors suggest.
//!
//! Verification is zero tolerance wherever the mathematics allows it: both
//! sides reduce to canonical form in ℚ\[π\] and must agree coefficient by
//! coefficient. Interval claims are checked at rational interior points and
//! at closed endpoints, and every such entry also carries exterior
//! counter-points where the computed value must *leave* the rule, pinning
//! the validity range from both sides. Negative entries (the near misses)
//! assert both the true value and its difference from the pattern. One
//! entry is [`VerificationMode::NumericOnly`]: its headline constant π²/8
//! arises as twice the square of a ℚ\[π\] value, so the squaring step is
//! certified from partial sums with rigorous tail bounds while every
//! companion identity is still checked exactly.
//!
//! The numeric mode replays each claim with [`partial_sum`]: a certified
//! enclosure of the truncated series must land within its own tail bound of
//! the exact closed form. Pair relations (equal or distinct sums) are
//! anchored to the exact values, which the partial sums must track.

use std::cmp::Ordering;
use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::closedform::{index_transform, sum_closed_form, IndexMode};
use crate::error::Error;
use crate::exactnum::angle::Angle;
use crate::exactnum::dyadic::Ctx;
use crate::exactnum::pipoly::PiPoly;
use crate::exactnum::rational::{parse_rational, pow10};
use crate::expr::parse_product_expression;
use crate::fourier::{
    canonical_equal, parseval_check, sine_coefficients, spot_check_agrees, CanonicalEquality,
};
use crate::numeric::partial_sum;
use crate::piecewise::{DomainKind, Parity, Piece, PiecewiseFunction, XPolynomial};
use crate::series::ParamSeries;
use crate::Result;

/// Interior points per interval claim in the default exact check.
const INTERIOR_SAMPLES: usize = 5;

/// Interior points per interval claim in the numeric check (kept smaller
/// because every point costs a fresh partial sum).
const NUMERIC_SAMPLES: usize = 4;

/// Denominator of the rational grid that interior sample points are drawn
/// from; 64ths are fine enough to land several points in every validity
/// interval in the registry.
const GRID_DENOMINATOR: i64 = 64;

/// Agreement threshold for floating-point coefficient spot checks; the
/// compared formulas are exact, so only f64 roundoff is being absorbed.
const SPOT_TOL: f64 = 1e-9;

/// How an identity can be verified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerificationMode {
    /// Both sides reduce to ℚ\[π\]; equality is exact with zero tolerance.
    Exact,
    /// The headline constant leaves ℚ\[π\], so only a certified numeric
    /// check is possible; exact companion identities are still verified.
    NumericOnly,
}

/// Which engine a verification request runs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Canonical-form comparison in ℚ\[π\].
    Exact,
    /// Certified partial sums against the exact values.
    Numeric,
}

/// Outcome of one verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        })
    }
}

/// The result of verifying one identity.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub id: String,
    pub status: Status,
    /// Human-readable evidence: the values compared, the points checked,
    /// or the error that stopped the check.
    pub details: String,
    pub runtime_ms: u128,
}

/// A point outside an interval claim's validity range, with the exact value
/// the series takes there when it stays in ℚ\[π\]. The check asserts that
/// the value differs from the rule's polynomial, so the stated interval is
/// sharp rather than merely sufficient.
#[derive(Clone, Debug)]
pub struct ExteriorPoint {
    pub x: Angle,
    /// Index into the entry's expression list.
    pub expr_index: usize,
    /// Expected exact value at `x`; `None` asserts only that the value
    /// leaves the rule.
    pub actual: Option<PiPoly>,
}

/// The claim an [`Identity`] makes, in a form the verifier can execute.
#[derive(Clone, Debug)]
pub enum Check {
    /// Every expression sums to the same element of ℚ\[π\].
    Sums {
        exprs: Vec<&'static str>,
        index: IndexMode,
        value: PiPoly,
    },
    /// The expression sums to `value`, which must differ from the
    /// `pattern` suggested by neighboring identities.
    NotPattern {
        expr: &'static str,
        value: PiPoly,
        pattern: PiPoly,
    },
    /// Two sums with stated values that must not coincide.
    Contrast {
        a: &'static str,
        b: &'static str,
        va: PiPoly,
        vb: PiPoly,
    },
    /// Pairwise relations among several sums: `equal` pairs must match
    /// exactly, `distinct` pairs must not.
    Verdicts {
        exprs: Vec<&'static str>,
        equal: Vec<(usize, usize)>,
        distinct: Vec<(usize, usize)>,
    },
    /// Every expression, summed as a function of x, equals `rhs` on the
    /// interval from `lo` to `hi`, and leaves it at the exterior points.
    Interval {
        exprs: Vec<&'static str>,
        index: IndexMode,
        rhs: XPolynomial,
        lo: Angle,
        hi: Angle,
        closed_lo: bool,
        closed_hi: bool,
        exterior: Vec<ExteriorPoint>,
    },
    /// The sine coefficients of `function` equal the formula `coeffs`.
    Fourier {
        function: PiecewiseFunction,
        coeffs: &'static str,
    },
    /// Parseval: (1/π)∫₋π^π f² over the odd extension equals Σ bₙ²,
    /// which in turn equals `value`.
    Parseval {
        function: PiecewiseFunction,
        value: PiPoly,
    },
    /// A series whose square steps outside ℚ\[π\]: Σ = `sum_value` and the
    /// termwise squares sum to `sq_value`, both exact; the headline
    /// constant satisfies 2·(Σ)² = `headline`, certified numerically.
    SquaredSeries {
        expr: &'static str,
        index: IndexMode,
        sum_value: PiPoly,
        sq_expr: &'static str,
        sq_value: PiPoly,
        headline: PiPoly,
    },
}

/// One registry entry: a named, checkable identity.
#[derive(Clone, Debug)]
pub struct Identity {
    /// Stable key; the CLI addresses entries as `sincsum verify <id>`.
    pub id: &'static str,
    /// What the identity states, in words and math.
    pub description: &'static str,
    pub mode: VerificationMode,
    pub check: Check,
}

// ---------------------------------------------------------------------------
// Registry construction helpers.

fn rat(s: &str) -> BigRational {
    parse_rational(s).expect("registry rational")
}

fn pp(coeffs: &[&str]) -> PiPoly {
    PiPoly::new(coeffs.iter().map(|s| rat(s)).collect()).expect("registry π-polynomial")
}

fn xp(coeffs: &[&[&str]]) -> XPolynomial {
    XPolynomial::new(coeffs.iter().map(|c| pp(c)).collect()).expect("registry x-polynomial")
}

fn half_fn(pieces: Vec<(Angle, Angle, XPolynomial)>) -> PiecewiseFunction {
    let pieces = pieces
        .into_iter()
        .map(|(lo, hi, poly)| Piece::new(lo, hi, poly).expect("registry piece"))
        .collect();
    PiecewiseFunction::new(pieces, DomainKind::Half, Parity::None).expect("registry function")
}

/// (π−x)/2 on \[0, π\]: sine coefficients 1/n.
fn sawtooth() -> PiecewiseFunction {
    half_fn(vec![(
        Angle::zero(),
        Angle::pi(),
        xp(&[&["0", "1/2"], &["-1/2"]]),
    )])
}

/// x(π−1)/2 on \[0, 1\], then (π−x)/2 on \[1, π\]: the sawtooth with its
/// jump shaved off, sine coefficients sin(n)/n².
fn clipped_sawtooth() -> PiecewiseFunction {
    half_fn(vec![
        (Angle::zero(), Angle::from_int(1), xp(&[&["0"], &["-1/2", "1/2"]])),
        (Angle::from_int(1), Angle::pi(), xp(&[&["0", "1/2"], &["-1/2"]])),
    ])
}

/// The same construction with the corner at 1/3 instead of 1, sine
/// coefficients sin(n/3)/n².
fn clipped_sawtooth_third() -> PiecewiseFunction {
    half_fn(vec![
        (Angle::zero(), Angle::of(1, 3, 0, 1), xp(&[&["0"], &["-1/6", "1/2"]])),
        (Angle::of(1, 3, 0, 1), Angle::pi(), xp(&[&["0", "1/6"], &["-1/6"]])),
    ])
}

/// πx/4 rising to π²/8 at π/2, then π(π−x)/4: sine coefficients
/// sin(nπ/2)/n².
fn tent() -> PiecewiseFunction {
    half_fn(vec![
        (Angle::zero(), Angle::of(0, 1, 1, 2), xp(&[&["0"], &["0", "1/4"]])),
        (
            Angle::of(0, 1, 1, 2),
            Angle::pi(),
            xp(&[&["0", "0", "1/4"], &["0", "-1/4"]]),
        ),
    ])
}

/// x(π−2)/4, then (π−2x)/4, then (x−π)(π−2)/4 with corners at 1 and π−1:
/// generated by the even-indexed half of the coefficients sin(n)/n².
fn even_part_fn() -> PiecewiseFunction {
    half_fn(vec![
        (Angle::zero(), Angle::from_int(1), xp(&[&["0"], &["-1/2", "1/4"]])),
        (
            Angle::from_int(1),
            Angle::of(-1, 1, 1, 1),
            xp(&[&["0", "1/4"], &["-1/2"]]),
        ),
        (
            Angle::of(-1, 1, 1, 1),
            Angle::pi(),
            xp(&[&["0", "1/2", "-1/4"], &["-1/2", "1/4"]]),
        ),
    ])
}

/// πx/4, then the plateau π/4, then π(π−x)/4 with corners at 1 and π−1:
/// generated by the odd-indexed half of the coefficients sin(n)/n².
fn odd_part_fn() -> PiecewiseFunction {
    half_fn(vec![
        (Angle::zero(), Angle::from_int(1), xp(&[&["0"], &["0", "1/4"]])),
        (Angle::from_int(1), Angle::of(-1, 1, 1, 1), xp(&[&["0", "1/4"]])),
        (
            Angle::of(-1, 1, 1, 1),
            Angle::pi(),
            xp(&[&["0", "0", "1/4"], &["0", "-1/4"]]),
        ),
    ])
}

/// −πx²/8 + (π−1)x/2 on \[0, 2\], then (π−x)/2: sine coefficients
/// sin²(n)/n³.
fn parabolic_blend() -> PiecewiseFunction {
    half_fn(vec![
        (
            Angle::zero(),
            Angle::from_int(2),
            xp(&[&["0"], &["-1/2", "1/2"], &["0", "-1/8"]]),
        ),
        (Angle::from_int(2), Angle::pi(), xp(&[&["0", "1/2"], &["-1/2"]])),
    ])
}

/// The cubic blend with knots at 1 and 3 that meets (π−x)/2 with two
/// continuous derivatives: sine coefficients sin³(n)/n⁴.
fn cubic_blend() -> PiecewiseFunction {
    half_fn(vec![
        (
            Angle::zero(),
            Angle::from_int(1),
            xp(&[&["0"], &["-1/2", "3/8"], &["0"], &["0", "-1/24"]]),
        ),
        (
            Angle::from_int(1),
            Angle::from_int(3),
            xp(&[
                &["0", "-1/16"],
                &["-1/2", "9/16"],
                &["0", "-3/16"],
                &["0", "1/48"],
            ]),
        ),
        (Angle::from_int(3), Angle::pi(), xp(&[&["0", "1/2"], &["-1/2"]])),
    ])
}

/// The step of height π/4 dropping to 0 at 2π/3: sine coefficients
/// sin²(nπ/3)/n.
fn third_step() -> PiecewiseFunction {
    half_fn(vec![
        (Angle::zero(), Angle::of(0, 1, 2, 3), xp(&[&["0", "1/4"]])),
        (Angle::of(0, 1, 2, 3), Angle::pi(), XPolynomial::zero()),
    ])
}

/// The staircase taking values 3π/16, π/4, −π/16, 0 with jumps at 2π/5,
/// 2π/3, and 4π/5.
fn five_step() -> PiecewiseFunction {
    half_fn(vec![
        (Angle::zero(), Angle::of(0, 1, 2, 5), xp(&[&["0", "3/16"]])),
        (Angle::of(0, 1, 2, 5), Angle::of(0, 1, 2, 3), xp(&[&["0", "1/4"]])),
        (Angle::of(0, 1, 2, 3), Angle::of(0, 1, 4, 5), xp(&[&["0", "-1/16"]])),
        (Angle::of(0, 1, 4, 5), Angle::pi(), XPolynomial::zero()),
    ])
}

// ---------------------------------------------------------------------------
// The registry.

/// Sawtooth sums, their smoothed relatives, and the quarter-π pair.
fn sawtooth_entries() -> Vec<Identity> {
    vec![
        Identity {
            id: "eq3",
            description: "Σ sin(n)/n and Σ (sin(n)/n)² both equal (π−1)/2.",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec!["sin(n)/n", "sin(n)^2/n^2"],
                index: IndexMode::All,
                value: pp(&["-1/2", "1/2"]),
            },
        },
        Identity {
            id: "eq4",
            description: "Σ sin²(n)/n⁴ = (π−1)²/6, the energy of the coefficients sin(n)/n².",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec!["sin(n)^2/n^4"],
                index: IndexMode::All,
                value: pp(&["1/6", "-1/3", "1/6"]),
            },
        },
        Identity {
            id: "eq5a",
            description: "Σ sin(nx)/n = (π−x)/2 on the open interval (0, 2π).",
            mode: VerificationMode::Exact,
            check: Check::Interval {
                exprs: vec!["sin(x*n)/n"],
                index: IndexMode::All,
                rhs: xp(&[&["0", "1/2"], &["-1/2"]]),
                lo: Angle::zero(),
                hi: Angle::two_pi(),
                closed_lo: false,
                closed_hi: false,
                exterior: vec![
                    ExteriorPoint {
                        x: Angle::zero(),
                        expr_index: 0,
                        actual: Some(PiPoly::zero()),
                    },
                    ExteriorPoint {
                        x: Angle::from_int(-1),
                        expr_index: 0,
                        actual: Some(pp(&["1/2", "-1/2"])),
                    },
                ],
            },
        },
        Identity {
            id: "eq5b",
            description: "Σ sin(n)sin(nx)/n² = (π−x)/2 for 1 ≤ x ≤ 2π−1.",
            mode: VerificationMode::Exact,
            check: Check::Interval {
                exprs: vec!["sin(n)*sin(x*n)/n^2"],
                index: IndexMode::All,
                rhs: xp(&[&["0", "1/2"], &["-1/2"]]),
                lo: Angle::from_int(1),
                hi: Angle::of(-1, 1, 2, 1),
                closed_lo: true,
                closed_hi: true,
                exterior: vec![ExteriorPoint {
                    x: Angle::of(1, 2, 0, 1),
                    expr_index: 0,
                    actual: Some(pp(&["-1/4", "1/4"])),
                }],
            },
        },
        Identity {
            id: "fig1-series",
            description: "The sawtooth (π−x)/2 on [0, π] has sine coefficients 1/n.",
            mode: VerificationMode::Exact,
            check: Check::Fourier {
                function: sawtooth(),
                coeffs: "1/n",
            },
        },
        Identity {
            id: "fig2-series",
            description: "Replacing the sawtooth's jump by the ramp x(π−1)/2 on [0, 1] \
                          smooths its coefficients to sin(n)/n².",
            mode: VerificationMode::Exact,
            check: Check::Fourier {
                function: clipped_sawtooth(),
                coeffs: "sin(n)/n^2",
            },
        },
        Identity {
            id: "h13-series",
            description: "Moving the ramp corner to b = 1/3 gives coefficients sin(n/3)/n².",
            mode: VerificationMode::Exact,
            check: Check::Fourier {
                function: clipped_sawtooth_third(),
                coeffs: "sin(n/3)/n^2",
            },
        },
        Identity {
            id: "summary-gregory",
            description: "Σ sin(nπ/2)/n = 1 − 1/3 + 1/5 − ⋯ = π/4, and weighting by \
                          sin(n)/n leaves the value unchanged.",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec!["sin(pi*n/2)/n", "sin(n)*sin(pi*n/2)/n^2"],
                index: IndexMode::All,
                value: pp(&["0", "1/4"]),
            },
        },
        Identity {
            id: "gregory-tent-series",
            description: "The tent peaking at π²/8 over x = π/2 has sine coefficients \
                          sin(nπ/2)/n².",
            mode: VerificationMode::Exact,
            check: Check::Fourier {
                function: tent(),
                coeffs: "sin(pi*n/2)/n^2",
            },
        },
    ]
}

/// Restrictions of the sawtooth family to even, odd, and sign-alternating
/// indices.
fn parity_split_entries() -> Vec<Identity> {
    vec![
        Identity {
            id: "eq6",
            description: "Over even n, Σ sin(nx)/n and Σ sin(n)sin(nx)/n² both equal \
                          (π−2x)/4 for 1 ≤ x ≤ π−1.",
            mode: VerificationMode::Exact,
            check: Check::Interval {
                exprs: vec!["sin(x*n)/n", "sin(n)*sin(x*n)/n^2"],
                index: IndexMode::EvenOnly,
                rhs: xp(&[&["0", "1/4"], &["-1/2"]]),
                lo: Angle::from_int(1),
                hi: Angle::of(-1, 1, 1, 1),
                closed_lo: true,
                closed_hi: true,
                exterior: vec![ExteriorPoint {
                    x: Angle::of(1, 2, 0, 1),
                    expr_index: 1,
                    actual: Some(pp(&["-1/4", "1/8"])),
                }],
            },
        },
        Identity {
            id: "eq7",
            description: "Over odd n, the same two series are constant: π/4 for \
                          1 ≤ x ≤ π−1.",
            mode: VerificationMode::Exact,
            check: Check::Interval {
                exprs: vec!["sin(x*n)/n", "sin(n)*sin(x*n)/n^2"],
                index: IndexMode::OddOnly,
                rhs: xp(&[&["0", "1/4"]]),
                lo: Angle::from_int(1),
                hi: Angle::of(-1, 1, 1, 1),
                closed_lo: true,
                closed_hi: true,
                exterior: vec![
                    ExteriorPoint {
                        x: Angle::of(1, 2, 0, 1),
                        expr_index: 1,
                        actual: Some(pp(&["0", "1/8"])),
                    },
                    ExteriorPoint {
                        x: Angle::of(7, 2, 0, 1),
                        expr_index: 0,
                        actual: Some(pp(&["0", "-1/4"])),
                    },
                ],
            },
        },
        Identity {
            id: "eq8",
            description: "Σ sin(2n)/(2n) and Σ (sin(2n)/(2n))² both equal (π−2)/4.",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec!["sin(n)/n", "sin(n)^2/n^2"],
                index: IndexMode::EvenOnly,
                value: pp(&["-1/2", "1/4"]),
            },
        },
        Identity {
            id: "eq9",
            description: "Over odd n, Σ sin(n)/n and Σ (sin(n)/n)² both equal π/4.",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec!["sin(n)/n", "sin(n)^2/n^2"],
                index: IndexMode::OddOnly,
                value: pp(&["0", "1/4"]),
            },
        },
        Identity {
            id: "thm2-even-fn",
            description: "The even-indexed half of the coefficients sin(n)/n² generates \
                          the three-piece function x(π−2)/4, (π−2x)/4, (x−π)(π−2)/4.",
            mode: VerificationMode::Exact,
            check: Check::Fourier {
                function: even_part_fn(),
                coeffs: "1/2*sin(n)/n^2 + 1/2*cos(pi*n)*sin(n)/n^2",
            },
        },
        Identity {
            id: "thm2-odd-fn",
            description: "The odd-indexed half generates the plateau πx/4, π/4, π(π−x)/4.",
            mode: VerificationMode::Exact,
            check: Check::Fourier {
                function: odd_part_fn(),
                coeffs: "1/2*sin(n)/n^2 - 1/2*cos(pi*n)*sin(n)/n^2",
            },
        },
        Identity {
            id: "alt-x-over-2",
            description: "With alternating signs, Σ (−1)ⁿ⁺¹ sin(nx)/n and \
                          Σ (−1)ⁿ⁺¹ sin(n)sin(nx)/n² both equal x/2 for 1 ≤ x ≤ π−1.",
            mode: VerificationMode::Exact,
            check: Check::Interval {
                exprs: vec!["sin(x*n)/n", "sin(n)*sin(x*n)/n^2"],
                index: IndexMode::Alternating,
                rhs: xp(&[&["0"], &["1/2"]]),
                lo: Angle::from_int(1),
                hi: Angle::of(-1, 1, 1, 1),
                closed_lo: true,
                closed_hi: true,
                exterior: vec![ExteriorPoint {
                    x: Angle::from_int(3),
                    expr_index: 1,
                    actual: Some(pp(&["3/2", "-2", "1/2"])),
                }],
            },
        },
        Identity {
            id: "alt-eq3-variant",
            description: "At x = 1 the alternating pair collapses to the rational \
                          value 1/2: no π appears.",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec!["sin(n)/n", "sin(n)^2/n^2"],
                index: IndexMode::Alternating,
                value: pp(&["1/2"]),
            },
        },
        Identity {
            id: "eq17",
            description: "Σ (−1)ⁿ⁺¹ sin(nx)/n = x/2 on the open interval (−π, π).",
            mode: VerificationMode::Exact,
            check: Check::Interval {
                exprs: vec!["sin(x*n)/n"],
                index: IndexMode::Alternating,
                rhs: xp(&[&["0"], &["1/2"]]),
                lo: Angle::of(0, 1, -1, 1),
                hi: Angle::pi(),
                closed_lo: false,
                closed_hi: false,
                exterior: vec![ExteriorPoint {
                    x: Angle::from_int(4),
                    expr_index: 0,
                    actual: Some(pp(&["2", "-1"])),
                }],
            },
        },
    ]
}

/// Sums with several sin(n)/n factors and their cosine-weighted relatives.
fn product_entries() -> Vec<Identity> {
    vec![
        Identity {
            id: "eq10",
            description: "Multiplying sin(3n)/n by up to three factors sin(n)/n leaves \
                          the sum at (π−3)/2 every time.",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec![
                    "sin(3*n)/n",
                    "sin(n)*sin(3*n)/n^2",
                    "sin(n)^2*sin(3*n)/n^3",
                    "sin(n)^3*sin(3*n)/n^4",
                ],
                index: IndexMode::All,
                value: pp(&["-3/2", "1/2"]),
            },
        },
        Identity {
            id: "eq11",
            description: "All four stages Σ (sin(n)/n)ᵏ sin(nx)/n, k = 0…3, agree with \
                          (π−x)/2 on the common range 3 ≤ x ≤ 2π−3.",
            mode: VerificationMode::Exact,
            check: Check::Interval {
                exprs: vec![
                    "sin(x*n)/n",
                    "sin(n)*sin(x*n)/n^2",
                    "sin(n)^2*sin(x*n)/n^3",
                    "sin(n)^3*sin(x*n)/n^4",
                ],
                index: IndexMode::All,
                rhs: xp(&[&["0", "1/2"], &["-1/2"]]),
                lo: Angle::from_int(3),
                hi: Angle::of(-3, 1, 2, 1),
                closed_lo: true,
                closed_hi: true,
                exterior: vec![
                    ExteriorPoint {
                        x: Angle::of(3, 2, 0, 1),
                        expr_index: 2,
                        actual: Some(pp(&["-3/4", "15/32"])),
                    },
                    ExteriorPoint {
                        x: Angle::of(5, 2, 0, 1),
                        expr_index: 3,
                        actual: Some(pp(&["-5/4", "191/384"])),
                    },
                ],
            },
        },
        Identity {
            id: "eq11-k2",
            description: "The two-factor stage Σ sin²(n)sin(nx)/n³ alone is valid on \
                          the wider range 2 ≤ x ≤ 2π−2.",
            mode: VerificationMode::Exact,
            check: Check::Interval {
                exprs: vec!["sin(n)^2*sin(x*n)/n^3"],
                index: IndexMode::All,
                rhs: xp(&[&["0", "1/2"], &["-1/2"]]),
                lo: Angle::from_int(2),
                hi: Angle::of(-2, 1, 2, 1),
                closed_lo: true,
                closed_hi: true,
                exterior: vec![ExteriorPoint {
                    x: Angle::of(3, 2, 0, 1),
                    expr_index: 0,
                    actual: Some(pp(&["-3/4", "15/32"])),
                }],
            },
        },
        Identity {
            id: "eq11-k3",
            description: "Three factors sin(n)/n narrow the validity range to \
                          3 ≤ x ≤ 2π−3.",
            mode: VerificationMode::Exact,
            check: Check::Interval {
                exprs: vec!["sin(n)^3*sin(x*n)/n^4"],
                index: IndexMode::All,
                rhs: xp(&[&["0", "1/2"], &["-1/2"]]),
                lo: Angle::from_int(3),
                hi: Angle::of(-3, 1, 2, 1),
                closed_lo: true,
                closed_hi: true,
                exterior: vec![ExteriorPoint {
                    x: Angle::of(5, 2, 0, 1),
                    expr_index: 0,
                    actual: Some(pp(&["-5/4", "191/384"])),
                }],
            },
        },
        Identity {
            id: "neg-sin4-3n",
            description: "A fourth factor breaks the pattern: Σ (sin(n)/n)⁴ sin(3n)/n \
                          is a quintic in π, not (π−3)/2.",
            mode: VerificationMode::Exact,
            check: Check::NotPattern {
                expr: "sin(n)^4*sin(3*n)/n^5",
                value: pp(&["-3/2", "27/4", "-343/48", "49/16", "-7/12", "1/24"]),
                pattern: pp(&["-3/2", "1/2"]),
            },
        },
        Identity {
            id: "eq14",
            description: "Σ (sin(n)/n)ᵏ cos(n) equals (π−2)/4 for k = 1, 2, 3.",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec![
                    "sin(n)*cos(n)/n",
                    "sin(n)^2*cos(n)/n^2",
                    "sin(n)^3*cos(n)/n^3",
                ],
                index: IndexMode::All,
                value: pp(&["-1/2", "1/4"]),
            },
        },
        Identity {
            id: "neg-sin4cos",
            description: "At k = 4 the cosine-weighted sum slips to 23π/96 − 1/2, \
                          missing the (π−2)/4 pattern by π/96.",
            mode: VerificationMode::Exact,
            check: Check::NotPattern {
                expr: "sin(n)^4*cos(n)/n^4",
                value: pp(&["-1/2", "23/96"]),
                pattern: pp(&["-1/2", "1/4"]),
            },
        },
        Identity {
            id: "teaser-cos3",
            description: "With weight cos³(n) the sums for k = 1, 2, 3 all equal \
                          3π/16 − 1/2 exactly, although raw partial sums of the \
                          slowly converging k = 1 series suggest a difference in the \
                          seventh digit.",
            mode: VerificationMode::Exact,
            check: Check::Verdicts {
                exprs: vec![
                    "sin(n)*cos(n)^3/n",
                    "sin(n)^2*cos(n)^3/n^2",
                    "sin(n)^3*cos(n)^3/n^3",
                ],
                equal: vec![(0, 1), (1, 2)],
                distinct: vec![],
            },
        },
        Identity {
            id: "teaser-cos5",
            description: "With weight cos⁵(n) all three sums are pairwise different: \
                          the k = 2 and k = 3 values agree to two digits, and the \
                          k = 1 value is negative.",
            mode: VerificationMode::Exact,
            check: Check::Verdicts {
                exprs: vec![
                    "sin(n)*cos(n)^5/n",
                    "sin(n)^2*cos(n)^5/n^2",
                    "sin(n)^3*cos(n)^5/n^3",
                ],
                equal: vec![],
                distinct: vec![(0, 1), (0, 2), (1, 2)],
            },
        },
        Identity {
            id: "sec6-sinc3n",
            description: "Σ (sin(n)/n)ᵏ sin(3n)/(3n) = (π−3)/6 for k = 0, 1, 2, 3.",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec![
                    "1/3*sin(3*n)/n",
                    "1/3*sin(n)*sin(3*n)/n^2",
                    "1/3*sin(n)^2*sin(3*n)/n^3",
                    "1/3*sin(n)^3*sin(3*n)/n^4",
                ],
                index: IndexMode::All,
                value: pp(&["-1/2", "1/6"]),
            },
        },
    ]
}

/// Powers of sin(nx) summed against 1/n and 1/n², with their plateaus,
/// ramps, and the places where the rules break.
fn sine_power_entries() -> Vec<Identity> {
    vec![
        Identity {
            id: "thm4-15a",
            description: "Σ sin³(nx)/n = π/4 on (0, 2π/3).",
            mode: VerificationMode::Exact,
            check: Check::Interval {
                exprs: vec!["sin(x*n)^3/n"],
                index: IndexMode::All,
                rhs: xp(&[&["0", "1/4"]]),
                lo: Angle::zero(),
                hi: Angle::of(0, 1, 2, 3),
                closed_lo: false,
                closed_hi: false,
                exterior: vec![ExteriorPoint {
                    x: Angle::of(5, 2, 0, 1),
                    expr_index: 0,
                    actual: Some(PiPoly::zero()),
                }],
            },
        },
        Identity {
            id: "thm4-15a2",
            description: "The same series Σ sin³(nx)/n drops to 0 on (2π/3, π).",
            mode: VerificationMode::Exact,
            check: Check::Interval {
                exprs: vec!["sin(x*n)^3/n"],
                index: IndexMode::All,
                rhs: XPolynomial::zero(),
                lo: Angle::of(0, 1, 2, 3),
                hi: Angle::pi(),
                closed_lo: false,
                closed_hi: false,
                exterior: vec![ExteriorPoint {
                    x: Angle::of(1, 2, 0, 1),
                    expr_index: 0,
                    actual: Some(pp(&["0", "1/4"])),
                }],
            },
        },
        Identity {
            id: "thm4-15b",
            description: "Σ sin⁴(nx)/n² = πx/4 on [0, π/2].",
            mode: VerificationMode::Exact,
            check: Check::Interval {
                exprs: vec!["sin(x*n)^4/n^2"],
                index: IndexMode::All,
                rhs: xp(&[&["0"], &["0", "1/4"]]),
                lo: Angle::zero(),
                hi: Angle::of(0, 1, 1, 2),
                closed_lo: true,
                closed_hi: true,
                exterior: vec![ExteriorPoint {
                    x: Angle::from_int(2),
                    expr_index: 0,
                    actual: Some(pp(&["0", "-1/2", "1/4"])),
                }],
            },
        },
        Identity {
            id: "thm4-16a",
            description: "Σ sin⁵(nx)/n = 3π/16 on (0, 2π/5).",
            mode: VerificationMode::Exact,
            check: Check::Interval {
                exprs: vec!["sin(x*n)^5/n"],
                index: IndexMode::All,
                rhs: xp(&[&["0", "3/16"]]),
                lo: Angle::zero(),
                hi: Angle::of(0, 1, 2, 5),
                closed_lo: false,
                closed_hi: false,
                exterior: vec![ExteriorPoint {
                    x: Angle::of(3, 2, 0, 1),
                    expr_index: 0,
                    actual: Some(pp(&["0", "1/4"])),
                }],
            },
        },
        Identity {
            id: "thm4-16b",
            description: "Σ sin⁶(nx)/n² = 3πx/16 on [0, π/3].",
            mode: VerificationMode::Exact,
            check: Check::Interval {
                exprs: vec!["sin(x*n)^6/n^2"],
                index: IndexMode::All,
                rhs: xp(&[&["0"], &["0", "3/16"]]),
                lo: Angle::zero(),
                hi: Angle::of(0, 1, 1, 3),
                closed_lo: true,
                closed_hi: true,
                exterior: vec![ExteriorPoint {
                    x: Angle::of(3, 2, 0, 1),
                    expr_index: 0,
                    actual: Some(pp(&["0", "9/16", "-1/16"])),
                }],
            },
        },
        Identity {
            id: "eq18",
            description: "Because sin(3θ) = 3sin(θ) − 4sin³(θ), the combination \
                          4Σ sin³(nx)/n − 3Σ sin(nx)/n equals (3x−π)/2 on (0, 2π/3).",
            mode: VerificationMode::Exact,
            check: Check::Interval {
                exprs: vec!["4*sin(x*n)^3/n - 3*sin(x*n)/n"],
                index: IndexMode::All,
                rhs: xp(&[&["0", "-1/2"], &["3/2"]]),
                lo: Angle::zero(),
                hi: Angle::of(0, 1, 2, 3),
                closed_lo: false,
                closed_hi: false,
                exterior: vec![ExteriorPoint {
                    x: Angle::of(5, 2, 0, 1),
                    expr_index: 0,
                    actual: Some(pp(&["15/4", "-3/2"])),
                }],
            },
        },
        Identity {
            id: "eq20",
            description: "Σ (−1)ⁿ⁺¹ cos(nx)/n² = (π² − 3x²)/12 on [−π, π], endpoints \
                          included.",
            mode: VerificationMode::Exact,
            check: Check::Interval {
                exprs: vec!["cos(x*n)/n^2"],
                index: IndexMode::Alternating,
                rhs: xp(&[&["0", "0", "1/12"], &["0"], &["-1/4"]]),
                lo: Angle::of(0, 1, -1, 1),
                hi: Angle::pi(),
                closed_lo: true,
                closed_hi: true,
                exterior: vec![ExteriorPoint {
                    x: Angle::from_int(4),
                    expr_index: 0,
                    actual: Some(pp(&["-4", "4", "-11/12"])),
                }],
            },
        },
        Identity {
            id: "eq21",
            description: "Σ sin²(nx)/n² = x(π−x)/2 on [0, π].",
            mode: VerificationMode::Exact,
            check: Check::Interval {
                exprs: vec!["sin(x*n)^2/n^2"],
                index: IndexMode::All,
                rhs: xp(&[&["0"], &["0", "1/2"], &["-1/2"]]),
                lo: Angle::zero(),
                hi: Angle::pi(),
                closed_lo: true,
                closed_hi: true,
                exterior: vec![ExteriorPoint {
                    x: Angle::of(7, 2, 0, 1),
                    expr_index: 0,
                    actual: Some(pp(&["-49/8", "21/4", "-1"])),
                }],
            },
        },
        Identity {
            id: "eq22",
            description: "Σ sin³(n)/n and Σ sin⁴(n)/n² both equal π/4.",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec!["sin(n)^3/n", "sin(n)^4/n^2"],
                index: IndexMode::All,
                value: pp(&["0", "1/4"]),
            },
        },
        Identity {
            id: "eq23",
            description: "Σ sin⁵(n)/n and Σ sin⁶(n)/n² both equal 3π/16.",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec!["sin(n)^5/n", "sin(n)^6/n^2"],
                index: IndexMode::All,
                value: pp(&["0", "3/16"]),
            },
        },
        Identity {
            id: "eq24a-sec5",
            description: "Σ (−1)ⁿ⁺¹ sin²(nx)/n² = x²/2 on [−π/2, π/2].",
            mode: VerificationMode::Exact,
            check: Check::Interval {
                exprs: vec!["sin(x*n)^2/n^2"],
                index: IndexMode::Alternating,
                rhs: xp(&[&["0"], &["0"], &["1/2"]]),
                lo: Angle::of(0, 1, -1, 2),
                hi: Angle::of(0, 1, 1, 2),
                closed_lo: true,
                closed_hi: true,
                exterior: vec![ExteriorPoint {
                    x: Angle::from_int(2),
                    expr_index: 0,
                    actual: Some(pp(&["2", "-2", "1/2"])),
                }],
            },
        },
        Identity {
            id: "sec5-d2a",
            description: "Over even n, Σ sin²(nx)/n² = x(π−2x)/4 on [0, π/2].",
            mode: VerificationMode::Exact,
            check: Check::Interval {
                exprs: vec!["sin(x*n)^2/n^2"],
                index: IndexMode::EvenOnly,
                rhs: xp(&[&["0"], &["0", "1/4"], &["-1/2"]]),
                lo: Angle::zero(),
                hi: Angle::of(0, 1, 1, 2),
                closed_lo: true,
                closed_hi: true,
                exterior: vec![ExteriorPoint {
                    x: Angle::from_int(2),
                    expr_index: 0,
                    actual: Some(pp(&["-2", "3/2", "-1/4"])),
                }],
            },
        },
        Identity {
            id: "sec5-d2b",
            description: "Over odd n, Σ sin²(nx)/n² = πx/4 on [0, π/2]: exactly linear.",
            mode: VerificationMode::Exact,
            check: Check::Interval {
                exprs: vec!["sin(x*n)^2/n^2"],
                index: IndexMode::OddOnly,
                rhs: xp(&[&["0"], &["0", "1/4"]]),
                lo: Angle::zero(),
                hi: Angle::of(0, 1, 1, 2),
                closed_lo: true,
                closed_hi: true,
                exterior: vec![ExteriorPoint {
                    x: Angle::from_int(2),
                    expr_index: 0,
                    actual: Some(pp(&["0", "-1/2", "1/4"])),
                }],
            },
        },
        Identity {
            id: "sec5-d4-series",
            description: "The step of height π/4 dropping to 0 at 2π/3 has sine \
                          coefficients sin²(nπ/3)/n.",
            mode: VerificationMode::Exact,
            check: Check::Fourier {
                function: third_step(),
                coeffs: "sin(pi*n/3)^2/n",
            },
        },
        Identity {
            id: "sec5-d5-series",
            description: "The staircase with values 3π/16, π/4, −π/16, 0 has sine \
                          coefficients (3 + cos(2nπ/5) + cos(4nπ/5) − 5cos(2nπ/3))/(8n).",
            mode: VerificationMode::Exact,
            check: Check::Fourier {
                function: five_step(),
                coeffs: "3/8/n + 1/8*cos(2*pi*n/5)/n + 1/8*cos(4*pi*n/5)/n \
                         - 5/8*cos(2*pi*n/3)/n",
            },
        },
        Identity {
            id: "neg-sin7sin8",
            description: "The pattern Σ sin²ᵏ⁻¹(n)/n = Σ sin²ᵏ(n)/n² stops at k = 4: \
                          the values 9π/64 and (6+π)π/64 differ by π(π−3)/64 ≈ 0.007.",
            mode: VerificationMode::Exact,
            check: Check::Contrast {
                a: "sin(n)^7/n",
                b: "sin(n)^8/n^2",
                va: pp(&["0", "9/64"]),
                vb: pp(&["0", "3/32", "1/64"]),
            },
        },
    ]
}

/// Energy identities: Parseval on functions and the matching direct sums.
fn energy_entries() -> Vec<Identity> {
    vec![
        Identity {
            id: "par-g",
            description: "Parseval for the clipped sawtooth: (1/π)∫ f² = Σ sin²(n)/n⁴ \
                          = (π−1)²/6.",
            mode: VerificationMode::Exact,
            check: Check::Parseval {
                function: clipped_sawtooth(),
                value: pp(&["1/6", "-1/3", "1/6"]),
            },
        },
        Identity {
            id: "par-even-fn",
            description: "Parseval for the even-indexed part: Σ sin²(2n)/(2n)⁴ \
                          = (π−2)²/24.",
            mode: VerificationMode::Exact,
            check: Check::Parseval {
                function: even_part_fn(),
                value: pp(&["1/6", "-1/6", "1/24"]),
            },
        },
        Identity {
            id: "par-odd-fn",
            description: "Parseval for the plateau: the odd-indexed energy is \
                          π²/8 − π/6.",
            mode: VerificationMode::Exact,
            check: Check::Parseval {
                function: odd_part_fn(),
                value: pp(&["0", "-1/6", "1/8"]),
            },
        },
        Identity {
            id: "par-tent",
            description: "Parseval for the tent: Σ sin²(nπ/2)/n⁴ = 1 + 1/3⁴ + 1/5⁴ + ⋯ \
                          = π⁴/96.",
            mode: VerificationMode::Exact,
            check: Check::Parseval {
                function: tent(),
                value: pp(&["0", "0", "0", "0", "1/96"]),
            },
        },
        Identity {
            id: "par-even",
            description: "Direct summation of the even-indexed energy: \
                          Σ sin²(2n)/(2n)⁴ = (π−2)²/24.",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec!["sin(n)^2/n^4"],
                index: IndexMode::EvenOnly,
                value: pp(&["1/6", "-1/6", "1/24"]),
            },
        },
        Identity {
            id: "par-odd",
            description: "Direct summation of the odd-indexed energy: π²/8 − π/6.",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec!["sin(n)^2/n^4"],
                index: IndexMode::OddOnly,
                value: pp(&["0", "-1/6", "1/8"]),
            },
        },
        Identity {
            id: "sq-series-pi-over-sqrt8",
            description: "Over odd n, Σ sin(nπ/4)/n = π/4; scaling by √2 gives \
                          1 + 1/3 − 1/5 − 1/7 + 1/9 + ⋯ = π/√8, whose square \
                          2·(π/4)² = π²/8 equals Σ over odd n of 1/n².",
            mode: VerificationMode::NumericOnly,
            check: Check::SquaredSeries {
                expr: "sin(pi*n/4)/n",
                index: IndexMode::OddOnly,
                sum_value: pp(&["0", "1/4"]),
                sq_expr: "sin(pi*n/4)^2/n^2",
                sq_value: pp(&["0", "0", "1/16"]),
                headline: pp(&["0", "0", "1/8"]),
            },
        },
    ]
}

/// Smooth blends recovered from slowly-decaying coefficients, the cubic
/// tail sum, and the sinc-power table.
fn recovery_entries() -> Vec<Identity> {
    vec![
        Identity {
            id: "eq12-series",
            description: "The parabola −πx²/8 + (π−1)x/2 blended into (π−x)/2 at x = 2 \
                          has sine coefficients sin²(n)/n³.",
            mode: VerificationMode::Exact,
            check: Check::Fourier {
                function: parabolic_blend(),
                coeffs: "sin(n)^2/n^3",
            },
        },
        Identity {
            id: "eq13-series",
            description: "The twice-differentiable cubic blend with knots at 1 and 3 \
                          has sine coefficients sin³(n)/n⁴.",
            mode: VerificationMode::Exact,
            check: Check::Fourier {
                function: cubic_blend(),
                coeffs: "sin(n)^3/n^4",
            },
        },
        Identity {
            id: "eq24b-sec6",
            description: "Σ sin(n)/n³ = 1/12 − π/4 + π²/6.",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec!["sin(n)/n^3"],
                index: IndexMode::All,
                value: pp(&["1/12", "-1/4", "1/6"]),
            },
        },
        Identity {
            id: "sinc-m1",
            description: "Σ sin(n)/n = (π−1)/2, the first sinc power.",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec!["sin(n)/n"],
                index: IndexMode::All,
                value: pp(&["-1/2", "1/2"]),
            },
        },
        Identity {
            id: "sinc-m2",
            description: "Σ (sin(n)/n)² = (π−1)/2 again.",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec!["(sin(n)/n)^2"],
                index: IndexMode::All,
                value: pp(&["-1/2", "1/2"]),
            },
        },
        Identity {
            id: "sinc-m3",
            description: "Σ (sin(n)/n)³ = 3π/8 − 1/2.",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec!["(sin(n)/n)^3"],
                index: IndexMode::All,
                value: pp(&["-1/2", "3/8"]),
            },
        },
        Identity {
            id: "sinc-m4",
            description: "Σ (sin(n)/n)⁴ = π/3 − 1/2.",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec!["(sin(n)/n)^4"],
                index: IndexMode::All,
                value: pp(&["-1/2", "1/3"]),
            },
        },
        Identity {
            id: "sinc-m5",
            description: "Σ (sin(n)/n)⁵ = 115π/384 − 1/2.",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec!["(sin(n)/n)^5"],
                index: IndexMode::All,
                value: pp(&["-1/2", "115/384"]),
            },
        },
        Identity {
            id: "sinc-m6",
            description: "Σ (sin(n)/n)⁶ = 11π/40 − 1/2.",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec!["(sin(n)/n)^6"],
                index: IndexMode::All,
                value: pp(&["-1/2", "11/40"]),
            },
        },
        Identity {
            id: "sinc-m7",
            description: "Σ (sin(n)/n)⁷ = −1/2 + (129423π − 201684π² + 144060π³ \
                          − 54880π⁴ + 11760π⁵ − 1344π⁶ + 64π⁷)/46080: the first sinc \
                          power whose closed form needs every power of π up to its \
                          exponent.",
            mode: VerificationMode::Exact,
            check: Check::Sums {
                exprs: vec!["(sin(n)/n)^7"],
                index: IndexMode::All,
                value: pp(&[
                    "-1/2",
                    "129423/46080",
                    "-201684/46080",
                    "144060/46080",
                    "-54880/46080",
                    "11760/46080",
                    "-1344/46080",
                    "64/46080",
                ]),
            },
        },
    ]
}

/// The full registry, in presentation order. Ids are stable keys: the CLI
/// and the acceptance suite address entries by them.
pub fn list_identities() -> Vec<Identity> {
    let mut all = Vec::new();
    all.extend(sawtooth_entries());
    all.extend(parity_split_entries());
    all.extend(product_entries());
    all.extend(sine_power_entries());
    all.extend(energy_entries());
    all.extend(recovery_entries());
    all
}

/// Looks up one identity by its id.
pub fn find_identity(id: &str) -> Result<Identity> {
    list_identities()
        .into_iter()
        .find(|i| i.id == id)
        .ok_or_else(|| Error::UnknownIdentity { id: id.to_string() })
}

// ---------------------------------------------------------------------------
// Verification.

fn exact_sum(expr: &str, index: IndexMode) -> Result<PiPoly> {
    parse_product_expression(expr)?.evaluate_sum_indexed(index)
}

fn transformed(expr: &str, index: IndexMode) -> Result<ParamSeries> {
    index_transform(&parse_product_expression(expr)?.expand()?, index)
}

fn sum_at(series: &ParamSeries, x: &Angle) -> Result<PiPoly> {
    sum_closed_form(&series.substitute(x))
}

/// Rational sample points strictly inside (lo, hi), drawn from the 64ths
/// grid so interval claims are exercised at plain rational x. Falls back to
/// evenly spaced π-rational combinations when the window is too tight to
/// hold `samples` grid points.
fn interior_rationals(lo: &Angle, hi: &Angle, samples: usize) -> Vec<Angle> {
    let lo_f = lo.eval_f64();
    let hi_f = hi.eval_f64();
    let margin = (hi_f - lo_f) / (4.0 * (samples as f64 + 1.0));
    let lo_k = ((lo_f + margin) * GRID_DENOMINATOR as f64).ceil() as i64;
    let hi_k = ((hi_f - margin) * GRID_DENOMINATOR as f64).floor() as i64;
    let mut points = Vec::new();
    let mut taken = Vec::new();
    if hi_k >= lo_k {
        for j in 0..samples {
            let t = (j as f64 + 0.5) / samples as f64;
            let k = lo_k + ((hi_k - lo_k) as f64 * t).round() as i64;
            if taken.contains(&k) {
                continue;
            }
            let x = Angle::from_rational(BigRational::new(
                BigInt::from(k),
                BigInt::from(GRID_DENOMINATOR),
            ));
            if x.exact_cmp(lo) == Ordering::Greater && x.exact_cmp(hi) == Ordering::Less {
                taken.push(k);
                points.push(x);
            }
        }
    }
    let mut j = 1;
    while points.len() < samples && j <= samples {
        let t = BigRational::new(BigInt::from(j as i64), BigInt::from(samples as i64 + 1));
        let x = lo.add(&hi.sub(lo).scale(&t));
        if !points.contains(&x) {
            points.push(x);
        }
        j += 1;
    }
    points
}

/// Midpoint of a tight dyadic enclosure of a π-polynomial; the enclosure
/// width (about 2⁻¹⁹⁰) is far below every tolerance used here.
fn pipoly_rational(p: &PiPoly) -> BigRational {
    let ctx = Ctx::new(192);
    let iv = p.eval_iv(&ctx);
    (ctx.lo_rational(&iv) + ctx.hi_rational(&iv)) / BigRational::from_integer(BigInt::from(2))
}

fn tolerance_floor(digits: u32) -> BigRational {
    BigRational::new(BigInt::one(), pow10(digits))
}

fn approx(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Partial sum of a concrete (x-free) expression under an index transform,
/// with its total tolerance: certified tail bound plus the digits floor.
fn numeric_sum(
    expr: &str,
    index: IndexMode,
    n_terms: u64,
    digits: u32,
) -> Result<(BigRational, BigRational)> {
    let concrete = transformed(expr, index)?
        .to_concrete()
        .ok_or_else(|| Error::invalid("numeric check on a series with free x"))?;
    let r = partial_sum(&concrete, n_terms, digits)?;
    let tol = &r.tail_bound + tolerance_floor(digits);
    Ok((r.value, tol))
}

impl Identity {
    /// Runs the check in exact arithmetic; interval claims are tested at
    /// `samples` interior points. Returns pass/fail plus evidence.
    fn run_exact(&self, samples: usize) -> Result<(bool, String)> {
        match &self.check {
            Check::Sums { exprs, index, value } => {
                for expr in exprs {
                    let got = exact_sum(expr, *index)?;
                    if got != *value {
                        return Ok((false, format!("Σ {expr} = {got}, expected {value}")));
                    }
                }
                Ok((
                    true,
                    format!("{} sum(s) equal {} exactly", exprs.len(), value),
                ))
            }
            Check::NotPattern {
                expr,
                value,
                pattern,
            } => {
                let got = exact_sum(expr, IndexMode::All)?;
                if got != *value {
                    return Ok((false, format!("Σ {expr} = {got}, expected {value}")));
                }
                if got == *pattern {
                    return Ok((
                        false,
                        format!("Σ {expr} matches the pattern {pattern} it was expected to break"),
                    ));
                }
                let gap = got.sub(pattern);
                Ok((
                    true,
                    format!(
                        "Σ {expr} = {value}; off the pattern {pattern} by exactly {gap}"
                    ),
                ))
            }
            Check::Contrast { a, b, va, vb } => {
                let ga = exact_sum(a, IndexMode::All)?;
                if ga != *va {
                    return Ok((false, format!("Σ {a} = {ga}, expected {va}")));
                }
                let gb = exact_sum(b, IndexMode::All)?;
                if gb != *vb {
                    return Ok((false, format!("Σ {b} = {gb}, expected {vb}")));
                }
                if ga == gb {
                    return Ok((
                        false,
                        format!("both sums equal {ga} but were expected to differ"),
                    ));
                }
                Ok((
                    true,
                    format!(
                        "Σ {} = {} ≈ {:.9} and Σ {} = {} ≈ {:.9} are provably different",
                        a,
                        va,
                        va.eval_f64(),
                        b,
                        vb,
                        vb.eval_f64()
                    ),
                ))
            }
            Check::Verdicts {
                exprs,
                equal,
                distinct,
            } => {
                let mut vals = Vec::with_capacity(exprs.len());
                for expr in exprs {
                    vals.push(exact_sum(expr, IndexMode::All)?);
                }
                for &(i, j) in equal {
                    if vals[i] != vals[j] {
                        return Ok((
                            false,
                            format!(
                                "Σ {} and Σ {} differ ({} vs {}) but were claimed equal",
                                exprs[i], exprs[j], vals[i], vals[j]
                            ),
                        ));
                    }
                }
                for &(i, j) in distinct {
                    if vals[i] == vals[j] {
                        return Ok((
                            false,
                            format!(
                                "Σ {} and Σ {} both equal {} but were claimed distinct",
                                exprs[i], exprs[j], vals[i]
                            ),
                        ));
                    }
                }
                let mut shown = Vec::with_capacity(vals.len());
                for v in &vals {
                    shown.push(v.to_decimal(14)?);
                }
                Ok((
                    true,
                    format!(
                        "{} equal and {} distinct pair(s) as claimed; values {}",
                        equal.len(),
                        distinct.len(),
                        shown.join(", ")
                    ),
                ))
            }
            Check::Interval {
                exprs,
                index,
                rhs,
                lo,
                hi,
                closed_lo,
                closed_hi,
                exterior,
            } => {
                let mut series = Vec::with_capacity(exprs.len());
                for expr in exprs {
                    series.push(transformed(expr, *index)?);
                }
                let interior = interior_rationals(lo, hi, samples);
                let n_interior = interior.len();
                let mut points = interior;
                let mut n_endpoints = 0;
                if *closed_lo {
                    points.push(lo.clone());
                    n_endpoints += 1;
                }
                if *closed_hi {
                    points.push(hi.clone());
                    n_endpoints += 1;
                }
                for x in &points {
                    let want = rhs.eval(x)?;
                    for (expr, s) in exprs.iter().zip(&series) {
                        let got = sum_at(s, x)?;
                        if got != want {
                            return Ok((
                                false,
                                format!("Σ {expr} at x = {x} is {got}, expected {want}"),
                            ));
                        }
                    }
                }
                for e in exterior {
                    let expr = exprs[e.expr_index];
                    let got = sum_at(&series[e.expr_index], &e.x)?;
                    let rule = rhs.eval(&e.x)?;
                    if got == rule {
                        return Ok((
                            false,
                            format!(
                                "Σ {} at x = {} still equals the rule value {} outside \
                                 the stated interval",
                                expr, e.x, rule
                            ),
                        ));
                    }
                    if let Some(actual) = &e.actual {
                        if got != *actual {
                            return Ok((
                                false,
                                format!("Σ {} at x = {} is {}, expected {}", expr, e.x, got, actual),
                            ));
                        }
                    }
                }
                Ok((
                    true,
                    format!(
                        "{} series agree with the rule at {} interior point(s) and \
                         {} endpoint(s); {} exterior point(s) leave it as required",
                        series.len(),
                        n_interior,
                        n_endpoints,
                        exterior.len()
                    ),
                ))
            }
            Check::Fourier { function, coeffs } => {
                let computed = sine_coefficients(function)?;
                let claimed = parse_product_expression(coeffs)?
                    .expand()?
                    .to_concrete()
                    .ok_or_else(|| Error::invalid("coefficient formula with free x"))?;
                match canonical_equal(&computed, &claimed) {
                    CanonicalEquality::Equal => Ok((
                        true,
                        format!("sine coefficients equal {coeffs} in canonical form"),
                    )),
                    CanonicalEquality::NotEqualFormally => Ok((
                        false,
                        format!("sine coefficients do not reduce to {coeffs}"),
                    )),
                }
            }
            Check::Parseval { function, value } => {
                let report = parseval_check(function)?;
                if !report.equal {
                    return Ok((
                        false,
                        format!(
                            "(1/π)∫f² = {} but the coefficient side sums to {}",
                            report.lhs, report.rhs
                        ),
                    ));
                }
                if report.rhs != *value {
                    return Ok((
                        false,
                        format!("both Parseval sides equal {}, expected {}", report.rhs, value),
                    ));
                }
                Ok((true, format!("(1/π)∫f² = Σ bₙ² = {value} exactly")))
            }
            Check::SquaredSeries { .. } => {
                // Exact arithmetic can only reach the companions; the
                // headline squaring still needs the numeric certificate.
                let (ok, details) = self.squared_series_companions()?;
                Ok((
                    ok,
                    format!("{details}; the headline constant needs the numeric mode"),
                ))
            }
        }
    }

    /// The exact part of a [`Check::SquaredSeries`] entry: both companion
    /// sums and the algebraic relation between their values.
    fn squared_series_companions(&self) -> Result<(bool, String)> {
        let Check::SquaredSeries {
            expr,
            index,
            sum_value,
            sq_expr,
            sq_value,
            headline,
        } = &self.check
        else {
            return Err(Error::invalid("not a squared-series entry"));
        };
        let s = exact_sum(expr, *index)?;
        if s != *sum_value {
            return Ok((false, format!("Σ {expr} = {s}, expected {sum_value}")));
        }
        let s2 = exact_sum(sq_expr, *index)?;
        if s2 != *sq_value {
            return Ok((false, format!("Σ {sq_expr} = {s2}, expected {sq_value}")));
        }
        let two = rat("2");
        let doubled_square = sum_value.mul(sum_value)?.scale(&two);
        if doubled_square != *headline {
            return Ok((
                false,
                format!("2(Σ)² = {doubled_square} does not match the headline {headline}"),
            ));
        }
        if sq_value.scale(&two) != *headline {
            return Ok((
                false,
                format!("2·Σ of squares does not match the headline {headline}"),
            ));
        }
        Ok((
            true,
            format!(
                "companions Σ = {sum_value} and Σ of squares = {sq_value} hold exactly, \
                 and 2(Σ)² = {headline}"
            ),
        ))
    }

    /// Replays the claim numerically: certified partial sums must land
    /// within their own tail bounds (plus a 10^−digits floor) of the exact
    /// values. Pair relations are anchored to the exact closed forms.
    fn run_numeric(&self, digits: u32, n_terms: u64) -> Result<(bool, String)> {
        match &self.check {
            Check::Sums { exprs, index, value } => {
                let target = pipoly_rational(value);
                let mut worst = 0.0f64;
                for expr in exprs {
                    let (v, tol) = numeric_sum(expr, *index, n_terms, digits)?;
                    let err = (&v - &target).abs();
                    if err > tol {
                        return Ok((
                            false,
                            format!(
                                "Σ {} partial sum misses {} by {:.3e}, beyond the \
                                 certified bound {:.3e}",
                                expr,
                                value,
                                approx(&err),
                                approx(&tol)
                            ),
                        ));
                    }
                    worst = worst.max(approx(&err));
                }
                Ok((
                    true,
                    format!(
                        "{} partial sum(s) of {} terms land within certified bounds \
                         of {} (worst gap {:.3e})",
                        exprs.len(),
                        n_terms,
                        value,
                        worst
                    ),
                ))
            }
            Check::NotPattern {
                expr,
                value,
                pattern,
            } => {
                let (v, tol) = numeric_sum(expr, IndexMode::All, n_terms, digits)?;
                let target = pipoly_rational(value);
                let err = (&v - &target).abs();
                if err > tol {
                    return Ok((
                        false,
                        format!(
                            "partial sum misses the true value {} by {:.3e} (bound {:.3e})",
                            value,
                            approx(&err),
                            approx(&tol)
                        ),
                    ));
                }
                let pat = pipoly_rational(pattern);
                let sep = (&v - &pat).abs();
                if sep <= tol {
                    return Ok((
                        false,
                        format!(
                            "{} terms cannot separate the sum from the pattern {}; \
                             raise the term count",
                            n_terms, pattern
                        ),
                    ));
                }
                Ok((
                    true,
                    format!(
                        "partial sum sits {:.3e} from {} (within bounds) and {:.3e} \
                         away from the pattern {}",
                        approx(&err),
                        value,
                        approx(&sep),
                        pattern
                    ),
                ))
            }
            Check::Contrast { a, b, va, vb } => {
                let (sa, ta) = numeric_sum(a, IndexMode::All, n_terms, digits)?;
                let (sb, tb) = numeric_sum(b, IndexMode::All, n_terms, digits)?;
                let ra = pipoly_rational(va);
                let rb = pipoly_rational(vb);
                if (&sa - &ra).abs() > ta {
                    return Ok((false, format!("Σ {a} drifts outside its bound of {va}")));
                }
                if (&sb - &rb).abs() > tb {
                    return Ok((false, format!("Σ {b} drifts outside its bound of {vb}")));
                }
                let gap = (&ra - &rb).abs();
                if gap <= &ta + &tb {
                    return Ok((
                        false,
                        format!("{n_terms} terms cannot separate the two values; raise the term count"),
                    ));
                }
                Ok((
                    true,
                    format!(
                        "partial sums land on {} and {} within bounds, and the bounds \
                         are tighter than the exact gap {:.3e}",
                        va,
                        vb,
                        approx(&gap)
                    ),
                ))
            }
            Check::Verdicts {
                exprs,
                equal,
                distinct,
            } => {
                let mut exact_vals = Vec::with_capacity(exprs.len());
                for expr in exprs {
                    exact_vals.push(exact_sum(expr, IndexMode::All)?);
                }
                for (expr, ev) in exprs.iter().zip(&exact_vals) {
                    let (v, tol) = numeric_sum(expr, IndexMode::All, n_terms, digits)?;
                    let err = (&v - &pipoly_rational(ev)).abs();
                    if err > tol {
                        return Ok((
                            false,
                            format!(
                                "Σ {} partial sum misses its exact value by {:.3e} \
                                 (bound {:.3e})",
                                expr,
                                approx(&err),
                                approx(&tol)
                            ),
                        ));
                    }
                }
                for &(i, j) in equal {
                    if exact_vals[i] != exact_vals[j] {
                        return Ok((
                            false,
                            format!("Σ {} and Σ {} are not equal", exprs[i], exprs[j]),
                        ));
                    }
                }
                for &(i, j) in distinct {
                    if exact_vals[i] == exact_vals[j] {
                        return Ok((
                            false,
                            format!("Σ {} and Σ {} are not distinct", exprs[i], exprs[j]),
                        ));
                    }
                }
                Ok((
                    true,
                    format!(
                        "all {} partial sums track their exact values within certified \
                         bounds; pair verdicts confirmed on the closed forms",
                        exprs.len()
                    ),
                ))
            }
            Check::Interval {
                exprs,
                index,
                rhs,
                lo,
                hi,
                ..
            } => {
                let mut series = Vec::with_capacity(exprs.len());
                for expr in exprs {
                    series.push(transformed(expr, *index)?);
                }
                let points = interior_rationals(lo, hi, NUMERIC_SAMPLES);
                let floor = tolerance_floor(digits);
                for x in &points {
                    let want = pipoly_rational(&rhs.eval(x)?);
                    for (expr, s) in exprs.iter().zip(&series) {
                        let r = partial_sum(&s.substitute(x), n_terms, digits)?;
                        let tol = &r.tail_bound + &floor;
                        let err = (&r.value - &want).abs();
                        if err > tol {
                            return Ok((
                                false,
                                format!(
                                    "Σ {} at x = {} misses the rule by {:.3e} \
                                     (bound {:.3e})",
                                    expr,
                                    x,
                                    approx(&err),
                                    approx(&tol)
                                ),
                            ));
                        }
                    }
                }
                Ok((
                    true,
                    format!(
                        "{} series at {} interior point(s) match the rule within \
                         certified bounds",
                        series.len(),
                        points.len()
                    ),
                ))
            }
            Check::Fourier { function, coeffs } => {
                let computed = sine_coefficients(function)?;
                let claimed = parse_product_expression(coeffs)?
                    .expand()?
                    .to_concrete()
                    .ok_or_else(|| Error::invalid("coefficient formula with free x"))?;
                if spot_check_agrees(&computed, &claimed, 24, SPOT_TOL) {
                    Ok((
                        true,
                        format!("sine coefficients n = 1…24 agree with {coeffs} within {SPOT_TOL:.0e}"),
                    ))
                } else {
                    Ok((
                        false,
                        format!(
                            "a sine coefficient among n = 1…24 differs from {coeffs} \
                             by more than {SPOT_TOL:.0e}"
                        ),
                    ))
                }
            }
            Check::Parseval { function, value } => {
                let report = parseval_check(function)?;
                let sides = (report.lhs.eval_f64() - report.rhs.eval_f64()).abs();
                let target = (report.rhs.eval_f64() - value.eval_f64()).abs();
                if sides > SPOT_TOL || target > SPOT_TOL {
                    return Ok((
                        false,
                        format!(
                            "Parseval sides {:.12} and {:.12} miss the target {}",
                            report.lhs.eval_f64(),
                            report.rhs.eval_f64(),
                            value
                        ),
                    ));
                }
                Ok((
                    true,
                    format!(
                        "both Parseval sides evaluate to {:.12}, matching {}",
                        report.lhs.eval_f64(),
                        value
                    ),
                ))
            }
            Check::SquaredSeries {
                expr,
                index,
                headline,
                ..
            } => {
                let (ok, companions) = self.squared_series_companions()?;
                if !ok {
                    return Ok((false, companions));
                }
                let (v, tol) = numeric_sum(expr, *index, n_terms, digits)?;
                let two = rat("2");
                let target = pipoly_rational(headline);
                let squared = v.clone() * v.clone() * two.clone();
                let err = (&squared - &target).abs();
                // |2v² − 2S²| = 2|v − S|·|v + S| ≤ 2·tol·(2|v| + tol).
                let bound =
                    two.clone() * tol.clone() * (two * v.abs() + tol) + tolerance_floor(digits);
                if err > bound {
                    return Ok((
                        false,
                        format!(
                            "2·(partial Σ)² misses the headline {} by {:.3e}, beyond \
                             the certified bound {:.3e}",
                            headline,
                            approx(&err),
                            approx(&bound)
                        ),
                    ));
                }
                Ok((
                    true,
                    format!(
                        "{companions}; 2·(partial Σ)² = {:.12} lands within {:.3e} of \
                         {} ≈ {:.12}",
                        approx(&squared),
                        approx(&bound),
                        headline,
                        headline.eval_f64()
                    ),
                ))
            }
        }
    }
}

fn finish(id: &str, start: Instant, outcome: Result<(bool, String)>) -> VerificationReport {
    let runtime_ms = start.elapsed().as_millis();
    let (status, details) = match outcome {
        Ok((true, details)) => (Status::Pass, details),
        Ok((false, details)) => (Status::Fail, details),
        Err(e) => (Status::Error, e.to_string()),
    };
    VerificationReport {
        id: id.to_string(),
        status,
        details,
        runtime_ms,
    }
}

fn run_entry(identity: &Identity, mode: Mode, digits: u32, n_terms: u64) -> VerificationReport {
    let start = Instant::now();
    let outcome = match (mode, identity.mode) {
        (Mode::Exact, VerificationMode::Exact) => identity.run_exact(INTERIOR_SAMPLES),
        (Mode::Numeric, _) => identity.run_numeric(digits, n_terms),
        (Mode::Exact, VerificationMode::NumericOnly) => {
            identity.run_numeric(digits, n_terms).map(|(ok, details)| {
                (
                    ok,
                    format!("numeric-only identity, certified numerically: {details}"),
                )
            })
        }
    };
    finish(identity.id, start, outcome)
}

/// Verifies one identity by id. Unknown ids are an error; everything else,
/// including a check that stops early, lands in
/// [`VerificationReport::status`].
pub fn verify_identity(id: &str, mode: Mode, digits: u32, n_terms: u64) -> Result<VerificationReport> {
    let identity = find_identity(id)?;
    Ok(run_entry(&identity, mode, digits, n_terms))
}

/// Verifies an interval identity exactly at `samples` interior points, plus
/// the closed endpoints and the exterior counter-points as always. Errors
/// when the identity has no validity interval to sample.
pub fn verify_on_interval(id: &str, samples: usize) -> Result<VerificationReport> {
    let identity = find_identity(id)?;
    if !matches!(identity.check, Check::Interval { .. }) {
        return Err(Error::invalid(format!(
            "identity {id} has no validity interval to sample"
        )));
    }
    let start = Instant::now();
    let outcome = identity.run_exact(samples);
    Ok(finish(identity.id, start, outcome))
}

/// Verifies every registry entry in parallel, reporting in registry order.
pub fn verify_all(mode: Mode, digits: u32, n_terms: u64) -> Vec<VerificationReport> {
    list_identities()
        .par_iter()
        .map(|identity| run_entry(identity, mode, digits, n_terms))
        .collect()
}

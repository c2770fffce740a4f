//! Dyadic fixed-point interval arithmetic with rigorous outward rounding.
//!
//! A value is a big-integer mantissa `m` read at a binary scale: `m / 2^bits`.
//! [`Ctx`] fixes the scale and provides interval operations ([`Iv`]) whose
//! endpoints always round outward, plus certified enclosures of π and of
//! sin/cos. Everything downstream that claims rigor (sign decisions,
//! decimal digits, partial-sum error bounds) reduces to these enclosures.
//!
//! π comes from Machin's formula π = 16·atan(1/5) − 4·atan(1/239), summed
//! in integer arithmetic where nested floor division is exact, so the
//! accumulated error is counted in ulps and returned as an interval. Sine
//! and cosine reduce the argument modulo an enclosure of 2π and run the
//! Taylor series in interval arithmetic; the alternating-series remainder
//! is added to the enclosure explicitly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Mutex;

use crate::exactnum::rational::pow10;

/// A closed interval `[lo, hi] / 2^bits`; the scale lives in the [`Ctx`]
/// that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Iv {
    pub lo: BigInt,
    pub hi: BigInt,
}

impl Iv {
    /// Exact point interval.
    pub fn point(m: BigInt) -> Self {
        Iv { lo: m.clone(), hi: m }
    }

    /// Mantissa width `hi − lo` (in ulps of the context scale).
    pub fn width(&self) -> BigInt {
        &self.hi - &self.lo
    }

    /// True iff 0 is inside (or on the boundary of) the interval.
    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// The sign of every point in the interval, if they agree.
    pub fn definite_sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Largest absolute mantissa over the interval.
    pub fn abs_hi(&self) -> BigInt {
        self.lo.abs().max(self.hi.abs())
    }
}

/// Fixed-point context: all intervals it produces share the scale `bits`.
#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    pub bits: u32,
}

/// Floor of `x / 2^k` (arithmetic shift; BigInt `>>` already floors).
fn shr_floor(x: &BigInt, k: u32) -> BigInt {
    x >> (k as usize)
}

/// Ceiling of `x / 2^k`.
fn shr_ceil(x: &BigInt, k: u32) -> BigInt {
    -((-x) >> (k as usize))
}

impl Ctx {
    pub fn new(bits: u32) -> Self {
        Ctx { bits }
    }

    /// Smallest enclosure of an exact rational at this scale.
    pub fn from_rational(&self, r: &BigRational) -> Iv {
        let num = r.numer() << (self.bits as usize);
        let den = r.denom();
        Iv {
            lo: num.div_floor(den),
            hi: num.div_ceil(den),
        }
    }

    /// Exact embedding of an integer.
    pub fn from_int(&self, n: i64) -> Iv {
        Iv::point(BigInt::from(n) << (self.bits as usize))
    }

    /// The rational value of a mantissa at this scale.
    pub fn mantissa_to_rational(&self, m: &BigInt) -> BigRational {
        BigRational::new(m.clone(), BigInt::one() << (self.bits as usize))
    }

    /// Lower bound of the interval as an exact rational.
    pub fn lo_rational(&self, iv: &Iv) -> BigRational {
        self.mantissa_to_rational(&iv.lo)
    }

    /// Upper bound of the interval as an exact rational.
    pub fn hi_rational(&self, iv: &Iv) -> BigRational {
        self.mantissa_to_rational(&iv.hi)
    }

    /// A rational upper bound on |x| over the interval.
    pub fn abs_hi_rational(&self, iv: &Iv) -> BigRational {
        self.mantissa_to_rational(&iv.abs_hi())
    }

    pub fn add(&self, a: &Iv, b: &Iv) -> Iv {
        Iv {
            lo: &a.lo + &b.lo,
            hi: &a.hi + &b.hi,
        }
    }

    pub fn sub(&self, a: &Iv, b: &Iv) -> Iv {
        Iv {
            lo: &a.lo - &b.hi,
            hi: &a.hi - &b.lo,
        }
    }

    pub fn neg(&self, a: &Iv) -> Iv {
        Iv {
            lo: -&a.hi,
            hi: -&a.lo,
        }
    }

    /// Interval product with outward rounding.
    pub fn mul(&self, a: &Iv, b: &Iv) -> Iv {
        let products = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let lo = products.iter().min().unwrap();
        let hi = products.iter().max().unwrap();
        Iv {
            lo: shr_floor(lo, self.bits),
            hi: shr_ceil(hi, self.bits),
        }
    }

    /// Exact product with an integer.
    pub fn mul_int(&self, a: &Iv, k: &BigInt) -> Iv {
        if k.is_negative() {
            Iv {
                lo: &a.hi * k,
                hi: &a.lo * k,
            }
        } else {
            Iv {
                lo: &a.lo * k,
                hi: &a.hi * k,
            }
        }
    }

    /// Division by a positive integer, rounding outward.
    pub fn div_uint(&self, a: &Iv, d: &BigInt) -> Iv {
        debug_assert!(d.is_positive());
        Iv {
            lo: a.lo.div_floor(d),
            hi: a.hi.div_ceil(d),
        }
    }

    /// Rescales an interval from this context to another.
    pub fn rescale(&self, a: &Iv, to: &Ctx) -> Iv {
        if to.bits >= self.bits {
            let k = (to.bits - self.bits) as usize;
            Iv {
                lo: &a.lo << k,
                hi: &a.hi << k,
            }
        } else {
            let k = self.bits - to.bits;
            Iv {
                lo: shr_floor(&a.lo, k),
                hi: shr_ceil(&a.hi, k),
            }
        }
    }

    /// Certified enclosure of π at this scale.
    pub fn pi(&self) -> Iv {
        pi_enclosure(self.bits)
    }

    /// Interval sine: reduces to a midpoint evaluation plus a Lipschitz
    /// widening (|sin′| ≤ 1), clipped to [−1, 1].
    pub fn sin(&self, a: &Iv) -> Iv {
        self.trig(a, TrigFn::Sin)
    }

    /// Interval cosine; same strategy as [`Ctx::sin`].
    pub fn cos(&self, a: &Iv) -> Iv {
        self.trig(a, TrigFn::Cos)
    }

    fn trig(&self, a: &Iv, f: TrigFn) -> Iv {
        let mid = (&a.lo + &a.hi) >> 1usize;
        // Half-width rounded up so the enclosure stays valid.
        let hw = shr_ceil(&a.width(), 1);
        let point = trig_point(&mid, self.bits, f);
        let one = BigInt::one() << (self.bits as usize);
        let lo = (&point.lo - &hw).max(-&one);
        let hi = (&point.hi + &hw).min(one);
        Iv { lo, hi }
    }

    /// Sine and cosine of an exact mantissa, as enclosures at this scale.
    pub fn sin_cos_point(&self, m: &BigInt) -> (Iv, Iv) {
        (
            trig_point(m, self.bits, TrigFn::Sin),
            trig_point(m, self.bits, TrigFn::Cos),
        )
    }

    /// Rounds the value `v·10^digits` to the nearest integer if the interval
    /// determines it, i.e. if no rounding boundary (half-ulp of the last
    /// printed digit) falls inside the enclosure.
    pub fn decimal_mantissa(&self, iv: &Iv, digits: u32) -> Option<BigInt> {
        let p = pow10(digits);
        let two = BigInt::from(2);
        let den = BigInt::one() << ((self.bits + 1) as usize);
        // floor(v·10^d + 1/2) = floor((2·m·10^d + 2^bits) / 2^(bits+1))
        let lo = (&two * &iv.lo * &p + (BigInt::one() << (self.bits as usize))).div_floor(&den);
        let hi = (&two * &iv.hi * &p + (BigInt::one() << (self.bits as usize))).div_floor(&den);
        if lo == hi {
            Some(lo)
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum TrigFn {
    Sin,
    Cos,
}

/// Guard bits used for internal π / trig evaluations.
const GUARD: u32 = 48;

static PI_CACHE: Mutex<BTreeMap<u32, (BigInt, BigInt)>> = Mutex::new(BTreeMap::new());

/// Machin arctangent: returns (mantissa, error_ulps) at scale `w` for
/// atan(1/k). Nested floor division keeps every term an exact floor of the
/// true term, so the error is at most one ulp per term plus the alternating
/// tail.
fn machin_atan_inv(k: u64, w: u32) -> (BigInt, BigInt) {
    let kk = BigInt::from(k);
    let k2 = &kk * &kk;
    let mut u = (BigInt::one() << (w as usize)).div_floor(&kk);
    let mut total = u.clone();
    let mut terms: u64 = 1;
    let mut j: u64 = 1;
    loop {
        u = u.div_floor(&k2);
        if u.is_zero() {
            break;
        }
        let t = u.div_floor(&BigInt::from(2 * j + 1));
        if j % 2 == 1 {
            total -= &t;
        } else {
            total += &t;
        }
        terms += 1;
        j += 1;
    }
    (total, BigInt::from(terms + 2))
}

/// Certified enclosure of π at scale `bits`, cached per scale.
fn pi_enclosure(bits: u32) -> Iv {
    if let Some((lo, hi)) = PI_CACHE.lock().unwrap().get(&bits) {
        return Iv {
            lo: lo.clone(),
            hi: hi.clone(),
        };
    }
    let w = bits + GUARD;
    let (a5, e5) = machin_atan_inv(5, w);
    let (a239, e239) = machin_atan_inv(239, w);
    let v = BigInt::from(16) * a5 - BigInt::from(4) * a239;
    let e = BigInt::from(16) * e5 + BigInt::from(4) * e239;
    let iv = Iv {
        lo: shr_floor(&(&v - &e), GUARD),
        hi: shr_ceil(&(v + e), GUARD),
    };
    PI_CACHE
        .lock()
        .unwrap()
        .insert(bits, (iv.lo.clone(), iv.hi.clone()));
    iv
}

/// Certified sin/cos of the exact dyadic point `m / 2^bits`, evaluated by
/// range reduction modulo 2π and an interval Taylor series at `bits+GUARD`
/// working precision, with the alternating-series remainder included.
fn trig_point(m: &BigInt, bits: u32, f: TrigFn) -> Iv {
    let w = bits + GUARD;
    let ctx = Ctx::new(w);
    let x = Iv::point(m << (GUARD as usize));

    // Range-reduce: y = x − q·2π with q ≈ round(x / 2π).
    let pi_w = ctx.pi();
    let two_pi = ctx.add(&pi_w, &pi_w);
    let q = {
        let den = &two_pi.lo;
        (BigInt::from(2) * &x.lo + den).div_floor(&(BigInt::from(2) * den))
    };
    let y = ctx.sub(&x, &ctx.mul_int(&two_pi, &q));
    debug_assert!(
        y.abs_hi() < (BigInt::from(5) << (w as usize)),
        "range reduction failed"
    );

    let y2 = ctx.mul(&y, &y);
    let one = ctx.from_int(1);
    // Taylor: sin starts at t = y (denominators (2k)(2k+1)); cos starts at
    // t = 1 (denominators (2k−1)(2k)).
    let mut t = match f {
        TrigFn::Sin => y.clone(),
        TrigFn::Cos => one,
    };
    let mut sum = t.clone();
    let mut k: u64 = 1;
    loop {
        let d = match f {
            TrigFn::Sin => BigInt::from(2 * k) * BigInt::from(2 * k + 1),
            TrigFn::Cos => BigInt::from(2 * k - 1) * BigInt::from(2 * k),
        };
        t = ctx.div_uint(&ctx.mul(&t, &y2), &d);
        t = ctx.neg(&t);
        sum = ctx.add(&sum, &t);
        // Once |y²| < d and the term has shrunk to ~1 ulp the remaining
        // true tail is bounded by the next term, itself below |t| + 1.
        let tiny = t.abs_hi() <= BigInt::from(2);
        let decreasing = y2.hi < (d << (w as usize));
        if tiny && decreasing {
            let rem = t.abs_hi() + BigInt::from(2);
            sum = Iv {
                lo: &sum.lo - &rem,
                hi: &sum.hi + &rem,
            };
            break;
        }
        k += 1;
        assert!(k < 10_000, "trig series failed to converge");
    }
    ctx.rescale(&sum, &Ctx::new(bits))
}

/// Convenience: f64 estimate of an interval midpoint (for diagnostics).
pub fn iv_to_f64(ctx: &Ctx, iv: &Iv) -> f64 {
    let mid = (&iv.lo + &iv.hi) >> 1usize;
    let r = ctx.mantissa_to_rational(&mid);
    r.to_f64().unwrap_or(f64::NAN)
}

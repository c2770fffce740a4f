//! Text syntax for series expressions.
//!
//! The mini-language describes sums of products of sine/cosine powers over
//! nᵖ, the input shape of the summation engine:
//!
//! ```text
//! expr     := ['-'] term (('+' | '-') term)*
//! term     := element (['*'] element)*
//! element  := base ['^' uint] ['/' 'n' ['^' uint]]
//! base     := trig | '(' expr ')' | rational | 'pi'
//! trig     := ('sin' | 'cos') '(' arg ')'
//! arg      := item (('*' | '/') item)*      (exactly one 'n'; '/' only
//! item     := uint | 'pi' | 'x' | 'n'        before integers)
//! rational := uint ['/' uint]                (the quotient form only when
//!                                             the divisor is not 'n')
//! ```
//!
//! so `sin(n)/n`, `(sin(n)/n)^4 * sin(3*n)/n`, `sin(x*n)^3/n`, and
//! `1 - cos(pi*n)` all mean what they look like. Whitespace is free, and
//! adjacency multiplies. Powers of a parenthesized sum are expanded by
//! distribution, so the parse target is always a flat [`ProductExpression`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::closedform::{ProductExpression, ProductFactor, ProductTerm, MAX_TRIG_DEGREE};
use crate::error::Error;
use crate::exactnum::angle::Angle;
use crate::exactnum::pipoly::PiPoly;
use crate::series::{Frequency, TrigKind};
use crate::Result;

/// Cap on `^k` exponents; large powers explode the product-to-sum
/// expansion long before they stop parsing.
const MAX_POWER: u32 = MAX_TRIG_DEGREE;

/// Cap on additive terms produced while distributing products of sums.
const MAX_TERMS: usize = 4096;

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { s: s.as_bytes(), pos: 0 }
    }

    fn err(&self, detail: impl Into<String>) -> Error {
        Error::Parse {
            position: self.pos,
            detail: detail.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Current byte (whitespace already skipped by callers).
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8, what: &str) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    /// Eats a keyword if it is present and not followed by a letter.
    fn eat_word(&mut self, w: &str) -> bool {
        let end = self.pos + w.len();
        if end <= self.s.len() && &self.s[self.pos..end] == w.as_bytes() {
            if self.s.get(end).is_some_and(|c| c.is_ascii_alphanumeric()) {
                return false;
            }
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn parse_uint(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an integer"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("digits are utf8");
        if text.len() > 30 {
            self.pos = start;
            return Err(self.err("integer literal too long"));
        }
        Ok(text.parse().expect("digits parse"))
    }

    fn parse_power(&mut self) -> Result<u32> {
        self.skip_ws();
        if !self.eat(b'^') {
            return Ok(1);
        }
        self.skip_ws();
        let at = self.pos;
        let v = self.parse_uint()?;
        match u32::try_from(&v) {
            Ok(k) if k <= MAX_POWER => Ok(k),
            _ => {
                self.pos = at;
                Err(self.err(format!("exponent exceeds {MAX_POWER}")))
            }
        }
    }

    /// `'/' 'n' ['^' uint]` if present; returns the exponent (0 = absent).
    fn parse_n_divisor(&mut self) -> Result<u32> {
        self.skip_ws();
        let mark = self.pos;
        if !self.eat(b'/') {
            return Ok(0);
        }
        self.skip_ws();
        if !self.eat_word("n") {
            self.pos = mark;
            return Err(self.err("only division by n (or a rational literal) is supported"));
        }
        self.parse_power()
    }

    /// Trig argument: a product of integers, `pi` or `x`, and exactly one
    /// `n`, with `/ integer` allowed anywhere.
    fn parse_arg(&mut self) -> Result<Frequency> {
        let mut num = BigRational::one();
        let mut has_pi = false;
        let mut has_x = false;
        let mut n_seen = false;
        loop {
            self.skip_ws();
            let at = self.pos;
            if self.eat_word("pi") {
                if has_pi {
                    self.pos = at;
                    return Err(self.err("pi appears twice in a trig argument"));
                }
                has_pi = true;
            } else if self.eat_word("x") {
                if has_x {
                    self.pos = at;
                    return Err(self.err("x appears twice in a trig argument"));
                }
                has_x = true;
            } else if self.eat_word("n") {
                if n_seen {
                    self.pos = at;
                    return Err(self.err("n appears twice in a trig argument"));
                }
                n_seen = true;
            } else if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                num *= BigRational::from_integer(self.parse_uint()?);
            } else {
                return Err(self.err("expected an integer, pi, x, or n"));
            }
            self.skip_ws();
            if self.eat(b'*') {
                continue;
            }
            if self.eat(b'/') {
                self.skip_ws();
                if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    return Err(self.err("only integers may follow / in a trig argument"));
                }
                let d = self.parse_uint()?;
                if d.is_zero() {
                    return Err(self.err("division by zero"));
                }
                num /= BigRational::from_integer(d);
                self.skip_ws();
                if self.eat(b'*') {
                    continue;
                }
                if self.peek() == Some(b'/') {
                    continue;
                }
            }
            break;
        }
        if !n_seen {
            return Err(self.err("a trig argument must contain n"));
        }
        if has_pi && has_x {
            return Err(self.err("a trig argument may use pi or x, not both"));
        }
        Ok(if has_x {
            Frequency {
                base: Angle::zero(),
                x_coeff: num,
            }
        } else if has_pi {
            Frequency::concrete(Angle::new(BigRational::zero(), num))
        } else {
            Frequency::concrete(Angle::new(num, BigRational::zero()))
        })
    }

    /// One multiplicative element, as a product expression.
    fn parse_element(&mut self) -> Result<ProductExpression> {
        self.skip_ws();
        let at = self.pos;
        let base = if self.eat_word("sin") || {
            self.pos = at;
            self.eat_word("cos")
        } {
            let kind = if self.s[at] == b's' { TrigKind::Sin } else { TrigKind::Cos };
            self.skip_ws();
            self.expect(b'(', "( after sin/cos")?;
            let freq = self.parse_arg()?;
            self.skip_ws();
            self.expect(b')', ") closing the trig argument")?;
            let power = self.parse_power()?;
            ProductExpression::product(
                PiPoly::one(),
                vec![ProductFactor {
                    kind,
                    freq,
                    power,
                }],
                0,
            )
        } else if self.eat(b'(') {
            let inner = self.parse_expr()?;
            self.skip_ws();
            self.expect(b')', ") closing the group")?;
            let power = self.parse_power()?;
            pow_expr(&inner, power, at)?
        } else if self.eat_word("pi") {
            let power = self.parse_power()?;
            let mut c = PiPoly::one();
            for _ in 0..power {
                c = c.mul(&PiPoly::pi()).map_err(|_| {
                    Error::Parse {
                        position: at,
                        detail: "power of pi too large".into(),
                    }
                })?;
            }
            ProductExpression::product(c, vec![], 0)
        } else if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let numer = self.parse_uint()?;
            let mut value = BigRational::from_integer(numer);
            // a '/' here is a rational only when followed by digits;
            // '/n' belongs to the element suffix below
            let mark = self.pos;
            self.skip_ws();
            if self.eat(b'/') {
                self.skip_ws();
                if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    let d = self.parse_uint()?;
                    if d.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    value /= BigRational::from_integer(d);
                } else {
                    self.pos = mark;
                }
            } else {
                self.pos = mark;
            }
            ProductExpression::product(PiPoly::new(vec![value])?, vec![], 0)
        } else {
            return Err(self.err("expected sin, cos, pi, a number, or ("));
        };
        let p = self.parse_n_divisor()?;
        if p == 0 {
            Ok(base)
        } else {
            mul_expr(&base, &ProductExpression::product(PiPoly::one(), vec![], p))
        }
    }

    /// True if the upcoming input can start an element.
    fn at_element_start(&self) -> bool {
        matches!(self.peek(), Some(c) if c == b'(' || c.is_ascii_digit() || c.is_ascii_lowercase())
    }

    fn parse_term(&mut self) -> Result<ProductExpression> {
        let mut acc = self.parse_element()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                let rhs = self.parse_element()?;
                acc = mul_expr(&acc, &rhs)?;
            } else if self.at_element_start() {
                let rhs = self.parse_element()?;
                acc = mul_expr(&acc, &rhs)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn parse_expr(&mut self) -> Result<ProductExpression> {
        self.skip_ws();
        let negate = self.eat(b'-');
        let mut acc = self.parse_term()?;
        if negate {
            acc = negate_expr(&acc);
        }
        loop {
            self.skip_ws();
            if self.eat(b'+') {
                let t = self.parse_term()?;
                acc = add_expr(&acc, &t)?;
            } else if self.eat(b'-') {
                let t = self.parse_term()?;
                acc = add_expr(&acc, &negate_expr(&t))?;
            } else {
                return Ok(acc);
            }
        }
    }
}

fn negate_expr(e: &ProductExpression) -> ProductExpression {
    ProductExpression::new(
        e.terms
            .iter()
            .map(|t| ProductTerm {
                c: t.c.neg(),
                factors: t.factors.clone(),
                p: t.p,
            })
            .collect(),
    )
}

fn add_expr(a: &ProductExpression, b: &ProductExpression) -> Result<ProductExpression> {
    let mut terms = a.terms.clone();
    terms.extend(b.terms.iter().cloned());
    if terms.len() > MAX_TERMS {
        return Err(Error::invalid("expression has too many terms"));
    }
    Ok(ProductExpression::new(terms))
}

/// Merges a factor into a list, adding powers for an identical kernel.
fn push_factor(factors: &mut Vec<ProductFactor>, f: ProductFactor) {
    for g in factors.iter_mut() {
        if g.kind == f.kind && g.freq == f.freq {
            g.power += f.power;
            return;
        }
    }
    factors.push(f);
}

fn mul_terms(a: &ProductTerm, b: &ProductTerm) -> Result<ProductTerm> {
    let mut factors = a.factors.clone();
    for f in &b.factors {
        push_factor(&mut factors, f.clone());
    }
    let degree: u32 = factors.iter().map(|f| f.power).sum();
    if degree > MAX_TRIG_DEGREE {
        return Err(Error::invalid(format!(
            "trigonometric degree {degree} exceeds {MAX_TRIG_DEGREE}"
        )));
    }
    Ok(ProductTerm {
        c: a.c.mul(&b.c)?,
        factors,
        p: a.p.saturating_add(b.p),
    })
}

fn mul_expr(a: &ProductExpression, b: &ProductExpression) -> Result<ProductExpression> {
    let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
    for ta in &a.terms {
        for tb in &b.terms {
            terms.push(mul_terms(ta, tb)?);
            if terms.len() > MAX_TERMS {
                return Err(Error::invalid("expression has too many terms"));
            }
        }
    }
    Ok(ProductExpression::new(terms))
}

fn pow_expr(e: &ProductExpression, k: u32, at: usize) -> Result<ProductExpression> {
    let mut acc = ProductExpression::product(PiPoly::one(), vec![], 0);
    for _ in 0..k {
        acc = mul_expr(&acc, e).map_err(|err| match err {
            Error::InvalidInput { detail } => Error::Parse {
                position: at,
                detail,
            },
            other => other,
        })?;
    }
    Ok(acc)
}

/// Parses the expression mini-language into a product expression.
pub fn parse_product_expression(input: &str) -> Result<ProductExpression> {
    let mut cur = Cursor::new(input);
    let e = cur.parse_expr()?;
    cur.skip_ws();
    if cur.pos != cur.s.len() {
        return Err(cur.err("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses a basis constant: a rational literal, `pi`, or `pi^k`, optionally
/// scaled, e.g. `1`, `pi`, `pi^2`, `3/4`, `2*pi`.
pub fn parse_constant(input: &str) -> Result<PiPoly> {
    let mut cur = Cursor::new(input);
    cur.skip_ws();
    let negate = cur.eat(b'-');
    let mut value = PiPoly::one();
    let mut any = false;
    loop {
        cur.skip_ws();
        if cur.eat_word("pi") {
            let k = cur.parse_power()?;
            for _ in 0..k {
                value = value
                    .mul(&PiPoly::pi())
                    .map_err(|_| cur.err("power of pi too large"))?;
            }
            any = true;
        } else if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            let n = cur.parse_uint()?;
            let mut r = BigRational::from_integer(n);
            cur.skip_ws();
            if cur.eat(b'/') {
                cur.skip_ws();
                let d = cur.parse_uint()?;
                if d.is_zero() {
                    return Err(cur.err("division by zero"));
                }
                r /= BigRational::from_integer(d);
            }
            value = value.scale(&r);
            any = true;
        } else {
            break;
        }
        cur.skip_ws();
        if !cur.eat(b'*') {
            break;
        }
    }
    cur.skip_ws();
    if !any || cur.pos != cur.s.len() {
        return Err(cur.err("expected a rational number, pi, or pi^k"));
    }
    Ok(if negate { value.neg() } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::sinc_power;
    use crate::exactnum::rational::parse_rational;

    fn rat(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn poly(coeffs: &[&str]) -> PiPoly {
        PiPoly::new(coeffs.iter().map(|s| rat(s)).collect()).unwrap()
    }

    #[test]
    fn basic_sinc_sums_to_its_closed_form() {
        let e = parse_product_expression("sin(n)/n").unwrap();
        assert_eq!(e.evaluate_sum().unwrap(), poly(&["-1/2", "1/2"]));
    }

    #[test]
    fn parenthesized_sinc_powers_match_the_builder() {
        for k in [2u32, 3, 7] {
            let e = parse_product_expression(&format!("(sin(n)/n)^{k}")).unwrap();
            assert_eq!(
                e.expand().unwrap(),
                sinc_power(k).expand().unwrap(),
                "mismatch at k = {k}"
            );
        }
    }

    #[test]
    fn quintic_negative_control_parses_end_to_end() {
        let e = parse_product_expression("(sin(n)/n)^4 * sin(3*n)/n").unwrap();
        let value = e.evaluate_sum().unwrap();
        assert_eq!(
            value,
            poly(&["-3/2", "27/4", "-343/48", "49/16", "-7/12", "1/24"])
        );
    }

    #[test]
    fn trig_powers_and_denominators_compose() {
        // sin²(n)/n³ = 1/(2n³) − cos(2n)/(2n³)
        let e = parse_product_expression("sin(n)^2/n^3").unwrap();
        let s = e.expand().unwrap().to_concrete().unwrap();
        let terms = s.terms();
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0].c, poly(&["1/2"]));
        assert_eq!(terms[0].kind, TrigKind::Cos);
        assert!(terms[0].beta.is_structurally_zero());
        assert_eq!(terms[1].c, poly(&["-1/2"]));
        assert_eq!(terms[1].beta, Angle::from_int(2));
        assert_eq!(terms[1].p, 3);
    }

    #[test]
    fn rational_frequencies_and_pi_frequencies_parse() {
        let e = parse_product_expression("sin(n/3)/n^2").unwrap();
        let f = &e.terms[0].factors[0];
        assert_eq!(f.freq, Frequency::concrete(Angle::of(1, 3, 0, 1)));

        let e = parse_product_expression("sin(pi*n/4)/n").unwrap();
        let f = &e.terms[0].factors[0];
        assert_eq!(f.freq, Frequency::concrete(Angle::of(0, 1, 1, 4)));

        let e = parse_product_expression("sin(3*n/2)/n").unwrap();
        let f = &e.terms[0].factors[0];
        assert_eq!(f.freq, Frequency::concrete(Angle::of(3, 2, 0, 1)));
    }

    #[test]
    fn free_variable_arguments_parse() {
        let e = parse_product_expression("sin(x*n)^3/n").unwrap();
        assert!(e.has_free_variable());
        // substituting x = 1 matches the concrete parse
        let at_one = e.substitute(&Angle::from_int(1)).unwrap();
        let direct = parse_product_expression("sin(n)^3/n")
            .unwrap()
            .substitute(&Angle::zero())
            .unwrap();
        assert_eq!(at_one, direct);

        let e = parse_product_expression("sin(2*x*n)/n").unwrap();
        assert_eq!(e.terms[0].factors[0].freq.x_coeff, rat("2"));
    }

    #[test]
    fn sums_differences_and_constants_combine() {
        let e = parse_product_expression("1/n^2 - cos(2*n)/n^2 + 1/2").unwrap();
        assert_eq!(e.terms.len(), 3);
        let s = e.expand().unwrap().to_concrete().unwrap();
        assert_eq!(s.terms().len(), 3);

        let e = parse_product_expression("(1 + cos(pi*n)) * sin(n)/n^2").unwrap();
        let s = e.expand().unwrap().to_concrete().unwrap();
        // sin(n)/n² plus the alternating copy (−1)ⁿsin(n)/n², whose
        // frequency lands at a π-shifted angle after canonicalization
        assert_eq!(s.terms().len(), 2);
    }

    #[test]
    fn adjacency_multiplies_and_whitespace_is_free() {
        let spaced = parse_product_expression("  ( sin( n ) / n ) ^ 2   sin( 2 * n ) / n ").unwrap();
        let tight = parse_product_expression("(sin(n)/n)^2*sin(2*n)/n").unwrap();
        assert_eq!(spaced.expand().unwrap(), tight.expand().unwrap());

        let coeff = parse_product_expression("3/4 sin(n)/n").unwrap();
        assert_eq!(coeff.terms[0].c, poly(&["3/4"]));
        assert_eq!(coeff.terms[0].p, 1);
    }

    #[test]
    fn pi_constants_parse_as_coefficients() {
        let e = parse_product_expression("pi^2 * sin(n)/n").unwrap();
        assert_eq!(e.terms[0].c, poly(&["0", "0", "1"]));
        let e = parse_product_expression("pi/n^2").unwrap();
        assert_eq!(e.terms[0].c, poly(&["0", "1"]));
        assert_eq!(e.terms[0].p, 2);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let cases: &[(&str, usize)] = &[
            ("sin(m)/n", 4),       // unknown symbol in the argument
            ("sin(n*n)/n", 6),     // n twice
            ("sin(x*pi*n)/n", 0),  // pi and x together (reported at arg end)
            ("sin(3)/n", 0),       // no n in the argument
            ("sin(n)/n^", 0),      // missing exponent
            ("sin(n)/k", 0),       // division by something else
            ("", 0),
            ("sin(n)/n sin", 0),   // trailing garbage mid-element
        ];
        for (input, min_pos) in cases {
            match parse_product_expression(input) {
                Err(Error::Parse { position, .. }) => {
                    assert!(
                        position >= *min_pos,
                        "position {position} too early for {input:?}"
                    );
                }
                other => panic!("expected parse error for {input:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn constants_parse_for_recognition_bases() {
        assert_eq!(parse_constant("1").unwrap(), PiPoly::one());
        assert_eq!(parse_constant("pi").unwrap(), PiPoly::pi());
        assert_eq!(parse_constant("pi^2").unwrap(), poly(&["0", "0", "1"]));
        assert_eq!(parse_constant("3/4").unwrap(), poly(&["3/4"]));
        assert_eq!(parse_constant("2*pi").unwrap(), poly(&["0", "2"]));
        assert_eq!(parse_constant("-1/2").unwrap(), poly(&["-1/2"]));
        assert!(parse_constant("").is_err());
        assert!(parse_constant("x").is_err());
        assert!(parse_constant("pi pi").is_err());
    }
}

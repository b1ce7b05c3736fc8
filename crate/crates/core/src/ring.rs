//! Exact coefficient arithmetic.
//!
//! [`LaurentPoly`] holds Laurent polynomials in `t` with exact Gaussian-rational
//! coefficients. [`Dual`] is the ring `S[e]/(e^2)` over a scalar kind `S`; the
//! floating flavour [`DualScalar`] is what skein elements evaluate to at a
//! numeric representation, the exact flavour [`ExactDual`] backs the symbol
//! calculus of the quantum torus.
//!
//! The bridge between the two is the reduction `t -> -1 + e`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

/// `a + b i` with `a, b` exact rationals.
pub type GaussianRational = Complex<BigRational>;

pub fn gq(n: i64) -> GaussianRational {
    Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
}

pub fn gq_ratio(num: i64, den: i64) -> GaussianRational {
    Complex::new(
        BigRational::new(BigInt::from(num), BigInt::from(den)),
        BigRational::zero(),
    )
}

/// The imaginary unit.
pub fn gq_i() -> GaussianRational {
    Complex::new(BigRational::zero(), BigRational::one())
}

pub fn gq_to_complex(x: &GaussianRational) -> Complex64 {
    Complex64::new(
        x.re.to_f64().unwrap_or(f64::NAN),
        x.im.to_f64().unwrap_or(f64::NAN),
    )
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Renders a Gaussian rational as `3`, `-1/2`, `2i`, `-i` or `(1+2i)`.
pub fn fmt_gaussian(x: &GaussianRational) -> String {
    let unit_im = |im: &BigRational| -> String {
        if im.is_one() {
            "i".to_string()
        } else if (-im).is_one() {
            "-i".to_string()
        } else {
            format!("{}i", fmt_rational(im))
        }
    };
    match (x.re.is_zero(), x.im.is_zero()) {
        (_, true) => fmt_rational(&x.re),
        (true, false) => unit_im(&x.im),
        (false, false) => {
            let im = unit_im(&x.im);
            if im.starts_with('-') {
                format!("({}{})", fmt_rational(&x.re), im)
            } else {
                format!("({}+{})", fmt_rational(&x.re), im)
            }
        }
    }
}

/// Laurent polynomial in `t` with Gaussian-rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is ring equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, GaussianRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(gq(n))
    }

    pub fn monomial(c: GaussianRational, exp: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    /// `t^exp`
    pub fn t_pow(exp: i64) -> Self {
        Self::monomial(gq(1), exp)
    }

    /// Builds from `(exponent, integer coefficient)` pairs; repeated exponents add up.
    pub fn from_int_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        terms
            .into_iter()
            .fold(Self::zero(), |acc, (e, c)| acc + Self::monomial(gq(c), e))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> GaussianRational {
        self.coeffs.get(&exp).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &GaussianRational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    fn add_term(&mut self, exp: i64, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_insert_with(GaussianRational::zero);
        *slot = &*slot + c;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero();
        for (e, a) in &self.coeffs {
            out.add_term(*e, a * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::from_int(1), |acc, _| &acc * self)
    }

    /// Value at `t = -1`.
    pub fn eval_minus_one(&self) -> GaussianRational {
        self.coeffs.iter().fold(GaussianRational::zero(), |acc, (e, c)| {
            if e.rem_euclid(2) == 0 {
                acc + c
            } else {
                acc - c
            }
        })
    }

    /// Exact image under `t -> -1 + e`; `t^n` maps to `(-1)^n (1 - n e)`.
    pub fn eval_dual_exact(&self) -> ExactDual {
        let mut value = GaussianRational::zero();
        let mut deriv = GaussianRational::zero();
        for (e, c) in &self.coeffs {
            let sign = if e.rem_euclid(2) == 0 { gq(1) } else { gq(-1) };
            let signed = c * sign;
            deriv -= &signed * gq(*e);
            value += signed;
        }
        Dual::new(value, deriv)
    }

    /// Floating image under `t -> -1 + e`.
    pub fn eval_dual(&self) -> DualScalar {
        let d = self.eval_dual_exact();
        Dual::new(gq_to_complex(&d.value), gq_to_complex(&d.deriv))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self)
    }
}

impl fmt::Display for LaurentPoly {
    /// Descending powers, e.g. `-t^3 + 2*t^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let mut body = fmt_gaussian(c);
            let negative = c.im.is_zero() && c.re.is_negative();
            if negative {
                body.remove(0);
            }
            let power = match e {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{}", e),
            };
            let term = match (body.as_str(), power.is_empty()) {
                (_, true) => body.clone(),
                ("1", false) => power,
                (_, false) => format!("{}*{}", body, power),
            };
            match (idx, negative) {
                (0, false) => write!(f, "{}", term)?,
                (0, true) => write!(f, "-{}", term)?,
                (_, false) => write!(f, " + {}", term)?,
                (_, true) => write!(f, " - {}", term)?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, c.clone());
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -self.clone()
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        LaurentPoly::from_int(1)
    }
}

impl FromStr for LaurentPoly {
    type Err = ParseError;

    /// Accepts sums of terms `c*t^k`, `c*t`, `t^k`, `c`; `c` may be an integer,
    /// a fraction `p/q`, an imaginary literal such as `2i`, or a parenthesised
    /// Gaussian rational `(1-3/2i)`.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut parser = TermParser::new(s);
        let poly = parser.laurent_sum()?;
        parser.expect_end()?;
        Ok(poly)
    }
}

/// Small recursive-descent reader shared by the Laurent and torus syntaxes.
pub(crate) struct TermParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> TermParser<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    pub(crate) fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(msg, self.pos)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect_end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("unexpected character '{}'", c))),
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek_raw() {
            if c.is_ascii_digit() {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            None
        } else {
            self.src[start..self.pos].parse().ok()
        }
    }

    pub(crate) fn integer(&mut self) -> Result<i64, ParseError> {
        let neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        let n = self
            .digits()
            .ok_or_else(|| self.error("expected integer"))?
            .to_i64()
            .ok_or_else(|| self.error("integer out of range"))?;
        Ok(if neg { -n } else { n })
    }

    /// Unsigned rational, possibly followed by `i`.
    fn unsigned_number(&mut self) -> Result<Option<GaussianRational>, ParseError> {
        let Some(num) = self.digits() else {
            if self.peek() == Some('i') {
                self.bump();
                return Ok(Some(gq_i()));
            }
            return Ok(None);
        };
        let mut q = BigRational::from_integer(num);
        if self.peek() == Some('/') {
            self.bump();
            let den = self.digits().ok_or_else(|| self.error("expected denominator"))?;
            if den.is_zero() {
                return Err(self.error("zero denominator"));
            }
            q /= BigRational::from_integer(den);
        }
        if self.peek_raw() == Some('i') {
            self.pos += 1;
            return Ok(Some(Complex::new(BigRational::zero(), q)));
        }
        Ok(Some(Complex::new(q, BigRational::zero())))
    }

    /// `(a+bi)` style literal, already past the opening parenthesis.
    fn paren_gaussian(&mut self) -> Result<GaussianRational, ParseError> {
        let mut acc = GaussianRational::zero();
        let mut first = true;
        loop {
            let sign = if self.eat('-') {
                -1
            } else if self.eat('+') || first {
                1
            } else {
                break;
            };
            first = false;
            let v = self
                .unsigned_number()?
                .ok_or_else(|| self.error("expected number"))?;
            acc += v * gq(sign);
        }
        if !self.eat(')') {
            return Err(self.error("expected ')'"));
        }
        Ok(acc)
    }

    /// Coefficient literal or parenthesised Laurent polynomial.
    pub(crate) fn coefficient(&mut self) -> Result<Option<LaurentPoly>, ParseError> {
        if self.peek() == Some('(') {
            self.bump();
            let save = self.pos;
            if let Ok(g) = self.paren_gaussian() {
                return Ok(Some(LaurentPoly::constant(g)));
            }
            self.pos = save;
            let inner = self.laurent_sum()?;
            if !self.eat(')') {
                return Err(self.error("expected ')'"));
            }
            return Ok(Some(inner));
        }
        Ok(self.unsigned_number()?.map(LaurentPoly::constant))
    }

    /// Optional `^k` exponent, default 1.
    pub(crate) fn exponent(&mut self) -> Result<i64, ParseError> {
        if self.eat('^') {
            self.integer()
        } else {
            Ok(1)
        }
    }

    fn laurent_term(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut acc = LaurentPoly::from_int(1);
        let mut seen = false;
        loop {
            match self.peek() {
                Some('t') => {
                    self.bump();
                    let e = self.exponent()?;
                    acc = &acc * &LaurentPoly::t_pow(e);
                }
                _ => match self.coefficient()? {
                    Some(c) => acc = &acc * &c,
                    None if seen => return Err(self.error("dangling '*'")),
                    None => return Err(self.error("expected term")),
                },
            }
            seen = true;
            if !self.eat('*') {
                return Ok(acc);
            }
        }
    }

    pub(crate) fn laurent_sum(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut acc = LaurentPoly::zero();
        let mut first = true;
        loop {
            let negate = if self.eat('-') {
                true
            } else if self.eat('+') || first {
                false
            } else {
                return Ok(acc);
            };
            first = false;
            let term = self.laurent_term()?;
            acc = if negate { &acc - &term } else { &acc + &term };
            match self.peek() {
                Some('+') | Some('-') => continue,
                _ => return Ok(acc),
            }
        }
    }
}

/// Element `value + deriv * e` of `S[e]/(e^2)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Dual<S> {
    pub value: S,
    pub deriv: S,
}

/// Floating dual number, the target of numeric skein evaluation.
pub type DualScalar = Dual<Complex64>;

/// Exact dual number over Gaussian rationals.
pub type ExactDual = Dual<GaussianRational>;

impl<S> Dual<S> {
    pub const fn new(value: S, deriv: S) -> Self {
        Self { value, deriv }
    }
}

impl<S: Zero> Dual<S> {
    /// Embedding of the scalars.
    pub fn scalar(value: S) -> Self {
        Self::new(value, S::zero())
    }
}

impl<S> Dual<S>
where
    S: Clone + Zero + One + Neg<Output = S> + Sub<Output = S>,
{
    /// `-1 + e`, the image of `t`.
    pub fn t() -> Self {
        Self::new(-S::one(), S::one())
    }

    /// `-1 - e`, the image of `t^-1`.
    pub fn t_inv() -> Self {
        Self::new(-S::one(), -S::one())
    }
}

impl<S> Dual<S>
where
    S: Clone + Zero + One + PartialEq + Neg<Output = S> + Mul<Output = S> + std::ops::Div<Output = S>,
{
    /// `(a + b e)^-1 = a^-1 - b a^-2 e`; `None` when `a = 0`.
    pub fn inv(&self) -> Option<Self> {
        if self.value.is_zero() {
            return None;
        }
        let a_inv = S::one() / self.value.clone();
        let deriv = -(self.deriv.clone() * a_inv.clone() * a_inv.clone());
        Some(Self::new(a_inv, deriv))
    }
}

impl<S: Add<Output = S>> Add for Dual<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.value + rhs.value, self.deriv + rhs.deriv)
    }
}

impl<S: Sub<Output = S>> Sub for Dual<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.value - rhs.value, self.deriv - rhs.deriv)
    }
}

impl<S: Neg<Output = S>> Neg for Dual<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, -self.deriv)
    }
}

impl<S> Mul for Dual<S>
where
    S: Clone + Add<Output = S> + Mul<Output = S>,
{
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        dual_mul(&self, &rhs)
    }
}

/// `(a + b e)(c + d e) = ac + (ad + bc) e`
pub fn dual_mul<S>(x: &Dual<S>, y: &Dual<S>) -> Dual<S>
where
    S: Clone + Add<Output = S> + Mul<Output = S>,
{
    Dual::new(
        x.value.clone() * y.value.clone(),
        x.value.clone() * y.deriv.clone() + x.deriv.clone() * y.value.clone(),
    )
}

impl<S: Clone + Zero + Add<Output = S> + Mul<Output = S>> Zero for Dual<S> {
    fn zero() -> Self {
        Self::new(S::zero(), S::zero())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.deriv.is_zero()
    }
}

impl<S: Clone + Zero + One + Add<Output = S> + Mul<Output = S> + PartialEq> One for Dual<S> {
    fn one() -> Self {
        Self::new(S::one(), S::zero())
    }
}

impl DualScalar {
    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.value * c, self.deriv * c)
    }
}

impl fmt::Display for DualScalar {
    /// `(re,im)+(re,im)e`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{})+({},{})e",
            self.value.re, self.value.im, self.deriv.re, self.deriv.im
        )
    }
}

impl FromStr for DualScalar {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let parse_pair = |chunk: &str, offset: usize| -> Result<Complex64, ParseError> {
            let inner = chunk
                .trim()
                .strip_prefix('(')
                .and_then(|c| c.strip_suffix(')'))
                .ok_or_else(|| ParseError::new("expected (re,im)", offset))?;
            let (re, im) = inner
                .split_once(',')
                .ok_or_else(|| ParseError::new("expected ','", offset))?;
            let re: f64 = re.trim().parse().map_err(|_| ParseError::new("bad real part", offset))?;
            let im: f64 = im.trim().parse().map_err(|_| ParseError::new("bad imaginary part", offset))?;
            Ok(Complex64::new(re, im))
        };
        let body = s
            .trim()
            .strip_suffix('e')
            .ok_or_else(|| ParseError::new("expected trailing 'e'", s.len()))?;
        let split = body
            .find(")+(")
            .ok_or_else(|| ParseError::new("expected ')+('", 0))?;
        let value = parse_pair(&body[..=split], 0)?;
        let deriv = parse_pair(&body[split + 2..], split + 2)?;
        Ok(Dual::new(value, deriv))
    }
}

impl fmt::Display for ExactDual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*e", fmt_gaussian(&self.value), fmt_gaussian(&self.deriv))
    }
}

/// Convenience for tests and suites.
pub fn complex_of(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(a: f64, b: f64) -> DualScalar {
        Dual::new(Complex64::new(a, 0.0), Complex64::new(b, 0.0))
    }

    #[test]
    fn dual_mul_examples() {
        assert_eq!(dual_mul(&d(-1.0, 1.0), &d(-1.0, -1.0)), d(1.0, 0.0));
        assert_eq!(dual_mul(&d(2.0, 3.0), &d(5.0, 7.0)), d(10.0, 29.0));
        let a = Complex64::new(1.5, -2.0);
        let c = Complex64::new(0.25, 4.0);
        assert_eq!(
            dual_mul(&Dual::scalar(a), &Dual::scalar(c)),
            Dual::scalar(a * c)
        );
    }

    #[test]
    fn dual_inverse() {
        let x: ExactDual = Dual::new(gq(3), gq(5));
        let inv = x.inv().unwrap();
        assert_eq!(inv, Dual::new(gq_ratio(1, 3), gq_ratio(-5, 9)));
        assert_eq!(x * inv, ExactDual::one());
        let zero_value: ExactDual = Dual::new(gq(0), gq(1));
        assert!(zero_value.inv().is_none());
    }

    #[test]
    fn eval_dual_examples() {
        let t = LaurentPoly::t_pow(1);
        assert_eq!(t.eval_dual_exact(), ExactDual::t());
        assert_eq!(LaurentPoly::t_pow(-1).eval_dual_exact(), ExactDual::t_inv());
        let p = LaurentPoly::t_pow(2) + LaurentPoly::t_pow(-2);
        assert_eq!(p.eval_dual_exact(), Dual::new(gq(2), gq(0)));
    }

    #[test]
    fn t_power_images() {
        for n in -20i64..=20 {
            let img = LaurentPoly::t_pow(n).eval_dual_exact();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(img, Dual::new(gq(sign), gq(-n * sign)), "n = {}", n);
        }
    }

    #[test]
    fn display_matches_text_format() {
        let p = LaurentPoly::from_int_terms([(3, -1), (-1, 2)]);
        assert_eq!(p.to_string(), "-t^3 + 2*t^-1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(LaurentPoly::from_int_terms([(0, 5), (1, 1)]).to_string(), "t + 5");
        let g = LaurentPoly::monomial(Complex::new(BigRational::zero(), BigRational::one()), 2);
        assert_eq!(g.to_string(), "i*t^2");
        assert_eq!(LaurentPoly::constant(gq_ratio(-1, 2)).to_string(), "-1/2");
    }

    #[test]
    fn parse_laurent() {
        let p: LaurentPoly = "-t^3 + 2*t^-1".parse().unwrap();
        assert_eq!(p, LaurentPoly::from_int_terms([(3, -1), (-1, 2)]));
        let q: LaurentPoly = "(1+2i)*t - 3/2".parse().unwrap();
        let expected = LaurentPoly::monomial(gq(1) + gq_i() * gq(2), 1) + LaurentPoly::constant(gq_ratio(-3, 2));
        assert_eq!(q, expected);
        let r: LaurentPoly = "t^2*t^-2 + (t+1)*t".parse().unwrap();
        assert_eq!(r, LaurentPoly::from_int_terms([(0, 1), (2, 1), (1, 1)]));
        assert!("t^".parse::<LaurentPoly>().is_err());
        assert!("2 **t".parse::<LaurentPoly>().is_err());
        assert!("1/0".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn dual_text_roundtrip() {
        let x = Dual::new(Complex64::new(1.5, -2.0), Complex64::new(0.0, 3.25));
        assert_eq!(x.to_string(), "(1.5,-2)+(0,3.25)e");
        assert_eq!(x.to_string().parse::<DualScalar>().unwrap(), x);
        assert!("(1,2)+(3,4)".parse::<DualScalar>().is_err());
    }

    #[test]
    fn degrees() {
        let p = LaurentPoly::from_int_terms([(4, 1), (-3, 2), (0, 0)]);
        assert_eq!(p.min_degree(), Some(-3));
        assert_eq!(p.max_degree(), Some(4));
        assert_eq!(p.coeff(0), gq(0));
        let cancel = &p - &p;
        assert!(cancel.is_zero());
        assert_eq!(cancel.min_degree(), None);
    }
}

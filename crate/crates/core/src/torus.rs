//! The quantum torus `Z[t^+-1]<L^+-1, M^+-1> / (LM - t^2 ML)`.
//!
//! Elements are kept in the L-first normal form `sum c_ab(t) L^a M^b`. The
//! algebra acts on sequences by `(Lf)_n = f_{n+1}` and `(Mf)_n = t^{2n} f_n`,
//! and carries the two symbol maps `sigma_0, sigma_1` into the commutative
//! Laurent ring `C[L^+-1, M^+-1]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ParseError, TorusError};
use crate::ring::{fmt_gaussian, gq, gq_i, GaussianRational, LaurentPoly, TermParser};

/// Exponent pair `(a, b)` of the monomial `L^a M^b`.
pub type Monomial = (i64, i64);

/// Constant `c` in `sigma_1(PQ) = sigma_0(P) sigma_1(Q) + sigma_1(P) sigma_0(Q) + c {sigma_0(P), sigma_0(Q)}`.
///
/// Fixed once by [`calibrate_symbol_constant`]; the regression tests check that
/// calibration reproduces it.
pub fn symbol_bracket_constant() -> GaussianRational {
    gq_i() * crate::ring::gq_ratio(1, 2)
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct TorusElement {
    terms: BTreeMap<Monomial, LaurentPoly>,
}

impl TorusElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(LaurentPoly::from_int(1), 0, 0)
    }

    pub fn term(c: LaurentPoly, a: i64, b: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a, b), c);
        }
        Self { terms }
    }

    /// `L^a M^b` with coefficient 1.
    pub fn monomial(a: i64, b: i64) -> Self {
        Self::term(LaurentPoly::from_int(1), a, b)
    }

    pub fn l() -> Self {
        Self::monomial(1, 0)
    }

    pub fn m() -> Self {
        Self::monomial(0, 1)
    }

    pub fn scalar(c: LaurentPoly) -> Self {
        Self::term(c, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: i64, b: i64) -> LaurentPoly {
        self.terms.get(&(a, b)).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, m: Monomial, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Normal-ordered product, using `M^b L^c = t^{-2bc} L^c M^b`.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), p) in &self.terms {
            for (&(c, d), q) in &other.terms {
                let coeff = &(p * q) * &LaurentPoly::t_pow(-2 * b * c);
                out.add_term((a + c, b + d), &coeff);
            }
        }
        out
    }

    /// The involution `L^a M^b -> L^-a M^-b`, coefficients untouched.
    pub fn sigma(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((-a, -b), c.clone()))
                .collect(),
        }
    }

    /// `sigma_0`: specialise `t = -1`.
    pub fn symbol0(&self) -> CommutativeLM {
        let mut out = CommutativeLM::zero();
        for (&m, c) in &self.terms {
            out.add_term(m, c.eval_minus_one());
        }
        out
    }

    /// `sigma_1`: `i` times the `e`-part of `t -> -1 + e`, read in the symmetric
    /// basis `(-t)^{-ab} L^a M^b`.
    ///
    /// In that basis the coefficient of `L^a M^b` is `c_ab(t) (-t)^{ab}`, so the
    /// `e`-part picks up an extra `-ab c_ab(-1)` relative to the L-first form.
    /// This is the normalisation under which the product rule holds with a
    /// single bracket term.
    pub fn symbol1(&self) -> CommutativeLM {
        let i = gq_i();
        let mut out = CommutativeLM::zero();
        for (&(a, b), c) in &self.terms {
            let d = c.eval_dual_exact();
            let eps = d.deriv - d.value * gq(a * b);
            out.add_term((a, b), eps * i.clone());
        }
        out
    }

    /// Apply to a sequence: `(L^a M^b f)_n = t^{2(n+a)b} f_{n+a}`.
    pub fn act(&self, f: &RSequence) -> Result<RSequence, TorusError> {
        let (lo, hi) = (f.lo(), f.hi());
        if self.terms.is_empty() {
            return Ok(RSequence::new(lo, vec![LaurentPoly::zero(); f.len()]));
        }
        let min_shift = self.terms.keys().map(|m| m.0).min().unwrap_or(0);
        let max_shift = self.terms.keys().map(|m| m.0).max().unwrap_or(0);
        let new_lo = lo - min_shift;
        let new_hi = hi - max_shift;
        if f.is_empty() || new_lo > new_hi {
            return Err(TorusError::WindowTooSmall {
                lo,
                hi,
                min_shift,
                max_shift,
            });
        }
        let values = (new_lo..=new_hi)
            .map(|n| {
                let mut acc = LaurentPoly::zero();
                for (&(a, b), c) in &self.terms {
                    let shifted = f.get(n + a).expect("window checked");
                    let term = &(c * &LaurentPoly::t_pow(2 * (n + a) * b)) * shifted;
                    acc += &term;
                }
                acc
            })
            .collect();
        Ok(RSequence::new(new_lo, values))
    }

    /// Random element with at most `max_terms` terms, exponents in `[-span, span]`
    /// and small integer Laurent coefficients.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_terms: usize, span: i64) -> Self {
        let mut out = Self::zero();
        let n = rng.gen_range(1..=max_terms);
        for _ in 0..n {
            let a = rng.gen_range(-span..=span);
            let b = rng.gen_range(-span..=span);
            let k = rng.gen_range(1..=2);
            let coeff = LaurentPoly::from_int_terms(
                (0..k).map(|_| (rng.gen_range(-3..=3), rng.gen_range(-3..=3))),
            );
            out.add_term((a, b), &coeff);
        }
        out
    }
}

impl Add for &TorusElement {
    type Output = TorusElement;
    fn add(self, rhs: &TorusElement) -> TorusElement {
        let mut out = self.clone();
        for (&m, c) in &rhs.terms {
            out.add_term(m, c);
        }
        out
    }
}

impl Neg for &TorusElement {
    type Output = TorusElement;
    fn neg(self) -> TorusElement {
        TorusElement {
            terms: self.terms.iter().map(|(&m, c)| (m, -c)).collect(),
        }
    }
}

impl Sub for &TorusElement {
    type Output = TorusElement;
    fn sub(self, rhs: &TorusElement) -> TorusElement {
        self + &(-rhs)
    }
}

impl Mul for &TorusElement {
    type Output = TorusElement;
    fn mul(self, rhs: &TorusElement) -> TorusElement {
        self.multiply(rhs)
    }
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, a: i64, b: i64) -> fmt::Result {
    let mut parts = Vec::new();
    if a != 0 {
        parts.push(format!("L^{}", a));
    }
    if b != 0 {
        parts.push(format!("M^{}", b));
    }
    write!(f, "{}", parts.join("*"))
}

impl fmt::Display for TorusElement {
    /// Terms like `t^2*L^1*M^-3`; multi-term coefficients are parenthesised.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (&(a, b), c)) in self.terms.iter().enumerate() {
            let single = c.terms().count() == 1;
            let mut cs = c.to_string();
            let negative = single && cs.starts_with('-');
            if negative {
                cs = (-c).to_string();
            }
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let unit = a == 0 && b == 0;
            match (cs.as_str(), unit) {
                (_, true) if single => write!(f, "{}", cs)?,
                (_, true) => write!(f, "({})", cs)?,
                ("1", false) => {}
                (_, false) if single => write!(f, "{}*", cs)?,
                (_, false) => write!(f, "({})*", cs)?,
            }
            if !unit {
                fmt_monomial(f, a, b)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusElement({})", self)
    }
}

impl FromStr for TorusElement {
    type Err = ParseError;

    /// Sums of products of factors `t^k`, `L^a`, `M^b` and coefficients; factors
    /// multiply left to right in the torus, so `M*L` reads as `t^-2*L*M`.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut p = TermParser::new(s);
        let mut acc = TorusElement::zero();
        let mut first = true;
        loop {
            let negate = if p.eat('-') {
                true
            } else if p.eat('+') || first {
                false
            } else {
                break;
            };
            first = false;
            let mut term = TorusElement::one();
            loop {
                let factor = match p.peek() {
                    Some('t') => {
                        p.bump();
                        TorusElement::scalar(LaurentPoly::t_pow(p.exponent()?))
                    }
                    Some('L') => {
                        p.bump();
                        TorusElement::monomial(p.exponent()?, 0)
                    }
                    Some('M') => {
                        p.bump();
                        TorusElement::monomial(0, p.exponent()?)
                    }
                    _ => match p.coefficient()? {
                        Some(c) => TorusElement::scalar(c),
                        None => return Err(p.error("expected factor")),
                    },
                };
                term = term.multiply(&factor);
                if !p.eat('*') {
                    break;
                }
            }
            acc = if negate { &acc - &term } else { &acc + &term };
            if !matches!(p.peek(), Some('+') | Some('-')) {
                break;
            }
        }
        p.expect_end()?;
        Ok(acc)
    }
}

/// Element of the commutative ring `C[L^+-1, M^+-1]` with Gaussian-rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct CommutativeLM {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl CommutativeLM {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: GaussianRational, a: i64, b: i64) -> Self {
        let mut out = Self::zero();
        out.add_term((a, b), c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: i64, b: i64) -> GaussianRational {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(GaussianRational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(GaussianRational::zero);
        *slot = &*slot + c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero();
        for (&m, a) in &self.terms {
            out.add_term(m, a * c);
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), p) in &self.terms {
            for (&(c, d), q) in &other.terms {
                out.add_term((a + c, b + d), p * q);
            }
        }
        out
    }

    /// Poisson bracket with `{L^a M^b, L^c M^d} = 2(bc - ad) L^{a+c} M^{b+d}`.
    ///
    /// This is the normalisation in which the `e`-part of a normal-ordered
    /// commutator under `t -> -1 + e` equals the bracket of the `t = -1` symbols.
    pub fn poisson_bracket(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), p) in &self.terms {
            for (&(c, d), q) in &other.terms {
                let k = 2 * (b * c - a * d);
                if k != 0 {
                    out.add_term((a + c, b + d), p * q * gq(k));
                }
            }
        }
        out
    }
}

impl Add for &CommutativeLM {
    type Output = CommutativeLM;
    fn add(self, rhs: &CommutativeLM) -> CommutativeLM {
        let mut out = self.clone();
        for (&m, c) in &rhs.terms {
            out.add_term(m, c.clone());
        }
        out
    }
}

impl Sub for &CommutativeLM {
    type Output = CommutativeLM;
    fn sub(self, rhs: &CommutativeLM) -> CommutativeLM {
        let mut out = self.clone();
        for (&m, c) in &rhs.terms {
            out.add_term(m, -c.clone());
        }
        out
    }
}

impl Mul for &CommutativeLM {
    type Output = CommutativeLM;
    fn mul(self, rhs: &CommutativeLM) -> CommutativeLM {
        self.multiply(rhs)
    }
}

impl fmt::Display for CommutativeLM {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (&(a, b), c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            let cs = fmt_gaussian(c);
            if a == 0 && b == 0 {
                write!(f, "{}", cs)?;
                continue;
            }
            match cs.as_str() {
                "1" => {}
                "-1" => write!(f, "-")?,
                _ => write!(f, "{}*", cs)?,
            }
            fmt_monomial(f, a, b)?;
        }
        Ok(())
    }
}

impl fmt::Debug for CommutativeLM {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CommutativeLM({})", self)
    }
}

/// `e`-part of the normal-ordered commutator `PQ - QP`, coefficient-wise.
pub fn commutator_eps_part(p: &TorusElement, q: &TorusElement) -> CommutativeLM {
    let comm = &p.multiply(q) - &q.multiply(p);
    let mut out = CommutativeLM::zero();
    for (&m, c) in comm.terms() {
        out.add_term(m, c.eval_dual_exact().deriv);
    }
    out
}

/// Residual of the product rule for a candidate constant `c`.
pub fn product_rule_residual(p: &TorusElement, q: &TorusElement, c: &GaussianRational) -> CommutativeLM {
    let lhs = p.multiply(q).symbol1();
    let (s0p, s0q) = (p.symbol0(), q.symbol0());
    let rhs = &(&s0p.multiply(&q.symbol1()) + &p.symbol1().multiply(&s0q))
        + &s0p.poisson_bracket(&s0q).scale(c);
    &lhs - &rhs
}

/// Solve for the product-rule constant from the first pair with a nonzero
/// bracket, then confirm it on every pair.
pub fn calibrate_symbol_constant(
    pairs: &[(TorusElement, TorusElement)],
) -> Result<GaussianRational, TorusError> {
    let mut candidate: Option<GaussianRational> = None;
    for (p, q) in pairs {
        let bracket = p.symbol0().poisson_bracket(&q.symbol0());
        let Some((m, b)) = bracket.terms().next() else {
            continue;
        };
        let zero_c = product_rule_residual(p, q, &GaussianRational::zero());
        let r = zero_c.coeff(m.0, m.1);
        candidate = Some(r / b.clone());
        break;
    }
    let c = candidate.ok_or_else(|| TorusError::Calibration("every bracket vanishes".into()))?;
    for (idx, (p, q)) in pairs.iter().enumerate() {
        let res = product_rule_residual(p, q, &c);
        if !res.is_zero() {
            return Err(TorusError::Calibration(format!(
                "constant {} leaves residual {} on pair {}",
                fmt_gaussian(&c),
                res,
                idx
            )));
        }
    }
    Ok(c)
}

/// Window `f_lo, ..., f_hi` of a sequence `Z -> Z[t^+-1]`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "SequenceRepr", into = "SequenceRepr")]
pub struct RSequence {
    lo: i64,
    values: Vec<LaurentPoly>,
}

impl RSequence {
    pub fn new(lo: i64, values: Vec<LaurentPoly>) -> Self {
        Self { lo, values }
    }

    /// Tabulate `f` on `[lo, hi]`.
    pub fn from_fn(lo: i64, hi: i64, f: impl Fn(i64) -> LaurentPoly) -> Self {
        Self::new(lo, (lo..=hi).map(f).collect())
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: i64) -> Option<&LaurentPoly> {
        if n < self.lo {
            return None;
        }
        self.values.get((n - self.lo) as usize)
    }

    pub fn values(&self) -> &[LaurentPoly] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(LaurentPoly::is_zero)
    }

    /// Restriction to `[lo, hi]` if contained in the window.
    pub fn restrict(&self, lo: i64, hi: i64) -> Option<Self> {
        if lo < self.lo || hi > self.hi() || lo > hi {
            return None;
        }
        Some(Self::from_fn(lo, hi, |n| self.get(n).cloned().unwrap_or_default()))
    }
}

/// Text form: `{"base": n0, "values": ["1", "t^2", ...]}`.
#[derive(Serialize, Deserialize)]
struct SequenceRepr {
    base: i64,
    values: Vec<String>,
}

impl TryFrom<SequenceRepr> for RSequence {
    type Error = ParseError;
    fn try_from(r: SequenceRepr) -> Result<Self, ParseError> {
        let values = r
            .values
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<LaurentPoly>, _>>()?;
        Ok(RSequence::new(r.base, values))
    }
}

impl From<RSequence> for SequenceRepr {
    fn from(s: RSequence) -> Self {
        SequenceRepr {
            base: s.lo,
            values: s.values.iter().map(|v| v.to_string()).collect(),
        }
    }
}

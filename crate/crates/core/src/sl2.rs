//! SL2(C) and sl2(C) numerics.
//!
//! Lie algebra elements use the basis `H = diag(1,-1)`, `E = [[0,1],[0,0]]`,
//! `F = [[0,0],[1,0]]`. A [`Form3`] is a 3x3 matrix in that basis, read either
//! as a bilinear form (`m[i][j] = phi(b_i, b_j)`) or as an endomorphism
//! (column `j` holds the image of `b_j`).

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Sl2Error;
use crate::words::{GroupWord, Letter};

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// Determinant tolerance at construction.
pub const DET_TOL: f64 = 1e-10;

/// Complex 2x2 matrix.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Mat2 {
    pub m: [[Complex64; 2]; 2],
}

impl Mat2 {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { m: [[a, b], [c, d]] }
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub const fn identity() -> Self {
        Self::new(C1, C0, C0, C1)
    }

    pub const fn zero() -> Self {
        Self::new(C0, C0, C0, C0)
    }

    pub fn h() -> Self {
        Self::real(1.0, 0.0, 0.0, -1.0)
    }

    pub fn e() -> Self {
        Self::real(0.0, 1.0, 0.0, 0.0)
    }

    pub fn f() -> Self {
        Self::real(0.0, 0.0, 1.0, 0.0)
    }

    /// `[H, E, F]`
    pub fn basis() -> [Self; 3] {
        [Self::h(), Self::e(), Self::f()]
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.m[0][0] * s, self.m[0][1] * s, self.m[1][0] * s, self.m[1][1] * s)
    }

    /// Adjugate; equals the inverse when `det = 1`.
    pub fn adjugate(&self) -> Self {
        Self::new(self.m[1][1], -self.m[0][1], -self.m[1][0], self.m[0][0])
    }

    pub fn inverse(&self) -> Self {
        self.adjugate().scale(C1 / self.det())
    }

    /// Largest entry modulus.
    pub fn norm_max(&self) -> f64 {
        self.m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Exponential of a traceless matrix: `cosh(r) I + sinh(r)/r X` with `r^2 = -det X`.
    pub fn exp_traceless(&self) -> Self {
        let r2 = -self.det();
        let r = r2.sqrt();
        let (c, s) = if r.norm() < 1e-6 {
            // Taylor: cosh r = 1 + r^2/2 + r^4/24, sinh r / r = 1 + r^2/6 + r^4/120
            (
                C1 + r2 / 2.0 + r2 * r2 / 24.0,
                C1 + r2 / 6.0 + r2 * r2 / 120.0,
            )
        } else {
            (r.cosh(), r.sinh() / r)
        };
        Mat2::identity().scale(c) + self.scale(s)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.m[0][0] + o.m[0][0],
            self.m[0][1] + o.m[0][1],
            self.m[1][0] + o.m[1][0],
            self.m[1][1] + o.m[1][1],
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        self + (-o)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-C1)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let a = &self.m;
        let b = &o.m;
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

/// JSON form `[[[re,im],[re,im]],[[re,im],[re,im]]]`.
impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: [[[f64; 2]; 2]; 2] = [
            [
                [self.m[0][0].re, self.m[0][0].im],
                [self.m[0][1].re, self.m[0][1].im],
            ],
            [
                [self.m[1][0].re, self.m[1][0].im],
                [self.m[1][1].re, self.m[1][1].im],
            ],
        ];
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = <[[[f64; 2]; 2]; 2]>::deserialize(d)?;
        let z = |p: [f64; 2]| Complex64::new(p[0], p[1]);
        Ok(Mat2::new(z(rows[0][0]), z(rows[0][1]), z(rows[1][0]), z(rows[1][1])))
    }
}

/// The star operator `[[a,b],[c,d]] -> [[d,-b],[-c,a]]`.
///
/// `X + X* = tr(X) Id`; on sl2 it is `-1`, on SL2 it is the inverse.
pub fn star(x: &Mat2) -> Mat2 {
    x.adjugate()
}

/// Element of SL2(C).
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Sl2(Mat2);

impl Sl2 {
    pub fn new(m: Mat2) -> Result<Self, Sl2Error> {
        let det = m.det();
        if (det - C1).norm() > DET_TOL {
            return Err(Sl2Error::NotUnimodular {
                det: format!("{}", det),
            });
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Mat2::identity())
    }

    /// `diag(l, 1/l)`
    pub fn diag(l: Complex64) -> Self {
        Self(Mat2::new(l, C0, C0, C1 / l))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.adjugate())
    }

    /// `exp(xi) g`, the left-trivialised perturbation.
    pub fn left_perturb(&self, xi: &Mat2) -> Self {
        Self(xi.exp_traceless() * self.0)
    }

    /// `c g c^-1`
    pub fn conjugate_by(&self, c: &Sl2) -> Self {
        Self(c.0 * self.0 * c.inverse().0)
    }

    /// Three entries uniform in the box `[-1,1] + [-1,1]i`, the fourth solved from
    /// `det = 1`; pivots with `|a| < 1e-3` are redrawn.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut draw = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        loop {
            let (a, b, c) = (draw(), draw(), draw());
            if a.norm() < 1e-3 {
                continue;
            }
            let d = (C1 + b * c) / a;
            return Self(Mat2::new(a, b, c, d));
        }
    }
}

impl Mul for Sl2 {
    type Output = Sl2;
    fn mul(self, o: Sl2) -> Sl2 {
        Sl2(self.0 * o.0)
    }
}

impl Serialize for Sl2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Sl2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = Mat2::deserialize(d)?;
        Sl2::new(m).map_err(serde::de::Error::custom)
    }
}

/// Coordinates `(h, e, f)` of the traceless matrix `[[h, e], [f, -h]]`.
#[derive(Clone, Copy, PartialEq, Debug, Default)]
pub struct Sl2Vec {
    pub h: Complex64,
    pub e: Complex64,
    pub f: Complex64,
}

impl Sl2Vec {
    pub fn new(h: Complex64, e: Complex64, f: Complex64) -> Self {
        Self { h, e, f }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// Basis vector `b_i` for `i` in `0..3`.
    pub fn basis(i: usize) -> Self {
        let mut c = [C0; 3];
        c[i] = C1;
        Self::from_coords(c)
    }

    pub fn from_coords(c: [Complex64; 3]) -> Self {
        Self::new(c[0], c[1], c[2])
    }

    pub fn coords(&self) -> [Complex64; 3] {
        [self.h, self.e, self.f]
    }

    pub fn to_matrix(&self) -> Mat2 {
        Mat2::new(self.h, self.e, self.f, -self.h)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut z = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        Self::new(z(), z(), z())
    }

    pub fn norm(&self) -> f64 {
        self.coords().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// `A_0 = A - tr(A)/2 Id`, in coordinates.
pub fn traceless(a: &Mat2) -> Sl2Vec {
    let half = a.trace() / 2.0;
    Sl2Vec::new(a.m[0][0] - half, a.m[0][1], a.m[1][0])
}

/// Normalised Killing form `K(xi, eta) = tr(xi eta) / 6`.
pub fn killing(xi: &Sl2Vec, eta: &Sl2Vec) -> Complex64 {
    (xi.to_matrix() * eta.to_matrix()).trace() / 6.0
}

/// 3x3 complex matrix in the `(H, E, F)` basis.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Form3 {
    pub m: [[Complex64; 3]; 3],
}

impl Form3 {
    pub fn zero() -> Self {
        Self { m: [[C0; 3]; 3] }
    }

    pub fn identity() -> Self {
        let mut out = Self::zero();
        for i in 0..3 {
            out.m[i][i] = C1;
        }
        out
    }

    /// Matrix of the bilinear form `phi`: entry `(i, j)` is `phi(b_i, b_j)`.
    pub fn bilinear(phi: impl Fn(&Mat2, &Mat2) -> Complex64) -> Self {
        let basis = Mat2::basis();
        let mut out = Self::zero();
        for (i, bi) in basis.iter().enumerate() {
            for (j, bj) in basis.iter().enumerate() {
                out.m[i][j] = phi(bi, bj);
            }
        }
        out
    }

    /// Matrix of the linear map `xi -> (map(xi))_0`: column `j` is the image of `b_j`.
    pub fn endomorphism(map: impl Fn(&Mat2) -> Mat2) -> Self {
        let mut out = Self::zero();
        for (j, bj) in Mat2::basis().iter().enumerate() {
            let img = traceless(&map(bj)).coords();
            for i in 0..3 {
                out.m[i][j] = img[i];
            }
        }
        out
    }

    /// Killing form matrix.
    pub fn killing() -> Self {
        Self::bilinear(|x, y| (*x * *y).trace() / 6.0)
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = *self;
        out.m.iter_mut().flatten().for_each(|z| *z *= s);
        out
    }

    pub fn apply_bilinear(&self, xi: &Sl2Vec, eta: &Sl2Vec) -> Complex64 {
        let (x, y) = (xi.coords(), eta.coords());
        let mut acc = C0;
        for i in 0..3 {
            for j in 0..3 {
                acc += x[i] * self.m[i][j] * y[j];
            }
        }
        acc
    }

    pub fn max_abs_diff(&self, other: &Form3) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        worst
    }
}

/// `Q(phi) = phi(H,H) + 2 phi(E,F) + 2 phi(F,E)`.
pub fn q_functional(phi: &Form3) -> Complex64 {
    phi.m[0][0] + phi.m[1][2] * 2.0 + phi.m[2][1] * 2.0
}

/// `pi(phi) = Q(phi) K`.
pub fn project_pi(phi: &Form3) -> Form3 {
    Form3::killing().scale(q_functional(phi))
}

/// `g`-tuple of SL2 matrices, the images of `t_1, ..., t_g`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Representation {
    images: Vec<Sl2>,
}

impl Representation {
    pub fn new(images: Vec<Sl2>) -> Self {
        assert!(!images.is_empty(), "genus must be positive");
        Self { images }
    }

    pub fn genus(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Sl2] {
        &self.images
    }

    /// Image of `t_gen` (1-based).
    pub fn image(&self, gen: usize) -> Result<&Sl2, Sl2Error> {
        if gen == 0 || gen > self.images.len() {
            return Err(Sl2Error::IndexOutOfRange {
                index: gen,
                genus: self.images.len(),
            });
        }
        Ok(&self.images[gen - 1])
    }

    pub fn letter(&self, l: Letter) -> Result<Sl2, Sl2Error> {
        let a = *self.image(l.gen)?;
        Ok(if l.inverse { a.inverse() } else { a })
    }

    pub fn with_image(&self, gen: usize, a: Sl2) -> Self {
        let mut out = self.clone();
        out.images[gen - 1] = a;
        out
    }

    pub fn conjugate_by(&self, c: &Sl2) -> Self {
        Self::new(self.images.iter().map(|a| a.conjugate_by(c)).collect())
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, genus: usize) -> Self {
        Self::new((0..genus).map(|_| Sl2::random(rng)).collect())
    }
}

/// Product of letter images, left to right.
pub fn eval_letters(letters: &[Letter], rho: &Representation) -> Result<Sl2, Sl2Error> {
    letters
        .iter()
        .try_fold(Sl2::identity(), |acc, &l| Ok(acc * rho.letter(l)?))
}

pub fn eval_word(w: &GroupWord, rho: &Representation) -> Result<Sl2, Sl2Error> {
    eval_letters(w.letters(), rho)
}

/// Split `w` around its `occ`-th occurrence of `t_gen`: `(U, letter, V)` with `w = U letter V`.
fn split_at_occurrence(
    w: &GroupWord,
    rho: &Representation,
    gen: usize,
    occ: usize,
) -> Result<(Mat2, Letter, Mat2), Sl2Error> {
    let positions = w.occurrences(gen);
    let &pos = positions.get(occ).ok_or(Sl2Error::OccurrenceNotFound {
        gen,
        occ,
        count: positions.len(),
    })?;
    rho.image(gen)?;
    let letters = w.letters();
    let u = eval_letters(&letters[..pos], rho)?;
    let v = eval_letters(&letters[pos + 1..], rho)?;
    Ok((*u.matrix(), letters[pos], *v.matrix()))
}

/// Matrix of the derivative contribution of one occurrence of `t_gen` in `w`:
/// `xi -> (U xi A V)_0` for `U A V`, and `xi -> -(U A^-1 xi V)_0` for `U A^-1 V`.
///
/// `occ` counts occurrences of `t_gen^{+-1}` from 0.
pub fn occurrence_endomorphism(
    w: &GroupWord,
    rho: &Representation,
    gen: usize,
    occ: usize,
) -> Result<Form3, Sl2Error> {
    let (u, letter, v) = split_at_occurrence(w, rho, gen, occ)?;
    let a = *rho.image(gen)?.matrix();
    Ok(if letter.inverse {
        let a_inv = a.adjugate();
        Form3::endomorphism(|xi| -(u * a_inv * *xi * v))
    } else {
        Form3::endomorphism(|xi| u * *xi * a * v)
    })
}

/// Divergence of `A_gen -> w(A)_0` in the left trivialisation: the trace of its
/// derivative, summed over occurrences of `t_gen`.
pub fn divergence(w: &GroupWord, rho: &Representation, gen: usize) -> Result<Complex64, Sl2Error> {
    rho.image(gen)?;
    (0..w.occurrences(gen).len()).try_fold(C0, |acc, occ| {
        Ok(acc + occurrence_endomorphism(w, rho, gen, occ)?.trace())
    })
}

/// Central-difference estimate of [`divergence`]: perturb `A_gen -> exp(s b) A_gen`
/// for `b` in `H, E, F` and difference the matching coordinate of `w(A)_0`.
pub fn fd_divergence(
    w: &GroupWord,
    rho: &Representation,
    gen: usize,
    h: f64,
) -> Result<Complex64, Sl2Error> {
    assert!(h > 0.0, "step must be positive");
    let a = *rho.image(gen)?;
    let mut acc = C0;
    for (i, b) in Mat2::basis().iter().enumerate() {
        let plus = rho.with_image(gen, a.left_perturb(&b.scale(h.into())));
        let minus = rho.with_image(gen, a.left_perturb(&b.scale((-h).into())));
        let fp = traceless(eval_word(w, &plus)?.matrix()).coords()[i];
        let fm = traceless(eval_word(w, &minus)?.matrix()).coords()[i];
        acc += (fp - fm) / (2.0 * h);
    }
    Ok(acc)
}

/// Closed-form candidates for the trace of a positive occurrence `U A V`.
#[derive(Clone, Copy, Debug)]
pub struct OccurrenceTraceProbe {
    /// Trace of the 3x3 basis computation.
    pub numeric: Complex64,
    /// `tr(UAV)/2 + tr(U V^-1 A^-1)`.
    pub printed: Complex64,
    /// `tr(UAV)/2 + tr(U A V^-1)`.
    pub transposed: Complex64,
}

/// Compare the numeric occurrence trace against the two readings of the closed form.
/// Only positive occurrences are probed.
pub fn occurrence_trace_probe(
    w: &GroupWord,
    rho: &Representation,
    gen: usize,
    occ: usize,
) -> Result<Option<OccurrenceTraceProbe>, Sl2Error> {
    let (u, letter, v) = split_at_occurrence(w, rho, gen, occ)?;
    if letter.inverse {
        return Ok(None);
    }
    let a = *rho.image(gen)?.matrix();
    let (a_inv, v_inv) = (a.adjugate(), v.adjugate());
    let half = (u * a * v).trace() / 2.0;
    Ok(Some(OccurrenceTraceProbe {
        numeric: occurrence_endomorphism(w, rho, gen, occ)?.trace(),
        printed: half + (u * v_inv * a_inv).trace(),
        transposed: half + (u * a * v_inv).trace(),
    }))
}

/// `sign * (tr(AB) + 2 tr(AB^-1))`, the first-order difference of the two
/// smoothings of a crossing whose arcs carry holonomies `A` and `B`.
pub fn crossing_contribution(a: &Sl2, b: &Sl2, sign: i32) -> Complex64 {
    let ab = (*a * *b).trace();
    let ab_inv = (*a * b.inverse()).trace();
    debug_assert!({
        let lhs = a.trace() * b.trace();
        (lhs - ab - ab_inv).norm() <= 1e-8 * (1.0 + lhs.norm() + ab.norm() + ab_inv.norm())
    });
    (ab + ab_inv * 2.0) * f64::from(sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
    }

    fn rep1(a: Sl2) -> Representation {
        Representation::new(vec![a])
    }

    #[test]
    fn eval_word_examples() {
        let a1 = Sl2::diag(c(2.0));
        let a2 = Sl2::new(Mat2::real(1.0, 1.0, 0.0, 1.0)).unwrap();
        let rho = Representation::new(vec![a1, a2]);
        assert_eq!(eval_word(&GroupWord::identity(), &rho).unwrap(), Sl2::identity());
        let prod = eval_word(&"ab".parse().unwrap(), &rho).unwrap();
        assert_eq!(*prod.matrix(), Mat2::real(2.0, 2.0, 0.0, 0.5));
        let err = eval_word(&"c".parse().unwrap(), &rho).unwrap_err();
        assert_eq!(err, Sl2Error::IndexOutOfRange { index: 3, genus: 2 });
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(Sl2::new(Mat2::real(2.0, 0.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn traceless_examples() {
        assert_eq!(traceless(&Mat2::identity()), Sl2Vec::zero());
        assert_eq!(traceless(&Mat2::h()), Sl2Vec::basis(0));
        let t = traceless(Sl2::diag(c(2.0)).matrix());
        assert_eq!(t, Sl2Vec::new(c(0.75), c(0.0), c(0.0)));
    }

    #[test]
    fn star_examples() {
        assert_eq!(star(&Mat2::identity()), Mat2::identity());
        assert_eq!(star(&Mat2::h()), -Mat2::h());
        assert_eq!(star(&Mat2::real(1.0, 2.0, 3.0, 4.0)), Mat2::real(4.0, -2.0, -3.0, 1.0));
    }

    #[test]
    fn killing_and_q() {
        let (h, e, f) = (Sl2Vec::basis(0), Sl2Vec::basis(1), Sl2Vec::basis(2));
        assert_eq!(killing(&h, &h), c(1.0 / 3.0));
        assert_eq!(killing(&e, &f), c(1.0 / 6.0));
        assert_eq!(killing(&h, &e), c(0.0));
        assert!(close(q_functional(&Form3::killing()), c(1.0), 1e-15));
        let tr_form = Form3::bilinear(|x, y| (*y * *x).trace());
        assert_eq!(q_functional(&tr_form), c(6.0));
        assert_eq!(q_functional(&Form3::zero()), c(0.0));
    }

    #[test]
    fn project_pi_examples() {
        let k = Form3::killing();
        assert!(project_pi(&k).max_abs_diff(&k) < 1e-15);
        let anti = Form3::bilinear(|x, y| ((*x * *y - *y * *x) * Mat2::h()).trace());
        assert_eq!(q_functional(&anti), c(0.0));
        assert_eq!(project_pi(&anti), Form3::zero());
        assert_eq!(project_pi(&Form3::zero()), Form3::zero());
    }

    #[test]
    fn occurrence_endomorphism_examples() {
        let id = rep1(Sl2::identity());
        let m = occurrence_endomorphism(&"a".parse().unwrap(), &id, 1, 0).unwrap();
        assert_eq!(m, Form3::identity());
        let m = occurrence_endomorphism(&"A".parse().unwrap(), &id, 1, 0).unwrap();
        assert_eq!(m.trace(), c(-3.0));
        let diag = rep1(Sl2::diag(c(2.0)));
        let m = occurrence_endomorphism(&"a".parse().unwrap(), &diag, 1, 0).unwrap();
        assert!(close(m.trace(), c(3.75), 1e-14));
        assert!(matches!(
            occurrence_endomorphism(&"a".parse().unwrap(), &diag, 1, 1),
            Err(Sl2Error::OccurrenceNotFound { .. })
        ));
    }

    #[test]
    fn divergence_examples() {
        let diag = rep1(Sl2::diag(c(2.0)));
        let two = Representation::new(vec![Sl2::diag(c(2.0)), Sl2::identity()]);
        assert!(close(divergence(&"a".parse().unwrap(), &diag, 1).unwrap(), c(3.75), 1e-14));
        assert_eq!(divergence(&"b".parse().unwrap(), &two, 1).unwrap(), c(0.0));
        let id = rep1(Sl2::identity());
        assert_eq!(divergence(&"aa".parse().unwrap(), &id, 1).unwrap(), c(6.0));
        assert_eq!(fd_divergence(&GroupWord::identity(), &id, 1, 1e-4).unwrap(), c(0.0));
        for w in ["a", "aa"] {
            for rho in [&diag, &id] {
                let w: GroupWord = w.parse().unwrap();
                let exact = divergence(&w, rho, 1).unwrap();
                let fd = fd_divergence(&w, rho, 1, 1e-4).unwrap();
                assert!((exact - fd).norm() < 1e-6, "{} {} {}", w, exact, fd);
            }
        }
    }

    #[test]
    fn crossing_contribution_examples() {
        let id = Sl2::identity();
        assert_eq!(crossing_contribution(&id, &id, 1), c(6.0));
        assert!(close(crossing_contribution(&Sl2::diag(c(2.0)), &id, 1), c(7.5), 1e-15));
        assert_eq!(crossing_contribution(&id, &id, -1), c(-6.0));
    }

    #[test]
    fn printed_occurrence_trace_matches_numeric() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut printed_ok = 0;
        let mut transposed_ok = 0;
        for _ in 0..50 {
            let rho = Representation::random(&mut rng, 3);
            let w: GroupWord = "bcaCb".parse().unwrap();
            let p = occurrence_trace_probe(&w, &rho, 1, 0).unwrap().unwrap();
            if close(p.numeric, p.printed, 1e-10) {
                printed_ok += 1;
            }
            if close(p.numeric, p.transposed, 1e-10) {
                transposed_ok += 1;
            }
        }
        assert_eq!(printed_ok, 50);
        assert_eq!(transposed_ok, 0);
    }

    #[test]
    fn exp_of_traceless() {
        let e = Mat2::h().scale(c(0.3)).exp_traceless();
        assert!((e.m[0][0] - c(0.3f64.exp())).norm() < 1e-14);
        let n = Mat2::e().scale(c(2.0)).exp_traceless();
        assert_eq!(n, Mat2::real(1.0, 2.0, 0.0, 1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = Sl2Vec::random(&mut rng).to_matrix();
        assert!((x.exp_traceless().det() - C1).norm() < 1e-12);
    }

    #[test]
    fn matrix_json() {
        let a = Sl2::new(Mat2::real(2.0, 1.0, 1.0, 1.0)).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, "[[[2.0,0.0],[1.0,0.0]],[[1.0,0.0],[1.0,0.0]]]");
        let back: Sl2 = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<Sl2>("[[[2,0],[0,0]],[[0,0],[2,0]]]").is_err());
    }
}

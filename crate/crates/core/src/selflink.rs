//! Derivatives of holonomy traces and the scalar shadows of the Kauffman
//! relations for self-linking.

use num_complex::Complex64;

use crate::error::{SkeinError, Sl2Error};
use crate::ring::DualScalar;
use crate::skein::{evaluate, resolve_dual, Crossing, Diagram, Edge, OverPair, Port, Smoothing};
use crate::sl2::{eval_letters, q_functional, Form3, Mat2, Representation, Sl2, Sl2Vec};
use crate::words::{GroupWord, Letter};

/// A word with `exp(s_p xi_p)` inserted before letter `p` for each slot.
///
/// The letter sequence is kept as given, so slot positions survive products
/// that would cancel under free reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformedWord {
    letters: Vec<Letter>,
    slots: Vec<(usize, Sl2Vec)>,
}

impl DeformedWord {
    /// Slot positions must increase strictly and lie in `0..=len`.
    pub fn new(word: &GroupWord, slots: Vec<(usize, Sl2Vec)>) -> Option<Self> {
        Self::from_letters(word.letters().to_vec(), slots)
    }

    pub fn from_letters(letters: Vec<Letter>, slots: Vec<(usize, Sl2Vec)>) -> Option<Self> {
        let ok = slots.windows(2).all(|p| p[0].0 < p[1].0)
            && slots.last().is_none_or(|s| s.0 <= letters.len());
        ok.then_some(Self { letters, slots })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn slots(&self) -> &[(usize, Sl2Vec)] {
        &self.slots
    }

    /// `tr` of the word with slot `j` set to `exp(params[j] xi_j)`.
    pub fn trace_at(&self, rho: &Representation, params: &[f64]) -> Result<Complex64, Sl2Error> {
        let letters = &self.letters;
        let mut acc = Mat2::identity();
        let mut prev = 0;
        for (&(p, xi), &s) in self.slots.iter().zip(params) {
            acc = acc * *eval_letters(&letters[prev..p], rho)?.matrix();
            acc = acc * xi.to_matrix().scale(s.into()).exp_traceless();
            prev = p;
        }
        acc = acc * *eval_letters(&letters[prev..], rho)?.matrix();
        Ok(acc.trace())
    }
}

/// `letters[from..]` followed by `letters[..to]`.
fn wrap(letters: &[Letter], from: usize, to: usize) -> Vec<Letter> {
    letters[from..].iter().chain(&letters[..to]).copied().collect()
}

/// `tr(xi A)` with `A` the holonomy read from the slot once around.
pub fn first_derivative(dw: &DeformedWord, rho: &Representation) -> Result<Complex64, Sl2Error> {
    assert_eq!(dw.slots.len(), 1, "one slot expected");
    let (p, xi) = dw.slots[0];
    let a = eval_letters(&wrap(&dw.letters, p, p), rho)?;
    Ok((xi.to_matrix() * *a.matrix()).trace())
}

/// `tr(xi A eta B)` with `A` the holonomy from the first slot to the second and
/// `B` the rest of the loop.
pub fn hessian_pair(dw: &DeformedWord, rho: &Representation) -> Result<Complex64, Sl2Error> {
    assert_eq!(dw.slots.len(), 2, "two slots expected");
    let ((p, xi), (q, eta)) = (dw.slots[0], dw.slots[1]);
    let a = eval_letters(&dw.letters[p..q], rho)?;
    let b = eval_letters(&wrap(&dw.letters, q, p), rho)?;
    Ok((xi.to_matrix() * *a.matrix() * eta.to_matrix() * *b.matrix()).trace())
}

/// Central difference of the one-slot trace.
pub fn fd_first_derivative(dw: &DeformedWord, rho: &Representation, h: f64) -> Result<Complex64, Sl2Error> {
    Ok((dw.trace_at(rho, &[h])? - dw.trace_at(rho, &[-h])?) / (2.0 * h))
}

/// Central difference of the mixed partial of the two-slot trace.
pub fn fd_hessian_pair(dw: &DeformedWord, rho: &Representation, h: f64) -> Result<Complex64, Sl2Error> {
    let f = |s: f64, u: f64| dw.trace_at(rho, &[s, u]);
    Ok((f(h, h)? - f(h, -h)? - f(-h, h)? + f(-h, -h)?) / (4.0 * h * h))
}

/// Mixed second derivative of `tr(ab) + tr(ab^-1) - tr(a) tr(b)` when `alpha`
/// is deformed by `xi` at `slot_a` and `beta` by `eta` at `slot_b`.
pub fn trace_identity_hessian(
    alpha: &GroupWord,
    beta: &GroupWord,
    rho: &Representation,
    (p, xi): (usize, Sl2Vec),
    (q, eta): (usize, Sl2Vec),
) -> Result<Complex64, Sl2Error> {
    let (la, lb) = (alpha.letters(), beta.letters());
    assert!(p <= la.len() && q <= lb.len(), "slot outside word");
    // the two insertions may meet at the junction of alpha and beta
    let raw = |letters: Vec<Letter>, slots| DeformedWord { letters, slots };
    let ab: Vec<Letter> = la.iter().chain(lb).copied().collect();
    let ab_inv: Vec<Letter> = la.iter().copied().chain(lb.iter().rev().map(|l| l.inv())).collect();
    let neg_eta = Sl2Vec::from_coords(eta.coords().map(|c| -c));
    let h_ab = hessian_pair(&raw(ab, vec![(p, xi), (la.len() + q, eta)]), rho)?;
    let h_ab_inv = hessian_pair(&raw(ab_inv, vec![(p, xi), (la.len() + lb.len() - q, neg_eta)]), rho)?;
    let d_a = first_derivative(&raw(la.to_vec(), vec![(p, xi)]), rho)?;
    let d_b = first_derivative(&raw(lb.to_vec(), vec![(q, eta)]), rho)?;
    Ok(h_ab + h_ab_inv - d_a * d_b)
}

/// `(Q(phi), tr A tr B + tr(AB^-1))` for `phi(xi, eta) = tr(B eta A xi)`.
pub fn q_case_smooth(a: &Sl2, b: &Sl2) -> (Complex64, Complex64) {
    let (am, bm) = (*a.matrix(), *b.matrix());
    let phi = Form3::bilinear(|x, y| (bm * *y * am * *x).trace());
    (q_functional(&phi), a.trace() * b.trace() + (am * *b.inverse().matrix()).trace())
}

/// `(Q(phi), tr(AB^-1) - tr(AB))` for `phi(xi, eta) = tr(A xi) tr(B^-1 eta)`.
pub fn q_case_split(a: &Sl2, b: &Sl2) -> (Complex64, Complex64) {
    let (am, bm, bi) = (*a.matrix(), *b.matrix(), *b.inverse().matrix());
    let phi = Form3::bilinear(|x, y| (am * *x).trace() * (bi * *y).trace());
    (q_functional(&phi), (am * bi).trace() - (am * bm).trace())
}

/// Residuals of the scalar Kauffman relations at one crossing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KauffmanResiduals {
    /// Self-crossing of a loop with lobes `A`, `B`: `Q(phi) - (chi(L0) - chi(Linf))`.
    pub smooth: Complex64,
    /// Crossing of two loops `A`, `B`: `Q(phi) - (chi(L0'') - chi(Linf''))`.
    pub split: Complex64,
    /// `chi(L u O) + 2 chi(L)`.
    pub unknot: Complex64,
}

impl KauffmanResiduals {
    pub fn max_norm(&self) -> f64 {
        self.smooth.norm().max(self.split.norm()).max(self.unknot.norm())
    }
}

fn word(s: &str) -> GroupWord {
    s.parse().expect("fixed word")
}

fn one_crossing(edges: [(u8, u8, &str); 2]) -> Diagram {
    Diagram {
        genus: 2,
        crossings: vec![Crossing { over: OverPair::Ports02 }],
        edges: edges
            .iter()
            .map(|&(f, t, l)| Edge::new(Port(0, f), Port(0, t), word(l)))
            .collect(),
        free_loops: vec![],
    }
}

fn chi(d: &Diagram, rho: &Representation) -> Result<DualScalar, SkeinError> {
    Ok(evaluate(&resolve_dual(d)?, rho)?)
}

/// Both smoothings of the crossing as `(chi of the A-smoothing, number of loops,
/// chi of the B-smoothing, number of loops)`.
fn smoothing_values(d: &Diagram, rho: &Representation) -> Result<[(Complex64, usize); 2], SkeinError> {
    let mut out = [(Complex64::new(0.0, 0.0), 0); 2];
    for (slot, s) in out.iter_mut().zip([Smoothing::A, Smoothing::B]) {
        let smoothed = d.smooth(0, s);
        *slot = (chi(&smoothed, rho)?.value, smoothed.free_loops.len());
    }
    Ok(out)
}

/// Compare the `Q` computations with `chi` of the smoothings computed by the
/// skein engine, with loop labels `a -> A`, `b -> B`.
pub fn kauffman_scalar_check(a: &Sl2, b: &Sl2) -> Result<KauffmanResiduals, SkeinError> {
    let rho = Representation::new(vec![*a, *b]);

    // one loop running through the crossing twice, lobes labelled a and b
    let self_crossing = one_crossing([(2, 1, "a"), (3, 0, "b")]);
    let [s1, s2] = smoothing_values(&self_crossing, &rho)?;
    // L0 separates the two lobes
    let (l0, linf) = if s1.1 == 2 { (s1.0, s2.0) } else { (s2.0, s1.0) };
    let smooth = q_case_smooth(a, b).0 - (l0 - linf);

    // two loops a and b meeting once
    let two_curves = one_crossing([(2, 0, "a"), (3, 1, "b")]);
    let ab_class = crate::words::ConjClass::of(&word("ab"));
    let mut split_l0 = None;
    let mut split_linf = None;
    for s in [Smoothing::A, Smoothing::B] {
        let smoothed = two_curves.smooth(0, s);
        let v = chi(&smoothed, &rho)?.value;
        if crate::words::ConjClass::of(&smoothed.free_loops[0]) == ab_class {
            split_l0 = Some(v);
        } else {
            split_linf = Some(v);
        }
    }
    let split = q_case_split(a, b).0
        - (split_l0.expect("one smoothing reads ab") - split_linf.expect("one smoothing reads aB"));

    let mut with_unknot = two_curves.clone();
    with_unknot.free_loops.push(GroupWord::identity());
    let unknot = chi(&with_unknot, &rho)?.value + chi(&two_curves, &rho)?.value * 2.0;
    Ok(KauffmanResiduals { smooth, split, unknot })
}

//! Kauffman bracket resolution of group-labelled link diagrams.
//!
//! A [`Diagram`] is a 4-valent graph: each crossing has ports `0,1,2,3` in
//! counter-clockwise order with strands `0-2` and `1-3`, one of which is the
//! overpass. Edges join ports and carry a free-group label read in the edge's
//! reference direction.
//!
//! Smoothing convention: with the crossing rotated so the overpass runs
//! `0 -> 2`, the `t` smoothing joins `(0,3),(1,2)` and the `t^-1` smoothing
//! joins `(0,1),(2,3)`. Under this convention a positive kink contributes the
//! framing factor `-t^3`.
//!
//! Closed loops are recorded by the conjugacy class (up to inversion) of their
//! label. A loop whose label is trivial in the free group is removed with the
//! factor `-(t^2 + t^-2)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{SkeinError, Sl2Error};
use crate::ring::{fmt_gaussian, DualScalar, ExactDual, GaussianRational, LaurentPoly};
use crate::sl2::{eval_word, Representation};
use crate::words::{free_reduce, ConjClass, GroupWord, Letter};

/// Which strand of a crossing passes over.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum OverPair {
    #[serde(rename = "02")]
    Ports02,
    #[serde(rename = "13")]
    Ports13,
}

impl OverPair {
    pub fn other(self) -> Self {
        match self {
            OverPair::Ports02 => OverPair::Ports13,
            OverPair::Ports13 => OverPair::Ports02,
        }
    }
}

/// The two ways of resolving a crossing.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Smoothing {
    /// Coefficient `t`.
    A,
    /// Coefficient `t^-1`.
    B,
}

/// Port pairs joined by a smoothing.
pub fn smoothing_joins(over: OverPair, s: Smoothing) -> [(u8, u8); 2] {
    const JOIN_03_12: [(u8, u8); 2] = [(0, 3), (1, 2)];
    const JOIN_01_23: [(u8, u8); 2] = [(0, 1), (2, 3)];
    match (over, s) {
        (OverPair::Ports02, Smoothing::A) | (OverPair::Ports13, Smoothing::B) => JOIN_03_12,
        (OverPair::Ports02, Smoothing::B) | (OverPair::Ports13, Smoothing::A) => JOIN_01_23,
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Crossing {
    pub over: OverPair,
}

/// `(crossing index, port index)`; serialises as `[c, p]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Port(pub usize, pub u8);

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Edge {
    pub from: Port,
    pub to: Port,
    /// Read from `from` to `to`; the opposite traversal reads the inverse.
    #[serde(default)]
    pub label: GroupWord,
}

impl Edge {
    pub fn new(from: Port, to: Port, label: GroupWord) -> Self {
        Self { from, to, label }
    }

    fn reversed(&self) -> Self {
        Self::new(self.to, self.from, self.label.inverse())
    }
}

/// Group-labelled 4-valent link diagram.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Diagram {
    pub genus: usize,
    #[serde(default)]
    pub crossings: Vec<Crossing>,
    #[serde(default)]
    pub edges: Vec<Edge>,
    #[serde(default)]
    pub free_loops: Vec<GroupWord>,
}

impl Diagram {
    pub fn from_json(s: &str) -> Result<Self, SkeinError> {
        let d: Diagram =
            serde_json::from_str(s).map_err(|e| SkeinError::Malformed(e.to_string()))?;
        d.validate()?;
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram serialises")
    }

    /// Every port on exactly one edge end, no out-of-range ports or labels.
    pub fn validate(&self) -> Result<(), SkeinError> {
        let mut seen: HashMap<Port, usize> = HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            for p in [e.from, e.to] {
                if p.0 >= self.crossings.len() || p.1 > 3 {
                    return Err(SkeinError::Malformed(format!(
                        "edge {} uses nonexistent port [{}, {}]",
                        i, p.0, p.1
                    )));
                }
                if let Some(j) = seen.insert(p, i) {
                    return Err(SkeinError::Malformed(format!(
                        "port [{}, {}] used by edges {} and {}",
                        p.0, p.1, j, i
                    )));
                }
            }
            if e.label.max_generator() > self.genus {
                return Err(SkeinError::Malformed(format!(
                    "edge {} label {} exceeds genus {}",
                    i, e.label, self.genus
                )));
            }
        }
        for c in 0..self.crossings.len() {
            for p in 0..4u8 {
                if !seen.contains_key(&Port(c, p)) {
                    return Err(SkeinError::Malformed(format!("dangling port [{}, {}]", c, p)));
                }
            }
        }
        if let Some(l) = self.free_loops.iter().find(|l| l.max_generator() > self.genus) {
            return Err(SkeinError::Malformed(format!("free loop {} exceeds genus {}", l, self.genus)));
        }
        Ok(())
    }

    /// Diagram from a planar-diagram code: `X[i,j,k,l]` lists arc labels
    /// counter-clockwise from the incoming under-strand, so the overpass is `1-3`.
    pub fn from_pd(code: &[[usize; 4]]) -> Self {
        let mut ends: BTreeMap<usize, Vec<Port>> = BTreeMap::new();
        for (c, x) in code.iter().enumerate() {
            for (p, &arc) in x.iter().enumerate() {
                ends.entry(arc).or_default().push(Port(c, p as u8));
            }
        }
        let edges = ends
            .values()
            .map(|ports| {
                assert_eq!(ports.len(), 2, "each arc label appears twice");
                Edge::new(ports[0], ports[1], GroupWord::identity())
            })
            .collect();
        Self {
            genus: 0,
            crossings: vec![Crossing { over: OverPair::Ports13 }; code.len()],
            edges,
            free_loops: vec![],
        }
    }

    /// Crossingless diagram of one loop.
    pub fn single_loop(label: GroupWord) -> Self {
        Self {
            genus: label.max_generator(),
            crossings: vec![],
            edges: vec![],
            free_loops: vec![label],
        }
    }

    pub fn unknot() -> Self {
        Self::single_loop(GroupWord::identity())
    }

    /// One-crossing curl whose `t` smoothing splits it into two circles.
    pub fn positive_kink() -> Self {
        Self {
            genus: 0,
            crossings: vec![Crossing { over: OverPair::Ports02 }],
            edges: vec![
                Edge::new(Port(0, 1), Port(0, 2), GroupWord::identity()),
                Edge::new(Port(0, 3), Port(0, 0), GroupWord::identity()),
            ],
            free_loops: vec![],
        }
    }

    pub fn trefoil() -> Self {
        Self::from_pd(&[[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]])
    }

    pub fn figure_eight() -> Self {
        Self::from_pd(&[[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]])
    }

    /// Closure of the 2-braid `sigma_1^n`; all crossings share one over flag.
    pub fn torus_link_2(n: usize) -> Self {
        assert!(n >= 1);
        // ports: 0 bottom-left, 1 bottom-right, 2 top-right, 3 top-left
        let mut edges = Vec::new();
        for c in 0..n {
            let next = (c + 1) % n;
            edges.push(Edge::new(Port(c, 2), Port(next, 1), GroupWord::identity()));
            edges.push(Edge::new(Port(c, 3), Port(next, 0), GroupWord::identity()));
        }
        Self {
            genus: 0,
            crossings: vec![Crossing { over: OverPair::Ports02 }; n],
            edges,
            free_loops: vec![],
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    fn edge_at(&self, p: Port) -> Option<usize> {
        self.edges.iter().position(|e| e.from == p || e.to == p)
    }

    /// Resolve crossing `c` one way. The crossing is removed, later crossings are
    /// renumbered down by one, and any loop closed by the smoothing becomes a free loop.
    pub fn smooth(&self, c: usize, s: Smoothing) -> Diagram {
        let mut out = self.clone();
        let joins = smoothing_joins(self.crossings[c].over, s);
        for (p, q) in joins {
            let (pp, qp) = (Port(c, p), Port(c, q));
            let ei = out.edge_at(pp).expect("validated diagram");
            // orient so that the edge ends at p
            let e1 = if out.edges[ei].to == pp {
                out.edges[ei].clone()
            } else {
                out.edges[ei].reversed()
            };
            if e1.from == qp {
                // the edge runs q -> p and the join closes it
                out.edges.remove(ei);
                out.free_loops.push(e1.label);
                continue;
            }
            let ej = out.edge_at(qp).expect("validated diagram");
            let e2 = if out.edges[ej].from == qp {
                out.edges[ej].clone()
            } else {
                out.edges[ej].reversed()
            };
            let merged = Edge::new(e1.from, e2.to, e1.label.concat(&e2.label));
            let (hi, lo) = (ei.max(ej), ei.min(ej));
            out.edges.remove(hi);
            out.edges.remove(lo);
            out.edges.push(merged);
        }
        out.crossings.remove(c);
        for e in &mut out.edges {
            for port in [&mut e.from, &mut e.to] {
                if port.0 > c {
                    port.0 -= 1;
                }
            }
        }
        out
    }

    /// Canonical key of the crossing-bearing part, for memoisation.
    fn shape_key(&self) -> Vec<(Port, Port, GroupWord, u8)> {
        let mut key: Vec<_> = self
            .edges
            .iter()
            .map(|e| {
                let e = if e.from <= e.to { e.clone() } else { e.reversed() };
                let over = match self.crossings[e.from.0].over {
                    OverPair::Ports02 => 0,
                    OverPair::Ports13 => 1,
                };
                (e.from, e.to, e.label, over)
            })
            .collect();
        key.sort();
        key
    }
}

/// Coefficients of a skein element.
pub trait Coefficient:
    Clone + PartialEq + Zero + Add<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl<T> Coefficient for T where
    T: Clone + PartialEq + Zero + Add<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

/// Coefficient ring with a distinguished invertible `t`.
pub trait SkeinRing: Coefficient + One {
    fn t() -> Self;
    fn t_inv() -> Self;

    /// `-(t^2 + t^-2)`
    fn loop_value() -> Self {
        let (t, ti) = (Self::t(), Self::t_inv());
        -(t.clone() * t + ti.clone() * ti)
    }
}

impl SkeinRing for LaurentPoly {
    fn t() -> Self {
        LaurentPoly::t_pow(1)
    }
    fn t_inv() -> Self {
        LaurentPoly::t_pow(-1)
    }
}

impl SkeinRing for DualScalar {
    fn t() -> Self {
        DualScalar::t()
    }
    fn t_inv() -> Self {
        DualScalar::t_inv()
    }
}

impl SkeinRing for ExactDual {
    fn t() -> Self {
        ExactDual::t()
    }
    fn t_inv() -> Self {
        ExactDual::t_inv()
    }
}

/// Sorted multiset of nontrivial loop classes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct LoopSet(Vec<ConjClass>);

impl LoopSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Trivial classes are dropped; they are not loops of a normal form.
    pub fn new(classes: Vec<ConjClass>) -> Self {
        let mut v: Vec<ConjClass> = classes.into_iter().filter(|c| !c.is_trivial()).collect();
        v.sort();
        LoopSet(v)
    }

    pub fn loops(&self) -> &[ConjClass] {
        &self.0
    }

    fn union(&self, other: &LoopSet) -> LoopSet {
        let mut v: Vec<ConjClass> = self.0.iter().chain(other.0.iter()).cloned().collect();
        v.sort();
        LoopSet(v)
    }
}

impl fmt::Display for LoopSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "[ ]");
        }
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join("|"))
    }
}

/// Formal combination of loop multisets.
#[derive(Clone, PartialEq, Debug)]
pub struct SkeinElement<R> {
    terms: BTreeMap<LoopSet, R>,
}

impl<R: Coefficient> Default for SkeinElement<R> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<R: Coefficient> SkeinElement<R> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(loops: LoopSet, c: R) -> Self {
        let mut out = Self::zero();
        out.add_term(loops, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LoopSet, &R)> {
        self.terms.iter()
    }

    pub fn coeff(&self, loops: &LoopSet) -> R {
        self.terms.get(loops).cloned().unwrap_or_else(R::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, loops: LoopSet, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&loops) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(loops, sum);
                }
            }
            None => {
                self.terms.insert(loops, c);
            }
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.clone() * c.clone());
        }
        out
    }

    /// Disjoint union with a fixed loop set.
    pub fn with_loops(&self, loops: &LoopSet) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(k.union(loops), v.clone());
        }
        out
    }

    pub fn map_coeffs<S: Coefficient>(&self, f: impl Fn(&R) -> S) -> SkeinElement<S> {
        let mut out = SkeinElement::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), f(v));
        }
        out
    }
}

impl<R: SkeinRing> SkeinElement<R> {
    pub fn one() -> Self {
        Self::term(LoopSet::empty(), R::one())
    }

    /// `[loops]`, with trivial loops replaced by the loop value.
    pub fn of_loops<'a, I: IntoIterator<Item = &'a GroupWord>>(labels: I) -> Self {
        let mut classes = Vec::new();
        let mut coeff = R::one();
        for w in labels {
            let c = ConjClass::of(w);
            if c.is_trivial() {
                coeff = coeff * R::loop_value();
            } else {
                classes.push(c);
            }
        }
        classes.sort();
        Self::term(LoopSet(classes), coeff)
    }

    /// Product in the commutative (disjoint union) sense.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (k1, v1) in &self.terms {
            for (k2, v2) in &other.terms {
                out.add_term(k1.union(k2), v1.clone() * v2.clone());
            }
        }
        out
    }
}

impl<R: Coefficient> Add for &SkeinElement<R> {
    type Output = SkeinElement<R>;
    fn add(self, rhs: &SkeinElement<R>) -> SkeinElement<R> {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

impl<R: Coefficient> std::ops::Sub for &SkeinElement<R> {
    type Output = SkeinElement<R>;
    fn sub(self, rhs: &SkeinElement<R>) -> SkeinElement<R> {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), -v.clone());
        }
        out
    }
}

/// Text rendering of a coefficient inside `coeff * [loops]`.
pub trait CoeffDisplay {
    fn render(&self) -> String;
}

impl CoeffDisplay for LaurentPoly {
    fn render(&self) -> String {
        if self.terms().count() > 1 {
            format!("({})", self)
        } else {
            self.to_string()
        }
    }
}

impl CoeffDisplay for DualScalar {
    fn render(&self) -> String {
        format!("({})", self)
    }
}

impl CoeffDisplay for ExactDual {
    fn render(&self) -> String {
        format!("({})", self)
    }
}

impl CoeffDisplay for GaussianRational {
    fn render(&self) -> String {
        fmt_gaussian(self)
    }
}

impl<R: Coefficient + CoeffDisplay> fmt::Display for SkeinElement<R> {
    /// `coeff * [loop1|loop2] + ...`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, v)| format!("{} * {}", v.render(), k))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Full state sum of `d` over the ring `R`.
///
/// Recurses on the last crossing, memoising on the crossing-bearing part of the
/// residual diagram; loops closed along the way are factored out.
pub fn resolve<R: SkeinRing>(d: &Diagram) -> Result<SkeinElement<R>, SkeinError> {
    d.validate()?;
    let mut memo: HashMap<Vec<(Port, Port, GroupWord, u8)>, SkeinElement<R>> = HashMap::new();
    let core = Diagram {
        free_loops: vec![],
        ..d.clone()
    };
    let body = resolve_rec(&core, &mut memo);
    Ok(body.disjoint_union(&SkeinElement::of_loops(&d.free_loops)))
}

fn resolve_rec<R: SkeinRing>(
    d: &Diagram,
    memo: &mut HashMap<Vec<(Port, Port, GroupWord, u8)>, SkeinElement<R>>,
) -> SkeinElement<R> {
    if d.crossings.is_empty() {
        return SkeinElement::one();
    }
    let key = d.shape_key();
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let c = d.crossings.len() - 1;
    let mut out = SkeinElement::zero();
    for (s, coeff) in [(Smoothing::A, R::t()), (Smoothing::B, R::t_inv())] {
        let mut next = d.smooth(c, s);
        let loops = std::mem::take(&mut next.free_loops);
        let sub = resolve_rec(&next, memo);
        let closed = SkeinElement::<R>::of_loops(&loops);
        out = &out + &sub.disjoint_union(&closed).scale(&coeff);
    }
    memo.insert(key, out.clone());
    out
}

pub fn resolve_laurent(d: &Diagram) -> Result<SkeinElement<LaurentPoly>, SkeinError> {
    resolve::<LaurentPoly>(d)
}

/// Laurent resolution pushed through `t -> -1 + e`.
pub fn resolve_dual(d: &Diagram) -> Result<SkeinElement<DualScalar>, SkeinError> {
    Ok(resolve_laurent(d)?.map_coeffs(|p| p.eval_dual()))
}

/// `-tr rho(loop)`
pub fn loop_value_at(c: &ConjClass, rho: &Representation) -> Result<Complex64, Sl2Error> {
    Ok(-eval_word(c.word(), rho)?.trace())
}

/// Evaluate at a representation: every loop contributes `-tr rho(loop)`.
pub fn evaluate(s: &SkeinElement<DualScalar>, rho: &Representation) -> Result<DualScalar, Sl2Error> {
    let mut acc = DualScalar::zero();
    for (loops, c) in s.terms() {
        let mut prod = Complex64::new(1.0, 0.0);
        for l in loops.loops() {
            prod *= loop_value_at(l, rho)?;
        }
        acc = acc + c.scale(prod);
    }
    Ok(acc)
}

/// Two closed curves drawn with transverse crossings only between them.
///
/// `alpha_pair[c]` names the ports of crossing `c` that belong to `alpha`; the
/// over flags stored in `diagram` are ignored.
#[derive(Clone, PartialEq, Debug)]
pub struct FlatPair {
    pub diagram: Diagram,
    pub alpha_pair: Vec<OverPair>,
}

impl FlatPair {
    pub fn new(diagram: Diagram, alpha_pair: Vec<OverPair>) -> Result<Self, SkeinError> {
        if alpha_pair.len() != diagram.crossings.len() {
            return Err(SkeinError::Malformed(format!(
                "{} strand marks for {} crossings",
                alpha_pair.len(),
                diagram.crossings.len()
            )));
        }
        diagram.validate()?;
        Ok(Self { diagram, alpha_pair })
    }

    /// `alpha` drawn over `beta` at every crossing.
    pub fn alpha_over(&self) -> Diagram {
        let mut d = self.diagram.clone();
        for (c, pair) in d.crossings.iter_mut().zip(&self.alpha_pair) {
            c.over = *pair;
        }
        d
    }

    pub fn beta_over(&self) -> Diagram {
        let mut d = self.diagram.clone();
        for (c, pair) in d.crossings.iter_mut().zip(&self.alpha_pair) {
            c.over = pair.other();
        }
        d
    }

    /// Same curves with the roles of `alpha` and `beta` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            diagram: self.diagram.clone(),
            alpha_pair: self.alpha_pair.iter().map(|p| p.other()).collect(),
        }
    }

    /// Random pair meeting in `n` crossings; each curve visits every crossing
    /// once, `beta` in a shuffled order, with random directions and labels.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, genus: usize, n: usize, max_label: usize) -> Self {
        assert!(n >= 1);
        let alpha_pair: Vec<OverPair> = (0..n)
            .map(|_| if rng.gen_bool(0.5) { OverPair::Ports02 } else { OverPair::Ports13 })
            .collect();
        let through = |pair: OverPair, forward: bool| -> (u8, u8) {
            let (a, b) = match pair {
                OverPair::Ports02 => (0, 2),
                OverPair::Ports13 => (1, 3),
            };
            if forward {
                (a, b)
            } else {
                (b, a)
            }
        };
        let alpha_dirs: Vec<(u8, u8)> = alpha_pair.iter().map(|&p| through(p, rng.gen_bool(0.5))).collect();
        let beta_dirs: Vec<(u8, u8)> = alpha_pair
            .iter()
            .map(|&p| through(p.other(), rng.gen_bool(0.5)))
            .collect();
        let mut beta_order: Vec<usize> = (0..n).collect();
        beta_order.shuffle(rng);
        let mut edges = Vec::new();
        let label = |rng: &mut R| {
            let len = rng.gen_range(0..=max_label);
            GroupWord::random(rng, genus, len)
        };
        for i in 0..n {
            let j = (i + 1) % n;
            edges.push(Edge::new(Port(i, alpha_dirs[i].1), Port(j, alpha_dirs[j].0), label(rng)));
        }
        for i in 0..n {
            let (a, b) = (beta_order[i], beta_order[(i + 1) % n]);
            edges.push(Edge::new(Port(a, beta_dirs[a].1), Port(b, beta_dirs[b].0), label(rng)));
        }
        let diagram = Diagram {
            genus,
            crossings: vec![Crossing { over: OverPair::Ports02 }; n],
            edges,
            free_loops: vec![],
        };
        Self { diagram, alpha_pair }
    }
}

/// Both orders of a stacking commutator, expanded at `t = -1 + e`.
#[derive(Clone, PartialEq, Debug)]
pub struct BracketExpansion {
    /// Order-zero part; vanishes because the two stackings agree at `t = -1`.
    pub value_part: SkeinElement<GaussianRational>,
    /// The Goldman bracket.
    pub eps_part: SkeinElement<GaussianRational>,
}

/// `e`-part of `[alpha over beta] - [beta over alpha]`, exact.
pub fn goldman_bracket(pair: &FlatPair) -> Result<BracketExpansion, SkeinError> {
    let ab = resolve_laurent(&pair.alpha_over())?;
    let ba = resolve_laurent(&pair.beta_over())?;
    let diff = (&ab - &ba).map_coeffs(|p| p.eval_dual_exact());
    Ok(BracketExpansion {
        value_part: diff.map_coeffs(|d| d.value.clone()),
        eps_part: diff.map_coeffs(|d| d.deriv.clone()),
    })
}

/// Where the disc curve `gamma_i` meets a loop `w`, seen from the band point.
///
/// `rotated` is the letter sequence of `w` read from the band point, which sits
/// on the left side of `gamma_i` just before the chosen occurrence. Each cut is
/// the position in `rotated` where the pushed-off copy of `gamma_i` crosses the
/// loop (before a positive letter, after a negative one) with the letter's sign;
/// cuts are listed in order along the loop, starting with the chosen one at 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HandleGeometry {
    pub rotated: Vec<Letter>,
    pub cuts: Vec<(usize, i32)>,
}

impl HandleGeometry {
    pub fn new(w: &GroupWord, gen: usize, k: usize) -> Result<Self, SkeinError> {
        let letters = w.letters();
        let n = letters.len();
        let occ = w.occurrences(gen);
        if occ.is_empty() {
            return Err(SkeinError::NoOccurrence { gen });
        }
        if k >= occ.len() {
            return Err(SkeinError::OccurrenceOutOfRange {
                occ: k,
                count: occ.len(),
            });
        }
        // Half-step keys order crossing points along the loop: a point after
        // letter p - 1 comes before a point in front of letter p.
        let key = |pos: usize| -> usize {
            if letters[pos].inverse {
                (2 * pos + 2) % (2 * n)
            } else {
                2 * pos + 1
            }
        };
        let base_key = key(occ[k]);
        let base_pos = base_key / 2;
        let mut rel: Vec<(usize, i32)> = occ
            .iter()
            .map(|&p| {
                let r = (key(p) + 2 * n - base_key) % (2 * n);
                ((base_key + r) / 2 - base_pos, letters[p].exponent())
            })
            .collect();
        // the chosen cut sorts first: nothing else sits at offset 0 before it
        rel.sort_by_key(|&(pos, s)| (pos, s));
        let rotated = letters[base_pos..]
            .iter()
            .chain(letters[..base_pos].iter())
            .copied()
            .collect();
        Ok(Self { rotated, cuts: rel })
    }

    /// The loop read from the band point, freely reduced.
    pub fn based_word(&self) -> GroupWord {
        GroupWord::new(self.rotated.iter().copied())
    }

    /// Letters of the loop between consecutive cuts; the last segment runs back
    /// to the band point.
    pub fn segments(&self) -> Vec<GroupWord> {
        let n = self.rotated.len();
        let m = self.cuts.len();
        (0..m)
            .map(|r| {
                let start = self.cuts[r].0;
                let end = if r + 1 < m { self.cuts[r + 1].0 } else { n };
                GroupWord::new(free_reduce(self.rotated[start..end].iter().copied()))
            })
            .collect()
    }
}

/// The two diagrams of a handle-slide relation `[gamma # gamma_i] - [gamma]`.
#[derive(Clone, PartialEq, Debug)]
pub struct HandleSlide {
    pub sum: Diagram,
    pub plain: Diagram,
    pub geometry: HandleGeometry,
}

/// Band sum of the loop `w` with a pushed-off copy of the disc curve `gamma_gen`.
///
/// The copy runs parallel to `gamma_gen` on the side the positive letters come
/// from, so it crosses the loop once at every occurrence of `t_gen^{+-1}`; it is
/// drawn over the loop at each crossing and visits the crossings in `order`
/// (indices into the cut list, identity when `None`). The band leaves the loop
/// just before occurrence `k`. `plain` is the crossingless loop `w`.
pub fn build_handle_slide(
    w: &GroupWord,
    gen: usize,
    k: usize,
    order: Option<&[usize]>,
) -> Result<HandleSlide, SkeinError> {
    let geometry = HandleGeometry::new(w, gen, k)?;
    let m = geometry.cuts.len();
    let identity: Vec<usize> = (0..m).collect();
    let order = order.unwrap_or(&identity);
    let mut check = order.to_vec();
    check.sort_unstable();
    if check != identity {
        return Err(SkeinError::BadOrder(m));
    }
    let segments = geometry.segments();
    // loop strand enters at 1 and leaves at 3 on a positive crossing, reversed
    // on a negative one; the disc copy always runs 0 -> 2 on top.
    let loop_in = |r: usize| if geometry.cuts[r].1 > 0 { 1 } else { 3 };
    let loop_out = |r: usize| if geometry.cuts[r].1 > 0 { 3 } else { 1 };
    let trivial = GroupWord::identity;
    let mut edges = Vec::with_capacity(2 * m);
    for r in 0..m - 1 {
        edges.push(Edge::new(Port(r, loop_out(r)), Port(r + 1, loop_in(r + 1)), segments[r].clone()));
    }
    edges.push(Edge::new(Port(m - 1, loop_out(m - 1)), Port(order[0], 0), segments[m - 1].clone()));
    for s in 0..m - 1 {
        edges.push(Edge::new(Port(order[s], 2), Port(order[s + 1], 0), trivial()));
    }
    edges.push(Edge::new(Port(order[m - 1], 2), Port(0, loop_in(0)), trivial()));
    let genus = w.max_generator().max(gen);
    let sum = Diagram {
        genus,
        crossings: vec![Crossing { over: OverPair::Ports02 }; m],
        edges,
        free_loops: vec![],
    };
    let mut plain = Diagram::single_loop(w.clone());
    plain.genus = genus;
    Ok(HandleSlide { sum, plain, geometry })
}

/// Bundled example diagrams, by name.
pub fn bundled_diagrams() -> Vec<(&'static str, Diagram)> {
    macro_rules! bundled {
        ($($name:literal),* $(,)?) => {
            vec![$(($name, include_str!(concat!("../data/diagrams/", $name, ".json")))),*]
        };
    }
    let files: Vec<(&str, &str)> = bundled![
        "unknot",
        "kink",
        "hopf",
        "trefoil",
        "figure_eight",
        "cinquefoil",
        "three_twist",
        "stevedore",
        "torus_2_8",
        "labelled_trefoil",
        "labelled_figure_eight",
        "labelled_torus_2_4",
        "torus_curves",
    ];
    files
        .into_iter()
        .map(|(name, text)| (name, Diagram::from_json(text).expect("bundled diagram is valid")))
        .collect()
}

/// State sum by direct enumeration of all `2^n` smoothings, tracing each state's
/// loops port by port. Shares no code with [`resolve`] beyond the join table.
pub fn enumerate_states<R: SkeinRing>(d: &Diagram) -> Result<SkeinElement<R>, SkeinError> {
    d.validate()?;
    let n = d.crossings.len();
    if n > 16 {
        return Err(SkeinError::Malformed(format!("{} crossings is too many to enumerate", n)));
    }
    // port -> (other end, label read towards it)
    let mut along: HashMap<Port, (Port, &[Letter], bool)> = HashMap::new();
    for e in &d.edges {
        along.insert(e.from, (e.to, e.label.letters(), false));
        along.insert(e.to, (e.from, e.label.letters(), true));
    }
    let mut total = SkeinElement::zero();
    for state in 0u32..(1 << n) {
        let mut partner: HashMap<Port, Port> = HashMap::new();
        let mut coeff = R::one();
        for (c, crossing) in d.crossings.iter().enumerate() {
            let s = if state >> c & 1 == 0 { Smoothing::A } else { Smoothing::B };
            coeff = coeff * if s == Smoothing::A { R::t() } else { R::t_inv() };
            for (p, q) in smoothing_joins(crossing.over, s) {
                partner.insert(Port(c, p), Port(c, q));
                partner.insert(Port(c, q), Port(c, p));
            }
        }
        let mut seen: std::collections::HashSet<Port> = std::collections::HashSet::new();
        let mut loops: Vec<GroupWord> = d.free_loops.clone();
        let mut ports: Vec<Port> = along.keys().copied().collect();
        ports.sort();
        for start in ports {
            if seen.contains(&start) {
                continue;
            }
            let mut letters: Vec<Letter> = Vec::new();
            let mut at = start;
            loop {
                seen.insert(at);
                let (to, label, backwards) = along[&at];
                if backwards {
                    letters.extend(label.iter().rev().map(|l| l.inv()));
                } else {
                    letters.extend_from_slice(label);
                }
                seen.insert(to);
                at = partner[&to];
                if at == start {
                    break;
                }
            }
            loops.push(GroupWord::new(letters));
        }
        total = &total + &SkeinElement::of_loops(&loops).scale(&coeff);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::gq;
    use crate::sl2::Sl2;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_int_terms(terms.iter().copied())
    }

    fn w(s: &str) -> GroupWord {
        s.parse().unwrap()
    }

    fn loops(ws: &[&str]) -> LoopSet {
        let mut v: Vec<ConjClass> = ws.iter().map(|s| ConjClass::of(&w(s))).collect();
        v.sort();
        LoopSet(v)
    }

    #[test]
    fn bundled_diagrams_enumerate_consistently() {
        for (name, d) in bundled_diagrams() {
            assert_eq!(resolve_laurent(&d).unwrap(), enumerate_states(&d).unwrap(), "{}", name);
        }
    }

    #[test]
    fn unknot_is_loop_value() {
        let r = resolve_laurent(&Diagram::unknot()).unwrap();
        assert_eq!(r, SkeinElement::term(LoopSet::empty(), lp(&[(2, -1), (-2, -1)])));
        assert_eq!(r.to_string(), "(-t^2 - t^-2) * [ ]");
    }

    #[test]
    fn kink_framing_factor() {
        let kink = resolve_laurent(&Diagram::positive_kink()).unwrap();
        let unknot = resolve_laurent(&Diagram::unknot()).unwrap();
        assert_eq!(kink, unknot.scale(&lp(&[(3, -1)])));
    }

    #[test]
    fn dual_ring_agrees_with_reduced_laurent() {
        let d = Diagram::trefoil();
        let direct = resolve::<DualScalar>(&d).unwrap();
        assert_eq!(direct, resolve_dual(&d).unwrap());
        let exact = resolve::<ExactDual>(&d).unwrap();
        assert_eq!(exact, resolve_laurent(&d).unwrap().map_coeffs(|p| p.eval_dual_exact()));
    }

    #[test]
    fn malformed_diagrams() {
        let mut d = Diagram::positive_kink();
        d.edges.pop();
        assert!(matches!(resolve_laurent(&d), Err(SkeinError::Malformed(_))));
        let bad = r#"{"genus": 1, "crossings": [{"over": "02"}], "edges": [{"from": [0,0], "to": [0,5]}]}"#;
        assert!(Diagram::from_json(bad).is_err());
        assert!(Diagram::from_json("{").is_err());
        let label = r#"{"genus": 1, "free_loops": ["ab"]}"#;
        assert!(Diagram::from_json(label).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let d = Diagram::trefoil();
        assert_eq!(Diagram::from_json(&d.to_json()).unwrap(), d);
        let text = r#"{"genus": 2, "crossings": [{"over": "13"}],
            "edges": [{"from": [0,0], "to": [0,2], "label": "a"}, {"from": [0,1], "to": [0,3], "label": "bA"}],
            "free_loops": ["ab"]}"#;
        let d = Diagram::from_json(text).unwrap();
        assert_eq!(d.edges[1].label, w("bA"));
        assert_eq!(d.crossings[0].over, OverPair::Ports13);
    }

    #[test]
    fn evaluate_examples() {
        let rho = Representation::new(vec![Sl2::diag(Complex64::new(2.0, 0.0))]);
        let unknot = resolve_dual(&Diagram::unknot()).unwrap();
        let v = evaluate(&unknot, &rho).unwrap();
        assert_eq!(v, DualScalar::scalar(Complex64::new(-2.0, 0.0)));
        let a = resolve_dual(&Diagram::single_loop(w("a"))).unwrap();
        assert_eq!(evaluate(&a, &Representation::new(vec![Sl2::identity()])).unwrap().value, Complex64::new(-2.0, 0.0));
        assert_eq!(evaluate(&a, &rho).unwrap().value, Complex64::new(-2.5, 0.0));
        let b = resolve_dual(&Diagram::single_loop(w("b"))).unwrap();
        assert!(evaluate(&b, &rho).is_err());
    }

    #[test]
    fn one_crossing_torus_bracket() {
        // alpha = a through 0 -> 2, beta = b through 1 -> 3
        let d = Diagram {
            genus: 2,
            crossings: vec![Crossing { over: OverPair::Ports02 }],
            edges: vec![
                Edge::new(Port(0, 2), Port(0, 0), w("a")),
                Edge::new(Port(0, 3), Port(0, 1), w("b")),
            ],
            free_loops: vec![],
        };
        let pair = FlatPair::new(d, vec![OverPair::Ports02]).unwrap();
        let br = goldman_bracket(&pair).unwrap();
        assert!(br.value_part.is_zero());
        let ab = SkeinElement::term(loops(&["ab"]), gq(2));
        let a_b = SkeinElement::term(loops(&["aB"]), gq(-2));
        let expected = &ab + &a_b;
        assert!(br.eps_part == expected || br.eps_part == expected.scale(&gq(-1)), "{}", br.eps_part);
        let swapped = goldman_bracket(&pair.swapped()).unwrap();
        assert_eq!(swapped.eps_part, br.eps_part.scale(&gq(-1)));
    }

    #[test]
    fn disjoint_curves_commute() {
        let d = Diagram {
            genus: 2,
            crossings: vec![],
            edges: vec![],
            free_loops: vec![w("a"), w("b")],
        };
        let pair = FlatPair::new(d, vec![]).unwrap();
        let br = goldman_bracket(&pair).unwrap();
        assert!(br.value_part.is_zero() && br.eps_part.is_zero());
    }

    #[test]
    fn bigon_pair_commutes() {
        // beta is a push-off of alpha crossing it twice in opposite directions
        let d = Diagram {
            genus: 1,
            crossings: vec![Crossing { over: OverPair::Ports02 }; 2],
            edges: vec![
                Edge::new(Port(0, 2), Port(1, 0), GroupWord::identity()),
                Edge::new(Port(1, 2), Port(0, 0), w("a")),
                Edge::new(Port(0, 3), Port(1, 3), GroupWord::identity()),
                Edge::new(Port(1, 1), Port(0, 1), w("a")),
            ],
            free_loops: vec![],
        };
        let pair = FlatPair::new(d, vec![OverPair::Ports02; 2]).unwrap();
        let br = goldman_bracket(&pair).unwrap();
        assert!(br.value_part.is_zero());
        assert!(br.eps_part.is_zero(), "{}", br.eps_part);
    }

    #[test]
    fn handle_geometry_cuts() {
        let g = HandleGeometry::new(&w("abAcA"), 1, 1).unwrap();
        // band before the cut after letter 2 (A): read from position 3
        let expected: Vec<Letter> = "cAabA".chars().map(|c| Letter::from_char(c).unwrap()).collect();
        assert_eq!(g.rotated, expected);
        assert_eq!(g.cuts, vec![(0, -1), (2, -1), (2, 1)]);
        assert_eq!(g.segments(), vec![w("cA"), GroupWord::identity(), w("abA")]);
        let g = HandleGeometry::new(&w("abA"), 1, 0).unwrap();
        assert_eq!(g.cuts, vec![(0, 1), (3, -1)]);
        assert!(matches!(HandleGeometry::new(&w("bb"), 1, 0), Err(SkeinError::NoOccurrence { gen: 1 })));
        assert!(matches!(HandleGeometry::new(&w("a"), 1, 1), Err(SkeinError::OccurrenceOutOfRange { .. })));
    }

    #[test]
    fn handle_slide_crossing_census() {
        let hs = build_handle_slide(&w("a"), 1, 0, None).unwrap();
        assert_eq!(hs.sum.crossing_count(), 1);
        let hs = build_handle_slide(&w("aa"), 1, 0, None).unwrap();
        assert_eq!(hs.sum.crossing_count(), 2);
        let hs = build_handle_slide(&w("abA"), 1, 0, None).unwrap();
        assert_eq!(hs.geometry.cuts.iter().map(|c| c.1).collect::<Vec<_>>(), vec![1, -1]);
        assert!(build_handle_slide(&w("aba"), 1, 0, Some(&[0, 0])).is_err());
        assert!(build_handle_slide(&w("b"), 1, 0, None).is_err());
        hs.sum.validate().unwrap();
    }

    #[test]
    fn handle_slide_vanishes_at_order_zero() {
        let rho = Representation::new(vec![Sl2::diag(Complex64::new(2.0, 0.0)), Sl2::identity()]);
        for word in ["a", "aa", "abA", "aab"] {
            let hs = build_handle_slide(&w(word), 1, 0, None).unwrap();
            let diff = &resolve_dual(&hs.sum).unwrap() - &resolve_dual(&hs.plain).unwrap();
            let v = evaluate(&diff, &rho).unwrap();
            assert!(v.value.norm() < 1e-12, "{} {}", word, v);
        }
    }
}

//! Reference computations for the integration tests, written without the
//! library's algorithms: integer Laurent polynomials, string-based loop
//! canonicalisation and an edge-walking state sum.
#![allow(dead_code)]

use std::collections::BTreeMap;

use derived_skein::skein::{Diagram, OverPair, SkeinElement};
use derived_skein::{GaussianRational, LaurentPoly};
use num_complex::Complex64;
use num_traits::Zero;

/// Integer Laurent polynomial, exponent -> coefficient.
pub type IntPoly = BTreeMap<i64, i64>;

pub fn ip_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = IntPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            *out.entry(ea + eb).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn ip_add(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = a.clone();
    for (e, c) in b {
        *out.entry(*e).or_insert(0) += c;
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn ip_mono(e: i64, c: i64) -> IntPoly {
    IntPoly::from([(e, c)])
}

/// `-t^2 - t^-2`
pub fn ip_circle() -> IntPoly {
    IntPoly::from([(2, -1), (-2, -1)])
}

pub fn ip_from_laurent(p: &LaurentPoly) -> IntPoly {
    p.terms()
        .map(|(e, c)| {
            assert!(c.im.is_zero() && c.re.is_integer(), "integer coefficients expected");
            let n: i64 = c.re.to_integer().try_into().expect("small coefficient");
            (e, n)
        })
        .collect()
}

/// `(-1 + e)^n` in `Z[e]/(e^2)` by repeated multiplication, as `(value, e-part)`.
pub fn dual_t_power(n: i64) -> (i64, i64) {
    let step: (i64, i64) = if n >= 0 { (-1, 1) } else { (-1, -1) };
    let mut acc = (1i64, 0i64);
    for _ in 0..n.abs() {
        acc = (acc.0 * step.0, acc.0 * step.1 + acc.1 * step.0);
    }
    acc
}

/// Letters as characters, `a..z` and inverses `A..Z`.
fn invert(c: char) -> char {
    if c.is_ascii_lowercase() {
        c.to_ascii_uppercase()
    } else {
        c.to_ascii_lowercase()
    }
}

pub fn reduce(s: &str) -> String {
    let mut out: Vec<char> = Vec::new();
    for c in s.chars() {
        if out.last() == Some(&invert(c)) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out.into_iter().collect()
}

pub fn inverse_word(s: &str) -> String {
    s.chars().rev().map(invert).collect()
}

/// Least rotation, as a string, of the cyclic reduction of `s` or its inverse.
pub fn canonical_loop(s: &str) -> String {
    let mut w: Vec<char> = reduce(s).chars().collect();
    while w.len() > 1 && w[0] == invert(*w.last().unwrap()) {
        w.remove(0);
        w.pop();
    }
    let w: String = w.into_iter().collect();
    let mut best: Option<String> = None;
    for base in [w.clone(), inverse_word(&w)] {
        for r in 0..base.len().max(1) {
            let rot = format!("{}{}", &base[r..], &base[..r]);
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

pub type OracleSum = BTreeMap<Vec<String>, IntPoly>;

fn add_state(total: &mut OracleSum, mut loops: Vec<String>, mut coeff: IntPoly) {
    loops.retain(|l| {
        if l.is_empty() {
            coeff = ip_mul(&coeff, &ip_circle());
            false
        } else {
            true
        }
    });
    loops.sort();
    let slot = total.entry(loops.clone()).or_default();
    *slot = ip_add(slot, &coeff);
    if slot.is_empty() {
        total.remove(&loops);
    }
}

/// Enumerate every smoothing; walk edges to read off each loop.
///
/// A crossing whose overpass is `0-2` joins `{0,3},{1,2}` with weight `t` and
/// `{0,1},{2,3}` with weight `t^-1`; for overpass `1-3` the two are exchanged.
pub fn oracle_state_sum(d: &Diagram) -> OracleSum {
    let n = d.crossings.len();
    let labels: Vec<String> = d.edges.iter().map(|e| e.label.to_string()).collect();
    let ends: Vec<[(usize, u8); 2]> = d
        .edges
        .iter()
        .map(|e| [(e.from.0, e.from.1), (e.to.0, e.to.1)])
        .collect();
    let edge_at = |c: usize, p: u8| -> (usize, usize) {
        for (i, end) in ends.iter().enumerate() {
            for (side, &(ec, ep)) in end.iter().enumerate() {
                if ec == c && ep == p {
                    return (i, side);
                }
            }
        }
        panic!("dangling port");
    };
    let mut total = OracleSum::new();
    for state in 0..(1u64 << n) {
        let mut exp = 0i64;
        let join = |c: usize, p: u8| -> u8 {
            let first = state >> c & 1 == 0;
            let over02 = d.crossings[c].over == OverPair::Ports02;
            // pair 0 with 3 when (t-smoothing) == (overpass 0-2)
            let zero_three = first == over02;
            match (zero_three, p) {
                (true, 0) => 3,
                (true, 3) => 0,
                (true, 1) => 2,
                (true, _) => 1,
                (false, 0) => 1,
                (false, 1) => 0,
                (false, 2) => 3,
                (false, _) => 2,
            }
        };
        for c in 0..n {
            exp += if state >> c & 1 == 0 { 1 } else { -1 };
        }
        let mut used = vec![false; ends.len()];
        let mut loops: Vec<String> = d.free_loops.iter().map(|l| canonical_loop(&l.to_string())).collect();
        for start in 0..ends.len() {
            if used[start] {
                continue;
            }
            let mut word = String::new();
            let (mut e, mut side) = (start, 0usize);
            loop {
                used[e] = true;
                // traverse e from `side` to the other end
                if side == 0 {
                    word.push_str(&labels[e]);
                } else {
                    word.push_str(&inverse_word(&labels[e]));
                }
                let (c, p) = ends[e][1 - side];
                let (ne, nside) = edge_at(c, join(c, p));
                if ne == start && nside == 0 {
                    break;
                }
                assert!(!used[ne], "walk revisited an edge");
                e = ne;
                side = nside;
            }
            loops.push(canonical_loop(&word));
        }
        add_state(&mut total, loops, ip_mono(exp, 1));
    }
    total
}

/// Library result re-keyed with the oracle's canonical strings.
pub fn rekey(s: &SkeinElement<LaurentPoly>) -> OracleSum {
    let mut out = OracleSum::new();
    for (loops, c) in s.terms() {
        let mut key: Vec<String> = loops.loops().iter().map(|l| canonical_loop(&l.to_string())).collect();
        key.sort();
        let slot = out.entry(key).or_default();
        *slot = ip_add(slot, &ip_from_laurent(c));
    }
    out
}

pub fn rekey_gaussian(s: &SkeinElement<GaussianRational>) -> BTreeMap<Vec<String>, GaussianRational> {
    s.terms()
        .map(|(loops, c)| {
            let mut key: Vec<String> = loops.loops().iter().map(|l| canonical_loop(&l.to_string())).collect();
            key.sort();
            (key, c.clone())
        })
        .collect()
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (1.0 + a.norm().max(b.norm()))
}

/// 2x2 complex matrices as plain arrays, for oracles that avoid the library types.
pub type M2 = [[Complex64; 2]; 2];

pub fn m_mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn m_trace(a: &M2) -> Complex64 {
    a[0][0] + a[1][1]
}

pub fn m_inv(a: &M2) -> M2 {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]]
}

pub fn m_id() -> M2 {
    let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    [[o, z], [z, o]]
}

/// Matrix exponential by a long Taylor series (small arguments only).
pub fn m_exp(a: &M2) -> M2 {
    let mut out = m_id();
    let mut term = m_id();
    for k in 1..40 {
        term = m_mul(&term, a);
        let s = 1.0 / (k as f64);
        term = [[term[0][0] * s, term[0][1] * s], [term[1][0] * s, term[1][1] * s]];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] += term[i][j];
            }
        }
    }
    out
}

pub fn to_m2(m: &derived_skein::Mat2) -> M2 {
    m.m
}

/// Holonomy of a word string under images of `a, b, c, ...`.
pub fn holonomy(word: &str, images: &[M2]) -> M2 {
    word.chars().fold(m_id(), |acc, ch| {
        let g = ch.to_ascii_lowercase() as usize - 'a' as usize;
        let m = if ch.is_ascii_lowercase() { images[g] } else { m_inv(&images[g]) };
        m_mul(&acc, &m)
    })
}

//! Seeded property suites producing one JSON record per checked case.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::SkeinError;
use crate::ring::{gq, Dual, DualScalar, ExactDual, LaurentPoly};
use crate::selflink::{
    fd_first_derivative, fd_hessian_pair, first_derivative, hessian_pair, kauffman_scalar_check,
    q_case_smooth, q_case_split, trace_identity_hessian, DeformedWord,
};
use crate::skein::{
    build_handle_slide, bundled_diagrams, enumerate_states, evaluate, goldman_bracket,
    resolve_dual, resolve_laurent, Diagram, FlatPair, LoopSet, SkeinElement, SkeinRing, Smoothing,
};
use crate::sl2::{
    divergence, eval_word, fd_divergence, killing, occurrence_endomorphism, q_functional, star,
    traceless, Form3, Mat2, Representation, Sl2, Sl2Vec,
};
use crate::torus::{
    calibrate_symbol_constant, commutator_eps_part, product_rule_residual, CommutativeLM,
    RSequence, TorusElement,
};
use crate::transport::{frozen_kappa, prepared_residual, KappaError, PreparedHandle};
use crate::words::{ConjClass, GroupWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Rings,
    Qtorus,
    Skein,
    Transport,
    Selflink,
    All,
}

impl Suite {
    pub const PARTS: [Suite; 5] = [Suite::Rings, Suite::Qtorus, Suite::Skein, Suite::Transport, Suite::Selflink];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Rings => "rings",
            Suite::Qtorus => "qtorus",
            Suite::Skein => "skein",
            Suite::Transport => "transport",
            Suite::Selflink => "selflink",
            Suite::All => "all",
        }
    }

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => Self::PARTS.to_vec(),
            s => vec![s],
        }
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Self::PARTS
            .iter()
            .chain(&[Suite::All])
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown suite '{}'", s))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    /// Overrides every random sample count when set.
    pub samples: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { seed: 1, samples: None }
    }
}

impl RunConfig {
    fn count(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    /// Independent stream per property, so sample counts of one check do not
    /// shift the draws of another.
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseRecord {
    pub case: String,
    pub inputs: Value,
    pub values: Value,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub records: Vec<CaseRecord>,
    pub warnings: Vec<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    /// Per case name: `(count, failures, worst residual)`, in first-seen order.
    pub fn summary(&self) -> Vec<(String, usize, usize, f64)> {
        let mut out: Vec<(String, usize, usize, f64)> = Vec::new();
        for r in &self.records {
            let idx = match out.iter().position(|s| s.0 == r.case) {
                Some(i) => i,
                None => {
                    out.push((r.case.clone(), 0, 0, 0.0));
                    out.len() - 1
                }
            };
            let entry = &mut out[idx];
            entry.1 += 1;
            entry.2 += usize::from(!r.pass);
            entry.3 = entry.3.max(r.residual);
        }
        out
    }

    pub fn json_lines(&self) -> String {
        self.records
            .iter()
            .map(|r| serde_json::to_string(r).expect("record serialises") + "\n")
            .collect()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<SkeinError> for SuiteError {
    fn from(e: SkeinError) -> Self {
        SuiteError::Internal(e.to_string())
    }
}

impl From<crate::error::Sl2Error> for SuiteError {
    fn from(e: crate::error::Sl2Error) -> Self {
        SuiteError::Internal(e.to_string())
    }
}

impl From<crate::error::TorusError> for SuiteError {
    fn from(e: crate::error::TorusError) -> Self {
        SuiteError::Calibration(e.to_string())
    }
}

impl From<KappaError> for SuiteError {
    fn from(e: KappaError) -> Self {
        match e {
            KappaError::Calibration(c) => SuiteError::Calibration(c.to_string()),
            KappaError::Skein(s) => s.into(),
        }
    }
}

struct Collector {
    suite: Suite,
    records: Vec<CaseRecord>,
    warnings: Vec<String>,
}

impl Collector {
    fn new(suite: Suite) -> Self {
        Self {
            suite,
            records: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn push(&mut self, case: &str, inputs: Value, values: Value, residual: f64, pass: bool) {
        self.records.push(CaseRecord {
            case: format!("{}.{}", self.suite, case),
            inputs,
            values,
            residual,
            pass,
        });
    }

    fn exact(&mut self, case: &str, inputs: Value, values: Value, ok: bool) {
        self.push(case, inputs, values, if ok { 0.0 } else { 1.0 }, ok);
    }

    fn within(&mut self, case: &str, inputs: Value, values: Value, residual: f64, tol: f64) {
        self.push(case, inputs, values, residual, residual < tol);
    }

    fn sampled(&mut self, case: &str, n: usize) {
        if n == 0 {
            self.warnings
                .push(format!("{}.{}: no samples drawn, check is vacuous", self.suite, case));
        }
    }

    fn finish(self) -> SuiteOutcome {
        SuiteOutcome {
            suite: self.suite,
            records: self.records,
            warnings: self.warnings,
        }
    }
}

fn cj(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (1.0 + a.norm().max(b.norm()))
}

fn random_laurent<R: Rng>(rng: &mut R) -> LaurentPoly {
    let k = rng.gen_range(0..=4);
    LaurentPoly::from_int_terms((0..k).map(|_| (rng.gen_range(-6..=6), rng.gen_range(-5..=5))))
}

/// Random reduced word of length `1..=max_len` and one generator occurring in it.
fn random_case<R: Rng>(rng: &mut R, genus: usize, max_len: usize) -> (GroupWord, usize) {
    let len = rng.gen_range(1..=max_len);
    let w = GroupWord::random(rng, genus, len);
    let mut gens: Vec<usize> = w.letters().iter().map(|l| l.gen).collect();
    gens.sort_unstable();
    gens.dedup();
    let gen = *gens.choose(rng).expect("nonempty word");
    (w, gen)
}

pub fn run(which: Suite, cfg: &RunConfig) -> Result<Vec<SuiteOutcome>, SuiteError> {
    which
        .parts()
        .into_iter()
        .map(|s| match s {
            Suite::Rings => Ok(rings(cfg)),
            Suite::Qtorus => qtorus(cfg),
            Suite::Skein => skein(cfg),
            Suite::Transport => transport(cfg),
            Suite::Selflink => selflink(cfg),
            Suite::All => unreachable!("expanded above"),
        })
        .collect()
}

fn rings(cfg: &RunConfig) -> SuiteOutcome {
    let mut c = Collector::new(Suite::Rings);
    for n in -20i64..=20 {
        let d = LaurentPoly::t_pow(n).eval_dual_exact();
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let ok = d == Dual::new(gq(sign), gq(-n * sign));
        c.exact("t_power", json!({ "n": n }), json!({ "image": d.to_string() }), ok);
    }
    let s = (LaurentPoly::t_pow(2) + LaurentPoly::t_pow(-2)).eval_dual_exact();
    c.exact("loop_value", json!({}), json!({ "image": s.to_string() }), s == Dual::new(gq(2), gq(0)));

    let mut rng = cfg.rng(1);
    let n = cfg.count(100);
    c.sampled("homomorphism", n);
    for _ in 0..n {
        let (p, q) = (random_laurent(&mut rng), random_laurent(&mut rng));
        let (ep, eq) = (p.eval_dual_exact(), q.eval_dual_exact());
        let mul_ok = (&p * &q).eval_dual_exact() == ep.clone() * eq.clone();
        let add_ok = (&p + &q).eval_dual_exact() == ep + eq;
        let text_ok = p.to_string().parse::<LaurentPoly>().ok() == Some(p.clone());
        c.exact(
            "homomorphism",
            json!({ "p": p.to_string(), "q": q.to_string() }),
            json!({ "mul": mul_ok, "add": add_ok, "text": text_ok }),
            mul_ok && add_ok && text_ok,
        );
    }

    let mut rng = cfg.rng(2);
    let n = cfg.count(100);
    c.sampled("dual_inverse", n);
    for _ in 0..n {
        let x = DualScalar::new(
            Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
        );
        let prod = x * x.inv().expect("nonzero value");
        let r = (prod.value - 1.0).norm() + prod.deriv.norm();
        c.within("dual_inverse", json!({ "x": x.to_string() }), json!({ "product": prod.to_string() }), r, 1e-12);
    }
    let exact = ExactDual::t() * ExactDual::t_inv();
    c.exact("dual_inverse_exact", json!({}), json!({ "t_times_t_inv": exact.to_string() }), exact == ExactDual::one());
    c.finish()
}

fn qtorus(cfg: &RunConfig) -> Result<SuiteOutcome, SuiteError> {
    let mut c = Collector::new(Suite::Qtorus);
    let one = gq(1);
    let mut bad = Vec::new();
    let mut checked = 0usize;
    for a in -5i64..=5 {
        for b in -5i64..=5 {
            for cc in -5i64..=5 {
                for d in -5i64..=5 {
                    let lhs = CommutativeLM::monomial(one.clone(), a, b)
                        .poisson_bracket(&CommutativeLM::monomial(one.clone(), cc, d));
                    let rhs = CommutativeLM::monomial(gq(2 * (b * cc - a * d)), a + cc, b + d);
                    let comm = commutator_eps_part(&TorusElement::monomial(a, b), &TorusElement::monomial(cc, d));
                    checked += 1;
                    if lhs != rhs || comm != rhs {
                        bad.push(json!([a, b, cc, d]));
                    }
                }
            }
        }
    }
    c.exact(
        "monomial_bracket",
        json!({ "range": 5 }),
        json!({ "checked": checked, "mismatches": bad }),
        bad.is_empty(),
    );

    let lm = TorusElement::l().multiply(&TorusElement::m());
    let tml = TorusElement::term(LaurentPoly::t_pow(2), 0, 0).multiply(&TorusElement::m().multiply(&TorusElement::l()));
    c.exact("relation", json!({}), json!({ "LM": lm.to_string(), "t2ML": tml.to_string() }), lm == tml);

    let mut rng = cfg.rng(3);
    let n = cfg.count(100);
    c.sampled("commutator", n);
    let pairs: Vec<(TorusElement, TorusElement)> = (0..n)
        .map(|_| (TorusElement::random(&mut rng, 4, 5), TorusElement::random(&mut rng, 4, 5)))
        .collect();
    for (p, q) in &pairs {
        let ok = commutator_eps_part(p, q) == p.symbol0().poisson_bracket(&q.symbol0());
        c.exact("commutator", json!({ "P": p.to_string(), "Q": q.to_string() }), json!({}), ok);
    }

    c.sampled("product_rule", n);
    if n > 0 {
        let k = calibrate_symbol_constant(&pairs)?;
        for (p, q) in &pairs {
            let res = product_rule_residual(p, q, &k);
            c.exact(
                "product_rule",
                json!({ "P": p.to_string(), "Q": q.to_string() }),
                json!({ "c": crate::ring::fmt_gaussian(&k), "residual": res.to_string() }),
                res.is_zero(),
            );
        }
    }

    let mut rng = cfg.rng(4);
    let n = cfg.count(50);
    c.sampled("sigma", n);
    for _ in 0..n {
        let p = TorusElement::random(&mut rng, 4, 5);
        let q = TorusElement::random(&mut rng, 4, 5);
        let additive = (&p + &q).sigma() == &p.sigma() + &q.sigma();
        let involutive = p.sigma().sigma() == p;
        c.exact(
            "sigma",
            json!({ "P": p.to_string(), "Q": q.to_string() }),
            json!({ "additive": additive, "involutive": involutive }),
            additive && involutive,
        );
    }

    let mut rng = cfg.rng(5);
    c.sampled("module_action", n);
    for _ in 0..n {
        let p = TorusElement::random(&mut rng, 2, 2);
        let q = TorusElement::random(&mut rng, 2, 2);
        let f = RSequence::from_fn(-12, 12, |k| {
            LaurentPoly::from_int_terms([(k.rem_euclid(5) - 2, 1), (k, 1 + k.rem_euclid(3))])
        });
        let lhs = p.multiply(&q).act(&f)?;
        let rhs = p.act(&q.act(&f)?)?;
        let (lo, hi) = (lhs.lo().max(rhs.lo()), lhs.hi().min(rhs.hi()));
        let ok = lhs.restrict(lo, hi) == rhs.restrict(lo, hi);
        c.exact("module_action", json!({ "P": p.to_string(), "Q": q.to_string() }), json!({ "window": [lo, hi] }), ok);
    }

    let ones = RSequence::from_fn(0, 10, |_| LaurentPoly::one());
    let l_minus_1: TorusElement = "L - 1".parse().expect("fixed operator");
    let out = l_minus_1.act(&ones)?;
    c.exact("annihilate_constants", json!({ "op": "L - 1", "window": [0, 10] }), json!({ "len": out.len() }), out.is_zero() && out.len() == 10);

    let quad = RSequence::from_fn(0, 10, |k| LaurentPoly::t_pow(k * (k + 1)));
    let op: TorusElement = "L - t^2*M".parse().expect("fixed operator");
    let out = op.act(&quad)?;
    c.exact("annihilate_quadratic", json!({ "op": "L - t^2*M", "window": [0, 10] }), json!({ "len": out.len() }), out.is_zero() && out.len() == 10);
    Ok(c.finish())
}

fn skein(cfg: &RunConfig) -> Result<SuiteOutcome, SuiteError> {
    let mut c = Collector::new(Suite::Skein);
    let diagrams = bundled_diagrams();
    for (name, d) in &diagrams {
        let r = resolve_laurent(d)?;
        let ok = r == enumerate_states::<LaurentPoly>(d)?;
        c.exact(
            "state_sum",
            json!({ "diagram": name, "crossings": d.crossing_count() }),
            json!({ "bracket": r.to_string() }),
            ok,
        );
    }

    let kink = resolve_laurent(&Diagram::positive_kink())?;
    let unknot = resolve_laurent(&Diagram::unknot())?;
    let framed = unknot.scale(&LaurentPoly::from_int_terms([(3, -1)]));
    c.exact("kink", json!({}), json!({ "kink": kink.to_string(), "unknot": unknot.to_string() }), kink == framed);

    for (name, d) in &diagrams {
        let whole = resolve_laurent(d)?;
        for k in 0..d.crossing_count() {
            let a = resolve_laurent(&d.smooth(k, Smoothing::A))?.scale(&LaurentPoly::t());
            let b = resolve_laurent(&d.smooth(k, Smoothing::B))?.scale(&LaurentPoly::t_inv());
            c.exact("kauffman_relation", json!({ "diagram": name, "crossing": k }), json!({}), whole == &a + &b);
        }
    }

    let pair = FlatPair::new(
        Diagram::from_json(
            r#"{"genus": 2, "crossings": [{"over": "02"}],
                "edges": [{"from": [0,2], "to": [0,0], "label": "a"}, {"from": [0,3], "to": [0,1], "label": "b"}]}"#,
        )?,
        vec![crate::skein::OverPair::Ports02],
    )?;
    let br = goldman_bracket(&pair)?;
    let class = |s: &str| ConjClass::of(&s.parse::<GroupWord>().expect("fixed word"));
    let mut expected: SkeinElement<crate::ring::GaussianRational> = SkeinElement::zero();
    expected.add_term(LoopSet::new(vec![class("ab")]), gq(2));
    expected.add_term(LoopSet::new(vec![class("aB")]), gq(-2));
    let ok = br.value_part.is_zero() && (br.eps_part == expected || br.eps_part == expected.scale(&gq(-1)));
    c.exact("goldman_torus", json!({}), json!({ "bracket": br.eps_part.to_string() }), ok);

    let mut rng = cfg.rng(6);
    let n = cfg.count(20);
    c.sampled("goldman_antisymmetry", n);
    for _ in 0..n {
        let genus = rng.gen_range(1..=3);
        let crossings = rng.gen_range(1..=4);
        let pair = FlatPair::random(&mut rng, genus, crossings, 3);
        let br = goldman_bracket(&pair)?;
        let sw = goldman_bracket(&pair.swapped())?;
        let ok = br.value_part.is_zero() && sw.value_part.is_zero() && sw.eps_part == br.eps_part.scale(&gq(-1));
        c.exact(
            "goldman_antisymmetry",
            json!({ "genus": genus, "crossings": crossings }),
            json!({ "bracket": br.eps_part.to_string() }),
            ok,
        );
    }

    let mut rng = cfg.rng(7);
    c.sampled("loop_class", n);
    for _ in 0..n {
        let genus = rng.gen_range(1..=3);
        let len = rng.gen_range(1..=8);
        let w = GroupWord::random(&mut rng, genus, len);
        let r = rng.gen_range(0..w.len());
        let rotated = GroupWord::new(w.letters()[r..].iter().chain(&w.letters()[..r]).copied());
        let rho = Representation::random(&mut rng, genus);
        let base = evaluate(&resolve_dual(&Diagram::single_loop(w.clone()))?, &rho)?.value;
        let direct = -eval_word(&w, &rho)?.trace();
        let mut worst = rel(base, direct);
        for v in [rotated, w.inverse()] {
            let e = evaluate(&resolve_dual(&Diagram::single_loop(v))?, &rho)?.value;
            worst = worst.max(rel(base, e));
        }
        c.within("loop_class", json!({ "word": w.to_string(), "rotation": r }), json!({ "value": cj(base) }), worst, 1e-10);
    }

    let mut rng = cfg.rng(8);
    c.sampled("order_independence", n);
    for _ in 0..n {
        let genus = rng.gen_range(1..=3);
        let (w, gen) = loop {
            let (w, gen) = random_case(&mut rng, genus, 8);
            if w.occurrences(gen).len() >= 2 {
                break (w, gen);
            }
        };
        let m = w.occurrences(gen).len();
        let occ = rng.gen_range(0..m);
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(&mut rng);
        let plain = build_handle_slide(&w, gen, occ, None)?;
        let shuffled = build_handle_slide(&w, gen, occ, Some(&order))?;
        let d1 = &resolve_dual(&plain.sum)? - &resolve_dual(&plain.plain)?;
        let d2 = &resolve_dual(&shuffled.sum)? - &resolve_dual(&shuffled.plain)?;
        let mut worst: f64 = 0.0;
        let mut at_worst = json!({});
        for _ in 0..20 {
            let rho = Representation::random(&mut rng, genus);
            let (v1, v2) = (evaluate(&d1, &rho)?, evaluate(&d2, &rho)?);
            let size = |v: &DualScalar| v.value.norm() + v.deriv.norm();
            let r = ((v1.value - v2.value).norm() + (v1.deriv - v2.deriv).norm()) / (1.0 + size(&v1).max(size(&v2)));
            if r >= worst {
                worst = r;
                at_worst = json!({ "identity_order": [cj(v1.value), cj(v1.deriv)], "shuffled": [cj(v2.value), cj(v2.deriv)] });
            }
        }
        c.within(
            "order_independence",
            json!({ "word": w.to_string(), "gen": gen, "occ": occ, "order": order }),
            at_worst,
            worst,
            1e-9,
        );
    }
    Ok(c.finish())
}

fn transport(cfg: &RunConfig) -> Result<SuiteOutcome, SuiteError> {
    let mut c = Collector::new(Suite::Transport);
    let kappa = frozen_kappa()?;
    c.exact("calibration", json!({ "data": "genus 1, powers of a" }), json!({ "kappa": kappa }), true);

    let reps = cfg.count(20);
    c.sampled("residual", reps);
    for genus in 1..=3usize {
        let mut rng = cfg.rng(10 + genus as u64);
        for _ in 0..30 {
            let (w, gen) = random_case(&mut rng, genus, 8);
            let occ = rng.gen_range(0..w.occurrences(gen).len());
            let prepared = PreparedHandle::new(&w, gen, occ)?;
            for sample in 0..reps {
                let rho = Representation::random(&mut rng, genus);
                let r = prepared_residual(&prepared, &rho, kappa, sample)?;
                let f_ok = r.f_value.norm() < 1e-9 * r.scale;
                let res = r.relative_residual();
                c.push(
                    "residual",
                    json!({ "genus": genus, "word": w.to_string(), "gen": gen, "occ": occ, "sample": sample }),
                    json!({ "f": cj(r.f_value), "f_prime": cj(r.f_prime), "divergence": cj(r.divergence), "kappa": kappa }),
                    res,
                    res < 1e-8 && f_ok,
                );
            }
        }
    }

    let rho = Representation::random(&mut cfg.rng(14), 2);
    let vacuous = crate::transport::transport_residual(&"bb".parse().expect("fixed word"), 1, 0, &rho, kappa, 0)?;
    c.exact("no_occurrence", json!({ "word": "bb", "gen": 1 }), json!({}), vacuous.residual == Complex64::zero());

    let mut rng = cfg.rng(15);
    let n = cfg.count(50);
    c.sampled("closed_form", n);
    for _ in 0..n {
        let genus = rng.gen_range(1..=3);
        let (w, gen) = random_case(&mut rng, genus, 8);
        let occ = rng.gen_range(0..w.occurrences(gen).len());
        let rho = Representation::random(&mut rng, genus);
        let prepared = PreparedHandle::new(&w, gen, occ)?;
        let engine = prepared.expand(&rho)?.deriv;
        let closed = prepared.fprime_closed_form(&rho)?;
        let res = (engine - closed).norm() / (1.0 + engine.norm() + closed.norm());
        c.within(
            "closed_form",
            json!({ "word": w.to_string(), "gen": gen, "occ": occ }),
            json!({ "engine": cj(engine), "closed_form": cj(closed) }),
            res,
            1e-9,
        );
    }

    let mut rng = cfg.rng(16);
    let n = cfg.count(20);
    c.sampled("conjugation", n);
    for _ in 0..n {
        let genus = rng.gen_range(1..=3);
        let (w, gen) = random_case(&mut rng, genus, 8);
        let occ = rng.gen_range(0..w.occurrences(gen).len());
        let rho = Representation::random(&mut rng, genus);
        let conj = rho.conjugate_by(&Sl2::random(&mut rng));
        let prepared = PreparedHandle::new(&w, gen, occ)?;
        let (f1, f2) = (prepared.expand(&rho)?.deriv, prepared.expand(&conj)?.deriv);
        let (d1, d2) = (prepared.divergence(&rho)?, prepared.divergence(&conj)?);
        c.within(
            "conjugation",
            json!({ "word": w.to_string(), "gen": gen, "occ": occ }),
            json!({ "f_prime": [cj(f1), cj(f2)], "divergence": [cj(d1), cj(d2)] }),
            rel(f1, f2).max(rel(d1, d2)),
            1e-9,
        );
    }

    let mut rng = cfg.rng(17);
    let n = cfg.count(100);
    c.sampled("divergence_fd", n);
    for _ in 0..n {
        let genus = rng.gen_range(1..=3);
        let (w, gen) = random_case(&mut rng, genus, 8);
        let rho = Representation::random(&mut rng, genus);
        let exact = divergence(&w, &rho, gen)?;
        let fd = fd_divergence(&w, &rho, gen, 1e-4)?;
        c.within(
            "divergence_fd",
            json!({ "word": w.to_string(), "gen": gen }),
            json!({ "exact": cj(exact), "fd": cj(fd) }),
            rel(exact, fd),
            1e-5,
        );
    }

    let mut rng = cfg.rng(18);
    c.sampled("single_occurrence", n);
    for _ in 0..n {
        let rho = Representation::random(&mut rng, 1);
        let a: GroupWord = "a".parse().expect("fixed word");
        let t = occurrence_endomorphism(&a, &rho, 1, 0)?.trace();
        let expected = rho.image(1)?.trace() * 1.5;
        c.within("single_occurrence", json!({}), json!({ "trace": cj(t), "expected": cj(expected) }), rel(t, expected), 1e-10);
    }
    Ok(c.finish())
}

fn neg(v: Sl2Vec) -> Sl2Vec {
    Sl2Vec::from_coords(v.coords().map(|x| -x))
}

fn selflink(cfg: &RunConfig) -> Result<SuiteOutcome, SuiteError> {
    let mut c = Collector::new(Suite::Selflink);
    let qk = q_functional(&Form3::killing());
    c.exact("q_killing", json!({}), json!({ "q": cj(qk) }), qk == Complex64::one());

    let mut rng = cfg.rng(20);
    let n = cfg.count(100);
    c.sampled("q_identities", n);
    for _ in 0..n {
        let (a, b) = (Sl2::random(&mut rng), Sl2::random(&mut rng));
        let (q1, r1) = q_case_smooth(&a, &b);
        let (q2, r2) = q_case_split(&a, &b);
        c.within(
            "q_identities",
            json!({ "A": a, "B": b }),
            json!({ "smooth": [cj(q1), cj(r1)], "split": [cj(q2), cj(r2)] }),
            rel(q1, r1).max(rel(q2, r2)),
            1e-9,
        );
    }

    let mut rng = cfg.rng(21);
    c.sampled("kauffman_scalar", n);
    for _ in 0..n {
        let (a, b) = (Sl2::random(&mut rng), Sl2::random(&mut rng));
        let r = kauffman_scalar_check(&a, &b)?;
        let scale = 1.0 + (a.trace() * b.trace()).norm() + (*a.matrix() * *b.matrix()).trace().norm();
        c.within(
            "kauffman_scalar",
            json!({ "A": a, "B": b }),
            json!({ "smooth": cj(r.smooth), "split": cj(r.split), "unknot": cj(r.unknot) }),
            r.max_norm() / scale,
            1e-9,
        );
    }

    let mut rng = cfg.rng(22);
    let n = cfg.count(50);
    c.sampled("hessian_fd", n);
    for _ in 0..n {
        let genus = rng.gen_range(1..=3);
        let len = rng.gen_range(2..=6);
        let w = GroupWord::random(&mut rng, genus, len);
        let p = rng.gen_range(0..len);
        // keep the pair off the wrap-around point so the swapped reading has two slots
        let q = if p == 0 { rng.gen_range(1..len) } else { rng.gen_range(p + 1..=len) };
        let (xi, eta) = (Sl2Vec::random(&mut rng), Sl2Vec::random(&mut rng));
        let rho = Representation::random(&mut rng, genus);
        let dw = DeformedWord::new(&w, vec![(p, xi), (q, eta)]).expect("ordered slots");
        let exact = hessian_pair(&dw, &rho)?;
        let fd = fd_hessian_pair(&dw, &rho, 1e-4)?;
        c.within(
            "hessian_fd",
            json!({ "word": w.to_string(), "slots": [p, q] }),
            json!({ "exact": cj(exact), "fd": cj(fd) }),
            rel(exact, fd),
            1e-5,
        );
        // the loop read from q, with the slots exchanged
        let rotated: Vec<_> = w.letters()[q..].iter().chain(&w.letters()[..q]).copied().collect();
        let swapped = DeformedWord::from_letters(rotated, vec![(0, eta), (len - q + p, xi)]).expect("ordered slots");
        let sym = hessian_pair(&swapped, &rho)?;
        c.within(
            "hessian_symmetry",
            json!({ "word": w.to_string(), "slots": [p, q] }),
            json!({ "value": cj(exact), "swapped": cj(sym) }),
            rel(exact, sym),
            1e-9,
        );
    }

    let mut rng = cfg.rng(23);
    c.sampled("first_derivative_fd", n);
    for _ in 0..n {
        let genus = rng.gen_range(1..=3);
        let len = rng.gen_range(1..=6);
        let w = GroupWord::random(&mut rng, genus, len);
        let p = rng.gen_range(0..=w.len());
        let rho = Representation::random(&mut rng, genus);
        let dw = DeformedWord::new(&w, vec![(p, Sl2Vec::random(&mut rng))]).expect("one slot");
        let exact = first_derivative(&dw, &rho)?;
        let fd = fd_first_derivative(&dw, &rho, 1e-4)?;
        c.within("first_derivative_fd", json!({ "word": w.to_string(), "slot": p }), json!({ "exact": cj(exact), "fd": cj(fd) }), rel(exact, fd), 1e-5);
    }

    let mut rng = cfg.rng(24);
    let n = cfg.count(100);
    c.sampled("trace_identity_hessian", n);
    for _ in 0..n {
        let genus = rng.gen_range(1..=3);
        let (la, lb) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let alpha = GroupWord::random(&mut rng, genus, la);
        let beta = GroupWord::random(&mut rng, genus, lb);
        let p = rng.gen_range(0..=alpha.len());
        let q = rng.gen_range(0..=beta.len());
        let (xi, eta) = (Sl2Vec::random(&mut rng), Sl2Vec::random(&mut rng));
        let rho = Representation::random(&mut rng, genus);
        let v = trace_identity_hessian(&alpha, &beta, &rho, (p, xi), (q, eta))?;
        // size of the individual terms: |xi| |eta| |alpha| |beta|
        let size = xi.norm() * eta.norm() * eval_word(&alpha, &rho)?.matrix().norm_max() * eval_word(&beta, &rho)?.matrix().norm_max();
        let scale = 1.0 + size;
        c.within(
            "trace_identity_hessian",
            json!({ "alpha": alpha.to_string(), "beta": beta.to_string(), "slots": [p, q] }),
            json!({ "value": cj(v) }),
            v.norm() / scale,
            1e-8,
        );
    }
    let zero = trace_identity_hessian(&"ab".parse().expect("word"), &"b".parse().expect("word"), &Representation::random(&mut rng, 2), (1, Sl2Vec::zero()), (0, neg(Sl2Vec::basis(0))))?;
    c.exact("trace_identity_zero", json!({}), json!({ "value": cj(zero) }), zero == Complex64::zero());

    let mut rng = cfg.rng(25);
    c.sampled("star", n);
    for _ in 0..n {
        let x = Mat2::new(
            Complex64::new(rng.gen_range(-3..=3) as f64, rng.gen_range(-3..=3) as f64),
            Complex64::new(rng.gen_range(-3..=3) as f64, 0.0),
            Complex64::new(0.0, rng.gen_range(-3..=3) as f64),
            Complex64::new(rng.gen_range(-3..=3) as f64, 1.0),
        );
        let exact_ok = x + star(&x) == Mat2::identity().scale(x.trace());
        let (a, b) = (Sl2::random(&mut rng), Sl2::random(&mut rng));
        let (am, bm) = (*a.matrix(), *b.matrix());
        let lhs = (bm * am).trace() + (star(&bm) * am).trace();
        let rhs = b.trace() * a.trace();
        let anti = (star(&(am * bm)) - star(&bm) * star(&am)).norm_max();
        let inv = (star(&am) - *a.inverse().matrix()).norm_max() / (1.0 + am.norm_max());
        c.push(
            "star",
            json!({ "X": x, "A": a, "B": b }),
            json!({ "trace_split": [cj(lhs), cj(rhs)] }),
            rel(lhs, rhs),
            exact_ok && rel(lhs, rhs) < 1e-10 && anti == 0.0 && inv < 1e-9,
        );
    }

    let mut rng = cfg.rng(26);
    let n = cfg.count(1000);
    c.sampled("trace_identity", n);
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let (a, b) = (Sl2::random(&mut rng), Sl2::random(&mut rng));
        let lhs = a.trace() * b.trace();
        let rhs = (a * b).trace() + (a * b.inverse()).trace();
        worst = worst.max(rel(lhs, rhs));
    }
    c.within("trace_identity", json!({ "pairs": n }), json!({}), worst, 1e-10);

    let mut rng = cfg.rng(27);
    let n = cfg.count(100);
    c.sampled("killing_invariance", n);
    for _ in 0..n {
        let (x, y, g) = (Sl2Vec::random(&mut rng), Sl2Vec::random(&mut rng), Sl2::random(&mut rng));
        let conj = |v: &Sl2Vec| traceless(&(*g.matrix() * v.to_matrix() * *g.inverse().matrix()));
        let (k0, k1) = (killing(&x, &y), killing(&conj(&x), &conj(&y)));
        let genus = rng.gen_range(1..=3);
        let rho = Representation::random(&mut rng, genus);
        let len = rng.gen_range(1..=8);
        let w = GroupWord::random(&mut rng, genus, len);
        let lhs = *eval_word(&w, &rho.conjugate_by(&g))?.matrix();
        let rhs = *g.matrix() * *eval_word(&w, &rho)?.matrix() * *g.inverse().matrix();
        let eval_res = (lhs - rhs).norm_max() / (1.0 + rhs.norm_max());
        c.within(
            "killing_invariance",
            json!({ "word": w.to_string() }),
            json!({ "killing": [cj(k0), cj(k1)] }),
            rel(k0, k1).max(eval_res),
            1e-10,
        );
    }
    Ok(c.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert_eq!("qtorus".parse::<Suite>().unwrap(), Suite::Qtorus);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn zero_samples_warn() {
        let cfg = RunConfig { seed: 1, samples: Some(0) };
        let out = run(Suite::Transport, &cfg).unwrap();
        assert!(out[0].passed());
        assert!(!out[0].warnings.is_empty());
    }
}

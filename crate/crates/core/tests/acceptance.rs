//! One line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{canonical_loop, dual_t_power, ip_circle, ip_mono, ip_mul, oracle_state_sum, rekey, rekey_gaussian};
use derived_skein::ring::gq;
use derived_skein::skein::{bundled_diagrams, goldman_bracket, resolve_laurent, Crossing, Edge, FlatPair, OverPair, Port};
use derived_skein::suite::{self, RunConfig, Suite, SuiteOutcome};
use derived_skein::transport::frozen_kappa;
use derived_skein::{Diagram, Dual, LaurentPoly};

struct Check {
    ok: bool,
    detail: String,
}

/// Every record of `case` passes and there are at least `min` of them.
fn cases(outcomes: &[SuiteOutcome], case: &str, min: usize) -> Check {
    let recs: Vec<_> = outcomes.iter().flat_map(|o| &o.records).filter(|r| r.case == case).collect();
    let failed = recs.iter().filter(|r| !r.pass).count();
    let worst = recs.iter().map(|r| r.residual).fold(0.0, f64::max);
    Check {
        ok: recs.len() >= min && failed == 0,
        detail: format!("{} {}/{} worst {:.1e}", case, recs.len() - failed, recs.len(), worst),
    }
}

fn direct(ok: bool, what: &str) -> Check {
    Check { ok, detail: what.to_string() }
}

fn criterion_1() -> Vec<Check> {
    let powers = (-20..=20).all(|n| {
        let (v, d) = dual_t_power(n);
        LaurentPoly::t_pow(n).eval_dual_exact() == Dual::new(gq(v), gq(d))
    });
    let circle = (LaurentPoly::t_pow(2) + LaurentPoly::t_pow(-2)).eval_dual_exact() == Dual::new(gq(2), gq(0));
    vec![direct(powers, "t^n for |n| <= 20"), direct(circle, "t^2 + t^-2 -> 2")]
}

fn criterion_2() -> Vec<Check> {
    let all = bundled_diagrams()
        .iter()
        .all(|(_, d)| d.crossing_count() <= 8 && resolve_laurent(d).map(|s| rekey(&s)) == Ok(oracle_state_sum(d)));
    let kink = rekey(&resolve_laurent(&Diagram::positive_kink()).unwrap());
    let kink_ok = kink == [(vec![], ip_mul(&ip_mono(3, -1), &ip_circle()))].into_iter().collect();
    vec![
        direct(all, &format!("{} bundled diagrams vs state-sum oracle", bundled_diagrams().len())),
        direct(kink_ok, "kink = -t^3 times the unknot"),
    ]
}

fn criterion_3(outcomes: &[SuiteOutcome]) -> Vec<Check> {
    let d = Diagram {
        genus: 2,
        crossings: vec![Crossing { over: OverPair::Ports02 }],
        edges: vec![
            Edge::new(Port(0, 2), Port(0, 0), "a".parse().unwrap()),
            Edge::new(Port(0, 3), Port(0, 1), "b".parse().unwrap()),
        ],
        free_loops: vec![],
    };
    let br = goldman_bracket(&FlatPair::new(d, vec![OverPair::Ports02]).unwrap()).unwrap();
    let got = rekey_gaussian(&br.eps_part);
    let (ab, a_b) = (vec![canonical_loop("ab")], vec![canonical_loop("aB")]);
    let torus = got.len() == 2
        && got.get(&ab).is_some_and(|x| *x == gq(2) || *x == gq(-2))
        && got.get(&a_b) == got.get(&ab).map(|x| -x.clone()).as_ref();
    vec![
        direct(br.value_part.is_zero() && torus, "one-crossing torus bracket = +-2([ab] - [aB])"),
        cases(outcomes, "skein.goldman_torus", 1),
        cases(outcomes, "skein.goldman_antisymmetry", 20),
    ]
}

fn criterion_4(outcomes: &[SuiteOutcome]) -> Vec<Check> {
    vec![
        cases(outcomes, "qtorus.monomial_bracket", 1),
        cases(outcomes, "qtorus.product_rule", 100),
        cases(outcomes, "qtorus.annihilate_constants", 1),
        cases(outcomes, "qtorus.annihilate_quadratic", 1),
    ]
}

fn criterion_5(outcomes: &[SuiteOutcome]) -> Vec<Check> {
    let kappa = frozen_kappa();
    vec![
        direct(kappa.is_ok(), &format!("kappa frozen at {:?}", kappa.ok())),
        cases(outcomes, "transport.calibration", 1),
        cases(outcomes, "transport.residual", 1800),
    ]
}

fn criterion_6(outcomes: &[SuiteOutcome]) -> Vec<Check> {
    vec![cases(outcomes, "transport.closed_form", 50)]
}

fn criterion_7(outcomes: &[SuiteOutcome]) -> Vec<Check> {
    vec![
        cases(outcomes, "transport.divergence_fd", 100),
        cases(outcomes, "transport.single_occurrence", 1),
    ]
}

fn criterion_8(outcomes: &[SuiteOutcome]) -> Vec<Check> {
    vec![
        cases(outcomes, "selflink.q_killing", 1),
        cases(outcomes, "selflink.q_identities", 100),
        cases(outcomes, "selflink.hessian_fd", 50),
        cases(outcomes, "selflink.trace_identity_hessian", 100),
        cases(outcomes, "selflink.star", 100),
    ]
}

fn json(outcomes: &[SuiteOutcome]) -> String {
    outcomes.iter().map(|o| o.json_lines()).collect()
}

fn main() -> ExitCode {
    let cfg = RunConfig { seed: 1, samples: None };
    let start = Instant::now();
    let first = suite::run(Suite::All, &cfg).expect("suite runs");
    let elapsed = start.elapsed();
    let second = suite::run(Suite::All, &cfg).expect("suite runs");
    let same = json(&first) == json(&second) && !first.is_empty();

    let criteria: Vec<(&str, Vec<Check>)> = vec![
        ("dual-ring reduction", criterion_1()),
        ("skein engine oracle equivalence", criterion_2()),
        ("Goldman bracket extraction", criterion_3(&first)),
        ("quantum torus", criterion_4(&first)),
        ("transport equation", criterion_5(&first)),
        ("engine vs closed form", criterion_6(&first)),
        ("divergence", criterion_7(&first)),
        ("self-linking", criterion_8(&first)),
        (
            "determinism",
            vec![direct(same, "two runs of suite all --seed 1 give identical json lines")],
        ),
    ];
    let mut all_ok = true;
    for (i, (name, checks)) in criteria.iter().enumerate() {
        let ok = checks.iter().all(|c| c.ok);
        all_ok &= ok;
        let details: Vec<&str> = checks.iter().map(|c| c.detail.as_str()).collect();
        println!("criterion {} {:<34} {}  [{}]", i + 1, name, if ok { "PASS" } else { "FAIL" }, details.join("; "));
    }
    println!("suite all --seed 1 ran in {:.2?}", elapsed);
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

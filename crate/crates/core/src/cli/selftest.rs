//! Seeded invariant suites behind `--task selftest`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use crate::certify::{defect, insep_tower_data};
use crate::coeff::EqElem;
use crate::gf::GfCtx;
use crate::laurent::{LaurentPoly, ValConfig};
use crate::values::{rat, Rat, SubgroupSpec, Value};

use super::config::{Characteristic, ModeName, RatText, Session, SessionConfig};
use super::parse::{format_element, parse_element};
use super::run::{run_inputs, Task, SCHEMA};

type L = LaurentPoly<EqElem>;

pub const DEFAULT_SEED: u64 = 0x5eed;
pub const DEFAULT_CASES: usize = 60;

struct Suite {
    name: &'static str,
    cases: usize,
    failures: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite { name, cases: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        }
    }

    fn json(&self) -> Json {
        json!({"name": self.name, "cases": self.cases, "ok": self.failures.is_empty(), "failures": self.failures})
    }
}

fn vt() -> ValConfig {
    ValConfig::vt(Value::new(Rat::from_integer(0), Rat::from_integer(1))).expect("vx = lambda")
}

fn random_poly(rng: &mut ChaCha8Rng, k: &Arc<GfCtx>, cfg: ValConfig) -> L {
    let n = rng.gen_range(1..5);
    let terms: Vec<(i64, EqElem)> = (0..n)
        .map(|_| {
            let c = k.elem(rng.gen_range(1..k.q()));
            let e = rat(rng.gen_range(-8..10), 1 << rng.gen_range(0..3));
            (rng.gen_range(-3..4), EqElem::monomial(&c, e).expect("t-monomial"))
        })
        .collect();
    L::from_terms(k, cfg, terms)
}

fn gauss_laws(rng: &mut ChaCha8Rng, n: usize) -> Suite {
    let mut s = Suite::new("gauss-laws");
    let k = GfCtx::new(2, 2).expect("F_4");
    while s.cases < n {
        let (f, g) = (random_poly(rng, &k, vt()), random_poly(rng, &k, vt()));
        if f.is_zero() || g.is_zero() {
            continue;
        }
        let (vf, vg) = (f.gauss_value().unwrap(), g.gauss_value().unwrap());
        let mul = f.mul(&g).gauss_value().ok() == Some(vf + vg);
        let sum = f.add(&g);
        let add = sum.is_zero() || sum.gauss_value().is_ok_and(|v| v >= vf.min(vg));
        let unique = f.terms().filter(|(i, c)| f.monomial_value(c, *i) == vf).count() == 1;
        s.check(mul && add && unique, || format!("f = {f}, g = {g}"));
    }
    s
}

fn approx_inverse(rng: &mut ChaCha8Rng, n: usize) -> Suite {
    let mut s = Suite::new("approx-inverse");
    let k = GfCtx::new(2, 2).expect("F_4");
    while s.cases < n {
        let f = random_poly(rng, &k, vt());
        if f.is_zero() {
            continue;
        }
        let alpha = Value::rational(rat(rng.gen_range(-6..12), 2));
        let ok = f.approx_inverse(alpha).is_ok_and(|g| {
            let rem = L::one(&k, vt()).sub(&f.mul(&g));
            rem.value_lower_bound().is_none_or(|v| v > alpha + f.gauss_value().unwrap())
        });
        s.check(ok, || format!("f = {f}, alpha = {alpha}"));
    }
    s
}

fn parse_round_trip(rng: &mut ChaCha8Rng, n: usize) -> Suite {
    let mut s = Suite::new("parse-round-trip");
    let k = GfCtx::new(2, 2).expect("F_4");
    for _ in 0..n {
        let f = random_poly(rng, &k, vt());
        let text = format_element(&f);
        let back = parse_element::<EqElem>(&text, &k, vt());
        s.check(back.as_ref().is_ok_and(|b| *b == f && format_element(b) == text), || text.clone());
    }
    s
}

fn session(p: u32, r: u32, mode: ModeName, ch: Characteristic) -> Session {
    let cfg = SessionConfig { p, r, d: RatText::Int(2), mode, characteristic: ch, ..SessionConfig::default() };
    Session::new(cfg).expect("selftest configuration")
}

fn eq_coeff(rng: &mut ChaCha8Rng) -> &'static str {
    ["1", "a", "(a+1)"][rng.gen_range(0..3)]
}

/// Runs generated inputs through `classify` and its verification.
fn engine_suite(name: &'static str, session: &Session, inputs: Vec<String>) -> Suite {
    let mut s = Suite::new(name);
    match run_inputs(session, Task::Classify, &inputs) {
        Ok(doc) => {
            for r in doc["reports"].as_array().into_iter().flatten() {
                let ok = r.get("error").is_none() && r["verification"]["ok"] == json!(true);
                s.check(ok, || format!("{}: {}", r["input"], r.get("error").unwrap_or(&r["verification"])));
            }
        }
        Err(e) => s.check(false, || e.to_string()),
    }
    s
}

fn as_vt_inputs(rng: &mut ChaCha8Rng, n: usize) -> Vec<String> {
    (0..n)
        .map(|_| {
            let terms: Vec<String> = (0..rng.gen_range(1..6))
                .map(|_| format!("{}*t^({}/{})*x^({})", eq_coeff(rng), rng.gen_range(-12..6), 1 << rng.gen_range(0..2), rng.gen_range(-6..7)))
                .collect();
            terms.join(" + ")
        })
        .collect()
}

fn kummer_vt_inputs(rng: &mut ChaCha8Rng, p: u32, n: usize) -> Vec<String> {
    (0..n)
        .map(|_| {
            let mut t = format!("x^({})", rng.gen_range(-3..4));
            for _ in 0..rng.gen_range(1..4) {
                t += &format!(" + {}*{p}^({})*x^({})", rng.gen_range(1..8), rng.gen_range(-3..5), rng.gen_range(-3..4));
            }
            t
        })
        .collect()
}

fn as_rt_inputs(rng: &mut ChaCha8Rng, n: usize) -> Vec<String> {
    (0..n)
        .map(|_| {
            let mut idx: Vec<i64> = (0..rng.gen_range(1..5)).map(|_| rng.gen_range(0..9)).collect();
            idx.sort_unstable();
            idx.dedup();
            let terms: Vec<String> = idx.iter().map(|i| format!("{}*t^({})*x^({i})", eq_coeff(rng), rng.gen_range(-6..3))).collect();
            terms.join(" + ")
        })
        .collect()
}

fn kummer_rt_inputs(rng: &mut ChaCha8Rng, n: usize) -> Vec<String> {
    (0..n)
        .map(|_| {
            let mut idx: Vec<i64> = (0..rng.gen_range(1..4)).map(|_| rng.gen_range(1..6)).collect();
            idx.sort_unstable();
            idx.dedup();
            let mut t = "1".to_string();
            for i in idx {
                t += &format!(" + {}*2^({})*x^({i})", 2 * rng.gen_range(1..8) - 1, rng.gen_range(1..4));
            }
            t
        })
        .collect()
}

fn defect_arithmetic(rng: &mut ChaCha8Rng, n: usize) -> Suite {
    let mut s = Suite::new("defect-arithmetic");
    for _ in 0..n {
        let p = [2u32, 3, 5][rng.gen_range(0..3)];
        let pp = p as u64;
        let mut parts = [(0u64, 0u64, 0u32); 2];
        for x in &mut parts {
            *x = (rng.gen_range(1..5), rng.gen_range(1..5), rng.gen_range(0..3));
        }
        let [(e1, f1, n1), (e2, f2, n2)] = parts;
        let (nn1, nn2) = (e1 * f1 * pp.pow(n1), e2 * f2 * pp.pow(n2));
        let ok = match (defect(nn1, e1, f1, p), defect(nn2, e2, f2, p), defect(nn1 * nn2, e1 * e2, f1 * f2, p)) {
            (Ok(a), Ok(b), Ok(c)) => c.value == a.value * b.value && c.nu == a.nu + b.nu,
            _ => false,
        };
        s.check(ok, || format!("p = {p}, (e, f, nu) = {:?}", parts));
    }
    let base = SubgroupSpec::new(vec![Value::rational(rat(1, 2)), Value::new(rat(1, 3), Rat::from_integer(1))]);
    for p in [2u32, 3] {
        for r in 0..2 {
            for t in 0..4 {
                for m in 0..4 {
                    let ok = insep_tower_data(r, t, m, p, &base).is_ok_and(|d| d.balances(1 + (r + t + m) as u64));
                    s.check(ok, || format!("tower p = {p}, r = {r}, s = {t}, m = {m}"));
                }
            }
        }
    }
    s
}

/// All suites with `cases` random cases each, seeded by `seed`.
pub fn run_selftest(cases: usize, seed: u64) -> Json {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rng = &mut rng;
    let eq = |mode| session(2, 2, mode, Characteristic::Equal);
    let suites = [
        gauss_laws(rng, cases),
        approx_inverse(rng, cases),
        parse_round_trip(rng, cases),
        engine_suite("artin-schreier-vt", &eq(ModeName::VT), as_vt_inputs(rng, cases)),
        engine_suite("kummer-vt-p2", &session(2, 1, ModeName::VT, Characteristic::Mixed), kummer_vt_inputs(rng, 2, cases)),
        engine_suite("kummer-vt-p3", &session(3, 2, ModeName::VT, Characteristic::Mixed), kummer_vt_inputs(rng, 3, cases)),
        engine_suite("artin-schreier-rt", &eq(ModeName::RT), as_rt_inputs(rng, cases)),
        engine_suite("kummer-rt", &session(2, 1, ModeName::RT, Characteristic::Mixed), kummer_rt_inputs(rng, cases)),
        defect_arithmetic(rng, cases),
    ];
    let ok = suites.iter().all(|s| s.failures.is_empty());
    json!({
        "schema": SCHEMA,
        "task": Task::Selftest.name(),
        "seed": seed,
        "suites": suites.iter().map(Suite::json).collect::<Vec<_>>(),
        "ok": ok,
    })
}

use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::coeff::{MixedCtx, MixedElem};
use crate::engine_vt::{replay_as_trace, AsStep, KummerOptions};
use crate::gf::GfCtx;
use crate::laurent::ValConfig;
use crate::poly::Poly;
use crate::values::{rat, rat_int, Lambda, Rat};

type La = LaurentPoly<EqElem>;
type Lm = LaurentPoly<MixedElem>;

fn rt() -> ValConfig {
    ValConfig::rt(Lambda::default())
}

fn f2() -> Arc<GfCtx> {
    GfCtx::new(2, 1).unwrap()
}

fn tx(k: &Arc<GfCtx>, c: u32, e: i128, i: i64) -> La {
    La::monomial(k, rt(), EqElem::monomial(&k.elem(c), rat_int(e)).unwrap(), i)
}

fn xbar(k: &Arc<GfCtx>) -> RatFunc {
    RatFunc::from_poly(Poly::x(k))
}

/// Brute-force search for a polynomial root of `Z^p - Z = rho`; a root in
/// `F_q(x)` of a polynomial right-hand side is a polynomial of degree at
/// most `deg(rho)/p`.
fn as_root_exists(rho: &RatFunc) -> bool {
    assert!(rho.is_polynomial());
    let k = rho.ctx().clone();
    let (p, q) = (k.p() as usize, k.q());
    let n = rho.num().degree().map_or(0, |d| d / p) + 1;
    (0..q.pow(n as u32)).any(|mut code| {
        let coeffs: Vec<u32> = (0..n).map(|_| {
            let c = code % q;
            code /= q;
            c
        }).collect();
        let y = RatFunc::from_poly(Poly::new(&k, coeffs));
        y.pow(p as u64).sub(&y) == *rho
    })
}

/// A polynomial is a `p`-th power over a perfect field exactly when only
/// exponents in `pZ` occur.
fn is_pth_power_poly(f: &RatFunc) -> bool {
    assert!(f.is_polynomial());
    let p = f.ctx().p() as usize;
    f.num().coeffs().iter().enumerate().all(|(i, &a)| a == 0 || i % p == 0)
}

#[test]
fn basis_validation() {
    let b = FrobeniusBasis::monomial(2);
    assert_eq!(b.root_exponent(4), Some(2));
    assert_eq!(b.root_exponent(3), None);
    assert_eq!(b.root_exponent(0), None);
    assert_eq!(b.frob(3), Some(6));
    let ok = FrobeniusBasis::from_json(2, r#"{"exponents": [0, 1, 2, 3], "frob": {"1": 2}}"#).unwrap();
    assert_eq!(ok.root_exponent(2), Some(1));
    assert_eq!(ok.index_of(5), None);
    let bad = [
        r#"{"exponents": [1, 2]}"#,
        r#"{"exponents": [0, 1, 1]}"#,
        r#"{"exponents": [0, 1, 3], "frob": {"1": 2}}"#,
        r#"{"exponents": [0, 1, 2]}"#,
        r#"{"exponents": [0, 1], "frob": {"1": 7}}"#,
        r#"{"exponents": [0], "bogus": 1}"#,
    ];
    for s in bad {
        assert!(matches!(FrobeniusBasis::from_json(2, s), Err(Error::BasisViolation(_))), "{s}");
    }
    let k = f2();
    let neg = tx(&k, 1, 0, -1);
    assert!(matches!(BasisSum::new(&b, neg), Err(Error::BasisViolation(_))));
    let outside = tx(&k, 1, 0, 5);
    assert!(matches!(BasisSum::new(&ok, outside), Err(Error::BasisViolation(_))));
}

#[test]
fn as_rt_examples() {
    let k = f2();
    let basis = FrobeniusBasis::monomial(2);
    let run = |a: La| normalize_artin_schreier_rt(&BasisSum::new(&basis, a).unwrap()).unwrap();

    let out = run(tx(&k, 1, 0, 1));
    assert_eq!(out.classification, RTClassification::SepResidue { as_residue: xbar(&k) });
    assert!(!as_root_exists(&xbar(&k)));

    // chi = t^{1/2} theta: chi^2 - t chi = x, so chi-bar^2 = x-bar.
    let out = run(tx(&k, 1, -1, 1));
    let RTClassification::PurelyInsepResidue { chi_residue } = &out.classification else { panic!("{}", out.classification) };
    assert_eq!(chi_residue.pth_power, xbar(&k));

    let out = run(tx(&k, 1, -1, 0).add(&tx(&k, 1, 0, 1)));
    let want = RTClassification::MixedDescent {
        c: EqElem::monomial(&k.elem(1), rat_int(-1)).unwrap(),
        then: Box::new(RTClassification::SepResidue { as_residue: xbar(&k) }),
    };
    assert_eq!(out.classification, want);
    assert_eq!(
        out.classification.to_string(),
        "MixedDescent{c = t^(-1), then SepResidue{Z^2 - Z - (x)}}"
    );
}

#[test]
fn as_rt_reductions() {
    let k = f2();
    let basis = FrobeniusBasis::monomial(2);
    let run = |a: La| normalize_artin_schreier_rt(&BasisSum::new(&basis, a).unwrap()).unwrap();
    // x^2 + x = (x)^2 - x: trivial.
    let out = run(tx(&k, 1, 0, 2).add(&tx(&k, 1, 0, 1)));
    assert_eq!(out.classification, RTClassification::TrivialExtension);
    assert_eq!(out.trace.len(), 1);
    // t^{-4} x^4 -> t^{-1} x after two shifts.
    let out = run(tx(&k, 1, -4, 4));
    assert_eq!(out.output, La::monomial(&k, rt(), EqElem::monomial(&k.elem(1), rat_int(-1)).unwrap(), 1));
    assert_eq!(replay_as_trace(&out.input, &out.trace), out.output);
    // The constant t^{-2} sits below v(t^{-1} x) and is lifted to t^{-1/2}.
    let out = run(tx(&k, 1, -2, 0).add(&tx(&k, 1, -1, 1)));
    assert_eq!(out.output.coeff(0), Some(&EqElem::monomial(&k.elem(1), rat(-1, 2)).unwrap()));
    assert!(matches!(out.classification, RTClassification::PurelyInsepResidue { .. }));
    // A lone constant is a constant descent; a positive part is stripped.
    let out = run(tx(&k, 1, -3, 0).add(&tx(&k, 1, 1, 3)));
    assert!(matches!(out.classification, RTClassification::ConstantDescent { .. }));
    assert!(matches!(out.trace[0], AsStep::Strip { .. }));
}

#[test]
fn descent_records() {
    let k = f2();
    let t = |e: i128| EqElem::monomial(&k.elem(1), rat_int(e)).unwrap();
    let r = descend_constant(&t(-1)).unwrap();
    assert_eq!(r.polynomial(), "X^2 - X - (t^(-1))");
    assert!(r.shifts.is_empty());
    assert_eq!(descend_constant(&t(1)).unwrap_err(), Error::NonNegativeValue);
    let r = descend_constant(&t(-2)).unwrap();
    assert_eq!(r.shifts, vec![t(-1)]);
    assert_eq!(r.c, t(-1));
    // Replaying the shift recovers the original.
    assert_eq!(r.c.add(&r.shifts[0].pow(2)).sub(&r.shifts[0]), t(-2));
    assert!(r.note.contains("non-trivial defect"));
}

fn m2() -> Arc<MixedCtx> {
    MixedCtx::new(f2(), 8, None).unwrap()
}

fn mx(ctx: &Arc<MixedCtx>, n: i64, g: Rat, i: i64) -> Lm {
    let c = MixedElem::from_int(ctx, n).mul(&MixedElem::p_pow(ctx, g).unwrap());
    Lm::monomial(ctx, rt(), c, i)
}

fn chain_ok(out: &KummerRtOutcome) -> bool {
    let mut cur = out.input.clone();
    for c in &out.certificates {
        if c.input != cur || c.verify().is_err() {
            return false;
        }
        cur = c.replacement.clone();
    }
    cur == out.output && out.r.mul(&out.u) == out.output
}

#[test]
fn kummer_rt_examples() {
    let ctx = m2();
    let k = ctx.residue_field();
    let basis = FrobeniusBasis::monomial(2);
    let run = |b: Lm| normalize_kummer_rt(&BasisSum::new(&basis, b).unwrap(), KummerOptions::default()).unwrap();
    let one = Lm::one(&ctx, rt());

    let out = run(Lm::x(&ctx, rt()));
    assert_eq!(out.classification, RTClassification::KummerInsep { r_residue: xbar(&k) });
    assert!(chain_ok(&out));

    // C^2 = 4 for p = 2.
    let out = run(one.add(&mx(&ctx, 1, rat_int(2), 1)));
    assert_eq!(out.classification, RTClassification::SepResidue { as_residue: xbar(&k) });
    assert!(!as_root_exists(&xbar(&k)));
    assert!(chain_ok(&out));

    let out = run(one.add(&mx(&ctx, 1, rat_int(1), 1)));
    let RTClassification::PurelyInsepResidue { chi_residue } = &out.classification else { panic!("{}", out.classification) };
    assert_eq!(chi_residue.pth_power, xbar(&k));
    assert!(chain_ok(&out));

    // 1 + 8x: trivial.
    let out = run(one.add(&mx(&ctx, 1, rat_int(3), 1)));
    assert_eq!(out.classification, RTClassification::TrivialExtension);

    // 4 x^2 (1 + 2x): the residue x-bar^2 is absorbed, leaving 1 + 2x.
    let out = run(mx(&ctx, 1, rat_int(2), 2).add(&mx(&ctx, 1, rat_int(3), 3)));
    assert!(matches!(out.classification, RTClassification::PurelyInsepResidue { .. }));
    assert_eq!(out.r, one);
    assert!(chain_ok(&out));

    // 1 + 2x^2: descent by (1 + 2^{1/2} x)^2 leaves a term of value 3/2 at x.
    let out = run(one.add(&mx(&ctx, 1, rat_int(1), 2)));
    assert!(out.certificates.iter().any(|c| c.rule == "descent"));
    assert!(out.u.terms().all(|(i, _)| i % 2 != 0 || i == 0));
    assert!(chain_ok(&out));
}

#[test]
fn kummer_rt_errors() {
    let ctx = m2();
    let basis = FrobeniusBasis::monomial(2);
    let zero = Lm::zero(&ctx, rt());
    let sum = BasisSum::new(&basis, zero).unwrap();
    assert_eq!(normalize_kummer_rt(&sum, KummerOptions::default()).unwrap_err(), Error::ZeroGenerator);
    // Residue (1 + x-bar)^2 has no monomial root.
    let b = Lm::one(&ctx, rt()).add(&mx(&ctx, 1, rat_int(0), 2));
    let sum = BasisSum::new(&basis, b).unwrap();
    assert!(matches!(normalize_kummer_rt(&sum, KummerOptions::default()), Err(Error::BasisViolation(_))));
}

proptest! {
    #[test]
    fn basis_sum_value_is_min(cs in prop::collection::btree_map(0i64..8, (1u32..4, -5i128..6), 1..6)) {
        let k = GfCtx::new(2, 2).unwrap();
        let basis = FrobeniusBasis::monomial(2);
        let terms: Vec<(i64, EqElem)> = cs.iter().map(|(&i, &(c, e))| (i, EqElem::monomial(&k.elem(c), rat_int(e)).unwrap())).collect();
        let min = cs.values().map(|x| x.1).min().unwrap();
        let sum = BasisSum::new(&basis, La::from_terms(&k, rt(), terms)).unwrap();
        prop_assert_eq!(sum.value().unwrap(), Value::rational(rat_int(min)));
        prop_assert_eq!(sum.coefficients().len(), cs.len());
    }

    #[test]
    fn as_rt_soundness(cs in prop::collection::btree_map(0i64..9, (1u32..4, -6i128..3), 1..5)) {
        let k = GfCtx::new(2, 2).unwrap();
        let basis = FrobeniusBasis::monomial(2);
        let terms: Vec<(i64, EqElem)> = cs.iter().map(|(&i, &(c, e))| (i, EqElem::monomial(&k.elem(c), rat_int(e)).unwrap())).collect();
        let a = La::from_terms(&k, rt(), terms);
        let out = normalize_artin_schreier_rt(&BasisSum::new(&basis, a).unwrap()).unwrap();
        prop_assert_eq!(replay_as_trace(&out.input, &out.trace), out.output.clone());
        for (i, c) in out.output.terms() {
            prop_assert!(basis.root_exponent(i).is_none());
            prop_assert!(c.value().unwrap() <= rat_int(0));
        }
        match &out.classification {
            RTClassification::SepResidue { as_residue } => prop_assert!(!as_root_exists(as_residue)),
            RTClassification::MixedDescent { then, .. } => match &**then {
                RTClassification::SepResidue { as_residue } => prop_assert!(!as_root_exists(as_residue)),
                other => prop_assert!(false, "unexpected {}", other),
            },
            RTClassification::PurelyInsepResidue { chi_residue } => prop_assert!(!is_pth_power_poly(&chi_residue.pth_power)),
            _ => {}
        }
    }

    #[test]
    fn kummer_rt_soundness(cs in prop::collection::btree_map(1i64..6, (1i64..8, 1i128..4), 1..4)) {
        let ctx = m2();
        let basis = FrobeniusBasis::monomial(2);
        let mut b = Lm::one(&ctx, rt());
        for (&i, &(n, g)) in &cs {
            b = b.add(&mx(&ctx, 2 * n - 1, rat_int(g), i));
        }
        let out = normalize_kummer_rt(&BasisSum::new(&basis, b).unwrap(), KummerOptions::default()).unwrap();
        prop_assert!(chain_ok(&out));
        let thr = crate::units::threshold(2);
        for (i, c) in out.u.terms().filter(|(i, _)| *i != 0) {
            let v = c.value().unwrap();
            prop_assert!(v > rat_int(0) && v <= thr);
            prop_assert!(basis.root_exponent(i).is_none() || v > rat_int(1));
        }
        match &out.classification {
            RTClassification::SepResidue { as_residue } => prop_assert!(!as_root_exists(as_residue)),
            RTClassification::PurelyInsepResidue { chi_residue } => prop_assert!(!is_pth_power_poly(&chi_residue.pth_power)),
            RTClassification::TrivialExtension => prop_assert!(out.u.len() == 1),
            other => prop_assert!(false, "unexpected {}", other),
        }
    }
}

use std::sync::Arc;

use proptest::prelude::*;

use super::ops::Residue;
use super::*;
use crate::coeff::{EqElem, MixedCtx, MixedElem};
use crate::gf::GfCtx;
use crate::poly::{Poly, RatFunc};
use crate::values::{rat, rat_int};

type L = LaurentPoly<EqElem>;

fn vt() -> ValConfig {
    ValConfig::vt(Value::new(rat_int(0), rat_int(1))).unwrap()
}

fn rt() -> ValConfig {
    ValConfig::rt(Lambda::default())
}

/// `sum c * t^e * x^i` over `F_q`.
fn lp(k: &Arc<GfCtx>, cfg: ValConfig, terms: &[(u32, Rat, i64)]) -> L {
    L::from_terms(k, cfg, terms.iter().map(|&(c, e, i)| (i, EqElem::monomial(&k.elem(c), e).unwrap())))
}

fn f2() -> Arc<GfCtx> {
    GfCtx::new(2, 1).unwrap()
}

#[test]
fn gauss_value_examples() {
    let k = f2();
    let f = lp(&k, vt(), &[(1, rat_int(-2), -4), (1, rat_int(-1), 0)]);
    assert_eq!(f.gauss_value().unwrap(), Value::new(rat_int(-2), rat_int(-4)));
    assert_eq!(f.lead_index().unwrap(), -4);
    let g = lp(&k, rt(), &[(1, rat_int(1), 2), (1, rat_int(0), 1)]);
    assert_eq!(g.gauss_value().unwrap(), Value::zero());
    let x = L::x(&k, rt());
    assert_eq!(x.sub(&x).gauss_value(), Err(Error::ZeroHasNoValue));
    assert_eq!(g.lead_index(), Err(Error::RtMode));
}

#[test]
fn residue_examples() {
    let k = f2();
    let g = lp(&k, rt(), &[(1, rat_int(1), 2), (1, rat_int(0), 1), (1, rat_int(0), 0)]);
    let want = RatFunc::from_poly(Poly::new(&k, vec![1, 1]));
    assert_eq!(g.residue_of().unwrap(), Residue::Func(want));
    let h = lp(&k, vt(), &[(1, rat_int(0), 0), (1, rat_int(1), -1)]);
    assert_eq!(h.residue_of(), Err(Error::NegativeValue));
    let h2 = lp(&k, vt(), &[(1, rat_int(0), 0), (1, rat_int(2), -1)]);
    assert_eq!(h2.residue_of().unwrap(), Residue::Const(k.elem(1)));
}

/// Checks `v(1 - f*g) > alpha + v(f)`, i.e. `v(1/f - g) > alpha`.
fn inverse_ok(f: &L, g: &L, alpha: Value) -> bool {
    let one = L::one(f.ctx(), f.config());
    let rem = one.sub(&f.mul(g));
    match rem.value_lower_bound() {
        None => true,
        Some(v) => v > alpha + f.gauss_value().unwrap(),
    }
}

#[test]
fn approx_inverse_examples() {
    let k = f2();
    let f = lp(&k, rt(), &[(1, rat_int(0), 0), (1, rat_int(1), 0)]);
    let three = Value::rational(rat_int(3));
    let g = f.approx_inverse(three).unwrap();
    // The coefficient 1 - t is inverted exactly in K; the truncated
    // geometric series meets the same contract.
    assert!(inverse_ok(&f, &g, three));
    let series = lp(&k, rt(), &[(1, rat_int(0), 0), (1, rat_int(1), 0), (1, rat_int(2), 0), (1, rat_int(3), 0)]);
    assert!(inverse_ok(&f, &series, three));
    let short = lp(&k, rt(), &[(1, rat_int(0), 0), (1, rat_int(1), 0), (1, rat_int(2), 0)]);
    assert!(!inverse_ok(&f, &short, three));
    let tx = lp(&k, vt(), &[(1, rat_int(1), 1)]);
    assert_eq!(tx.approx_inverse(Value::zero()).unwrap(), lp(&k, vt(), &[(1, rat_int(-1), -1)]));
    let f3 = lp(&k, vt(), &[(1, rat_int(0), 0), (1, rat_int(2), -1), (1, rat_int(3), 0)]);
    let a = Value::rational(rat_int(5));
    let g3 = f3.approx_inverse(a).unwrap();
    assert!(inverse_ok(&f3, &g3, a));
    // Minimal length: one term fewer fails.
    let fewer = f3.approx_inverse(Value::rational(rat(7, 2))).unwrap();
    assert!(!inverse_ok(&f3, &fewer, a));
}

#[test]
fn monomial_split_examples() {
    let k = f2();
    let f = lp(&k, vt(), &[(1, rat_int(1), 3), (1, rat_int(3), 2)]);
    let (c, e, u) = f.monomial_split().unwrap();
    assert_eq!(c, EqElem::t(&k));
    assert_eq!(e, 3);
    assert_eq!(u, lp(&k, vt(), &[(1, rat_int(0), 0), (1, rat_int(2), -1)]));
    let back = u.scale(&c).shift(e);
    assert_eq!(back, f);
    let x5 = lp(&k, vt(), &[(1, rat_int(0), 5)]);
    let (c, e, u) = x5.monomial_split().unwrap();
    assert!(c.is_one() && e == 5 && u == L::one(&k, vt()));
    let ctx = MixedCtx::new(f2(), 6, None).unwrap();
    let two = MixedElem::from_int(&ctx, 2);
    let m = LaurentPoly::monomial(&ctx, vt(), two.clone(), 3);
    let (c, e, u) = m.monomial_split().unwrap();
    assert!(c == two && e == 3 && u == LaurentPoly::one(&ctx, vt()));
    assert_eq!(lp(&k, rt(), &[(1, rat_int(0), 1)]).monomial_split().unwrap_err(), Error::RtMode);
}

#[test]
fn mixed_cancellation_sets_floor() {
    let ctx = MixedCtx::new(f2(), 6, None).unwrap();
    let a = LaurentPoly::monomial(&ctx, rt(), MixedElem::from_int(&ctx, 1 << 10), 1);
    let b = LaurentPoly::monomial(&ctx, rt(), MixedElem::from_int(&ctx, (1 << 10) + (1 << 30)), 1);
    let d = a.sub(&b);
    assert!(d.is_zero());
    assert!(matches!(d.gauss_value(), Err(Error::PrecisionExhausted(_))));
    assert!(d.floor().unwrap() >= Value::rational(rat_int(16)));
}

fn arb_poly(cfg: ValConfig) -> impl Strategy<Value = L> {
    arb_poly_from(cfg, -8)
}

fn arb_poly_from(cfg: ValConfig, lo: i128) -> impl Strategy<Value = L> {
    prop::collection::vec((1u32..4, lo..10, 0u32..3, -3i64..4), 1..5).prop_map(move |ts| {
        let k = GfCtx::new(2, 2).unwrap();
        let terms: Vec<(u32, Rat, i64)> = ts.into_iter().map(|(c, n, d, i)| (c, rat(n, 1 << d), i)).collect();
        lp(&k, cfg, &terms)
    })
}

proptest! {
    #[test]
    fn gauss_value_is_a_valuation(f in arb_poly(vt()), g in arb_poly(vt())) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let (vf, vg) = (f.gauss_value().unwrap(), g.gauss_value().unwrap());
        prop_assert_eq!(f.mul(&g).gauss_value().unwrap(), vf + vg);
        let s = f.add(&g);
        if !s.is_zero() {
            prop_assert!(s.gauss_value().unwrap() >= vf.min(vg));
        }
        // VT: the minimum is attained exactly once.
        let attained = f.terms().filter(|(i, c)| f.monomial_value(c, *i) == vf).count();
        prop_assert_eq!(attained, 1);
    }

    #[test]
    fn gauss_value_is_a_valuation_rt(f in arb_poly(rt()), g in arb_poly(rt())) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let (vf, vg) = (f.gauss_value().unwrap(), g.gauss_value().unwrap());
        prop_assert_eq!(f.mul(&g).gauss_value().unwrap(), vf + vg);
    }

    #[test]
    fn approx_inverse_contract(f in arb_poly(vt()), a in -6i128..12) {
        prop_assume!(!f.is_zero());
        let alpha = Value::rational(rat(a, 2));
        let g = f.approx_inverse(alpha).unwrap();
        prop_assert!(inverse_ok(&f, &g, alpha));
    }

    #[test]
    fn rt_residue_is_homomorphism(f in arb_poly_from(rt(), 0), g in arb_poly_from(rt(), 0)) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let (Residue::Func(rf), Residue::Func(rg)) = (f.residue_of().unwrap(), g.residue_of().unwrap()) else {
            unreachable!()
        };
        let Residue::Func(rp) = f.mul(&g).residue_of().unwrap() else { unreachable!() };
        prop_assert_eq!(rp, rf.mul(&rg));
        let s = f.add(&g);
        if !s.is_zero() {
            let Residue::Func(rs) = s.residue_of().unwrap() else { unreachable!() };
            prop_assert_eq!(rs, rf.add(&rg));
        }
    }
}

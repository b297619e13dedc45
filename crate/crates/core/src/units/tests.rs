use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::coeff::{EqElem, MixedCtx, MixedElem};
use crate::gf::GfCtx;
use crate::laurent::ValConfig;
use crate::values::{rat_int, Lambda};

fn vt() -> ValConfig {
    ValConfig::vt(Value::new(rat_int(0), rat_int(1))).unwrap()
}

fn rt() -> ValConfig {
    ValConfig::rt(Lambda::default())
}

fn f2() -> Arc<GfCtx> {
    GfCtx::new(2, 1).unwrap()
}

fn tcon(k: &Arc<GfCtx>, e: Rat) -> L<EqElem> {
    L::constant(k, rt(), EqElem::monomial(&k.elem(1), e).unwrap())
}

fn m2(n: u32) -> Arc<MixedCtx> {
    MixedCtx::new(f2(), n, None).unwrap()
}

fn int(ctx: &Arc<MixedCtx>, cfg: ValConfig, n: i64) -> L<MixedElem> {
    L::constant(ctx, cfg, MixedElem::from_int(ctx, n))
}

/// Residue of a constant integer-like element modulo `2^bits`, read off
/// its binary digits.
fn mod_pow2(f: &L<MixedElem>, bits: u32) -> i64 {
    let c = f.coeff(0).unwrap();
    c.digits().iter().filter(|(g, _)| g.is_integer() && *g < rat_int(bits as i128)).map(|(g, _)| 1i64 << *g.numer()).sum()
}

#[test]
fn as_root_examples() {
    let k = f2();
    let r = as_root_approx(&tcon(&k, rat_int(1)), Value::rational(rat_int(4))).unwrap();
    let want = tcon(&k, rat_int(1)).add(&tcon(&k, rat_int(2))).add(&tcon(&k, rat_int(4)));
    assert_eq!(r.theta, want);
    assert_eq!(r.remainder, tcon(&k, rat_int(8)));
    let r = as_root_approx(&tcon(&k, rat_int(3)), Value::rational(rat_int(2))).unwrap();
    assert_eq!((r.terms, r.remainder.gauss_value().unwrap()), (1, Value::rational(rat_int(6))));
    let r = as_root_approx(&tcon(&k, rat(1, 2)), Value::rational(rat_int(3))).unwrap();
    assert_eq!(r.theta, tcon(&k, rat(1, 2)).add(&tcon(&k, rat_int(1))).add(&tcon(&k, rat_int(2))));
    assert_eq!(r.remainder.gauss_value().unwrap(), Value::rational(rat_int(4)));
    assert_eq!(as_root_approx(&tcon(&k, rat_int(-1)), Value::zero()).unwrap_err(), Error::PositiveValueRequired);
}

#[test]
fn as_root_telescopes_for_odd_p() {
    let k = GfCtx::new(3, 1).unwrap();
    let a = L::from_terms(&k, vt(), [(1, EqElem::monomial(&k.elem(2), rat_int(3)).unwrap())]);
    let r = as_root_approx(&a, Value::rational(rat_int(20))).unwrap();
    // Direct expansion of theta^p - theta - a.
    let direct = r.theta.pow(3).sub(&r.theta).sub(&a);
    assert_eq!(direct, r.remainder);
    assert!(direct.gauss_value().unwrap() > Value::rational(rat_int(20)));
}

/// All `w mod 2^bits` with `w^2 = n mod 2^bits`.
fn square_roots_mod(n: i64, bits: u32) -> Vec<i64> {
    let m = 1i64 << bits;
    (0..m).filter(|w| (w * w - n).rem_euclid(m) == 0).collect()
}

#[test]
fn high_level_roots() {
    let ctx = m2(12);
    let aw = Value::rational(rat_int(12));
    for (n, bits) in [(17, 5), (9, 4)] {
        let w = pth_root_high_level(&int(&ctx, rt(), n), aw).unwrap();
        let r = mod_pow2(&w, bits);
        assert!(square_roots_mod(n, bits).contains(&r), "root of {n}: {r}");
        // Residue-0 choice of Y: w = 1 mod 2C = 4.
        assert_eq!(r % 4, 1);
        let back = w.pow(2).sub(&int(&ctx, rt(), n));
        assert!(back.value_lower_bound().is_none_or(|v| v > Value::rational(rat_int(11))));
    }
    let low = pth_root_high_level(&int(&ctx, rt(), 5), aw).unwrap_err();
    assert!(matches!(low, Error::LevelTooLow { .. }));
}

#[test]
fn high_level_roots_p3() {
    let ctx = MixedCtx::new(GfCtx::new(3, 2).unwrap(), 8, None).unwrap();
    let aw = Value::rational(rat_int(8));
    // 1 + 9 has level 2 > 3/2.
    let u = int(&ctx, rt(), 10);
    let w = pth_root_high_level(&u, aw).unwrap();
    let back = w.pow(3).sub(&u);
    assert!(back.value_lower_bound().is_none_or(|v| v > Value::rational(rat_int(7))));
    let low = int(&ctx, rt(), 4);
    assert!(matches!(pth_root_high_level(&low, aw), Err(Error::LevelTooLow { .. })));
}

fn close(a: &L<MixedElem>, b: &L<MixedElem>, to: i128) -> bool {
    a.sub(b).value_lower_bound().is_none_or(|v| v >= Value::rational(rat_int(to)))
}

#[test]
fn rule_examples() {
    let ctx = m2(12);
    let cfg = vt();
    let x = L::x(&ctx, cfg);
    let two = int(&ctx, cfg, 2);
    // Rule C: 1 + 4 + 4 = 9 = 3^2.
    let (rep, cert) = rewrite_one_unit(Rule::C, &L::zero(&ctx, cfg), &two, None).unwrap();
    assert!(rep == L::one(&ctx, cfg) && cert.checked_to.unwrap() >= Value::rational(rat_int(12)));
    assert!(close(&cert.witness, &int(&ctx, cfg, 3), 12));
    assert!(close(&cert.input, &int(&ctx, cfg, 9), 12));
    cert.verify().unwrap();
    // Rule A: 1 + 2x + 8x -> 1 + 2x.
    let b = x.scale(&MixedElem::from_int(&ctx, 2));
    let c = x.scale(&MixedElem::from_int(&ctx, 8));
    let (rep, cert) = rewrite_one_unit(Rule::A, &b, &c, None).unwrap();
    assert_eq!(rep, L::one(&ctx, cfg).add(&b));
    cert.verify().unwrap();
    assert!(matches!(rewrite_one_unit(Rule::A, &b, &two, None), Err(Error::RuleNotApplicable { .. })));
    // Rule D: 1 + 2x - 4 -> 1 + 2x + 4.
    let (rep, cert) = rewrite_one_unit(Rule::D, &b, &two, None).unwrap();
    assert_eq!(rep, L::one(&ctx, cfg).add(&b).add(&int(&ctx, cfg, 4)));
    cert.verify().unwrap();
    // Rule B: 1 + c = 9 has root 3; v(bc) = 4 + vx > 2.
    let eight = int(&ctx, cfg, 8);
    let (rep, cert) = rewrite_one_unit(Rule::B, &b, &eight, Some(&int(&ctx, cfg, 3))).unwrap();
    assert_eq!(rep, L::one(&ctx, cfg).add(&b));
    cert.verify().unwrap();
    assert!(matches!(rewrite_one_unit(Rule::B, &b, &eight, Some(&two)), Err(Error::RuleNotApplicable { .. })));
    // Rule C precondition: v(c^p) = 1 is not above vp.
    let half = L::constant(&ctx, cfg, MixedElem::p_pow(&ctx, rat(1, 2)).unwrap());
    assert!(matches!(rewrite_one_unit(Rule::C, &b, &half, None), Err(Error::RuleNotApplicable { .. })));
}

#[test]
fn tampered_certificate_fails() {
    let ctx = m2(12);
    let cfg = vt();
    let x = L::x(&ctx, cfg);
    let b = x.scale(&MixedElem::from_int(&ctx, 2));
    let (_, cert) = rewrite_one_unit(Rule::D, &b, &int(&ctx, cfg, 2), None).unwrap();
    let mut bad = cert.clone();
    bad.witness = bad.witness.add(&int(&ctx, cfg, 2));
    assert!(bad.verify().is_err());
    let mut bad = cert.clone();
    bad.checked_to = None;
    assert!(bad.verify().is_err());
}

proptest! {
    #[test]
    fn as_root_error_decreases(e in 1i128..8, d in 0u32..3, alpha in 0i128..40) {
        let k = f2();
        let a = tcon(&k, rat(e, 1 << d));
        let alpha = Value::rational(rat_int(alpha));
        let r = as_root_approx(&a, alpha).unwrap();
        prop_assert!(r.remainder.gauss_value().unwrap() > alpha);
        if r.terms > 1 {
            let shorter = as_root_approx(&a, r.remainder.gauss_value().unwrap().scale(rat(1, 4))).unwrap();
            prop_assert!(shorter.terms < r.terms);
            prop_assert!(shorter.remainder.gauss_value().unwrap() < r.remainder.gauss_value().unwrap());
        }
    }

    #[test]
    fn rule_c_exact_for_p2(n in 1i64..200, s in 5i64..20) {
        let ctx = m2(10);
        let cfg = rt();
        let c = int(&ctx, cfg, n).scale(&MixedElem::p_pow(&ctx, rat(s as i128, 8)).unwrap());
        let (_, cert) = rewrite_one_unit(Rule::C, &L::zero(&ctx, cfg), &c, None).unwrap();
        prop_assert!(cert.verify().is_ok());
    }

    #[test]
    fn rule_a_certificates_replay(n in 1i64..50, m in 1i64..50, k in -2i64..3) {
        let ctx = m2(10);
        let cfg = vt();
        let x = L::x(&ctx, cfg);
        let b = x.pow(2).scale(&MixedElem::from_int(&ctx, 2 * n));
        let c = x.shift(k).scale(&MixedElem::from_int(&ctx, 8 * m));
        let res = rewrite_one_unit(Rule::A, &b, &c, None);
        if c.gauss_value().unwrap() > cfg.scalar(threshold(2)) {
            let (_, cert) = res.unwrap();
            prop_assert!(cert.verify().is_ok());
        } else {
            prop_assert!(res.is_err());
        }
    }
}

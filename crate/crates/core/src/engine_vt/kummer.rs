use std::collections::BTreeMap;
use std::sync::Arc;

use crate::coeff::{Coeff, MixedCtx, MixedElem};
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Mode, ValConfig};
use crate::units::{threshold, work_level, PthPowerCertificate};
use crate::values::{rat, Rat, Value};

type L = LaurentPoly<MixedElem>;
type Cert = PthPowerCertificate<MixedElem>;

#[derive(Clone, Debug)]
pub struct KummerNormalFormVT {
    pub ctx: Arc<MixedCtx>,
    pub config: ValConfig,
    pub m: i64,
    /// `c_i` of the 1-unit `1 + sum c_i x^i`, `i != 0`.
    pub terms: BTreeMap<i64, MixedElem>,
    pub trivial: bool,
}

#[derive(Clone, Debug)]
pub struct KummerOutcome {
    pub input: L,
    /// Chained: each certificate's replacement is the next one's input.
    pub certificates: Vec<Cert>,
    pub output: L,
    pub normal_form: KummerNormalFormVT,
}

#[derive(Clone, Copy, Debug)]
pub struct KummerOptions {
    /// Clear exponents in `pZ` by reverse rule D when all values are at
    /// least `vp/(p-1)`.
    pub rule_d: bool,
}

impl Default for KummerOptions {
    fn default() -> Self {
        KummerOptions { rule_d: true }
    }
}

/// Keeps the Teichmuller pieces of value at most `t`, exactly.
pub(crate) fn window(u: &L, t: Value) -> Result<L> {
    let ctx = u.ctx();
    let cfg = u.config();
    let mut out = Vec::new();
    for (i, c) in u.terms() {
        let xi = cfg.vx.times(i);
        // Only a rational bound above the largest kept exponent is needed.
        let bound = Rat::from_integer((t - xi).approx().floor() as i128 + 2);
        let kept: Vec<_> = c.digits_upto(Some(bound)).into_iter().filter(|(g, _)| cfg.scalar(*g) + xi <= t).collect();
        if !kept.is_empty() {
            out.push((i, MixedElem::from_digits(ctx, &kept, None)?));
        }
    }
    Ok(L::from_terms(ctx, cfg, out))
}

/// A `p`-th root of `c` if the model holds one, else the root of its
/// leading Teichmuller piece, whose `p`-th power agrees with `c` to
/// higher value.
pub(crate) fn root_or_lead(c: &MixedElem) -> Result<MixedElem> {
    if let Ok(r) = c.pth_root() {
        return Ok(r);
    }
    let ctx = c.context();
    let (g, d) = c.digits().into_iter().next().ok_or(Error::ZeroHasNoValue)?;
    let p = ctx.residue_field().p() as i128;
    Ok(MixedElem::lift(ctx, &d.frobenius_inv()).mul(&MixedElem::p_pow(ctx, g / Rat::from_integer(p))?))
}

pub(crate) struct Run<'a> {
    pub ctx: &'a Arc<MixedCtx>,
    pub cfg: ValConfig,
    /// The generator is `prefix * u`.
    pub prefix: L,
    pub u: L,
    pub gen: L,
    pub certs: Vec<Cert>,
}

impl<'a> Run<'a> {
    pub fn new(a: &'a L) -> Self {
        let ctx = a.ctx();
        let cfg = a.config();
        Run { ctx, cfg, prefix: L::one(ctx, cfg), u: a.clone(), gen: a.clone(), certs: Vec::new() }
    }

    /// Replaces the generator by `prefix * new_u`, certified with `kappa`
    /// and the approximate witness `w0`.
    pub fn step(&mut self, rule: &str, new_u: L, kappa: MixedElem, w0: &L) -> Result<()> {
        let prefix = self.prefix.clone();
        self.step_to(rule, prefix, new_u, kappa, w0)
    }

    pub fn step_to(&mut self, rule: &str, prefix: L, new_u: L, kappa: MixedElem, w0: &L) -> Result<()> {
        let rep = prefix.mul(&new_u);
        if rep == self.gen && kappa.is_one() {
            self.prefix = prefix;
            self.u = new_u;
            return Ok(());
        }
        let cert = Cert::build(rule, &self.gen, &rep, kappa, w0)?;
        cert.verify().map_err(|e| Error::PrecisionExhausted(format!("step {rule}: {e}")))?;
        self.certs.push(cert);
        self.gen = rep;
        self.prefix = prefix;
        self.u = new_u;
        Ok(())
    }

    /// Lowest-valued monomial `c x^i` with `x^i` a `p`-th power `x^j` of
    /// value at most `vp`, as `(i, j, c)`.
    fn pth_power_monomial(&self, root: &dyn Fn(i64) -> Option<i64>) -> Option<(i64, i64, MixedElem)> {
        let one = self.cfg.scalar(rat(1, 1));
        let u = &self.u;
        u.terms()
            .filter_map(|(i, c)| root(i).map(|j| (i, j, c)))
            .filter(|(i, _, c)| u.monomial_value(c, *i) <= one)
            .min_by_key(|(i, _, c)| u.monomial_value(c, *i))
            .map(|(i, j, c)| (i, j, c.clone()))
    }

    /// Moves the 1-unit into the value window, clears low `p`-th power
    /// monomials, absorbs the constant term and, with `rule_d`, clears the
    /// remaining `p`-th power monomials. `root(i)` is `Some(j)` when the
    /// basis monomial `x^i` is `x^{j p}` with `i != 0`.
    pub fn reduce_unit(&mut self, root: &dyn Fn(i64) -> Option<i64>, opts: KummerOptions) -> Result<()> {
        let ctx = self.ctx;
        let cfg = self.cfg;
        let p = ctx.residue_field().p();
        let pi = p as i64;
        let one = L::one(ctx, cfg);
        let thr = cfg.scalar(threshold(p));
        self.step("A", window(&self.u, thr)?, MixedElem::one(ctx), &one)?;

        // Divide out (1 + z)^p for p-th power monomials z^p of value <= vp;
        // each pass raises the least such value, which stays bounded by vp.
        // Inexact roots leave a remainder of higher value for a later pass.
        let aw = cfg.scalar(work_level(p));
        let mut guard = 0;
        while let Some((_, j, c)) = self.pth_power_monomial(root) {
            guard += 1;
            if guard > 256 {
                return Err(Error::PrecisionExhausted("p-th power elimination did not settle".into()));
            }
            let z = L::monomial(ctx, cfg, root_or_lead(&c)?, j);
            let w0 = one.add(&z);
            let inv = w0.pow(p as u64).approx_inverse(aw)?;
            let new_u = window(&self.u.mul(&inv), thr)?;
            self.step("descent", new_u, MixedElem::one(ctx), &w0)?;
        }

        // u = (1 + c0) * u/(1 + c0), and 1 + c0 is a p-th power in K.
        if let Some(c0) = self.u.coeff(0).cloned() {
            if !c0.sub(&MixedElem::one(ctx)).is_zero() {
                let scaled = window(&self.u.scale(&c0.inv()?), thr)?;
                let rest = L::from_terms(ctx, cfg, scaled.terms().filter(|(i, _)| *i != 0).map(|(i, c)| (i, c.clone())));
                self.step("absorb", one.add(&rest), c0, &one)?;
            }
        }

        let low = cfg.scalar(rat(1, p as i128 - 1));
        let all_high = |u: &L| u.terms().filter(|(i, _)| *i != 0).all(|(i, c)| u.monomial_value(c, i) >= low);
        if opts.rule_d && all_high(&self.u) {
            // 1 + b + c^p -> 1 + b - pc, with witness 1 + c.
            let mut guard = 0;
            loop {
                let u = self.u.clone();
                let Some((i, j, ci)) = u.terms().find_map(|(i, c)| root(i).map(|j| (i, j, c.clone()))) else {
                    break;
                };
                guard += 1;
                if guard > 256 {
                    return Err(Error::PrecisionExhausted("rule D elimination did not settle".into()));
                }
                // An inexact root leaves (c - r^p) x^i of higher value in b.
                let r = root_or_lead(&ci)?;
                let z = L::monomial(ctx, cfg, r.clone(), j);
                let b = u.sub(&L::monomial(ctx, cfg, r.pow(p as u64), i));
                let new_u = window(&b.sub(&z.scale(&MixedElem::from_int(ctx, pi))), thr)?;
                self.step("D", new_u, MixedElem::one(ctx), &one.add(&z))?;
            }
        }
        Ok(())
    }
}

/// Normal form `x^m (1 + sum c_i x^i)` of a Kummer generator over
/// `K(x)`, `x` value-transcendental, with chained certificates.
pub fn normalize_kummer(a: &L, opts: KummerOptions) -> Result<KummerOutcome> {
    let ctx = a.ctx();
    let cfg = a.config();
    if cfg.mode != Mode::VT {
        return Err(Error::RtMode);
    }
    if a.is_zero() {
        return Err(Error::ZeroGenerator);
    }
    let pi = ctx.residue_field().p() as i64;
    let (c, k, u) = a.monomial_split()?;
    let m = k.rem_euclid(pi);
    let q = (k - m) / pi;
    let mut run = Run::new(a);

    // a = c x^k u = (x^m u) * c * (x^q)^p.
    let (kappa, w0) = match c.pth_root() {
        Ok(r) => (MixedElem::one(ctx), L::monomial(ctx, cfg, r, q)),
        Err(_) => (c, L::monomial(ctx, cfg, MixedElem::one(ctx), q)),
    };
    let xm = L::monomial(ctx, cfg, MixedElem::one(ctx), m);
    run.step_to("split", xm, u, kappa, &w0)?;
    run.reduce_unit(&|i| (i != 0 && i % pi == 0).then_some(i / pi), opts)?;

    let terms: BTreeMap<i64, MixedElem> = run.u.terms().filter(|(i, _)| *i != 0).map(|(i, c)| (i, c.clone())).collect();
    let trivial = m == 0 && terms.is_empty();
    let normal_form = KummerNormalFormVT { ctx: ctx.clone(), config: cfg, m, terms, trivial };
    Ok(KummerOutcome { input: a.clone(), certificates: run.certs, output: run.gen, normal_form })
}

impl KummerNormalFormVT {
    pub fn p(&self) -> u32 {
        self.ctx.residue_field().p()
    }

    /// `x^m (1 + sum c_i x^i)`.
    pub fn generator(&self) -> L {
        let one = L::one(&self.ctx, self.config);
        one.add(&L::from_terms(&self.ctx, self.config, self.terms.iter().map(|(i, c)| (*i, c.clone())))).shift(self.m)
    }

    pub fn value_of(&self, i: i64) -> Result<Value> {
        let c = self.terms.get(&i).ok_or_else(|| Error::MalformedNormalForm(format!("no term at {i}")))?;
        Ok(self.config.scalar(c.value()?) + self.config.vx.times(i))
    }

    /// The index attaining the least value.
    pub fn lead(&self) -> Option<i64> {
        self.terms.keys().copied().min_by_key(|i| self.value_of(*i).unwrap())
    }

    /// Re-checks the value window and the shape conditions.
    pub fn check(&self) -> Result<()> {
        let bad = |s: String| Err(Error::MalformedNormalForm(s));
        let p = self.p() as i64;
        if !(0..p).contains(&self.m) {
            return bad(format!("m = {} outside [0, p-1]", self.m));
        }
        let thr = self.config.scalar(threshold(self.p()));
        let one = self.config.scalar(rat(1, 1));
        for &i in self.terms.keys() {
            if i == 0 {
                return bad("constant term in the 1-unit".into());
            }
            let v = self.value_of(i)?;
            if !v.is_positive() || v > thr {
                return bad(format!("value {v} at {i} outside (0, p/(p-1)]"));
            }
            if i % p == 0 && v <= one {
                return bad(format!("p-power exponent {i} with value {v} <= vp"));
            }
        }
        if self.trivial != (self.m == 0 && self.terms.is_empty()) {
            return bad("trivial flag disagrees with the shape".into());
        }
        Ok(())
    }
}

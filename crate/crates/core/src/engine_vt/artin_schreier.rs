use std::collections::BTreeMap;

use crate::coeff::{Coeff, EqElem};
use crate::error::{Error, Result};
use crate::gf::Fq;
use crate::laurent::{LaurentPoly, Mode, ValConfig};
use crate::values::{Rat, Value};

type L = LaurentPoly<EqElem>;

#[derive(Clone, Debug, PartialEq)]
pub enum AsStep {
    /// `a -> a - part` for the part of positive value; `X^p - X = part`
    /// has a root in the henselian field.
    Strip { part: L },
    /// `a -> a - d^p + d`.
    Shift { d: L },
}

#[derive(Clone, Debug, PartialEq)]
pub enum AsShape {
    Trivial,
    Constant {
        c: EqElem,
    },
    Witnessed {
        c0: Option<EqElem>,
        terms: BTreeMap<i64, EqElem>,
        lead: i64,
    },
}

#[derive(Clone, Debug)]
pub struct AsNormalFormVT {
    pub p: u32,
    pub config: ValConfig,
    pub shape: AsShape,
}

#[derive(Clone, Debug)]
pub struct AsOutcome {
    pub input: L,
    pub trace: Vec<AsStep>,
    pub output: L,
    pub normal_form: AsNormalFormVT,
}

/// Replays a trace step by step.
pub fn replay_as_trace(input: &L, trace: &[AsStep]) -> L {
    let p = input.ctx().p() as u64;
    trace.iter().fold(input.clone(), |cur, step| match step {
        AsStep::Strip { part } => cur.sub(part),
        AsStep::Shift { d } => cur.sub(&d.pow(p)).add(d),
    })
}

/// Splits `a` into the monomials of value at most 0 and the rest,
/// breaking coefficients into `t`-monomials where they are Laurent
/// polynomials in `t`.
pub(crate) fn split_positive(a: &L) -> (L, L) {
    let ctx = a.ctx();
    let cfg = a.config();
    let mut keep = Vec::new();
    let mut part = Vec::new();
    for (i, c) in a.terms() {
        let xi = cfg.vx.times(i);
        match c.terms() {
            Some(ts) => {
                let (lo, hi): (Vec<_>, Vec<_>) = ts.into_iter().partition(|(e, _)| cfg.scalar(*e) + xi <= Value::zero());
                let sum = |v: Vec<(Rat, Fq)>| v.iter().fold(EqElem::zero(ctx), |s, (e, d)| s.add(&EqElem::monomial(d, *e).unwrap()));
                if !lo.is_empty() {
                    keep.push((i, sum(lo)));
                }
                if !hi.is_empty() {
                    part.push((i, sum(hi)));
                }
            }
            None if a.monomial_value(c, i).is_positive() => part.push((i, c.clone())),
            None => keep.push((i, c.clone())),
        }
    }
    (L::from_terms(ctx, cfg, keep), L::from_terms(ctx, cfg, part))
}

/// Largest value among the nonconstant monomials.
fn max_nonconstant(a: &L) -> Option<Value> {
    a.terms().filter(|(i, _)| *i != 0).map(|(i, c)| a.monomial_value(c, i)).max()
}

/// Number of `p`-th roots needed to lift the value `vc0 <= 0` strictly
/// above `vmax < 0`: the least `nu` with `vc0 / p^nu > vmax`.
pub fn constant_root_count(vc0: Value, vmax: Value, p: u32) -> u32 {
    let mut nu = 0;
    let mut v = vc0;
    while v <= vmax {
        v = v.scale(Rat::new(1, p as i128));
        nu += 1;
    }
    nu
}

/// Normal form of `X^p - X = a` for `a` in `K[x, 1/x]`, `x`
/// value-transcendental, together with a replayable trace.
pub fn normalize_artin_schreier(a: &L) -> Result<AsOutcome> {
    if a.config().mode != Mode::VT {
        return Err(Error::RtMode);
    }
    let ctx = a.ctx();
    let cfg = a.config();
    let p = ctx.p();
    let mut trace = Vec::new();
    let mut cur = a.clone();
    loop {
        let (keep, part) = split_positive(&cur);
        if !part.is_zero() {
            trace.push(AsStep::Strip { part });
            cur = keep;
            continue;
        }
        // Most negative exponent first, so traces are canonical.
        let pk = cur.terms().find(|(k, _)| *k != 0 && k % p as i64 == 0).map(|(k, c)| (k, c.clone()));
        if let Some((k, c)) = pk {
            let d = L::monomial(ctx, cfg, c.pth_root()?, k / p as i64);
            cur = cur.sub(&d.pow(p as u64)).add(&d);
            trace.push(AsStep::Shift { d });
            continue;
        }
        if let (Some(c0), Some(vmax)) = (cur.coeff(0), max_nonconstant(&cur)) {
            if cfg.scalar(c0.value()?) <= vmax {
                let d = L::constant(ctx, cfg, c0.pth_root()?);
                cur = cur.sub(&d.pow(p as u64)).add(&d);
                trace.push(AsStep::Shift { d });
                continue;
            }
        }
        break;
    }
    let shape = if cur.is_zero() {
        AsShape::Trivial
    } else if cur.len() == 1 && cur.coeff(0).is_some() {
        AsShape::Constant { c: cur.coeff(0).unwrap().clone() }
    } else {
        let terms: BTreeMap<i64, EqElem> = cur.terms().filter(|(i, _)| *i != 0).map(|(i, c)| (i, c.clone())).collect();
        let lead = cur.terms().filter(|(i, _)| *i != 0).min_by_key(|(i, c)| cur.monomial_value(c, *i)).unwrap().0;
        AsShape::Witnessed { c0: cur.coeff(0).cloned(), terms, lead }
    };
    let normal_form = AsNormalFormVT { p, config: cfg, shape };
    Ok(AsOutcome { input: a.clone(), trace, output: cur, normal_form })
}

impl AsNormalFormVT {
    /// The right-hand side `c0 + sum c_i x^i` as an element.
    pub fn element(&self, ctx: &<EqElem as Coeff>::Ctx) -> L {
        match &self.shape {
            AsShape::Trivial => L::zero(ctx, self.config),
            AsShape::Constant { c } => L::constant(ctx, self.config, c.clone()),
            AsShape::Witnessed { c0, terms, .. } => {
                L::from_terms(ctx, self.config, c0.iter().map(|c| (0, c.clone())).chain(terms.iter().map(|(i, c)| (*i, c.clone()))))
            }
        }
    }

    /// Re-checks the shape conditions of the normal form.
    pub fn check(&self) -> Result<()> {
        let bad = |s: &str| Err(Error::MalformedNormalForm(s.into()));
        let AsShape::Witnessed { c0, terms, lead } = &self.shape else {
            if let AsShape::Constant { c } = &self.shape {
                if c.is_zero() || c.value()? > Rat::from_integer(0) {
                    return bad("constant must be nonzero of value at most 0");
                }
            }
            return Ok(());
        };
        if terms.is_empty() {
            return bad("witnessed form needs a nonconstant term");
        }
        let val = |i: i64, c: &EqElem| -> Result<Value> { Ok(self.config.scalar(c.value()?) + self.config.vx.times(i)) };
        let mut vals = Vec::new();
        for (&i, c) in terms {
            if i == 0 || i % self.p as i64 == 0 {
                return bad("support must avoid pZ");
            }
            if c.is_zero() {
                return bad("zero coefficient");
            }
            let v = val(i, c)?;
            if !v.is_negative() {
                return bad("nonconstant terms must have negative value");
            }
            vals.push((i, v));
        }
        let vmin = vals.iter().map(|x| x.1).min().unwrap();
        let vmax = vals.iter().map(|x| x.1).max().unwrap();
        if !terms.contains_key(lead) || val(*lead, &terms[lead])? != vmin {
            return bad("lead must attain the minimal value");
        }
        if let Some(c) = c0 {
            let v0 = self.config.scalar(c.value()?);
            if v0 > Value::zero() || v0 <= vmax {
                return bad("constant term must satisfy v(c_i x^i) < v(c0) <= 0");
            }
        }
        Ok(())
    }
}

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use super::mixed_ring::{MixedCtx, Repr};
use super::Coeff;
use crate::error::{Error, Result};
use crate::gf::{Fq, GfCtx};
use crate::values::{rat, Rat};

/// A generalized `p`-adic number `sum gamma in (1/M)Z  omega(d) p^gamma`,
/// known to a finite absolute precision.
#[derive(Clone)]
pub struct MixedElem {
    ctx: Arc<MixedCtx>,
    repr: Repr,
}

impl PartialEq for MixedElem {
    fn eq(&self, o: &Self) -> bool {
        self.repr == o.repr
    }
}

impl MixedElem {
    fn from_repr(ctx: &Arc<MixedCtx>, repr: Repr) -> Self {
        MixedElem { ctx: ctx.clone(), repr }
    }

    fn zero_to(ctx: &Arc<MixedCtx>, prec: i64) -> Self {
        Self::from_repr(ctx, Repr::Zero(Some(prec)))
    }

    /// `pi^e * y` reduced to canonical form at absolute precision `prec`.
    fn normalize(ctx: &Arc<MixedCtx>, e: i64, y: &[i128], prec: i64) -> Self {
        let rel = prec - e;
        if rel <= 0 {
            return Self::zero_to(ctx, prec);
        }
        let y = ctx.y_trunc(y, rel);
        let Some(t) = ctx.y_val(&y) else {
            return Self::zero_to(ctx, prec);
        };
        let y = ctx.y_div_pi(&y, t);
        let e = e + t;
        let rel = (prec - e).min(ctx.cap);
        Self::from_repr(ctx, Repr::Unit { e, prec: e + rel, y: ctx.y_trunc(&y, rel) })
    }

    /// `pi^e * y`, exact up to the working cap.
    fn exact(ctx: &Arc<MixedCtx>, e: i64, y: &[i128]) -> Self {
        match ctx.y_val(y) {
            None => Self::from_repr(ctx, Repr::Zero(None)),
            Some(t) => {
                let y = ctx.y_div_pi(y, t);
                Self::normalize(ctx, e + t, &y, e + t + ctx.cap)
            }
        }
    }

    /// `pi^k = p^(k/M)`.
    pub fn pi_pow(ctx: &Arc<MixedCtx>, k: i64) -> Self {
        Self::exact(ctx, k, &ctx.y_one())
    }

    /// `p^gamma`; `gamma` must lie in `(1/M)Z`.
    pub fn p_pow(ctx: &Arc<MixedCtx>, gamma: Rat) -> Result<Self> {
        Ok(Self::pi_pow(ctx, Self::to_units(ctx, gamma)?))
    }

    fn to_units(ctx: &Arc<MixedCtx>, gamma: Rat) -> Result<i64> {
        let s = gamma * Rat::from_integer(ctx.m as i128);
        if !s.is_integer() {
            return Err(Error::RootNotRepresentable(format!(
                "exponent {gamma} has denominator not dividing M = {}",
                ctx.m
            )));
        }
        Ok(*s.numer() as i64)
    }

    /// `C = (-p)^(1/(p-1))`; `C^(p-1) = -p`.
    pub fn c(ctx: &Arc<MixedCtx>) -> Self {
        let y = ctx.y_from_zq(&ctx.c_unit);
        Self::exact(ctx, ctx.m / (ctx.p as i64 - 1), &y)
    }

    /// A primitive `p`-th root of unity.
    pub fn zeta(ctx: &Arc<MixedCtx>) -> Self {
        let repr = ctx.zeta.get_or_init(|| {
            let one = Self::one(ctx);
            let y = fixed_point(ctx, &one, &Self::zero(ctx));
            Self::c(ctx).mul(&y).add(&one).repr
        });
        Self::from_repr(ctx, repr.clone())
    }

    pub fn context(&self) -> &Arc<MixedCtx> {
        &self.ctx
    }

    /// Build from Teichmuller digits `(gamma, d)` at absolute precision
    /// `prec` (in units of `vp`), or exactly when `prec` is `None`.
    pub fn from_digits(ctx: &Arc<MixedCtx>, digits: &[(Rat, Fq)], prec: Option<Rat>) -> Result<Self> {
        let mut acc = Self::zero(ctx);
        for (g, d) in digits {
            acc = acc.add(&Self::lift(ctx, d).mul(&Self::p_pow(ctx, *g)?));
        }
        Ok(match prec {
            Some(p) => {
                let pu = (p * Rat::from_integer(ctx.m as i128)).floor();
                acc.with_precision(*pu.numer() as i64)
            }
            None => acc,
        })
    }

    /// Lower the absolute precision to `prec` (in `1/M` units).
    fn with_precision(&self, prec: i64) -> Self {
        match &self.repr {
            Repr::Zero(None) => Self::zero_to(&self.ctx, prec),
            Repr::Zero(Some(q)) => Self::zero_to(&self.ctx, prec.min(*q)),
            Repr::Unit { e, prec: q, y } => Self::normalize(&self.ctx, *e, y, prec.min(*q)),
        }
    }

    /// Lower the absolute precision to `prec` (in units of `vp`).
    pub fn truncate(&self, prec: Rat) -> Self {
        let pu = (prec * Rat::from_integer(self.ctx.m as i128)).floor();
        self.with_precision(*pu.numer() as i64)
    }

    /// Teichmuller expansion, lowest exponent first.
    pub fn digits(&self) -> Vec<(Rat, Fq)> {
        self.digits_upto(None)
    }

    /// The Teichmuller digits with exponent at most `bound`.
    pub fn digits_upto(&self, bound: Option<Rat>) -> Vec<(Rat, Fq)> {
        let limit = bound.map(|b| (b * Rat::from_integer(self.ctx.m as i128)).floor().to_integer() as i64);
        let mut out = Vec::new();
        let mut cur = self.clone();
        while let Repr::Unit { e, y, .. } = &cur.repr {
            if limit.is_some_and(|l| *e > l) {
                break;
            }
            let d = self.ctx.gf.elem(self.ctx.y_residue(y));
            out.push((rat(*e as i128, self.ctx.m as i128), d.clone()));
            let term = Self::lift(&self.ctx, &d).mul(&Self::pi_pow(&self.ctx, *e));
            cur = cur.sub(&term);
        }
        out
    }

    fn teich_elem(ctx: &Arc<MixedCtx>, d: u32) -> Self {
        if d == 0 {
            return Self::zero(ctx);
        }
        Self::exact(ctx, 0, &ctx.y_from_zq(&ctx.teich(d)))
    }

    /// `p`-th root of a 1-unit; leading terms are peeled until the level
    /// exceeds `p/(p-1)`, after which a contraction finishes the job.
    fn one_unit_root(&self) -> Result<Self> {
        let ctx = &self.ctx;
        let p = ctx.p as i64;
        let one = Self::one(ctx);
        let thr = ctx.m * p / (p - 1);
        let mut w = one.clone();
        let mut cur = self.clone();
        loop {
            let b = cur.sub(&one);
            let (e, y) = match &b.repr {
                Repr::Zero(Some(q)) if *q <= thr => {
                    return Err(Error::PrecisionExhausted(format!("1-unit known only to {}", rat(*q as i128, ctx.m as i128))))
                }
                Repr::Unit { e, y, .. } if *e <= thr => (*e, y.clone()),
                _ => break,
            };
            let d = ctx.y_residue(&y);
            let z = if e < thr {
                if e % p != 0 {
                    return Err(Error::RootNotRepresentable(format!(
                        "1-unit of level {} has no root with exponent denominator M",
                        rat(e as i128, ctx.m as i128)
                    )));
                }
                Self::teich_elem(ctx, ctx.gf.frobenius_inv(d)).mul(&Self::pi_pow(ctx, e / p))
            } else {
                // (1 + Cz)^p = 1 + C^p (z^p - z) + ...; solve on residues.
                let cp = ctx.gf.mul(d, ctx.gf.inv(Self::c(ctx).pow(p as u64).residue_code()).unwrap());
                let k = &ctx.gf;
                let s = (0..k.q()).find(|&s| k.sub(k.frobenius(s), s) == cp).ok_or_else(|| {
                    Error::RootNotRepresentable("1-unit at the threshold with residue outside the image of z^p - z".into())
                })?;
                Self::c(ctx).mul(&Self::teich_elem(ctx, s))
            };
            let step = one.add(&z);
            w = w.mul(&step);
            cur = cur.mul(&step.pow(p as u64).inv()?);
        }
        let c = Self::c(ctx);
        let beta = cur.sub(&one).mul(&c.pow(p as u64).inv()?);
        let y = fixed_point(ctx, &Self::zero(ctx), &beta);
        Ok(w.mul(&c.mul(&y).add(&one)))
    }

    /// Residue code of `y` where `self = p^(e/M) y`.
    fn residue_code(&self) -> u32 {
        match &self.repr {
            Repr::Unit { y, .. } => self.ctx.y_residue(y),
            _ => 0,
        }
    }
}

/// Iterates `Y <- Y^p + g(Y) - beta` from `start` until stable, where
/// `(CY + 1)^p = 1 + C^p beta` is equivalent to the fixed-point equation.
fn fixed_point(ctx: &Arc<MixedCtx>, start: &MixedElem, beta: &MixedElem) -> MixedElem {
    let p = ctx.p as u64;
    let c = MixedElem::c(ctx);
    let cinv = c.inv().unwrap();
    // g(Y) = sum_{i=2}^{p-1} binom(p, i) C^(i-p) Y^i
    let gcoef: Vec<MixedElem> = (2..p)
        .map(|i| MixedElem::from_int(ctx, binom(p, i) as i64).mul(&cinv.pow(p - i)))
        .collect();
    let mut y = start.clone();
    let limit = 8 * (ctx.cap / ctx.m + 4) * p as i64;
    for _ in 0..limit {
        let mut next = y.pow(p).sub(beta);
        for (i, g) in gcoef.iter().enumerate() {
            next = next.add(&g.mul(&y.pow(i as u64 + 2)));
        }
        if next == y {
            break;
        }
        y = next;
    }
    y
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl fmt::Display for MixedElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.ctx.m as i128;
        match &self.repr {
            Repr::Zero(None) => write!(f, "0"),
            Repr::Zero(Some(q)) => write!(f, "[]@{}", rat(*q as i128, m)),
            Repr::Unit { prec, .. } => {
                let ds: Vec<String> = self.digits().iter().map(|(g, d)| format!("{g}:{d}")).collect();
                write!(f, "[{}]@{}", ds.join(", "), rat(*prec as i128, m))
            }
        }
    }
}

impl fmt::Debug for MixedElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Coeff for MixedElem {
    type Ctx = Arc<MixedCtx>;

    fn ctx(&self) -> Arc<MixedCtx> {
        self.ctx.clone()
    }
    fn zero(ctx: &Arc<MixedCtx>) -> Self {
        Self::from_repr(ctx, Repr::Zero(None))
    }
    fn one(ctx: &Arc<MixedCtx>) -> Self {
        Self::exact(ctx, 0, &ctx.y_one())
    }
    fn from_int(ctx: &Arc<MixedCtx>, n: i64) -> Self {
        if n == 0 {
            return Self::zero(ctx);
        }
        let (p, mut n, mut s) = (ctx.p as i64, n, 0);
        while n % p == 0 {
            n /= p;
            s += 1;
        }
        Self::exact(ctx, s * ctx.m, &ctx.y_from_zq(&ctx.zq_from_int(n as i128)))
    }
    fn lift(ctx: &Arc<MixedCtx>, d: &Fq) -> Self {
        Self::teich_elem(ctx, d.v)
    }
    fn residue_field(ctx: &Arc<MixedCtx>) -> Arc<GfCtx> {
        ctx.gf.clone()
    }
    fn prime(ctx: &Arc<MixedCtx>) -> u32 {
        ctx.p
    }
    fn is_equal_char() -> bool {
        false
    }

    fn c_const(ctx: &Arc<MixedCtx>) -> Result<Self> {
        Ok(Self::c(ctx))
    }

    fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero(_))
    }

    fn add(&self, o: &Self) -> Self {
        let ctx = &self.ctx;
        match (&self.repr, &o.repr) {
            (Repr::Zero(None), _) => o.clone(),
            (_, Repr::Zero(None)) => self.clone(),
            (Repr::Zero(Some(a)), Repr::Zero(Some(b))) => Self::zero_to(ctx, *a.min(b)),
            (Repr::Zero(Some(z)), Repr::Unit { e, prec, y }) | (Repr::Unit { e, prec, y }, Repr::Zero(Some(z))) => {
                Self::normalize(ctx, *e, y, *prec.min(z))
            }
            (Repr::Unit { e: e1, prec: p1, y: y1 }, Repr::Unit { e: e2, prec: p2, y: y2 }) => {
                let e = *e1.min(e2);
                let prec = *p1.min(p2);
                let mut sum = vec![0; y1.len()];
                for (ei, yi) in [(e1, y1), (e2, y2)] {
                    if ei - e < prec - e {
                        sum = ctx.y_add(&sum, &ctx.y_mul_pi(yi, ei - e));
                    }
                }
                Self::normalize(ctx, e, &sum, prec)
            }
        }
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn neg(&self) -> Self {
        match &self.repr {
            Repr::Unit { e, prec, y } => {
                let y = self.ctx.y_trunc(&self.ctx.y_neg(y), prec - e);
                Self::from_repr(&self.ctx, Repr::Unit { e: *e, prec: *prec, y })
            }
            _ => self.clone(),
        }
    }

    fn mul(&self, o: &Self) -> Self {
        let ctx = &self.ctx;
        match (&self.repr, &o.repr) {
            (Repr::Zero(None), _) | (_, Repr::Zero(None)) => Self::zero(ctx),
            (Repr::Zero(Some(a)), Repr::Zero(Some(b))) => Self::zero_to(ctx, a + b),
            (Repr::Zero(Some(z)), Repr::Unit { e, .. }) | (Repr::Unit { e, .. }, Repr::Zero(Some(z))) => {
                Self::zero_to(ctx, z + e)
            }
            (Repr::Unit { e: e1, prec: p1, y: y1 }, Repr::Unit { e: e2, prec: p2, y: y2 }) => {
                let prec = (p1 + e2).min(p2 + e1);
                Self::normalize(ctx, e1 + e2, &ctx.y_mul(y1, y2), prec)
            }
        }
    }

    fn inv(&self) -> Result<Self> {
        match &self.repr {
            Repr::Zero(_) => Err(Error::DivisionByZero),
            Repr::Unit { e, prec, y } => {
                let rel = prec - e;
                let z = self.ctx.y_inv(y, rel);
                Ok(Self::from_repr(&self.ctx, Repr::Unit { e: -e, prec: rel - e, y: z }))
            }
        }
    }

    fn value(&self) -> Result<Rat> {
        match &self.repr {
            Repr::Zero(None) => Err(Error::ZeroHasNoValue),
            Repr::Zero(Some(q)) => Err(Error::PrecisionExhausted(format!("{}", rat(*q as i128, self.ctx.m as i128)))),
            Repr::Unit { e, .. } => Ok(rat(*e as i128, self.ctx.m as i128)),
        }
    }

    fn precision(&self) -> Option<Rat> {
        let m = self.ctx.m as i128;
        match &self.repr {
            Repr::Zero(None) => None,
            Repr::Zero(Some(q)) | Repr::Unit { prec: q, .. } => Some(rat(*q as i128, m)),
        }
    }

    fn pth_root(&self) -> Result<Self> {
        let ctx = &self.ctx;
        let p = ctx.p as i64;
        match &self.repr {
            Repr::Zero(None) => Ok(self.clone()),
            Repr::Zero(Some(q)) => Ok(Self::zero_to(ctx, q.div_floor(&p))),
            Repr::Unit { e, prec, y } => {
                if e % p != 0 {
                    return Err(Error::RootNotRepresentable(format!(
                        "p^({}) has no p-th root with exponent denominator M",
                        rat(*e as i128, ctx.m as i128)
                    )));
                }
                let d = ctx.y_residue(y);
                let unit = Self::from_repr(ctx, Repr::Unit { e: 0, prec: prec - e, y: y.clone() });
                let di = ctx.gf.inv(d).unwrap();
                let one_unit = unit.mul(&Self::teich_elem(ctx, di));
                let root = one_unit.one_unit_root()?;
                let lead = Self::teich_elem(ctx, ctx.gf.frobenius_inv(d)).mul(&Self::pi_pow(ctx, e / p));
                Ok(root.mul(&lead))
            }
        }
    }

    fn residue(&self) -> Result<Fq> {
        let k = &self.ctx.gf;
        match &self.repr {
            Repr::Zero(None) => Ok(k.elem(0)),
            Repr::Zero(Some(q)) if *q > 0 => Ok(k.elem(0)),
            Repr::Zero(Some(q)) => Err(Error::PrecisionExhausted(format!("{}", rat(*q as i128, self.ctx.m as i128)))),
            Repr::Unit { e, .. } if *e < 0 => Err(Error::NegativeValue),
            Repr::Unit { e, .. } if *e > 0 => Ok(k.elem(0)),
            Repr::Unit { y, .. } => Ok(k.elem(self.ctx.y_residue(y))),
        }
    }
}

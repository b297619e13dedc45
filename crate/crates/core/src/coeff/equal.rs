use std::fmt;
use std::sync::Arc;

use super::Coeff;
use crate::error::{Error, Result};
use crate::gf::{Fq, GfCtx};
use crate::poly::{Poly, RatFunc};
use crate::values::{rat, Rat};

/// An element `f(u)` of `F_q(t)^{1/p^inf}` with `u = t^{1/p^depth}`,
/// `f` a reduced rational function and `depth` minimal.
#[derive(Clone, PartialEq)]
pub struct EqElem {
    depth: u32,
    f: RatFunc,
}

impl EqElem {
    pub fn new(depth: u32, f: RatFunc) -> Self {
        EqElem { depth, f }.minimized()
    }

    /// `c * t^e`; `e` must have a power of `p` as denominator.
    pub fn monomial(c: &Fq, e: Rat) -> Result<Self> {
        let p = c.ctx.p() as i128;
        let mut den = *e.denom();
        let mut depth = 0;
        while den % p == 0 {
            den /= p;
            depth += 1;
        }
        if den != 1 {
            return Err(Error::RootNotRepresentable(format!("t^({e}) is not in the perfect hull")));
        }
        let scaled = e * Rat::from_integer(p.pow(depth));
        let k = *scaled.numer() as i64;
        Ok(EqElem::new(depth, RatFunc::monomial(&c.ctx, c.v, k)))
    }

    pub fn t(ctx: &Arc<GfCtx>) -> Self {
        EqElem::new(0, RatFunc::monomial(ctx, 1, 1))
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn ratfunc(&self) -> &RatFunc {
        &self.f
    }

    fn unit(&self) -> i128 {
        (self.f.ctx().p() as i128).pow(self.depth)
    }

    fn minimized(mut self) -> Self {
        let p = self.f.ctx().p() as usize;
        while self.depth > 0 {
            match self.f.deflate(p) {
                Some(g) => {
                    self.f = g;
                    self.depth -= 1;
                }
                None => break,
            }
        }
        if self.f.is_zero() {
            self.depth = 0;
        }
        self
    }

    fn at_depth(&self, d: u32) -> RatFunc {
        let p = self.f.ctx().p() as usize;
        self.f.inflate(p.pow(d - self.depth))
    }

    fn combine(&self, o: &Self, op: impl Fn(&RatFunc, &RatFunc) -> RatFunc) -> Self {
        let d = self.depth.max(o.depth);
        EqElem::new(d, op(&self.at_depth(d), &o.at_depth(d)))
    }

    /// The `p`-th power, exact.
    pub fn frobenius(&self) -> Self {
        let k = self.f.ctx().clone();
        let p = k.p() as usize;
        let f = self.f.map_coeffs(|a| k.frobenius(a)).inflate(p);
        EqElem::new(self.depth, f)
    }

    /// Terms `(exponent, coefficient)` when `f` is a Laurent polynomial.
    pub fn terms(&self) -> Option<Vec<(Rat, Fq)>> {
        let u = self.unit();
        let k = self.f.ctx();
        Some(
            self.f
                .laurent_terms()?
                .into_iter()
                .map(|(e, a)| (rat(e as i128, u), k.elem(a)))
                .collect(),
        )
    }

    fn fmt_poly(&self, poly: &Poly) -> String {
        let u = self.unit();
        let k = self.f.ctx();
        let terms: Vec<String> = poly
            .coeffs()
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &a)| a != 0)
            .map(|(i, &a)| fmt_t_term(k, a, rat(i as i128, u)))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// `c*t^(e)` in the textual syntax shared with the parser.
pub(crate) fn fmt_t_term(k: &GfCtx, a: u32, e: Rat) -> String {
    let coef = k.fmt_elem(a);
    if e == Rat::from_integer(0) {
        return coef;
    }
    let mon = if e == Rat::from_integer(1) {
        "t".to_string()
    } else if e.is_integer() && e > Rat::from_integer(0) {
        format!("t^{e}")
    } else {
        format!("t^({e})")
    };
    if a == 1 {
        mon
    } else {
        format!("{coef}*{mon}")
    }
}

impl fmt::Display for EqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(terms) = self.terms() {
            if terms.is_empty() {
                return write!(f, "0");
            }
            let k = self.f.ctx();
            let s: Vec<String> = terms.iter().rev().map(|(e, a)| fmt_t_term(k, a.v, *e)).collect();
            return write!(f, "{}", s.join(" + "));
        }
        write!(f, "({})/({})", self.fmt_poly(self.f.num()), self.fmt_poly(self.f.den()))
    }
}

impl fmt::Debug for EqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Coeff for EqElem {
    type Ctx = Arc<GfCtx>;

    fn ctx(&self) -> Arc<GfCtx> {
        self.f.ctx().clone()
    }
    fn zero(ctx: &Arc<GfCtx>) -> Self {
        EqElem { depth: 0, f: RatFunc::zero(ctx) }
    }
    fn one(ctx: &Arc<GfCtx>) -> Self {
        EqElem { depth: 0, f: RatFunc::one(ctx) }
    }
    fn from_int(ctx: &Arc<GfCtx>, n: i64) -> Self {
        EqElem::new(0, RatFunc::constant(&ctx.elem(ctx.from_int(n))))
    }
    fn lift(_ctx: &Arc<GfCtx>, d: &Fq) -> Self {
        EqElem::new(0, RatFunc::constant(d))
    }
    fn residue_field(ctx: &Arc<GfCtx>) -> Arc<GfCtx> {
        ctx.clone()
    }
    fn prime(ctx: &Arc<GfCtx>) -> u32 {
        ctx.p()
    }
    fn is_equal_char() -> bool {
        true
    }

    fn is_zero(&self) -> bool {
        self.f.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        self.combine(o, |a, b| a.add(b))
    }
    fn sub(&self, o: &Self) -> Self {
        self.combine(o, |a, b| a.sub(b))
    }
    fn mul(&self, o: &Self) -> Self {
        self.combine(o, |a, b| a.mul(b))
    }
    fn neg(&self) -> Self {
        EqElem { depth: self.depth, f: self.f.neg() }
    }
    fn inv(&self) -> Result<Self> {
        let f = self.f.inv().ok_or(Error::DivisionByZero)?;
        Ok(EqElem { depth: self.depth, f })
    }
    fn value(&self) -> Result<Rat> {
        let o = self.f.ord0().ok_or(Error::ZeroHasNoValue)?;
        Ok(rat(o as i128, self.unit()))
    }
    fn precision(&self) -> Option<Rat> {
        None
    }
    fn pth_root(&self) -> Result<Self> {
        let k = self.f.ctx().clone();
        let f = self.f.map_coeffs(|a| k.frobenius_inv(a));
        Ok(EqElem::new(self.depth + 1, f))
    }
    fn residue(&self) -> Result<Fq> {
        let k = self.f.ctx();
        match self.f.ord0() {
            None => Ok(k.elem(0)),
            Some(o) if o < 0 => Err(Error::NegativeValue),
            Some(o) if o > 0 => Ok(k.elem(0)),
            Some(_) => Ok(k.elem(self.f.at_zero().unwrap())),
        }
    }
    fn pow(&self, e: u64) -> Self {
        EqElem::new(self.depth, self.f.pow(e))
    }
}

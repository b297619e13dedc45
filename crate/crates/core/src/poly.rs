//! Dense univariate polynomials and reduced rational functions over `F_q`.

use std::fmt;
use std::sync::Arc;

use crate::gf::{Fq, GfCtx};

#[derive(Clone)]
pub struct Poly {
    pub ctx: Arc<GfCtx>,
    /// Low degree first, no trailing zeros.
    c: Vec<u32>,
}

impl PartialEq for Poly {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}
impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("X"))
    }
}

impl Poly {
    pub fn new(ctx: &Arc<GfCtx>, mut c: Vec<u32>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { ctx: ctx.clone(), c }
    }

    pub fn zero(ctx: &Arc<GfCtx>) -> Self {
        Poly::new(ctx, vec![])
    }

    pub fn one(ctx: &Arc<GfCtx>) -> Self {
        Poly::new(ctx, vec![1])
    }

    pub fn constant(ctx: &Arc<GfCtx>, a: u32) -> Self {
        Poly::new(ctx, vec![a])
    }

    pub fn monomial(ctx: &Arc<GfCtx>, a: u32, deg: usize) -> Self {
        let mut c = vec![0; deg + 1];
        c[deg] = a;
        Poly::new(ctx, c)
    }

    pub fn x(ctx: &Arc<GfCtx>) -> Self {
        Poly::monomial(ctx, 1, 1)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> u32 {
        self.c.last().copied().unwrap_or(0)
    }

    /// Order of vanishing at 0.
    pub fn ord0(&self) -> Option<usize> {
        self.c.iter().position(|&a| a != 0)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let k = &self.ctx;
        Poly::new(k, (0..n).map(|i| k.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(&self.ctx, self.c.iter().map(|&a| self.ctx.neg(a)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: u32) -> Poly {
        Poly::new(&self.ctx, self.c.iter().map(|&a| self.ctx.mul(a, s)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let k = &self.ctx;
        let mut out = vec![0u32; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(a, b));
            }
        }
        Poly::new(k, out)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.c);
        Poly::new(&self.ctx, c)
    }

    /// Division with remainder; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let k = &self.ctx;
        let dd = d.degree().expect("polynomial division by zero");
        let inv_lead = k.inv(d.lead()).unwrap();
        let mut rem = self.c.clone();
        if rem.len() <= dd {
            return (Poly::zero(k), self.clone());
        }
        let mut quo = vec![0u32; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = k.mul(rem[i], inv_lead);
            if c == 0 {
                continue;
            }
            quo[i - dd] = c;
            for (j, &b) in d.c.iter().enumerate() {
                rem[i - dd + j] = k.sub(rem[i - dd + j], k.mul(c, b));
            }
        }
        (Poly::new(k, quo), Poly::new(k, rem))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> Poly {
        match self.ctx.inv(self.lead()) {
            Some(i) => self.scale(i),
            None => self.clone(),
        }
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*o = g` monic.
    pub fn ext_gcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let k = &self.ctx;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(k), Poly::zero(k));
        let (mut t0, mut t1) = (Poly::zero(k), Poly::one(k));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = r1;
            r1 = r;
            let s = s0.sub(&q.mul(&s1));
            s0 = s1;
            s1 = s;
            let t = t0.sub(&q.mul(&t1));
            t0 = t1;
            t1 = t;
        }
        let inv = k.inv(r0.lead()).unwrap_or(1);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Poly {
        let k = &self.ctx;
        Poly::new(
            k,
            self.c.iter().enumerate().skip(1).map(|(i, &a)| k.mul(a, k.from_int(i as i64))).collect(),
        )
    }

    /// Substitutes `X -> X^m`.
    pub fn inflate(&self, m: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0u32; (self.c.len() - 1) * m + 1];
        for (i, &a) in self.c.iter().enumerate() {
            c[i * m] = a;
        }
        Poly::new(&self.ctx, c)
    }

    /// Inverse of `inflate`, when every exponent is divisible by `m`.
    pub fn deflate(&self, m: usize) -> Option<Poly> {
        if self.c.iter().enumerate().any(|(i, &a)| a != 0 && i % m != 0) {
            return None;
        }
        Some(Poly::new(&self.ctx, self.c.iter().step_by(m).copied().collect()))
    }

    pub fn map_coeffs(&self, f: impl Fn(u32) -> u32) -> Poly {
        Poly::new(&self.ctx, self.c.iter().map(|&a| f(a)).collect())
    }

    pub fn eval(&self, x: u32) -> u32 {
        let k = &self.ctx;
        self.c.iter().rev().fold(0, |acc, &a| k.add(k.mul(acc, x), a))
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            let coef = self.ctx.fmt_elem(a);
            let mon = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            terms.push(match (mon.is_empty(), a == 1) {
                (true, _) => coef,
                (false, true) => mon,
                (false, false) => format!("{coef}*{mon}"),
            });
        }
        terms.join(" + ")
    }
}

/// `num / den` with `den` monic and `gcd(num, den) = 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("X"))
    }
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc { den: Poly::one(&num.ctx), num };
        }
        let g = num.gcd(&den);
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        let inv = d.ctx.inv(d.lead()).unwrap();
        RatFunc { num: n.scale(inv), den: d.scale(inv) }
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::one(&p.ctx);
        RatFunc { num: p, den: one }
    }

    pub fn zero(ctx: &Arc<GfCtx>) -> Self {
        RatFunc::from_poly(Poly::zero(ctx))
    }

    pub fn one(ctx: &Arc<GfCtx>) -> Self {
        RatFunc::from_poly(Poly::one(ctx))
    }

    pub fn constant(c: &Fq) -> Self {
        RatFunc::from_poly(Poly::constant(&c.ctx, c.v))
    }

    /// `a * X^e` for any integer `e`.
    pub fn monomial(ctx: &Arc<GfCtx>, a: u32, e: i64) -> Self {
        if e >= 0 {
            RatFunc::from_poly(Poly::monomial(ctx, a, e as usize))
        } else {
            RatFunc::new(Poly::constant(ctx, a), Poly::monomial(ctx, 1, (-e) as usize))
        }
    }

    pub fn ctx(&self) -> &Arc<GfCtx> {
        &self.num.ctx
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone());
        }
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Option<RatFunc> {
        (!self.is_zero()).then(|| RatFunc::new(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: u64) -> RatFunc {
        RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Order of vanishing at `X = 0` (negative for a pole).
    pub fn ord0(&self) -> Option<i64> {
        Some(self.num.ord0()? as i64 - self.den.ord0().unwrap() as i64)
    }

    /// Value of the rational function at `X = 0`, when defined.
    pub fn at_zero(&self) -> Option<u32> {
        let d0 = self.den.coeff(0);
        self.ctx().inv(d0).map(|i| self.ctx().mul(self.num.coeff(0), i))
    }

    /// Leading coefficient of the expansion at `X = 0`.
    pub fn lowest_coeff(&self) -> Option<u32> {
        let n = self.num.coeff(self.num.ord0()?);
        let d = self.den.coeff(self.den.ord0().unwrap());
        Some(self.ctx().mul(n, self.ctx().inv(d).unwrap()))
    }

    pub fn inflate(&self, m: usize) -> RatFunc {
        RatFunc { num: self.num.inflate(m), den: self.den.inflate(m) }
    }

    pub fn deflate(&self, m: usize) -> Option<RatFunc> {
        Some(RatFunc { num: self.num.deflate(m)?, den: self.den.deflate(m)? })
    }

    pub fn map_coeffs(&self, f: impl Fn(u32) -> u32 + Copy) -> RatFunc {
        RatFunc::new(self.num.map_coeffs(f), self.den.map_coeffs(f))
    }

    pub fn derivative(&self) -> RatFunc {
        RatFunc::new(
            self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative())),
            self.den.mul(&self.den),
        )
    }

    /// If the denominator is a power of `X`, the Laurent terms `(exp, coeff)`.
    pub fn laurent_terms(&self) -> Option<Vec<(i64, u32)>> {
        let s = self.den.degree().unwrap();
        if self.den != Poly::monomial(self.ctx(), 1, s) {
            return None;
        }
        Some(
            self.num
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(i, &a)| (i as i64 - s as i64, a))
                .collect(),
        )
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.den.is_one() {
            self.num.display_in(var)
        } else {
            format!("({})/({})", self.num.display_in(var), self.den.display_in(var))
        }
    }
}

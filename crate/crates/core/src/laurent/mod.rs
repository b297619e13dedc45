//! Laurent polynomials `K[x, 1/x]` under the Gauss valuation, with `x`
//! either value-transcendental (VT) or residue-transcendental (RT).

mod ops;

pub use ops::Residue;

use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::values::{Lambda, Rat, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    VT,
    RT,
}

#[derive(Clone, Copy, Debug)]
pub struct ValConfig {
    pub mode: Mode,
    pub vx: Value,
}

impl ValConfig {
    /// Value-transcendental `x`; `vx` must have a nonzero `lambda`-part.
    pub fn vt(vx: Value) -> Result<Self> {
        if vx.b == Rat::from_integer(0) {
            return Err(Error::ConfigMismatch(format!("VT mode needs irrational vx, got {vx}")));
        }
        Ok(ValConfig { mode: Mode::VT, vx })
    }

    pub fn rt(lambda: Lambda) -> Self {
        ValConfig { mode: Mode::RT, vx: Value::with_lambda(0.into(), 0.into(), lambda) }
    }

    /// The value `a` of `K`, embedded in the value group of `F`.
    pub fn scalar(&self, a: Rat) -> Value {
        Value::with_lambda(a, Rat::from_integer(0), self.vx.lambda())
    }

    pub fn lambda(&self) -> Lambda {
        self.vx.lambda()
    }
}

/// `sum c_i x^i` with nonzero coefficients. `floor`, when present, bounds
/// from below the value of coefficients lost to precision.
#[derive(Clone)]
pub struct LaurentPoly<C: Coeff> {
    ctx: C::Ctx,
    config: ValConfig,
    terms: BTreeMap<i64, C>,
    floor: Option<Value>,
}

impl<C: Coeff> PartialEq for LaurentPoly<C> {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms && self.floor == o.floor
    }
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero(ctx: &C::Ctx, config: ValConfig) -> Self {
        LaurentPoly { ctx: ctx.clone(), config, terms: BTreeMap::new(), floor: None }
    }

    pub fn monomial(ctx: &C::Ctx, config: ValConfig, c: C, k: i64) -> Self {
        let mut f = Self::zero(ctx, config);
        f.put(k, c);
        f
    }

    pub fn constant(ctx: &C::Ctx, config: ValConfig, c: C) -> Self {
        Self::monomial(ctx, config, c, 0)
    }

    pub fn one(ctx: &C::Ctx, config: ValConfig) -> Self {
        Self::constant(ctx, config, C::one(ctx))
    }

    pub fn x(ctx: &C::Ctx, config: ValConfig) -> Self {
        Self::monomial(ctx, config, C::one(ctx), 1)
    }

    pub fn from_terms(ctx: &C::Ctx, config: ValConfig, terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut f = Self::zero(ctx, config);
        for (k, c) in terms {
            let s = match f.terms.remove(&k) {
                Some(old) => old.add(&c),
                None => c,
            };
            f.put(k, s);
        }
        f
    }

    /// Insert a coefficient, dropping zeros and recording lost precision.
    fn put(&mut self, k: i64, c: C) {
        if c.is_zero() {
            if let Some(p) = c.precision() {
                self.lower_floor(self.config.scalar(p) + self.config.vx.times(k));
            }
        } else {
            self.terms.insert(k, c);
        }
    }

    fn lower_floor(&mut self, v: Value) {
        self.floor = Some(match self.floor {
            Some(f) if f <= v => f,
            _ => v,
        });
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn config(&self) -> ValConfig {
        self.config
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn support(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    pub fn coeff(&self, k: i64) -> Option<&C> {
        self.terms.get(&k)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// No nonzero coefficient remains (possibly only to precision).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn floor(&self) -> Option<Value> {
        self.floor
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &o.terms {
            let s = match out.terms.remove(&k) {
                Some(old) => old.add(c),
                None => c.clone(),
            };
            out.put(k, s);
        }
        if let Some(f) = o.floor {
            out.lower_floor(f);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(&self.ctx, self.config);
        let mut acc: BTreeMap<i64, C> = BTreeMap::new();
        for (&i, a) in &self.terms {
            for (&j, b) in &o.terms {
                let prod = a.mul(b);
                let e = acc.entry(i + j).or_insert_with(|| C::zero(&self.ctx));
                *e = e.add(&prod);
            }
        }
        for (k, c) in acc {
            out.put(k, c);
        }
        for (fl, other) in [(self.floor, o), (o.floor, self)] {
            if let Some(f) = fl {
                if let Some(v) = other.value_lower_bound() {
                    out.lower_floor(f + v);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_coeffs(|a| a.mul(c))
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut out = Self::zero(&self.ctx, self.config);
        out.terms = self.terms.iter().map(|(&i, c)| (i + k, c.clone())).collect();
        out.floor = self.floor.map(|f| f + self.config.vx.times(k));
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Self::zero(&self.ctx, self.config);
        for (&k, c) in &self.terms {
            out.put(k, f(c));
        }
        if let Some(fl) = self.floor {
            out.lower_floor(fl);
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.ctx, self.config);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Value of the monomial `c x^k`.
    pub fn monomial_value(&self, c: &C, k: i64) -> Value {
        self.config.scalar(c.value().expect("nonzero coefficient")) + self.config.vx.times(k)
    }

    /// Keep only the monomials of value at most `alpha`.
    pub fn truncate(&self, alpha: Value) -> Self {
        let mut out = Self::zero(&self.ctx, self.config);
        for (&k, c) in &self.terms {
            if self.monomial_value(c, k) <= alpha {
                out.terms.insert(k, c.clone());
            }
        }
        out.floor = self.floor;
        out
    }
}

impl<C: Coeff> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&k, c)| {
                let s = c.to_string();
                let s = if s.contains(" + ") { format!("({s})") } else { s };
                match k {
                    0 => s,
                    _ if s == "1" => format!("x^({k})"),
                    _ => format!("{s}*x^({k})"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Coeff> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")?;
        if let Some(fl) = self.floor {
            write!(f, " + O{fl}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;

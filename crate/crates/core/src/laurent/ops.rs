use super::{LaurentPoly, Mode};
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::gf::Fq;
use crate::poly::{Poly, RatFunc};
use crate::values::Value;

/// Residue of an element of the valuation ring of `F`.
#[derive(Clone, Debug, PartialEq)]
pub enum Residue {
    /// VT mode: `F-bar = K-bar`.
    Const(Fq),
    /// RT mode: `F-bar = K-bar(x-bar)`.
    Func(RatFunc),
}

impl<C: Coeff> LaurentPoly<C> {
    /// `min(value of the monomials, floor)`, or `None` for an exact zero.
    pub fn value_lower_bound(&self) -> Option<Value> {
        let m = self.terms().map(|(k, c)| self.monomial_value(c, k)).min();
        match (m, self.floor) {
            (Some(a), Some(f)) => Some(a.min(f)),
            (a, f) => a.or(f),
        }
    }

    /// Precision to which this polynomial is known: the floor, lowered by
    /// the absolute precision of each coefficient.
    pub fn known_to(&self) -> Option<Value> {
        let mut out = self.floor;
        for (k, c) in self.terms() {
            if let Some(p) = c.precision() {
                let v = self.config.scalar(p) + self.config.vx.times(k);
                out = Some(out.map_or(v, |o| o.min(v)));
            }
        }
        out
    }

    /// The Gauss value, certified against the precision floor.
    pub fn gauss_value(&self) -> Result<Value> {
        let m = self.terms().map(|(k, c)| self.monomial_value(c, k)).min();
        match (m, self.floor) {
            (None, None) => Err(Error::ZeroHasNoValue),
            (None, Some(f)) => Err(Error::PrecisionExhausted(format!("zero to {f}"))),
            (Some(a), Some(f)) if f <= a => Err(Error::PrecisionExhausted(format!("value {a} not below floor {f}"))),
            (Some(a), _) => Ok(a),
        }
    }

    /// The unique exponent attaining the Gauss value (VT mode).
    pub fn lead_index(&self) -> Result<i64> {
        if self.config.mode != Mode::VT {
            return Err(Error::RtMode);
        }
        let g = self.gauss_value()?;
        Ok(self.terms().find(|(k, c)| self.monomial_value(c, *k) == g).unwrap().0)
    }

    pub fn residue_of(&self) -> Result<Residue> {
        let k = C::residue_field(self.ctx());
        if let Some(f) = self.floor {
            if f <= Value::zero() {
                return Err(Error::PrecisionExhausted(format!("residue needs floor above 0, have {f}")));
            }
        }
        if self.terms().any(|(i, c)| self.monomial_value(c, i).is_negative()) {
            return Err(Error::NegativeValue);
        }
        let zero_terms: Vec<(i64, Fq)> = self
            .terms()
            .filter(|(i, c)| self.monomial_value(c, *i).is_zero())
            .map(|(i, c)| Ok((i, c.residue()?)))
            .collect::<Result<_>>()?;
        match self.config.mode {
            Mode::VT => {
                let c = zero_terms.into_iter().find(|(i, _)| *i == 0).map(|(_, c)| c);
                Ok(Residue::Const(c.unwrap_or_else(|| k.elem(0))))
            }
            Mode::RT => {
                let lo = zero_terms.iter().map(|(i, _)| *i).min().unwrap_or(0).min(0);
                let hi = zero_terms.iter().map(|(i, _)| *i).max().unwrap_or(0);
                let mut num = vec![0u32; (hi - lo + 1) as usize];
                for (i, c) in &zero_terms {
                    num[(i - lo) as usize] = c.v;
                }
                let den = Poly::monomial(&k, 1, (-lo) as usize);
                Ok(Residue::Func(RatFunc::new(Poly::new(&k, num), den)))
            }
        }
    }

    /// `f = c x^k u` with `u` a 1-unit, reading `c x^k` off the unique
    /// lead monomial.
    pub fn monomial_split(&self) -> Result<(C, i64, Self)> {
        let k = self.lead_index()?;
        let c = self.coeff(k).unwrap().clone();
        let u = self.scale(&c.inv()?).shift(-k);
        Ok((c, k, u))
    }

    /// A lead monomial `c x^k` with `v(f/(c x^k) - 1) > 0`, in either mode.
    fn lead_monomial(&self) -> Result<(C, i64)> {
        if self.config.mode == Mode::VT {
            let k = self.lead_index()?;
            return Ok((self.coeff(k).unwrap().clone(), k));
        }
        let g = self.gauss_value()?;
        let lead: Vec<(i64, &C)> = self.terms().filter(|(i, c)| self.monomial_value(c, *i) == g).collect();
        if lead.len() != 1 {
            return Err(Error::RuleNotApplicable {
                rule: "approx_inverse".into(),
                violated: "residue of f is not a monomial, so 1/f is not approximable".into(),
            });
        }
        Ok((lead[0].1.clone(), lead[0].0))
    }

    /// `g` with `v(1/f - g) > alpha`, from the geometric expansion of the
    /// lead-monomial quotient, using the fewest terms that meet the bound.
    pub fn approx_inverse(&self, alpha: Value) -> Result<Self> {
        let (c, k) = self.lead_monomial()?;
        let cinv = c.inv()?;
        let vf = self.gauss_value()?;
        let psi = self.scale(&cinv).shift(-k).sub(&Self::one(self.ctx(), self.config));
        let base = Self::monomial(self.ctx(), self.config, cinv, -k);
        let Some(vpsi) = psi.value_lower_bound() else {
            return Ok(base);
        };
        if !vpsi.is_positive() {
            return Err(Error::PrecisionExhausted(format!("lead quotient not certified as a 1-unit ({vpsi})")));
        }
        // Terms beyond `target` do not affect the result modulo values > alpha.
        let target = alpha + vf;
        let mut n: i64 = 0;
        while vpsi.times(n + 1) <= target {
            n += 1;
        }
        let neg = psi.neg();
        let mut sum = Self::one(self.ctx(), self.config);
        let mut power = Self::one(self.ctx(), self.config);
        for _ in 0..n {
            power = power.mul(&neg).truncate(target);
            sum = sum.add(&power);
        }
        Ok(base.mul(&sum))
    }
}

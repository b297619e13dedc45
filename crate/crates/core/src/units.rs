//! 1-units modulo `p`-th powers: high-level roots, the four rewrite
//! rules, and the Artin-Schreier root approximation.

use serde_json::json;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::values::{rat, Rat, Value};

type L<C> = LaurentPoly<C>;

/// `p/(p-1)`: 1-units above this level are `p`-th powers.
pub fn threshold(p: u32) -> Rat {
    rat(p as i128, p as i128 - 1)
}

/// Precision at which certificates are built and replayed.
pub fn work_level(p: u32) -> Rat {
    threshold(p) + Rat::from_integer(1)
}

/// Exact zero counts as infinitely large.
fn above<C: Coeff>(f: &L<C>, t: Value) -> bool {
    f.value_lower_bound().is_none_or(|v| v > t)
}

fn frobenius<C: Coeff>(a: &L<C>, p: u32) -> L<C> {
    L::from_terms(a.ctx(), a.config(), a.terms().map(|(i, c)| (i * p as i64, c.pow(p as u64))))
}

/// A root approximation of `X^p - X = a` with its remainder.
#[derive(Clone, Debug)]
pub struct AsRoot<C: Coeff> {
    pub theta: L<C>,
    /// `theta^p - theta - a`, equal to `-a^(p^(n+1))`.
    pub remainder: L<C>,
    pub terms: usize,
}

/// `theta = -sum_{i<=n} a^(p^i)` with `n` minimal such that the remainder
/// `-a^(p^(n+1))` has value above `alpha`.
pub fn as_root_approx<C: Coeff>(a: &L<C>, alpha: Value) -> Result<AsRoot<C>> {
    if !C::is_equal_char() {
        return Err(Error::CharacteristicMismatch("Artin-Schreier roots need equal characteristic".into()));
    }
    let va = a.gauss_value()?;
    if !va.is_positive() {
        return Err(Error::PositiveValueRequired);
    }
    let p = C::prime(a.ctx());
    let mut theta = L::zero(a.ctx(), a.config());
    let mut power = a.clone();
    let mut terms = 0;
    loop {
        theta = theta.sub(&power);
        terms += 1;
        let next = frobenius(&power, p);
        if next.gauss_value()? > alpha {
            return Ok(AsRoot { theta, remainder: next.neg(), terms });
        }
        power = next;
    }
}

/// `w` with `w^p = u` modulo values above `alpha_work`, for a 1-unit `u`
/// of level above `p/(p-1)`. Substituting `X = CY + 1` turns `X^p = u`
/// into `Y = Y^p + g(Y) - b/C^p`, iterated from `Y = 0`.
pub fn pth_root_high_level<C: Coeff>(u: &L<C>, alpha_work: Value) -> Result<L<C>> {
    let ctx = u.ctx();
    let cfg = u.config();
    let p = C::prime(ctx);
    let c = C::c_const(ctx)?;
    let one = L::one(ctx, cfg);
    let thr = cfg.scalar(threshold(p));
    let b = u.sub(&one);
    let Some(level) = b.value_lower_bound() else {
        return Ok(one);
    };
    if level <= thr {
        return Err(Error::LevelTooLow { level: level.to_string(), threshold: thr.to_string() });
    }
    let cinv = c.inv()?;
    let beta = b.scale(&cinv.pow(p as u64));
    let g: Vec<C> = (2..p as u64).map(|i| C::from_int(ctx, binom(p as u64, i) as i64).mul(&cinv.pow(p as u64 - i))).collect();
    let tau = alpha_work - thr;
    let limit = 4 * (tau.approx().max(1.0) as usize + 4) * p as usize;
    let mut y = L::zero(ctx, cfg);
    for _ in 0..limit {
        let mut next = y.pow(p as u64).sub(&beta);
        for (i, gi) in g.iter().enumerate() {
            next = next.add(&y.pow(i as u64 + 2).scale(gi));
        }
        let next = next.truncate(tau);
        if next == y {
            break;
        }
        y = next;
    }
    Ok(y.scale(&c).add(&one))
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Replayable evidence that `input = replacement * kappa * witness^p`
/// modulo a 1-unit of level above `p/(p-1)` (hence modulo `p`-th powers).
/// `kappa` is a constant of `K`, a `p`-th power there.
#[derive(Clone, Debug, PartialEq)]
pub struct PthPowerCertificate<C: Coeff> {
    pub rule: String,
    pub input: L<C>,
    pub replacement: L<C>,
    pub kappa: C,
    pub witness: L<C>,
    /// Value of `input - replacement*kappa*witness^p` relative to `input`;
    /// `None` when the relation is exact.
    pub checked_to: Option<Value>,
}

/// Relative value of the defect of the relation, `None` if exact.
pub fn relation_gap<C: Coeff>(input: &L<C>, replacement: &L<C>, kappa: &C, witness: &L<C>) -> Result<Option<Value>> {
    let p = C::prime(input.ctx());
    let rhs = replacement.scale(kappa).mul(&witness.pow(p as u64));
    let diff = input.sub(&rhs);
    match diff.value_lower_bound() {
        None => Ok(None),
        Some(v) => Ok(Some(v - input.gauss_value()?)),
    }
}

impl<C: Coeff> PthPowerCertificate<C> {
    /// Builds the witness `w0 * root(input / (replacement * kappa * w0^p))`.
    pub fn build(rule: &str, input: &L<C>, replacement: &L<C>, kappa: C, w0: &L<C>) -> Result<Self> {
        let ctx = input.ctx();
        let cfg = input.config();
        let p = C::prime(ctx);
        let aw = cfg.scalar(work_level(p));
        let vin = input.gauss_value()?;
        if relation_gap(input, replacement, &kappa, w0)?.is_none() {
            let (input, replacement, witness) = (input.clone(), replacement.clone(), w0.clone());
            return Ok(PthPowerCertificate { rule: rule.into(), input, replacement, kappa, witness, checked_to: None });
        }
        let d = replacement.scale(&kappa).mul(&w0.pow(p as u64));
        let q = input.mul(&d.approx_inverse(aw - vin)?).truncate(aw);
        let root = pth_root_high_level(&q, aw)?;
        let witness = w0.mul(&root);
        let checked_to = relation_gap(input, replacement, &kappa, &witness)?;
        Ok(PthPowerCertificate { rule: rule.into(), input: input.clone(), replacement: replacement.clone(), kappa, witness, checked_to })
    }

    /// Replays the relation; the recorded gap must match and clear the
    /// threshold.
    pub fn verify(&self) -> Result<()> {
        if self.kappa.is_zero() {
            return Err(Error::VerificationFailed("kappa is zero".into()));
        }
        let gap = relation_gap(&self.input, &self.replacement, &self.kappa, &self.witness)?;
        if gap != self.checked_to {
            return Err(Error::VerificationFailed(format!(
                "rule {}: recorded checked_to {} but replay gives {}",
                self.rule,
                fmt_gap(&self.checked_to),
                fmt_gap(&gap)
            )));
        }
        let thr = self.input.config().scalar(threshold(C::prime(self.input.ctx())));
        match gap {
            Some(g) if g <= thr => Err(Error::VerificationFailed(format!("rule {}: gap {g} not above {thr}", self.rule))),
            _ => Ok(()),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "rule": self.rule,
            "input": self.input.to_string(),
            "replacement": self.replacement.to_string(),
            "kappa": self.kappa.to_string(),
            "witness": self.witness.to_string(),
            "checked_to": fmt_gap(&self.checked_to),
        })
    }
}

pub fn fmt_gap(g: &Option<Value>) -> String {
    match g {
        None => "exact".into(),
        Some(v) => v.to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// `1 + b + c -> 1 + b` when `v(c) > p/(p-1)`.
    A,
    /// `1 + b + c -> 1 + b` when `1 + c` is a `p`-th power and `v(bc) > p/(p-1)`.
    B,
    /// `1 + c^p + pc -> 1` when `p v(c) > 1`.
    C,
    /// `1 + b - pc -> 1 + b + c^p` when `v(b) >= 1/(p-1)` and `p v(c) > 1`.
    D,
}

fn not_applicable(rule: Rule, violated: &str) -> Error {
    Error::RuleNotApplicable { rule: format!("{rule:?}"), violated: violated.into() }
}

/// Applies one rewrite rule, returning the replacement and its certificate.
/// `root_c` is the given `p`-th root of `1 + c` for rule B.
pub fn rewrite_one_unit<C: Coeff>(rule: Rule, b: &L<C>, c: &L<C>, root_c: Option<&L<C>>) -> Result<(L<C>, PthPowerCertificate<C>)> {
    let ctx = b.ctx();
    let cfg = b.config();
    let p = C::prime(ctx);
    let one = L::one(ctx, cfg);
    let thr = cfg.scalar(threshold(p));
    let unit_v = cfg.scalar(Rat::from_integer(1));
    let pc = c.scale(&C::from_int(ctx, p as i64));
    let kappa = C::one(ctx);
    let (input, replacement, w0) = match rule {
        Rule::A => {
            if !above(c, thr) {
                return Err(not_applicable(rule, "v(c) > p/(p-1) vp"));
            }
            (one.add(b).add(c), one.add(b), one.clone())
        }
        Rule::B => {
            let root = root_c.ok_or_else(|| not_applicable(rule, "a p-th root of 1 + c must be supplied"))?;
            let g = relation_gap(&one.add(c), &one, &kappa, root)?;
            if g.is_some_and(|g| g <= thr) {
                return Err(not_applicable(rule, "1 + c in (K^x)^p (supplied root does not replay)"));
            }
            if !above(&b.mul(c), thr) {
                return Err(not_applicable(rule, "v(bc) > p/(p-1) vp"));
            }
            (one.add(b).add(c), one.add(b), root.clone())
        }
        Rule::C => {
            if !above(&c.pow(p as u64), unit_v) {
                return Err(not_applicable(rule, "v(c^p) > vp"));
            }
            (one.add(&c.pow(p as u64)).add(&pc), one.clone(), one.add(c))
        }
        Rule::D => {
            let low = cfg.scalar(rat(1, p as i128 - 1));
            if b.value_lower_bound().is_some_and(|v| v < low) {
                return Err(not_applicable(rule, "v(b) >= vp/(p-1)"));
            }
            if !above(&c.pow(p as u64), unit_v) {
                return Err(not_applicable(rule, "v(c^p) > vp"));
            }
            let aw = cfg.scalar(work_level(p));
            let w0 = one.add(c).approx_inverse(aw)?;
            (one.add(b).sub(&pc), one.add(b).add(&c.pow(p as u64)), w0)
        }
    };
    let cert = PthPowerCertificate::build(&format!("{rule:?}"), &input, &replacement, kappa, &w0)?;
    if cert.checked_to.is_some_and(|g| g <= thr) {
        return Err(not_applicable(rule, "certificate does not clear p/(p-1) vp"));
    }
    Ok((replacement, cert))
}

#[cfg(test)]
mod tests;

//! Replay of engine output read back as data: certificate chains, traces,
//! and value witnesses recomputed from normal forms.

use crate::coeff::{Coeff, EqElem, MixedElem};
use crate::engine_vt::AsStep;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::units::PthPowerCertificate;
use crate::values::{rat, Rat, SubgroupSpec, Value};

use super::verify_value_witness;

/// Rule names in the order they may occur along a chain.
pub const RULES: [&str; 6] = ["split", "residue", "A", "descent", "absorb", "D"];

fn fail<T>(s: String) -> Result<T> {
    Err(Error::VerificationFailed(s))
}

/// Rule names are known, occur in order, the single-use ones once, and
/// `kappa != 1` exactly on `absorb` and possibly on `split`.
pub fn check_rules<C: Coeff>(certs: &[PthPowerCertificate<C>]) -> Result<()> {
    let mut last = 0;
    let mut seen = [0usize; RULES.len()];
    for (i, c) in certs.iter().enumerate() {
        let Some(r) = RULES.iter().position(|n| *n == c.rule) else {
            return fail(format!("certificate {i}: unknown rule {:?}", c.rule));
        };
        if r < last {
            return fail(format!("certificate {i}: rule {} out of order", c.rule));
        }
        seen[r] += 1;
        if seen[r] > 1 && matches!(RULES[r], "split" | "residue" | "A" | "absorb") {
            return fail(format!("certificate {i}: rule {} used twice", c.rule));
        }
        if !matches!(RULES[r], "split" | "absorb") && !c.kappa.is_one() {
            return fail(format!("certificate {i}: rule {} with kappa != 1", c.rule));
        }
        if RULES[r] == "absorb" && c.kappa.is_one() {
            return fail(format!("certificate {i}: absorb with kappa = 1"));
        }
        last = r;
    }
    Ok(())
}

/// Each certificate continues from the previous replacement, replays, and
/// the chain runs from `input` to `output`.
pub fn check_chain<C: Coeff>(input: &LaurentPoly<C>, certs: &[PthPowerCertificate<C>], output: &LaurentPoly<C>) -> Result<()> {
    check_rules(certs)?;
    let mut cur = input;
    for (i, c) in certs.iter().enumerate() {
        if &c.input != cur {
            return fail(format!("certificate {i} ({}): input does not continue the chain", c.rule));
        }
        c.verify().map_err(|e| Error::VerificationFailed(format!("certificate {i} ({}): {e}", c.rule)))?;
        cur = &c.replacement;
    }
    if cur != output {
        return fail("chain does not end at the reported output".into());
    }
    Ok(())
}

/// Applies the trace to `input`. A stripped part must have positive value,
/// so that `X^p - X = part` has a root in the henselian field.
pub fn replay_as(input: &LaurentPoly<EqElem>, trace: &[AsStep], output: &LaurentPoly<EqElem>) -> Result<()> {
    let p = input.ctx().p() as u64;
    let mut cur = input.clone();
    for (i, s) in trace.iter().enumerate() {
        cur = match s {
            AsStep::Strip { part } => {
                if part.is_zero() || !part.gauss_value()?.is_positive() {
                    return fail(format!("step {i}: stripped part {part} does not have positive value"));
                }
                cur.sub(part)
            }
            AsStep::Shift { d } => cur.sub(&d.pow(p)).add(d),
        };
    }
    if &cur != output {
        return fail("trace does not reproduce the reported output".into());
    }
    Ok(())
}

/// `<(1/L, 0), vx>` with `L = p * lcm` of the given value denominators.
fn lattice<C: Coeff>(f: &LaurentPoly<C>, p: u32, extra: &[Rat]) -> Result<SubgroupSpec> {
    let mut l = 1i128;
    for (_, c) in f.terms() {
        l = num_integer::lcm(l, *c.value()?.denom());
    }
    for r in extra {
        l = num_integer::lcm(l, *r.denom());
    }
    let cfg = f.config();
    Ok(SubgroupSpec::new(vec![cfg.scalar(rat(1, p as i128 * l)), cfg.vx]))
}

fn least_nonconstant<C: Coeff>(f: &LaurentPoly<C>) -> Result<(i64, C)> {
    f.terms()
        .filter(|(i, _)| *i != 0)
        .min_by_key(|(i, c)| f.monomial_value(c, *i))
        .map(|(i, c)| (i, c.clone()))
        .ok_or_else(|| Error::VerificationFailed("normal form has no nonconstant term".into()))
}

/// Value witness of an Artin-Schreier normal form `c0 + sum c_i x^i`:
/// `(v(c_j) + j vx) / p` at the least-valued term, which must avoid `pZ`.
pub fn as_vt_witness(output: &LaurentPoly<EqElem>) -> Result<(Value, SubgroupSpec)> {
    let p = output.ctx().p();
    let (j, c) = least_nonconstant(output)?;
    if j % p as i64 == 0 {
        return fail(format!("least-valued exponent {j} lies in pZ"));
    }
    let w = output.monomial_value(&c, j).scale(rat(1, p as i128));
    let group = lattice(output, p, &[])?;
    if !verify_value_witness(&w, &group, p) {
        return fail(format!("witness {w} does not generate a new coset of {group}"));
    }
    Ok((w, group))
}

/// Value witness of a Kummer normal form `x^m (1 + sum c_i x^i)`, given
/// the 1-unit: `(m/p) vx`, or `v(c_j)/p - vC + (j/p) vx` when `m = 0`.
pub fn kummer_vt_witness(m: i64, unit: &LaurentPoly<MixedElem>) -> Result<(Value, SubgroupSpec)> {
    let p = MixedElem::prime(unit.ctx());
    if !unit.coeff(0).is_some_and(|c| c.is_one()) {
        return fail("the 1-unit does not have constant term 1".into());
    }
    let cfg = unit.config();
    let vc = rat(1, p as i128 - 1);
    let pr = rat(1, p as i128);
    let w = if m != 0 {
        cfg.vx.scale(rat(m as i128, p as i128))
    } else {
        let (j, c) = least_nonconstant(unit)?;
        cfg.scalar(c.value()? * pr - vc) + cfg.vx.scale(rat(j as i128, p as i128))
    };
    let group = lattice(unit, p, &[vc])?;
    if !verify_value_witness(&w, &group, p) {
        return fail(format!("witness {w} does not generate a new coset of {group}"));
    }
    Ok((w, group))
}

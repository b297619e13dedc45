use crate::coeff::{Coeff, EqElem};
use crate::engine_vt::artin_schreier::split_positive;
use crate::engine_vt::AsStep;
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Residue};
use crate::poly::RatFunc;
use crate::values::Rat;

use super::{BasisSum, InsepResidue, RTClassification, RT_DESCENT_NOTE};

type L = LaurentPoly<EqElem>;

#[derive(Clone, Debug)]
pub struct AsRtOutcome {
    pub input: L,
    pub trace: Vec<AsStep>,
    /// `sum c_i u_i` with no `u_i != 1` a `p`-th power and all values at
    /// most 0.
    pub output: L,
    pub classification: RTClassification,
}

fn residue(a: &L) -> Result<RatFunc> {
    match a.residue_of()? {
        Residue::Func(f) => Ok(f),
        Residue::Const(_) => unreachable!("basis sums are in RT mode"),
    }
}

fn shift(cur: &L, d: L, trace: &mut Vec<AsStep>) -> L {
    let p = cur.ctx().p() as u64;
    let out = cur.sub(&d.pow(p)).add(&d);
    trace.push(AsStep::Shift { d });
    out
}

/// Normal form and classification of `X^p - X = a` over `F = K(x)^h`.
pub fn normalize_artin_schreier_rt(a: &BasisSum<'_, EqElem>) -> Result<AsRtOutcome> {
    let basis = a.basis;
    let ctx = a.poly.ctx();
    let cfg = a.poly.config();
    let mut trace = Vec::new();
    let mut cur = a.poly.clone();
    loop {
        let (keep, part) = split_positive(&cur);
        if !part.is_zero() {
            trace.push(AsStep::Strip { part });
            cur = keep;
            continue;
        }
        // Highest exponent first, so chains of p-th powers collapse in order.
        let pk = cur.terms().filter_map(|(k, c)| basis.root_exponent(k).map(|j| (j, c.clone()))).last();
        if let Some((j, c)) = pk {
            cur = shift(&cur, L::monomial(ctx, cfg, c.pth_root()?, j), &mut trace);
            continue;
        }
        break;
    }
    basis.check_support(&cur)?;

    let val = |c: &EqElem| c.value();
    let nonconst: Vec<(i64, Rat)> =
        cur.terms().filter(|(i, _)| *i != 0).map(|(i, c)| Ok((i, val(c)?))).collect::<Result<_>>()?;
    let vmin = nonconst.iter().map(|x| x.1).min();
    let zero = Rat::from_integer(0);
    let classification = match vmin {
        Some(vj) if vj < zero => {
            // Lift the constant above v(c_j) by p-th roots.
            while let Some(c0) = cur.coeff(0).cloned() {
                if val(&c0)? > vj {
                    break;
                }
                cur = shift(&cur, L::constant(ctx, cfg, c0.pth_root()?), &mut trace);
            }
            let j = nonconst.iter().find(|x| x.1 == vj).unwrap().0;
            let cj = cur.coeff(j).unwrap().clone();
            RTClassification::PurelyInsepResidue {
                chi_residue: InsepResidue { pth_power: residue(&cur.scale(&cj.inv()?))? },
            }
        }
        _ => {
            let c0 = cur.coeff(0).cloned();
            let rest = L::from_terms(ctx, cfg, cur.terms().filter(|(i, _)| *i != 0).map(|(i, c)| (i, c.clone())));
            match c0 {
                None if rest.is_zero() => RTClassification::TrivialExtension,
                Some(c) if rest.is_zero() => RTClassification::ConstantDescent { c },
                Some(c) if val(&c)? < zero => {
                    let then = RTClassification::SepResidue { as_residue: residue(&rest)? };
                    RTClassification::MixedDescent { c, then: Box::new(then) }
                }
                _ => RTClassification::SepResidue { as_residue: residue(&cur)? },
            }
        }
    };
    if let RTClassification::MixedDescent { then, .. } = &classification {
        assert!(!matches!(**then, RTClassification::MixedDescent { .. }), "descent nests at most once");
    }
    Ok(AsRtOutcome { input: a.poly.clone(), trace, output: cur, classification })
}

/// Data of `L = K(theta)`, `theta^p - theta = c`, for a constant `c` of
/// negative value.
#[derive(Clone, Debug, PartialEq)]
pub struct DescentRecord {
    pub original: EqElem,
    /// `d` of each shift `c -> c - d^p + d`.
    pub shifts: Vec<EqElem>,
    pub c: EqElem,
    pub note: String,
}

impl DescentRecord {
    pub fn polynomial(&self) -> String {
        format!("X^{} - X - ({})", self.c.ratfunc().ctx().p(), self.c)
    }
}

/// Reduces `c` while it is a `p`-th power in `F_q(t)` and records the
/// generator of the descended extension.
pub fn descend_constant(c: &EqElem) -> Result<DescentRecord> {
    if c.is_zero() || c.value()? >= Rat::from_integer(0) {
        return Err(Error::NonNegativeValue);
    }
    let ctx = c.ctx();
    // The part of positive value has a root in the henselian field.
    let mut cur = match c.terms() {
        Some(ts) => ts
            .into_iter()
            .filter(|(e, _)| *e <= Rat::from_integer(0))
            .fold(EqElem::zero(&ctx), |s, (e, a)| s.add(&EqElem::monomial(&a, e).unwrap())),
        None => c.clone(),
    };
    let mut shifts = Vec::new();
    while cur.depth() == 0 && cur.ratfunc().derivative().is_zero() {
        let d = cur.pth_root()?;
        cur = cur.sub(&d.pow(ctx.p() as u64)).add(&d);
        shifts.push(d);
    }
    Ok(DescentRecord { original: c.clone(), shifts, c: cur, note: RT_DESCENT_NOTE.into() })
}

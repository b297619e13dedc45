use crate::coeff::{Coeff, MixedElem};
use crate::engine_vt::kummer::Run;
use crate::engine_vt::KummerOptions;
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Residue};
use crate::poly::RatFunc;
use crate::units::{threshold, PthPowerCertificate};

use super::{BasisSum, InsepResidue, RTClassification};

type L = LaurentPoly<MixedElem>;

#[derive(Clone, Debug)]
pub struct KummerRtOutcome {
    pub input: L,
    /// Chained: each certificate's replacement is the next one's input.
    pub certificates: Vec<PthPowerCertificate<MixedElem>>,
    /// `r u`.
    pub output: L,
    /// `r = 1`, or `r` of value 0 with `r-bar` not a `p`-th power.
    pub r: L,
    pub u: L,
    pub classification: RTClassification,
}

fn residue(a: &L) -> Result<RatFunc> {
    match a.residue_of()? {
        Residue::Func(f) => Ok(f),
        Residue::Const(_) => unreachable!("basis sums are in RT mode"),
    }
}

/// Normal form `theta^p = r u` and classification of the Kummer
/// extension generated by a `p`-th root of `b` over `F = K(x)^h`.
pub fn normalize_kummer_rt(b: &BasisSum<'_, MixedElem>, opts: KummerOptions) -> Result<KummerRtOutcome> {
    let basis = b.basis;
    let a = &b.poly;
    if a.is_zero() {
        return Err(Error::ZeroGenerator);
    }
    let ctx = a.ctx();
    let cfg = a.config();
    let p = ctx.residue_field().p();
    let one = L::one(ctx, cfg);
    let mut run = Run::new(a);

    // b = c * b1 with v(c) = v(b); c is a p-th power in K.
    let c = MixedElem::p_pow(ctx, a.gauss_value()?.a)?;
    run.step_to("split", one.clone(), a.scale(&c.inv()?), c, &one)?;

    let rho = residue(&run.u)?;
    if !rho.derivative().is_zero() {
        // r = b1 already has a residue outside F-bar^p.
        let r = run.u.clone();
        run.step_to("residue", r, one.clone(), MixedElem::one(ctx), &one)?;
    } else {
        let lead = match rho.laurent_terms().as_deref() {
            Some([(e, a)]) => Some((*e, *a)),
            _ => None,
        };
        let Some((e, a)) = lead else {
            return Err(Error::BasisViolation(format!(
                "residue {} is the p-th power of a non-monomial; its quotient is not a basis sum",
                rho.display_in("x")
            )));
        };
        let k = ctx.residue_field();
        let g = MixedElem::lift(ctx, &k.elem(a));
        let b0 = L::monomial(ctx, cfg, MixedElem::lift(ctx, &k.elem(a).frobenius_inv()), e / p as i64);
        let u = run.u.scale(&g.inv()?).shift(-e);
        run.step_to("residue", one.clone(), u, MixedElem::one(ctx), &b0)?;
    }
    basis.check_support(&run.u)?;

    run.reduce_unit(&|i| basis.root_exponent(i), opts)?;
    basis.check_support(&run.u)?;
    basis.check_support(&run.prefix)?;

    let thr = threshold(p);
    let r = run.prefix.clone();
    let u = run.u.clone();
    let b_part = L::from_terms(ctx, cfg, u.terms().filter(|(i, _)| *i != 0).map(|(i, c)| (i, c.clone())));
    let classification = if r != one {
        RTClassification::KummerInsep { r_residue: residue(&r)? }
    } else if b_part.is_zero() {
        RTClassification::TrivialExtension
    } else {
        let vals: Vec<_> = b_part.terms().map(|(i, c)| Ok((i, c.value()?))).collect::<Result<_>>()?;
        let vmin = vals.iter().map(|x| x.1).min().unwrap();
        if vmin == thr {
            let cp = MixedElem::c_const(ctx)?.pow(p as u64).inv()?;
            RTClassification::SepResidue { as_residue: residue(&b_part.scale(&cp))? }
        } else {
            let j = vals.iter().find(|x| x.1 == vmin).unwrap().0;
            let cj = b_part.coeff(j).unwrap().inv()?;
            let chi = residue(&b_part.scale(&cj))?;
            if chi.derivative().is_zero() {
                return Err(Error::MalformedNormalForm(format!("chi-bar^p = {} is a p-th power", chi.display_in("x"))));
            }
            RTClassification::PurelyInsepResidue { chi_residue: InsepResidue { pth_power: chi } }
        }
    };
    Ok(KummerRtOutcome { input: a.clone(), certificates: run.certs, output: run.gen, r, u, classification })
}

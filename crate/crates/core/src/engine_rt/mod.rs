//! Normal forms for degree-`p` extensions of `F = K(x)^h` with `x`
//! residue-transcendental, over a Frobenius-closed basis of monomials.

mod artin_schreier;
mod kummer;

pub use artin_schreier::{descend_constant, normalize_artin_schreier_rt, AsRtOutcome, DescentRecord};
pub use kummer::{normalize_kummer_rt, KummerRtOutcome};

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;

use crate::coeff::{Coeff, EqElem};
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Mode};
use crate::poly::RatFunc;
use crate::values::Value;

/// Basis monomials `u_j = x^{e_j}` of value 0, with `frob(j) = k` when
/// `u_k = u_j^p`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusBasis {
    p: u32,
    /// `None` is the full basis `{x^i : i >= 0}`, indexed by `i`.
    listed: Option<Listed>,
}

#[derive(Clone, Debug, PartialEq)]
struct Listed {
    exponents: Vec<i64>,
    frob: BTreeMap<u32, u32>,
}

/// On-disk form: exponents by index, and the Frobenius map on indices.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BasisFile {
    exponents: Vec<i64>,
    #[serde(default)]
    frob: BTreeMap<u32, u32>,
}

impl FrobeniusBasis {
    pub fn monomial(p: u32) -> Self {
        FrobeniusBasis { p, listed: None }
    }

    /// A finite basis. Distinct exponents give independent residues; the
    /// map must send `j` to the index of `p e_j` whenever that is listed,
    /// and only there; `1 = 1^p` is implicit.
    pub fn listed(p: u32, exponents: Vec<i64>, frob: BTreeMap<u32, u32>) -> Result<Self> {
        let bad = |s: String| Err(Error::BasisViolation(s));
        let mut seen = BTreeMap::new();
        for (j, e) in exponents.iter().enumerate() {
            if seen.insert(*e, j as u32).is_some() {
                return bad(format!("exponent {e} listed twice"));
            }
        }
        if !seen.contains_key(&0) {
            return bad("1 is not in the basis".into());
        }
        for (&j, &k) in &frob {
            let (Some(ej), Some(ek)) = (exponents.get(j as usize), exponents.get(k as usize)) else {
                return bad(format!("frob({j}) = {k} leaves the index set"));
            };
            if *ek != p as i64 * ej {
                return bad(format!("frob({j}) = {k} but x^{ek} is not (x^{ej})^{p}"));
            }
        }
        for (j, e) in exponents.iter().enumerate().filter(|(_, e)| **e != 0) {
            if let Some(&k) = seen.get(&(p as i64 * e)) {
                if frob.get(&(j as u32)) != Some(&k) {
                    return bad(format!("(x^{e})^{p} is listed but frob({j}) is not set to {k}"));
                }
            }
        }
        Ok(FrobeniusBasis { p, listed: Some(Listed { exponents, frob }) })
    }

    pub fn from_json(p: u32, text: &str) -> Result<Self> {
        let f: BasisFile = serde_json::from_str(text).map_err(|e| Error::BasisViolation(format!("basis file: {e}")))?;
        Self::listed(p, f.exponents, f.frob)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn exponent(&self, j: u32) -> Option<i64> {
        match &self.listed {
            None => Some(j as i64),
            Some(l) => l.exponents.get(j as usize).copied(),
        }
    }

    pub fn index_of(&self, e: i64) -> Option<u32> {
        match &self.listed {
            None => u32::try_from(e).ok(),
            Some(l) => l.exponents.iter().position(|&x| x == e).map(|j| j as u32),
        }
    }

    pub fn frob(&self, j: u32) -> Option<u32> {
        match &self.listed {
            None => j.checked_mul(self.p),
            Some(l) => l.frob.get(&j).copied(),
        }
    }

    /// `k` with `u_k^p = u_j`, for `u_j != 1`.
    pub fn root_of(&self, j: u32) -> Option<u32> {
        if self.exponent(j)? == 0 {
            return None;
        }
        match &self.listed {
            None => (j % self.p == 0).then_some(j / self.p),
            Some(l) => l.frob.iter().find(|(_, &k)| k == j).map(|(&i, _)| i),
        }
    }

    /// Exponent of the basis root of `x^e`, when `x^e != 1` is the `p`-th
    /// power of a basis element.
    pub fn root_exponent(&self, e: i64) -> Option<i64> {
        self.index_of(e).and_then(|j| self.root_of(j)).and_then(|k| self.exponent(k))
    }

    pub fn check_support<C: Coeff>(&self, a: &LaurentPoly<C>) -> Result<()> {
        match a.terms().find(|(i, _)| self.index_of(*i).is_none()) {
            Some((i, _)) => Err(Error::BasisViolation(format!("x^{i} is not a basis element"))),
            None => Ok(()),
        }
    }
}

/// `sum c_j u_j` over a basis, stored as the Laurent polynomial it equals.
#[derive(Clone, Debug)]
pub struct BasisSum<'b, C: Coeff> {
    pub basis: &'b FrobeniusBasis,
    pub poly: LaurentPoly<C>,
}

impl<'b, C: Coeff> BasisSum<'b, C> {
    pub fn new(basis: &'b FrobeniusBasis, poly: LaurentPoly<C>) -> Result<Self> {
        if poly.config().mode != Mode::RT {
            return Err(Error::ConfigMismatch("basis sums live in residue-transcendental mode".into()));
        }
        if C::prime(poly.ctx()) != basis.p() {
            return Err(Error::ConfigMismatch(format!("basis is for p = {}", basis.p())));
        }
        basis.check_support(&poly)?;
        Ok(BasisSum { basis, poly })
    }

    /// `min v(c_j)`: the basis admits a valuation basis.
    pub fn value(&self) -> Result<Value> {
        self.poly.gauss_value()
    }

    /// `c_j` by basis index.
    pub fn coefficients(&self) -> BTreeMap<u32, C> {
        self.poly.terms().map(|(i, c)| (self.basis.index_of(i).unwrap(), c.clone())).collect()
    }
}

/// A residue `chi-bar` that is a `p`-th root of an element of `F-bar`,
/// given by that element.
#[derive(Clone, Debug, PartialEq)]
pub struct InsepResidue {
    pub pth_power: RatFunc,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RTClassification {
    /// `E-bar = F-bar(chi-bar)`, purely inseparable of degree `p`.
    PurelyInsepResidue { chi_residue: InsepResidue },
    /// `E-bar` generated by a root of `Z^p - Z - as_residue`.
    SepResidue { as_residue: RatFunc },
    ConstantDescent { c: EqElem },
    MixedDescent { c: EqElem, then: Box<RTClassification> },
    /// `E-bar = F-bar(r-bar^{1/p})`.
    KummerInsep { r_residue: RatFunc },
    TrivialExtension,
}

impl RTClassification {
    pub fn name(&self) -> &'static str {
        match self {
            RTClassification::PurelyInsepResidue { .. } => "PurelyInsepResidue",
            RTClassification::SepResidue { .. } => "SepResidue",
            RTClassification::ConstantDescent { .. } => "ConstantDescent",
            RTClassification::MixedDescent { .. } => "MixedDescent",
            RTClassification::KummerInsep { .. } => "KummerInsep",
            RTClassification::TrivialExtension => "TrivialExtension",
        }
    }
}

impl fmt::Display for RTClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RTClassification::PurelyInsepResidue { chi_residue } => {
                let p = chi_residue.pth_power.ctx().p();
                write!(f, "PurelyInsepResidue{{chi^{p} = {}}}", chi_residue.pth_power.display_in("x"))
            }
            RTClassification::SepResidue { as_residue } => {
                let p = as_residue.ctx().p();
                write!(f, "SepResidue{{Z^{p} - Z - ({})}}", as_residue.display_in("x"))
            }
            RTClassification::ConstantDescent { c } => write!(f, "ConstantDescent{{c = {c}}}"),
            RTClassification::MixedDescent { c, then } => write!(f, "MixedDescent{{c = {c}, then {then}}}"),
            RTClassification::KummerInsep { r_residue } => write!(f, "KummerInsep{{r = {}}}", r_residue.display_in("x")),
            RTClassification::TrivialExtension => write!(f, "TrivialExtension"),
        }
    }
}

pub const RT_DESCENT_NOTE: &str = "L = K(theta) with theta^p - theta = c; if (E|F,v) has non-trivial defect, \
     then (L|K,v) has non-trivial defect";

#[cfg(test)]
mod tests;

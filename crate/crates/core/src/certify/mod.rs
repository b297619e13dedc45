//! Independent verification: defect arithmetic, the fundamental
//! inequality, value-coset and residue witnesses, and the value and
//! residue data of purely inseparable towers. Nothing here calls the
//! engines; their outputs are read as data.

pub mod replay;
mod wp;

pub use wp::{in_wp_image, is_pth_power, pth_root_mod};

use crate::engine_rt::RTClassification;
use crate::engine_vt::VTClassification;
use crate::error::{Error, Result};
use crate::poly::RatFunc;
use crate::values::{quotient_index, rat, split_lattice, Index, SubgroupSpec, Value};

/// `d = p^nu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DefectValue {
    pub nu: u32,
    pub value: u64,
}

/// `n = [L:K]` with the `(e_i, f_i)` of the extensions of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionData {
    pub n: u64,
    pub local: Vec<(u64, u64)>,
    pub p: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InequalityReport {
    pub holds: bool,
    pub slack: i64,
}

pub fn defect(n: u64, e: u64, f: u64, p: u32) -> Result<DefectValue> {
    let ef = e.checked_mul(f).ok_or(Error::NotDivisible)?;
    if ef == 0 || n % ef != 0 {
        return Err(Error::NotDivisible);
    }
    let d = n / ef;
    let mut rest = d;
    let mut nu = 0;
    while rest % p as u64 == 0 {
        rest /= p as u64;
        nu += 1;
    }
    if rest != 1 {
        return Err(Error::NotAPPower(d.to_string()));
    }
    Ok(DefectValue { nu, value: d })
}

pub fn check_fundamental_inequality(data: &ExtensionData) -> Result<InequalityReport> {
    let sum: i64 = data.local.iter().map(|(e, f)| (e * f) as i64).sum();
    let slack = data.n as i64 - sum;
    if slack < 0 {
        return Err(Error::Violated(slack));
    }
    Ok(InequalityReport { holds: true, slack })
}

/// `w` outside `vF` with `p w` inside: then `e = p` for a degree-`p`
/// extension.
pub fn verify_value_witness(w: &Value, vf: &SubgroupSpec, p: u32) -> bool {
    !vf.contains(w) && vf.contains(&w.times(p as i64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidueKind {
    ArtinSchreier,
    Kummer,
}

/// Artin-Schreier: `Z^p - Z - r` has no root in `F_q(x)`. Kummer: `r` is
/// not a `p`-th power there.
pub fn verify_residue_witness(kind: ResidueKind, r: &RatFunc, p: u32) -> bool {
    if r.ctx().p() != p {
        return false;
    }
    match kind {
        ResidueKind::ArtinSchreier => !in_wp_image(r),
        ResidueKind::Kummer => !r.is_zero() && !is_pth_power(r),
    }
}

/// `(e, f)` implied by a value-transcendental classification after its
/// witness is re-verified; `None` when there is nothing to certify.
pub fn vt_local_data(c: &VTClassification, p: u32) -> Result<Option<(u64, u64)>> {
    match c {
        VTClassification::DefectlessRamified { witness_value, coset_proof } => {
            if !verify_value_witness(witness_value, &coset_proof.group, p) || !coset_proof.check(p) {
                return Err(Error::VerificationFailed(format!("value witness {witness_value}")));
            }
            Ok(Some((p as u64, 1)))
        }
        _ => Ok(None),
    }
}

/// As [`vt_local_data`], for residue-transcendental classifications.
pub fn rt_local_data(c: &RTClassification, p: u32) -> Result<Option<(u64, u64)>> {
    let ok = match c {
        RTClassification::SepResidue { as_residue } => verify_residue_witness(ResidueKind::ArtinSchreier, as_residue, p),
        RTClassification::PurelyInsepResidue { chi_residue } => {
            verify_residue_witness(ResidueKind::Kummer, &chi_residue.pth_power, p)
        }
        RTClassification::KummerInsep { r_residue } => verify_residue_witness(ResidueKind::Kummer, r_residue, p),
        RTClassification::MixedDescent { then, .. } => return rt_local_data(then, p),
        RTClassification::ConstantDescent { .. } | RTClassification::TrivialExtension => return Ok(None),
    };
    if !ok {
        return Err(Error::VerificationFailed(format!("residue witness of {c}")));
    }
    Ok(Some((1, p as u64)))
}

/// `e f >= p` with `n = p` and a single extension: equality in the
/// fundamental inequality, so the defect is 1.
pub fn defect_of_degree_p(local: (u64, u64), p: u32) -> Result<DefectValue> {
    let data = ExtensionData { n: p as u64, local: vec![local], p };
    let rep = check_fundamental_inequality(&data)?;
    if rep.slack != 0 {
        return Err(Error::VerificationFailed(format!("slack {} in the fundamental inequality", rep.slack)));
    }
    defect(p as u64, local.0, local.1, p)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TowerData {
    pub value_group: SubgroupSpec,
    pub residue_generators: String,
    /// `(vE : base)`.
    pub value_index: u64,
    /// `[E-bar : K-bar'(y-bar)]`, read off the adjoined roots.
    pub residue_degree: u64,
    /// `p^{m(r+s)}`.
    pub inseparable_degree: u64,
}

impl TowerData {
    /// `p^{m(r+s)} [K':K] = (vE : base) [E-bar : K-bar'] [K':K]`.
    pub fn balances(&self, kprime_degree: u64) -> bool {
        self.inseparable_degree * kprime_degree == self.value_index * self.residue_degree * kprime_degree
    }
}

/// Value group and residue field after adjoining `p^m`-th roots of `r`
/// value-independent and `s` residue-independent elements to `K'(T)`.
pub fn insep_tower_data(r: u32, s: u32, m: u32, p: u32, base: &SubgroupSpec) -> Result<TowerData> {
    if r > 1 {
        return Err(Error::UnsupportedRank(r));
    }
    let pm = (p as u64).pow(m);
    let value_group = if r == 0 {
        base.clone()
    } else {
        let (_, vx) = split_lattice(base);
        let vx = vx.ok_or_else(|| Error::ConfigMismatch("base has no value-transcendental direction".into()))?;
        let mut g = base.generators.clone();
        g.push(vx.scale(rat(1, pm as i128)));
        SubgroupSpec::new(g)
    };
    let value_index = match quotient_index(&value_group, base)? {
        Index::Finite(i) => i as u64,
        Index::Infinite => return Err(Error::VerificationFailed("infinite index".into())),
    };
    let roots: Vec<String> = (1..=s).map(|i| format!("y{i}^(1/{pm})")).collect();
    let residue_generators = if roots.is_empty() { "K'".to_string() } else { format!("K'({})", roots.join(", ")) };
    let value_group = if r == 0 { value_group } else { reduce(&value_group) };
    Ok(TowerData {
        value_group,
        residue_generators,
        value_index,
        residue_degree: pm.pow(s),
        inseparable_degree: pm.pow(r + s),
    })
}

/// A two-generator presentation of a rank-two group.
fn reduce(g: &SubgroupSpec) -> SubgroupSpec {
    match split_lattice(g) {
        (Some(a), Some(vx)) => SubgroupSpec::new(vec![Value::rational(a), vx]),
        _ => g.clone(),
    }
}

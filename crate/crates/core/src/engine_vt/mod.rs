//! Normal forms for degree-`p` extensions of `K(x)` with `x`
//! value-transcendental: Artin-Schreier in equal characteristic, Kummer
//! in mixed characteristic.

pub(crate) mod artin_schreier;
pub(crate) mod kummer;

pub use artin_schreier::{
    constant_root_count, normalize_artin_schreier, replay_as_trace, AsNormalFormVT, AsOutcome, AsShape, AsStep,
};
pub use kummer::{normalize_kummer, KummerNormalFormVT, KummerOptions, KummerOutcome};

use crate::coeff::{Coeff, EqElem};
use crate::error::{Error, Result};
use crate::laurent::ValConfig;
use crate::values::{rat, subgroup_membership, Membership, Rat, SubgroupSpec, Value};

/// Evidence that `witness` lies outside `group` while `p * witness` lies
/// inside, with the integer combination for the latter.
#[derive(Clone, Debug, PartialEq)]
pub struct CosetProof {
    pub group: SubgroupSpec,
    pub witness: Value,
    pub p_multiple_combination: Vec<i128>,
}

impl CosetProof {
    fn new(witness: Value, group: SubgroupSpec, p: u32) -> Result<Self> {
        if subgroup_membership(&witness, &group) != Membership::NonMember {
            return Err(Error::MalformedNormalForm(format!("witness value {witness} lies in {group}")));
        }
        match subgroup_membership(&witness.times(p as i64), &group) {
            Membership::Member(c) => Ok(CosetProof { group, witness, p_multiple_combination: c }),
            Membership::NonMember => Err(Error::MalformedNormalForm(format!("p * {witness} is not in {group}"))),
        }
    }

    /// Replays the combination and the non-membership.
    pub fn check(&self, p: u32) -> bool {
        let gens = &self.group.generators;
        if gens.len() != self.p_multiple_combination.len() {
            return false;
        }
        let lambda = self.witness.lambda();
        let sum = gens
            .iter()
            .zip(&self.p_multiple_combination)
            .fold(Value::with_lambda(0.into(), 0.into(), lambda), |s, (g, k)| s + g.scale(Rat::from_integer(*k)));
        sum == self.witness.times(p as i64) && !self.group.contains(&self.witness)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum VTClassification {
    DefectlessRamified { witness_value: Value, coset_proof: CosetProof },
    ConstantDescent { generator_data: EqElem, inequality_note: String },
    TrivialExtension,
}

pub const DESCENT_NOTE: &str = "E = F(theta) with theta^p - theta = c in K; for L = K(theta), L.E | L.F is trivial \
     and d(L|K,v) >= d(L.F|F,v) = d(E|F,v), so E|F is defectless whenever L|K is";

pub enum NormalFormVT<'a> {
    ArtinSchreier(&'a AsNormalFormVT),
    Kummer(&'a KummerNormalFormVT),
}

/// `<(1/L, 0), vx>` with `L` a multiple of `p` and of every coefficient
/// value denominator, so the rational parts of the witness and of its
/// `p`-fold lie in the lattice. Only the `vx`-direction decides membership,
/// since `vK` is rational.
fn value_group(cfg: ValConfig, p: u32, dens: impl IntoIterator<Item = Rat>) -> SubgroupSpec {
    let l = p as i128 * dens.into_iter().fold(1i128, |l, r| num_integer::lcm(l, *r.denom()));
    SubgroupSpec::new(vec![cfg.scalar(rat(1, l)), cfg.vx])
}

pub fn classify_vt(nf: NormalFormVT<'_>) -> Result<VTClassification> {
    match nf {
        NormalFormVT::ArtinSchreier(nf) => {
            nf.check()?;
            match &nf.shape {
                AsShape::Trivial => Ok(VTClassification::TrivialExtension),
                AsShape::Constant { c } => {
                    Ok(VTClassification::ConstantDescent { generator_data: c.clone(), inequality_note: DESCENT_NOTE.into() })
                }
                AsShape::Witnessed { terms, lead, c0 } => {
                    let p = nf.p;
                    let cj = nf.config.scalar(terms[lead].value()?);
                    let w = (cj + nf.config.vx.times(*lead)).scale(rat(1, p as i128));
                    let mut dens: Vec<Rat> = terms.values().map(|c| c.value()).collect::<Result<_>>()?;
                    if let Some(c) = c0 {
                        dens.push(c.value()?);
                    }
                    let group = value_group(nf.config, p, dens);
                    let coset_proof = CosetProof::new(w, group, p)?;
                    Ok(VTClassification::DefectlessRamified { witness_value: w, coset_proof })
                }
            }
        }
        NormalFormVT::Kummer(nf) => {
            nf.check()?;
            let p = nf.p();
            let cfg = nf.config;
            let vc = rat(1, p as i128 - 1);
            let mut dens: Vec<Rat> = nf.terms.values().map(|c| c.value()).collect::<Result<_>>()?;
            dens.push(vc);
            let w = if nf.m != 0 {
                cfg.vx.scale(rat(nf.m as i128, p as i128))
            } else {
                let Some(j) = nf.lead() else {
                    return Ok(VTClassification::TrivialExtension);
                };
                if j % p as i64 == 0 {
                    return Err(Error::MalformedNormalForm(format!("lead exponent {j} lies in pZ")));
                }
                let cj = nf.terms[&j].value()?;
                cfg.scalar(cj / Rat::from_integer(p as i128) - vc) + cfg.vx.scale(rat(j as i128, p as i128))
            };
            let coset_proof = CosetProof::new(w, value_group(cfg, p, dens), p)?;
            Ok(VTClassification::DefectlessRamified { witness_value: w, coset_proof })
        }
    }
}

//! JSON forms of engine output. Every element is written in the canonical
//! expression syntax so that reports can be read back and replayed.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value as Json};

use crate::coeff::{EqElem, MixedCtx, MixedElem};
use crate::engine_rt::{DescentRecord, InsepResidue, RTClassification};
use crate::engine_vt::{AsNormalFormVT, AsShape, AsStep, CosetProof, KummerNormalFormVT, VTClassification};
use crate::error::{Error, Result};
use crate::gf::GfCtx;
use crate::laurent::{LaurentPoly, ValConfig};
use crate::poly::{Poly, RatFunc};
use crate::units::PthPowerCertificate;
use crate::values::{SubgroupSpec, Value};

use super::parse::{format_element, parse_element, Syntax};

fn bad<T>(what: &str, why: impl std::fmt::Display) -> Result<T> {
    Err(Error::VerificationFailed(format!("{what}: {why}")))
}

pub fn field<'a>(v: &'a Json, key: &str) -> Result<&'a Json> {
    v.get(key).ok_or_else(|| Error::VerificationFailed(format!("missing field {key:?}")))
}

pub fn str_field<'a>(v: &'a Json, key: &str) -> Result<&'a str> {
    field(v, key)?.as_str().ok_or_else(|| Error::VerificationFailed(format!("{key}: expected a string")))
}

pub fn int_field(v: &Json, key: &str) -> Result<i64> {
    field(v, key)?.as_i64().ok_or_else(|| Error::VerificationFailed(format!("{key}: expected an integer")))
}

pub fn elem<C: Syntax>(f: &LaurentPoly<C>) -> Json {
    json!(format_element(f))
}

pub fn read_elem<C: Syntax>(ctx: &C::Ctx, cfg: ValConfig, v: &Json, what: &str) -> Result<LaurentPoly<C>> {
    let Some(s) = v.as_str() else { return bad(what, "expected an element string") };
    parse_element(s, ctx, cfg).or_else(|e| bad(what, e))
}

pub fn read_coeff<C: Syntax>(ctx: &C::Ctx, cfg: ValConfig, v: &Json, what: &str) -> Result<C> {
    let f = read_elem::<C>(ctx, cfg, v, what)?;
    if f.terms().any(|(i, _)| i != 0) {
        return bad(what, "expected a constant");
    }
    Ok(f.coeff(0).cloned().unwrap_or_else(|| C::zero(ctx)))
}

fn value(v: &Value) -> Json {
    json!(v.to_string())
}

fn read_value(cfg: ValConfig, v: &Json, what: &str) -> Result<Value> {
    let Some(s) = v.as_str() else { return bad(what, "expected a value string") };
    Value::parse_with(s, cfg.lambda()).or_else(|e| bad(what, e))
}

pub fn cert<C: Syntax>(c: &PthPowerCertificate<C>) -> Json {
    json!({
        "rule": c.rule,
        "input": elem(&c.input),
        "replacement": elem(&c.replacement),
        "kappa": c.kappa.write(),
        "witness": elem(&c.witness),
        "checked_to": c.checked_to.map_or(json!("exact"), |g| value(&g)),
    })
}

pub fn read_cert<C: Syntax>(ctx: &C::Ctx, cfg: ValConfig, v: &Json, i: usize) -> Result<PthPowerCertificate<C>> {
    let what = |k: &str| format!("certificate {i}: {k}");
    let checked = field(v, "checked_to")?;
    let checked_to = match checked.as_str() {
        Some("exact") => None,
        _ => Some(read_value(cfg, checked, &what("checked_to"))?),
    };
    Ok(PthPowerCertificate {
        rule: str_field(v, "rule")?.to_string(),
        input: read_elem(ctx, cfg, field(v, "input")?, &what("input"))?,
        replacement: read_elem(ctx, cfg, field(v, "replacement")?, &what("replacement"))?,
        kappa: read_coeff(ctx, cfg, field(v, "kappa")?, &what("kappa"))?,
        witness: read_elem(ctx, cfg, field(v, "witness")?, &what("witness"))?,
        checked_to,
    })
}

pub fn read_certs<C: Syntax>(ctx: &C::Ctx, cfg: ValConfig, v: &Json) -> Result<Vec<PthPowerCertificate<C>>> {
    let Some(list) = v.as_array() else { return bad("certificates", "expected a list") };
    list.iter().enumerate().map(|(i, c)| read_cert(ctx, cfg, c, i)).collect()
}

pub fn trace(steps: &[AsStep]) -> Json {
    steps
        .iter()
        .map(|s| match s {
            AsStep::Strip { part } => json!({"step": "strip", "part": elem(part)}),
            AsStep::Shift { d } => json!({"step": "shift", "d": elem(d)}),
        })
        .collect()
}

pub fn read_trace(k: &Arc<GfCtx>, cfg: ValConfig, v: &Json) -> Result<Vec<AsStep>> {
    let Some(list) = v.as_array() else { return bad("trace", "expected a list") };
    list.iter()
        .enumerate()
        .map(|(i, s)| match str_field(s, "step")? {
            "strip" => Ok(AsStep::Strip { part: read_elem(k, cfg, field(s, "part")?, &format!("trace {i}"))? }),
            "shift" => Ok(AsStep::Shift { d: read_elem(k, cfg, field(s, "d")?, &format!("trace {i}"))? }),
            other => bad(&format!("trace {i}"), format!("unknown step {other:?}")),
        })
        .collect()
}

pub fn ratfunc(r: &RatFunc) -> Json {
    json!({"num": r.num().coeffs(), "den": r.den().coeffs(), "text": r.display_in("x")})
}

pub fn read_ratfunc(k: &Arc<GfCtx>, v: &Json, what: &str) -> Result<RatFunc> {
    let codes = |key: &str| -> Result<Vec<u32>> {
        let Some(list) = field(v, key)?.as_array() else { return bad(what, "expected coefficient lists") };
        list.iter()
            .map(|c| match c.as_u64() {
                Some(c) if c < k.q() as u64 => Ok(c as u32),
                _ => bad(what, format!("coefficient {c} is not in F_{}", k.q())),
            })
            .collect()
    };
    let den = Poly::new(k, codes("den")?);
    if den.is_zero() {
        return bad(what, "zero denominator");
    }
    let r = RatFunc::new(Poly::new(k, codes("num")?), den);
    if field(v, "text")?.as_str() != Some(&r.display_in("x")) {
        return bad(what, "text does not match the coefficients");
    }
    Ok(r)
}

pub fn vt_class(c: &VTClassification) -> Json {
    match c {
        VTClassification::DefectlessRamified { witness_value, coset_proof } => json!({
            "kind": "DefectlessRamified",
            "witness_value": value(witness_value),
            "group": coset_proof.group.generators.iter().map(value).collect::<Vec<_>>(),
            "combination": coset_proof.p_multiple_combination.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
        }),
        VTClassification::ConstantDescent { generator_data, inequality_note } => json!({
            "kind": "ConstantDescent",
            "c": generator_data.write(),
            "note": inequality_note,
        }),
        VTClassification::TrivialExtension => json!({"kind": "TrivialExtension"}),
    }
}

/// The coset proof as reported, for `DefectlessRamified`.
pub fn read_coset_proof(cfg: ValConfig, v: &Json) -> Result<CosetProof> {
    let witness = read_value(cfg, field(v, "witness_value")?, "witness_value")?;
    let Some(gens) = field(v, "group")?.as_array() else { return bad("group", "expected a list") };
    let gens = gens.iter().map(|g| read_value(cfg, g, "group")).collect::<Result<Vec<_>>>()?;
    let Some(comb) = field(v, "combination")?.as_array() else { return bad("combination", "expected a list") };
    let comb = comb
        .iter()
        .map(|k| k.as_str().and_then(|s| s.parse::<i128>().ok()).ok_or_else(|| Error::VerificationFailed("combination: expected integers".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(CosetProof { group: SubgroupSpec::new(gens), witness, p_multiple_combination: comb })
}

pub fn rt_class(c: &RTClassification) -> Json {
    let mut m = Map::new();
    m.insert("kind".into(), json!(c.name()));
    match c {
        RTClassification::PurelyInsepResidue { chi_residue } => {
            m.insert("chi_pth_power".into(), ratfunc(&chi_residue.pth_power));
        }
        RTClassification::SepResidue { as_residue } => {
            m.insert("as_residue".into(), ratfunc(as_residue));
        }
        RTClassification::ConstantDescent { c } => {
            m.insert("c".into(), json!(c.write()));
        }
        RTClassification::MixedDescent { c, then } => {
            m.insert("c".into(), json!(c.write()));
            m.insert("then".into(), rt_class(then));
        }
        RTClassification::KummerInsep { r_residue } => {
            m.insert("r_residue".into(), ratfunc(r_residue));
        }
        RTClassification::TrivialExtension => {}
    }
    m.insert("text".into(), json!(c.to_string()));
    Json::Object(m)
}

pub fn read_rt_class(k: &Arc<GfCtx>, cfg: ValConfig, v: &Json) -> Result<RTClassification> {
    let c = match str_field(v, "kind")? {
        "PurelyInsepResidue" => RTClassification::PurelyInsepResidue {
            chi_residue: InsepResidue { pth_power: read_ratfunc(k, field(v, "chi_pth_power")?, "chi_pth_power")? },
        },
        "SepResidue" => RTClassification::SepResidue { as_residue: read_ratfunc(k, field(v, "as_residue")?, "as_residue")? },
        "ConstantDescent" => RTClassification::ConstantDescent { c: read_coeff::<EqElem>(k, cfg, field(v, "c")?, "c")? },
        "MixedDescent" => RTClassification::MixedDescent {
            c: read_coeff::<EqElem>(k, cfg, field(v, "c")?, "c")?,
            then: Box::new(read_rt_class(k, cfg, field(v, "then")?)?),
        },
        "KummerInsep" => RTClassification::KummerInsep { r_residue: read_ratfunc(k, field(v, "r_residue")?, "r_residue")? },
        "TrivialExtension" => RTClassification::TrivialExtension,
        other => return bad("classification", format!("unknown kind {other:?}")),
    };
    Ok(c)
}

fn coeff_map<C: Syntax>(terms: &BTreeMap<i64, C>) -> Json {
    Json::Object(terms.iter().map(|(i, c)| (i.to_string(), json!(c.write()))).collect())
}

fn read_coeff_map<C: Syntax>(ctx: &C::Ctx, cfg: ValConfig, v: &Json) -> Result<BTreeMap<i64, C>> {
    let Some(obj) = v.as_object() else { return bad("terms", "expected an object") };
    obj.iter()
        .map(|(i, c)| {
            let i: i64 = i.parse().or_else(|_| bad("terms", format!("key {i:?} is not an exponent")))?;
            Ok((i, read_coeff(ctx, cfg, c, &format!("terms.{i}"))?))
        })
        .collect()
}

pub fn as_nf(nf: &AsNormalFormVT) -> Json {
    match &nf.shape {
        AsShape::Trivial => json!({"shape": "Trivial"}),
        AsShape::Constant { c } => json!({"shape": "Constant", "c": c.write()}),
        AsShape::Witnessed { c0, terms, lead } => json!({
            "shape": "Witnessed",
            "c0": c0.as_ref().map(|c| c.write()),
            "terms": coeff_map(terms),
            "lead": lead,
        }),
    }
}

pub fn read_as_nf(k: &Arc<GfCtx>, cfg: ValConfig, v: &Json) -> Result<AsNormalFormVT> {
    let shape = match str_field(v, "shape")? {
        "Trivial" => AsShape::Trivial,
        "Constant" => AsShape::Constant { c: read_coeff(k, cfg, field(v, "c")?, "c")? },
        "Witnessed" => {
            let c0 = match field(v, "c0")? {
                Json::Null => None,
                c => Some(read_coeff(k, cfg, c, "c0")?),
            };
            AsShape::Witnessed { c0, terms: read_coeff_map(k, cfg, field(v, "terms")?)?, lead: int_field(v, "lead")? }
        }
        other => return bad("normal_form", format!("unknown shape {other:?}")),
    };
    Ok(AsNormalFormVT { p: k.p(), config: cfg, shape })
}

pub fn kummer_nf(nf: &KummerNormalFormVT) -> Json {
    json!({"m": nf.m, "terms": coeff_map(&nf.terms), "trivial": nf.trivial})
}

pub fn read_kummer_nf(ctx: &Arc<MixedCtx>, cfg: ValConfig, v: &Json) -> Result<KummerNormalFormVT> {
    let trivial = field(v, "trivial")?.as_bool().ok_or_else(|| Error::VerificationFailed("trivial: expected a boolean".into()))?;
    Ok(KummerNormalFormVT {
        ctx: ctx.clone(),
        config: cfg,
        m: int_field(v, "m")?,
        terms: read_coeff_map::<MixedElem>(ctx, cfg, field(v, "terms")?)?,
        trivial,
    })
}

pub fn descent(d: &DescentRecord) -> Json {
    json!({
        "original": d.original.write(),
        "shifts": d.shifts.iter().map(|s| s.write()).collect::<Vec<_>>(),
        "c": d.c.write(),
        "polynomial": d.polynomial(),
        "note": d.note,
    })
}

pub fn error(e: &Error) -> Json {
    let dbg = format!("{e:?}");
    let kind = dbg.split(['(', ' ', '{']).next().unwrap_or("").to_string();
    json!({"kind": kind, "message": e.to_string()})
}

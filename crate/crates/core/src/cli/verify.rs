//! Replays a report read back from JSON. Every check goes through
//! `certify`; nothing here reruns an engine.

use serde_json::{json, Value as Json};

use crate::certify::replay::{as_vt_witness, check_chain, kummer_vt_witness, replay_as};
use crate::certify::{rt_local_data, verify_value_witness, vt_local_data};
use crate::coeff::{Coeff, EqElem, MixedElem};
use crate::engine_rt::{BasisSum, RTClassification};
use crate::engine_vt::{AsShape, CosetProof, VTClassification};
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Residue};
use crate::values::SubgroupSpec;

use super::config::Session;
use super::json::{self, field, str_field};
use super::parse::{format_element, parse_element, Syntax};
use super::run::{defect_json, descents, SCHEMA};

fn fail<T>(s: impl Into<String>) -> Result<T> {
    Err(Error::VerificationFailed(s.into()))
}

#[derive(Default)]
struct Checks {
    items: Vec<Json>,
    ok: bool,
}

impl Checks {
    fn new() -> Self {
        Checks { items: Vec::new(), ok: true }
    }

    fn run<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T>) -> Option<T> {
        match f() {
            Ok(v) => {
                self.items.push(json!({"name": name, "ok": true}));
                Some(v)
            }
            Err(e) => {
                self.ok = false;
                self.items.push(json!({"name": name, "ok": false, "detail": e.to_string()}));
                None
            }
        }
    }

    fn finish(self) -> Json {
        json!({"ok": self.ok, "checks": self.items})
    }
}

/// The re-parsed input must print as the recorded `parsed` text.
fn parse_check<C: Syntax>(ctx: &C::Ctx, s: &Session, r: &Json) -> Result<LaurentPoly<C>> {
    let parsed = json::read_elem::<C>(ctx, s.val, field(r, "parsed")?, "parsed")?;
    let raw = parse_element::<C>(str_field(r, "input")?, ctx, s.val).or_else(|e| fail(format!("input: {e}")))?;
    if raw != parsed || format_element(&raw) != str_field(r, "parsed")? {
        return fail("input does not parse to the recorded element");
    }
    Ok(parsed)
}

fn defect_check(r: &Json, computed: Json) -> Result<()> {
    if r.get("defect").is_some_and(|d| *d != computed) {
        return fail(format!("recorded defect {} but certify gives {computed}", r["defect"]));
    }
    Ok(())
}

/// A reported ramified classification against the recomputed witness.
fn witness_check(s: &Session, r: &Json, (w, group): (crate::values::Value, SubgroupSpec)) -> Result<CosetProof> {
    let p = s.config.p;
    let proof = json::read_coset_proof(s.val, field(r, "classification")?)?;
    if proof.witness != w {
        return fail(format!("recorded witness value {} but recomputed {w}", proof.witness));
    }
    if proof.group != group {
        return fail(format!("recorded group {} but recomputed {group}", proof.group));
    }
    if !proof.check(p) || !verify_value_witness(&w, &proof.group, p) {
        return fail(format!("coset proof for {w} does not replay"));
    }
    Ok(proof)
}

fn vt_defect(s: &Session, r: &Json, c: VTClassification) -> Result<()> {
    let p = s.config.p;
    defect_check(r, defect_json(vt_local_data(&c, p), p))
}

fn kind(r: &Json) -> Result<&str> {
    str_field(field(r, "classification")?, "kind")
}

fn as_vt(s: &Session, r: &Json, ck: &mut Checks) {
    let (k, cfg) = (&s.gf, s.val);
    let Some(input) = ck.run("parse", || parse_check::<EqElem>(k, s, r)) else { return };
    let Some((trace, output)) = ck.run("read", || {
        Ok((json::read_trace(k, cfg, field(r, "trace")?)?, json::read_elem::<EqElem>(k, cfg, field(r, "output")?, "output")?))
    }) else {
        return;
    };
    ck.run("trace", || replay_as(&input, &trace, &output));
    let Some(nf) = ck.run("normal_form", || {
        let nf = json::read_as_nf(k, cfg, field(r, "normal_form")?)?;
        nf.check()?;
        if nf.element(k) != output {
            return fail("normal form does not equal the output");
        }
        Ok(nf)
    }) else {
        return;
    };
    ck.run("classification", || {
        let c = match (&nf.shape, kind(r)?) {
            (AsShape::Witnessed { .. }, "DefectlessRamified") => {
                let wg = as_vt_witness(&output)?;
                let w = wg.0;
                let proof = witness_check(s, r, wg)?;
                VTClassification::DefectlessRamified { witness_value: w, coset_proof: proof }
            }
            (AsShape::Constant { c }, "ConstantDescent") => {
                let rc = json::read_coeff::<EqElem>(k, cfg, field(&r["classification"], "c")?, "c")?;
                if &rc != c || !c.value().is_ok_and(|v| v <= 0.into()) {
                    return fail("descent constant does not match the normal form");
                }
                VTClassification::ConstantDescent { generator_data: rc, inequality_note: String::new() }
            }
            (AsShape::Trivial, "TrivialExtension") => VTClassification::TrivialExtension,
            (_, kd) => return fail(format!("classification {kd} does not fit the normal form")),
        };
        vt_defect(s, r, c)
    });
}

fn kummer_vt(s: &Session, r: &Json, ck: &mut Checks) {
    let ctx = s.mixed.as_ref().unwrap();
    let cfg = s.val;
    let Some(input) = ck.run("parse", || parse_check::<MixedElem>(ctx, s, r)) else { return };
    let Some((certs, output)) = ck.run("read", || {
        Ok((json::read_certs::<MixedElem>(ctx, cfg, field(r, "certificates")?)?, json::read_elem::<MixedElem>(ctx, cfg, field(r, "output")?, "output")?))
    }) else {
        return;
    };
    ck.run("certificates", || check_chain(&input, &certs, &output));
    let Some(nf) = ck.run("normal_form", || {
        let nf = json::read_kummer_nf(ctx, cfg, field(r, "normal_form")?)?;
        nf.check()?;
        if nf.generator() != output {
            return fail("normal form does not equal the output");
        }
        Ok(nf)
    }) else {
        return;
    };
    ck.run("classification", || {
        let c = match (nf.trivial, kind(r)?) {
            (true, "TrivialExtension") => VTClassification::TrivialExtension,
            (false, "DefectlessRamified") => {
                let wg = kummer_vt_witness(nf.m, &output.shift(-nf.m))?;
                let w = wg.0;
                let proof = witness_check(s, r, wg)?;
                VTClassification::DefectlessRamified { witness_value: w, coset_proof: proof }
            }
            (_, kd) => return fail(format!("classification {kd} does not fit the normal form")),
        };
        vt_defect(s, r, c)
    });
}

fn is_zero_value(v: crate::values::Value) -> bool {
    !v.is_negative() && !v.is_positive()
}

fn residue<C: Coeff>(f: &LaurentPoly<C>) -> Result<crate::poly::RatFunc> {
    match f.residue_of()? {
        Residue::Func(r) => Ok(r),
        Residue::Const(_) => fail("expected a residue-transcendental residue"),
    }
}

/// Ties the residue data of `c` to the output where it is read off
/// directly.
fn as_rt_consistent(c: &RTClassification, out: &LaurentPoly<EqElem>) -> Result<()> {
    let k = out.ctx();
    match c {
        RTClassification::TrivialExtension if out.is_zero() => Ok(()),
        RTClassification::ConstantDescent { c } if *out == LaurentPoly::constant(k, out.config(), c.clone()) => Ok(()),
        RTClassification::MixedDescent { c, then } => {
            if out.coeff(0) != Some(c) || !c.value().is_ok_and(|v| v < 0.into()) {
                return fail("descent constant is not the negative constant term of the output");
            }
            as_rt_consistent(then, &out.sub(&LaurentPoly::constant(k, out.config(), c.clone())))
        }
        RTClassification::SepResidue { as_residue } => {
            if !is_zero_value(out.gauss_value()?) || &residue(out)? != as_residue {
                return fail("Artin-Schreier residue is not the residue of the output");
            }
            Ok(())
        }
        RTClassification::PurelyInsepResidue { .. } if !out.is_zero() && out.gauss_value()?.is_negative() => Ok(()),
        other => fail(format!("classification {} does not fit the output", other.name())),
    }
}

/// The recorded classification must be exactly what its data prints as.
fn class_text_check(r: &Json, cls: &RTClassification) -> Result<()> {
    if *field(r, "classification")? != json::rt_class(cls) {
        return fail("classification text does not match its data");
    }
    Ok(())
}

fn as_rt(s: &Session, r: &Json, ck: &mut Checks) {
    let (k, cfg, p) = (&s.gf, s.val, s.config.p);
    let Some(input) = ck.run("parse", || parse_check::<EqElem>(k, s, r)) else { return };
    ck.run("basis", || BasisSum::new(&s.basis, input.clone()).map(|_| ()));
    let Some((trace, output, cls)) = ck.run("read", || {
        Ok((
            json::read_trace(k, cfg, field(r, "trace")?)?,
            json::read_elem::<EqElem>(k, cfg, field(r, "output")?, "output")?,
            json::read_rt_class(k, cfg, field(r, "classification")?)?,
        ))
    }) else {
        return;
    };
    ck.run("trace", || {
        replay_as(&input, &trace, &output)?;
        s.basis.check_support(&output)?;
        if json::read_elem::<EqElem>(k, cfg, field(r, "normal_form")?, "normal_form")? != output {
            return fail("normal form does not equal the output");
        }
        Ok(())
    });
    ck.run("classification", || {
        class_text_check(r, &cls)?;
        as_rt_consistent(&cls, &output)?;
        if r.get("descent").is_some_and(|d| *d != descents(&cls)) {
            return fail("descent record does not replay");
        }
        Ok(())
    });
    ck.run("residue_witness", || defect_check(r, defect_json(rt_local_data(&cls, p), p)));
}

fn kummer_rt(s: &Session, r: &Json, ck: &mut Checks) {
    let ctx = s.mixed.as_ref().unwrap();
    let (cfg, p) = (s.val, s.config.p);
    let Some(input) = ck.run("parse", || parse_check::<MixedElem>(ctx, s, r)) else { return };
    ck.run("basis", || BasisSum::new(&s.basis, input.clone()).map(|_| ()));
    let Some((certs, output, ru, cls)) = ck.run("read", || {
        let nf = field(r, "normal_form")?;
        Ok((
            json::read_certs::<MixedElem>(ctx, cfg, field(r, "certificates")?)?,
            json::read_elem::<MixedElem>(ctx, cfg, field(r, "output")?, "output")?,
            (json::read_elem::<MixedElem>(ctx, cfg, field(nf, "r")?, "r")?, json::read_elem::<MixedElem>(ctx, cfg, field(nf, "u")?, "u")?),
            json::read_rt_class(&s.gf, cfg, field(r, "classification")?)?,
        ))
    }) else {
        return;
    };
    ck.run("certificates", || check_chain(&input, &certs, &output));
    let (rr, u) = ru;
    ck.run("normal_form", || {
        if rr.mul(&u) != output {
            return fail("r * u does not equal the output");
        }
        s.basis.check_support(&u)
    });
    ck.run("classification", || {
        class_text_check(r, &cls)?;
        let one = LaurentPoly::one(ctx, cfg);
        match &cls {
            RTClassification::KummerInsep { r_residue } => {
                if !is_zero_value(rr.gauss_value()?) || &residue(&rr)? != r_residue {
                    return fail("Kummer residue is not the residue of r");
                }
            }
            RTClassification::TrivialExtension if rr == one && u == one => {}
            RTClassification::SepResidue { .. } | RTClassification::PurelyInsepResidue { .. } if rr == one && u != one => {}
            other => return fail(format!("classification {} does not fit r and u", other.name())),
        }
        Ok(())
    });
    ck.run("residue_witness", || defect_check(r, defect_json(rt_local_data(&cls, p), p)));
}

/// Checks one report against the session it was produced under.
pub fn verify_report(s: &Session, r: &Json) -> Json {
    let mut ck = Checks::new();
    if let Some(e) = r.get("error") {
        ck.run("engine", || fail::<()>(format!("engine error: {}", e["message"].as_str().unwrap_or("?"))));
        return ck.finish();
    }
    let expected = super::run::engine_name(s);
    match r.get("engine").and_then(Json::as_str) {
        Some(e) if e != expected => {
            ck.run("engine", || fail::<()>(format!("report engine {e} but the configuration selects {expected}")));
        }
        Some("artin-schreier-vt") => as_vt(s, r, &mut ck),
        Some("kummer-vt") => kummer_vt(s, r, &mut ck),
        Some("artin-schreier-rt") => as_rt(s, r, &mut ck),
        Some("kummer-rt") => kummer_rt(s, r, &mut ck),
        _ => {
            ck.run("engine", || fail::<()>("missing or unknown engine"));
        }
    }
    ck.finish()
}

/// Replays a whole report document. A malformed document or
/// configuration is an error; failed checks are recorded.
pub fn verify_document(doc: &Json) -> Result<Json> {
    let bad = |s: &str| Error::ConfigMismatch(format!("report: {s}"));
    match doc.get("schema").and_then(Json::as_u64) {
        Some(SCHEMA) => {}
        Some(v) => return Err(bad(&format!("unsupported schema {v}"))),
        None => return Err(bad("missing schema")),
    }
    let config = doc.get("config").ok_or_else(|| bad("missing config"))?;
    let session = Session::new(super::config::SessionConfig::from_json(config)?)?;
    let reports = doc.get("reports").and_then(Json::as_array).ok_or_else(|| bad("missing reports"))?;
    let out: Vec<Json> = reports
        .iter()
        .map(|r| json!({"input": r.get("input").cloned().unwrap_or(Json::Null), "engine": r.get("engine").cloned().unwrap_or(Json::Null), "verification": verify_report(&session, r)}))
        .collect();
    let ok = out.iter().all(|r| r["verification"]["ok"] == json!(true));
    Ok(json!({"schema": SCHEMA, "task": "verify-certificate", "config": session.to_json(), "reports": out, "ok": ok}))
}

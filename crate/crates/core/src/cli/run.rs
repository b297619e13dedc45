//! Task runner: one report per input expression.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value as Json};

use crate::certify::{defect_of_degree_p, rt_local_data, vt_local_data};
use crate::coeff::{EqElem, MixedElem};
use crate::engine_rt::{descend_constant, normalize_artin_schreier_rt, normalize_kummer_rt, BasisSum, RTClassification};
use crate::engine_vt::{classify_vt, normalize_artin_schreier, normalize_kummer, NormalFormVT};
use crate::error::{Error, Result};
use crate::laurent::Mode;

use super::config::{Characteristic, Session};
use super::json;
use super::parse::{format_element, parse_element};
use super::verify::verify_report;

pub const SCHEMA: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Task {
    NormalizeAs,
    NormalizeKummer,
    Classify,
    VerifyCertificate,
    Selftest,
}

impl Task {
    pub const ALL: [Task; 5] = [Task::NormalizeAs, Task::NormalizeKummer, Task::Classify, Task::VerifyCertificate, Task::Selftest];

    pub fn name(self) -> &'static str {
        match self {
            Task::NormalizeAs => "normalize-as",
            Task::NormalizeKummer => "normalize-kummer",
            Task::Classify => "classify",
            Task::VerifyCertificate => "verify-certificate",
            Task::Selftest => "selftest",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::ConfigMismatch(format!("unknown task {s:?}")))
    }
}

/// Expressions of an input file: one per line, `#` starts a comment.
pub fn input_lines(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect()
}

/// Runs a normalizing task over all inputs. Parse and configuration
/// problems are errors; engine failures are recorded per report.
pub fn run_inputs(session: &Session, task: Task, inputs: &[String]) -> Result<Json> {
    let ch = session.config.characteristic;
    match (task, ch) {
        (Task::NormalizeAs, Characteristic::Mixed) => {
            return Err(Error::ConfigMismatch("normalize-as needs equal characteristic".into()));
        }
        (Task::NormalizeKummer, Characteristic::Equal) => {
            return Err(Error::ConfigMismatch("normalize-kummer needs mixed characteristic".into()));
        }
        (Task::VerifyCertificate | Task::Selftest, _) => {
            return Err(Error::ConfigMismatch(format!("{task} does not take element inputs")));
        }
        _ => {}
    }
    let mut reports = Vec::with_capacity(inputs.len());
    for (n, text) in inputs.iter().enumerate() {
        let mut r = report_one(session, task == Task::Classify, text).map_err(|e| match e {
            Error::SyntaxError { position, expected } => {
                Error::SyntaxError { position, expected: format!("{expected} (input {})", n + 1) }
            }
            e => e,
        })?;
        let v = verify_report(session, &r);
        r["verification"] = v;
        reports.push(r);
    }
    let ok = reports.iter().all(|r| r["verification"]["ok"] == json!(true));
    Ok(json!({
        "schema": SCHEMA,
        "task": task.name(),
        "config": session.to_json(),
        "reports": reports,
        "ok": ok,
    }))
}

pub(crate) fn engine_name(session: &Session) -> &'static str {
    match (session.config.characteristic, session.val.mode) {
        (Characteristic::Equal, Mode::VT) => "artin-schreier-vt",
        (Characteristic::Equal, Mode::RT) => "artin-schreier-rt",
        (Characteristic::Mixed, Mode::VT) => "kummer-vt",
        (Characteristic::Mixed, Mode::RT) => "kummer-rt",
    }
}

pub(crate) fn defect_json(local: Result<Option<(u64, u64)>>, p: u32) -> Json {
    match local {
        Ok(Some(ef)) => match defect_of_degree_p(ef, p) {
            Ok(d) => json!({"e": ef.0, "f": ef.1, "d": d.value, "nu": d.nu}),
            Err(e) => json!({"error": json::error(&e)}),
        },
        Ok(None) => json!({"e": null, "f": null, "d": null, "nu": null}),
        Err(e) => json!({"error": json::error(&e)}),
    }
}

/// The descent records of RT constant classifications.
pub(crate) fn descents(c: &RTClassification) -> Json {
    match c {
        RTClassification::ConstantDescent { c } | RTClassification::MixedDescent { c, .. } => match descend_constant(c) {
            Ok(d) => json::descent(&d),
            Err(e) => json!({"error": json::error(&e)}),
        },
        _ => Json::Null,
    }
}

fn report_one(session: &Session, classify: bool, text: &str) -> Result<Json> {
    let mut r = json!({"input": text, "engine": engine_name(session)});
    let p = session.config.p;
    let cfg = session.val;
    let result: Result<()> = (|| {
        match (session.config.characteristic, cfg.mode) {
            (Characteristic::Equal, mode) => {
                let f = parse_element::<EqElem>(text, &session.gf, cfg)?;
                r["parsed"] = json!(format_element(&f));
                if mode == Mode::VT {
                    let out = normalize_artin_schreier(&f)?;
                    r["trace"] = json::trace(&out.trace);
                    r["output"] = json::elem(&out.output);
                    r["normal_form"] = json::as_nf(&out.normal_form);
                    r["certificates"] = json!([]);
                    let c = classify_vt(NormalFormVT::ArtinSchreier(&out.normal_form))?;
                    r["classification"] = json::vt_class(&c);
                    if classify {
                        r["defect"] = defect_json(vt_local_data(&c, p), p);
                    }
                } else {
                    let sum = BasisSum::new(&session.basis, f)?;
                    let out = normalize_artin_schreier_rt(&sum)?;
                    r["trace"] = json::trace(&out.trace);
                    r["output"] = json::elem(&out.output);
                    r["normal_form"] = json::elem(&out.output);
                    r["certificates"] = json!([]);
                    r["classification"] = json::rt_class(&out.classification);
                    if classify {
                        r["defect"] = defect_json(rt_local_data(&out.classification, p), p);
                        r["descent"] = descents(&out.classification);
                    }
                }
            }
            (Characteristic::Mixed, mode) => {
                let ctx = session.mixed.as_ref().expect("mixed session has a context");
                let f = parse_element::<MixedElem>(text, ctx, cfg)?;
                r["parsed"] = json!(format_element(&f));
                if mode == Mode::VT {
                    let out = normalize_kummer(&f, session.kummer_options())?;
                    r["certificates"] = out.certificates.iter().map(json::cert).collect();
                    r["output"] = json::elem(&out.output);
                    r["normal_form"] = json::kummer_nf(&out.normal_form);
                    r["trace"] = json!([]);
                    let c = classify_vt(NormalFormVT::Kummer(&out.normal_form))?;
                    r["classification"] = json::vt_class(&c);
                    if classify {
                        r["defect"] = defect_json(vt_local_data(&c, p), p);
                    }
                } else {
                    let sum = BasisSum::new(&session.basis, f)?;
                    let out = normalize_kummer_rt(&sum, session.kummer_options())?;
                    r["certificates"] = out.certificates.iter().map(json::cert).collect();
                    r["output"] = json::elem(&out.output);
                    r["normal_form"] = json!({"r": json::elem(&out.r), "u": json::elem(&out.u)});
                    r["trace"] = json!([]);
                    r["classification"] = json::rt_class(&out.classification);
                    if classify {
                        r["defect"] = defect_json(rt_local_data(&out.classification, p), p);
                    }
                }
            }
        }
        Ok(())
    })();
    match result {
        Ok(()) => Ok(r),
        Err(e @ (Error::SyntaxError { .. } | Error::RationalExponentOnX(_))) => Err(e),
        Err(e) => {
            r["error"] = json::error(&e);
            Ok(r)
        }
    }
}

//! Shared helpers for the integration targets: the CLI binary, the worked
//! examples and report mutations.
#![allow(dead_code)]

use std::io::Write;
use std::path::Path;
use std::process::{Command, Stdio};

use serde_json::Value as Json;

pub struct Example {
    pub name: &'static str,
    pub config: &'static str,
    pub normalize: &'static str,
    pub input: &'static str,
}

pub const EXAMPLES: [Example; 3] = [
    Example { name: "artin-schreier-vt", config: "", normalize: "normalize-as", input: "t^(-2)*x^(-4) + t^(-1)" },
    Example { name: "kummer-vt", config: "characteristic = \"mixed\"\n", normalize: "normalize-kummer", input: "1 + 2^(1/2)*x" },
    Example { name: "artin-schreier-rt", config: "mode = \"RT\"\n", normalize: "normalize-as", input: "t^(-1) + x" },
];

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    pub fn json(&self) -> Json {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", self.stdout))
    }
}

pub fn cli(args: &[&str], stdin: Option<&str>) -> Outcome {
    let mut child = Command::new(env!("CARGO_BIN_EXE_defectless"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    let out = child.wait_with_output().unwrap();
    Outcome {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// Runs `task` over `input` with a config file written into `dir`.
pub fn run_task(dir: &Path, config: &str, task: &str, input: &str) -> Outcome {
    let cfg = dir.join("session.toml");
    std::fs::write(&cfg, config).unwrap();
    cli(&["--config", cfg.to_str().unwrap(), "--task", task, "--input", "-"], Some(input))
}

pub fn verify(doc: &Json) -> Outcome {
    cli(&["--task", "verify-certificate", "--input", "-"], Some(&doc.to_string()))
}

fn is_value_text(s: &str) -> bool {
    s.starts_with('(') && s.ends_with(')') && s.contains(", ")
}

/// A different leaf of the same kind. Element texts get a low-valued
/// extra term, so the change is visible at every checked precision.
pub fn perturb(key: &str, leaf: &Json, mixed: bool) -> Option<Json> {
    Some(match leaf {
        Json::Bool(b) => Json::Bool(!b),
        Json::Number(n) => Json::from(n.as_i64()? + 1),
        Json::String(s) => Json::String(match (key, s.as_str()) {
            ("rule", _) => format!("{s}'"),
            ("kind", "TrivialExtension") => "DefectlessRamified".into(),
            ("kind", _) => "TrivialExtension".into(),
            ("shape", "Witnessed") => "Constant".into(),
            ("shape", _) => "Witnessed".into(),
            ("step", "shift") => "strip".into(),
            ("step", _) => "shift".into(),
            (_, "exact") => "(7/3, 5)".into(),
            _ if is_value_text(s) => "(7/3, 5)".into(),
            _ if s.parse::<i64>().is_ok() => (s.parse::<i64>().unwrap() + 1).to_string(),
            _ if mixed => format!("{s} + 2^(-3)*x^(-2)"),
            _ => format!("{s} + t^(-3)*x^(-2)"),
        }),
        _ => return None,
    })
}

/// Every leaf path under `v`, skipping `skip` keys.
pub fn leaf_paths(v: &Json, prefix: &mut Vec<String>, skip: &[&str], out: &mut Vec<Vec<String>>) {
    match v {
        Json::Object(m) => {
            for (k, x) in m {
                if skip.contains(&k.as_str()) {
                    continue;
                }
                prefix.push(k.clone());
                leaf_paths(x, prefix, skip, out);
                prefix.pop();
            }
        }
        Json::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                prefix.push(i.to_string());
                leaf_paths(x, prefix, skip, out);
                prefix.pop();
            }
        }
        Json::Null => {}
        _ => out.push(prefix.clone()),
    }
}

pub fn at_mut<'a>(v: &'a mut Json, path: &[String]) -> &'a mut Json {
    path.iter().fold(v, |v, k| match v {
        Json::Array(a) => &mut a[k.parse::<usize>().unwrap()],
        v => &mut v[k.as_str()],
    })
}

/// Mutated copies of `doc`, one per leaf of each report outside `config`
/// and `verification`, restricted to paths starting with `under` if given.
pub fn mutations(doc: &Json, under: Option<&str>) -> Vec<(String, Json)> {
    let mixed = doc["config"]["characteristic"] == "mixed";
    let mut paths = Vec::new();
    leaf_paths(&doc["reports"], &mut vec!["reports".into()], &["verification"], &mut paths);
    paths
        .into_iter()
        .filter(|p| under.is_none_or(|u| p.get(2).is_some_and(|k| k == u)))
        .filter_map(|p| {
            let mut d = doc.clone();
            let leaf = at_mut(&mut d, &p);
            *leaf = perturb(p.last().unwrap(), leaf, mixed)?;
            Some((p.join("."), d))
        })
        .collect()
}

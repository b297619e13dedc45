mod common;

use common::{cli, run_task, verify, EXAMPLES};

#[test]
fn worked_examples_normalize_classify_verify() {
    let dir = tempfile::tempdir().unwrap();
    for e in &EXAMPLES {
        for task in [e.normalize, "classify"] {
            let out = run_task(dir.path(), e.config, task, e.input);
            assert_eq!(out.code, 0, "{} {task}: {}", e.name, out.stderr);
            let doc = out.json();
            assert_eq!(doc["task"], task);
            assert_eq!(doc["reports"][0]["engine"], e.name);
            let v = verify(&doc);
            assert_eq!(v.code, 0, "{} {task} verify: {}", e.name, v.stdout);
        }
    }
}

#[test]
fn reports_go_to_the_out_file_and_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    std::fs::write(&input, "# worked example\nt^(-2)*x^(-4) + t^(-1)\n\nt^(-3)*x + x^(-2)\n").unwrap();
    let mut texts = Vec::new();
    for n in 0..2 {
        let out = dir.path().join(format!("out{n}.json"));
        let o = cli(&["--task", "classify", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()], None);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.is_empty());
        texts.push(std::fs::read_to_string(out).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
    let doc: serde_json::Value = serde_json::from_str(&texts[0]).unwrap();
    assert_eq!(doc["reports"].as_array().unwrap().len(), 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // Usage and configuration problems.
    assert_eq!(cli(&["--task", "bogus", "--input", "-"], None).code, 2);
    assert_eq!(cli(&["--task", "classify"], None).code, 2);
    assert_eq!(run_task(dir.path(), "p = 4\n", "classify", "x").code, 2);
    assert_eq!(run_task(dir.path(), "", "normalize-kummer", "x").code, 2);
    assert_eq!(cli(&["--task", "verify-certificate", "--input", "-"], Some("not json")).code, 2);
    // Parse errors name the position.
    let o = run_task(dir.path(), "", "classify", "x^(1/2)\n");
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("at 2"), "{}", o.stderr);
    // Engine errors are reported and fail the run.
    let o = run_task(dir.path(), "characteristic = \"mixed\"\n", "normalize-kummer", "0\n");
    assert_eq!(o.code, 1);
    assert_eq!(o.json()["reports"][0]["error"]["kind"], "ZeroGenerator");
}

#[test]
fn selftest_passes() {
    let o = cli(&["--task", "selftest"], None);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let doc = o.json();
    assert!(doc["suites"].as_array().unwrap().iter().all(|s| s["ok"] == true));
}

#[test]
fn every_certificate_mutation_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let doc = run_task(dir.path(), "characteristic = \"mixed\"\n", "classify", "x^(3) + 2*x\n").json();
    assert!(doc["reports"][0]["certificates"].as_array().unwrap().len() >= 2);
    let muts = common::mutations(&doc, Some("certificates"));
    assert!(muts.len() >= 12);
    for (path, m) in muts {
        let v = verify(&m);
        assert_eq!(v.code, 1, "{path} still verifies");
        assert!(v.json()["reports"][0]["verification"]["checks"].as_array().unwrap().iter().any(|c| c["ok"] == false));
    }
}

#[test]
fn tampered_witness_value_names_the_failure() {
    let dir = tempfile::tempdir().unwrap();
    let e = &EXAMPLES[0];
    let mut doc = run_task(dir.path(), e.config, "classify", e.input).json();
    doc["reports"][0]["classification"]["witness_value"] = "(-1/4, 1/2)".into();
    let v = verify(&doc);
    assert_eq!(v.code, 1);
    let checks = v.json()["reports"][0]["verification"]["checks"].clone();
    let failed: Vec<_> = checks.as_array().unwrap().iter().filter(|c| c["ok"] == false).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["name"], "classification");
    assert!(failed[0]["detail"].as_str().unwrap().contains("witness"));
}

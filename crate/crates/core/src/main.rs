use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde_json::Value as Json;

use defectless::cli::selftest::{DEFAULT_CASES, DEFAULT_SEED};
use defectless::cli::{input_lines, run_inputs, run_selftest, verify_document, Session, SessionConfig, Task};

/// Normalize Artin-Schreier and Kummer generators and check certificates.
#[derive(Parser, Debug)]
#[command(name = "defectless", version)]
struct Args {
    /// Session configuration (TOML); defaults apply when omitted.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// normalize-as, normalize-kummer, classify, verify-certificate or selftest.
    #[arg(long, value_name = "NAME")]
    task: Task,
    /// Expressions, one per line, or a report for verify-certificate; `-` reads stdin.
    #[arg(long, value_name = "FILE|-")]
    input: Option<String>,
    /// Where to write the JSON report; stdout when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn execute(args: &Args) -> Result<Json, String> {
    if args.task == Task::Selftest {
        return Ok(run_selftest(DEFAULT_CASES, DEFAULT_SEED));
    }
    let input = read_input(args.input.as_deref().ok_or_else(|| format!("--input is required for {}", args.task))?)?;
    if args.task == Task::VerifyCertificate {
        let doc: Json = serde_json::from_str(&input).map_err(|e| format!("report is not JSON: {e}"))?;
        return verify_document(&doc).map_err(|e| e.to_string());
    }
    let text = match &args.config {
        Some(p) => fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?,
        None => String::new(),
    };
    let session = SessionConfig::from_toml(&text).and_then(Session::new).map_err(|e| e.to_string())?;
    run_inputs(&session, args.task, &input_lines(&input)).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let doc = match execute(&args) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("defectless: {e}");
            return ExitCode::from(2);
        }
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    let written = match &args.out {
        Some(p) => fs::write(p, &text).map_err(|e| format!("{}: {e}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("defectless: {e}");
        return ExitCode::from(2);
    }
    if doc["ok"] == Json::Bool(true) {
        ExitCode::SUCCESS
    } else {
        eprintln!("defectless: verification failed");
        ExitCode::from(1)
    }
}

//! Golden fixtures: the output of one command together with its argv and
//! the config that produced it, stored under the SHA-256 of the document.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::{run as run_command, Cli, Command, Failure, Output};

#[derive(Args, Debug)]
pub struct FixturesArgs {
    /// Fixture directory; overrides the config.
    #[arg(long)]
    dir: Option<PathBuf>,
    #[command(subcommand)]
    action: Action,
}

#[derive(Subcommand, Debug)]
enum Action {
    /// Run a command and store its output, e.g.
    /// `fixtures record -- cosets --cell s_alpha --bound 5`.
    Record {
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, required = true)]
        argv: Vec<String>,
    },
    /// Re-run every stored command under its embedded config and compare.
    Check,
    /// List stored fixtures.
    List,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub argv: Vec<String>,
    pub config: RunConfig,
    pub output: Value,
}

fn output_value(out: Output) -> Value {
    match out {
        Output::Doc(v) => v,
        Output::Lines(vs) => Value::Array(vs),
    }
}

/// Parse and run `argv` (without the program name) under `cfg`.
fn replay(argv: &[String], cfg: &RunConfig) -> Result<Value, Failure> {
    let cli = Cli::try_parse_from(std::iter::once("sp4".to_string()).chain(argv.iter().cloned()))
        .map_err(|e| Failure::invalid(e.to_string()))?;
    if matches!(cli.command, Command::Fixtures(_) | Command::Verify(_)) {
        return Err(Failure::invalid("fixtures record computing commands only"));
    }
    if cli.config.is_some() || cli.format.is_some() || cli.timing {
        return Err(Failure::invalid("global flags are not recorded; put them in the config"));
    }
    Ok(output_value(run_command(&cli.command, cfg)?))
}

pub fn encode(f: &Fixture) -> (String, Vec<u8>) {
    let mut bytes = serde_json::to_vec_pretty(f).expect("fixture serialises");
    bytes.push(b'\n');
    let digest = Sha256::digest(&bytes);
    let name: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    (format!("{name}.json"), bytes)
}

fn stored(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let rd = match std::fs::read_dir(dir) {
        Ok(rd) => rd,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(Failure::invalid(format!("cannot read {}: {e}", dir.display()))),
    };
    let mut v: Vec<PathBuf> = rd
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    v.sort();
    Ok(v)
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

pub fn run(a: &FixturesArgs, cfg: &RunConfig) -> Result<Output, Failure> {
    let dir = a.dir.clone().unwrap_or_else(|| cfg.fixture_dir.clone());
    match &a.action {
        Action::Record { argv } => {
            let f = Fixture {
                argv: argv.clone(),
                config: cfg.clone(),
                output: replay(argv, cfg)?,
            };
            let (name, bytes) = encode(&f);
            std::fs::create_dir_all(&dir)
                .and_then(|_| std::fs::write(dir.join(&name), &bytes))
                .map_err(|e| Failure::invalid(format!("cannot write fixture: {e}")))?;
            Ok(Output::Doc(json!({"command": "fixtures record", "file": name, "argv": argv})))
        }
        Action::List => {
            let mut items = Vec::new();
            for p in stored(&dir)? {
                let f = read(&p)?;
                items.push(json!({"file": file_name(&p), "argv": f.argv}));
            }
            Ok(Output::Doc(json!({"command": "fixtures list", "fixtures": items})))
        }
        Action::Check => {
            let mut results = Vec::new();
            let mut failed = 0;
            for p in stored(&dir)? {
                let (status, detail) = check_one(&p);
                if status != "ok" {
                    failed += 1;
                }
                results.push(json!({"file": file_name(&p), "status": status, "detail": detail}));
            }
            let report = Output::Doc(json!({
                "command": "fixtures check",
                "checked": results.len(),
                "failed": failed,
                "results": results,
            }));
            if failed > 0 {
                Err(Failure::verification(report, format!("{failed} fixture(s) do not reproduce")))
            } else {
                Ok(report)
            }
        }
    }
}

fn read(p: &Path) -> Result<Fixture, Failure> {
    let text = std::fs::read(p).map_err(|e| Failure::invalid(format!("{}: {e}", p.display())))?;
    serde_json::from_slice(&text).map_err(|e| Failure::invalid(format!("{}: {e}", p.display())))
}

fn check_one(p: &Path) -> (&'static str, String) {
    let bytes = match std::fs::read(p) {
        Ok(b) => b,
        Err(e) => return ("unreadable", e.to_string()),
    };
    let f: Fixture = match serde_json::from_slice(&bytes) {
        Ok(f) => f,
        Err(e) => return ("malformed", e.to_string()),
    };
    let (name, canon) = encode(&f);
    if name != file_name(p) || canon != bytes {
        return ("hash_mismatch", format!("content hashes to {name}"));
    }
    match replay(&f.argv, &f.config) {
        Ok(v) if v == f.output => ("ok", String::new()),
        Ok(_) => ("output_changed", "recomputed output differs".into()),
        Err(e) => ("error", e.message),
    }
}

use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::commands::{self, Report};
use crate::Failure;

/// The reproducible part of a run.
pub struct RunRecord {
    pub command: &'static str,
    pub args: Value,
    pub seed: Option<u64>,
    pub summary: Value,
}

impl RunRecord {
    pub fn new(command: &'static str, args: &impl Serialize, seed: Option<u64>, summary: Value) -> Self {
        let args = serde_json::to_value(args).expect("arguments serialize");
        Self { command, args, seed, summary }
    }
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub command: String,
    pub args: Value,
    pub seed: Option<u64>,
    pub version: String,
    pub parallel: bool,
    pub start_unix_ms: u64,
    pub end_unix_ms: u64,
    pub summary: Value,
}

pub fn unix_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis() as u64)
}

pub fn write(path: &Path, run: &RunRecord, started: u64) -> std::io::Result<()> {
    let m = RunManifest {
        command: run.command.to_string(),
        args: run.args.clone(),
        seed: run.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        parallel: cfg!(feature = "parallel"),
        start_unix_ms: started,
        end_unix_ms: unix_ms(),
        summary: run.summary.clone(),
    };
    fs::write(path, serde_json::to_string_pretty(&m)? + "\n")
}

fn parse<T: for<'de> Deserialize<'de>>(args: Value) -> Result<T, Failure> {
    serde_json::from_value(args).map_err(|e| Failure::input(format!("manifest arguments: {e}")))
}

/// Re-runs the command recorded in a manifest (without rewriting its
/// outputs) and compares the summary exactly.
pub fn replay(path: &Path) -> Result<Report, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let m: RunManifest =
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let report = match m.command.as_str() {
        "example1" => {
            let mut a: commands::Example1Args = parse(m.args)?;
            a.emit_tuple = None;
            a.emit_adjoint = None;
            commands::example1(&a)?
        }
        "check" => commands::check(&parse(m.args)?)?,
        "upper" => commands::upper(&parse(m.args)?)?,
        "lemma41" => commands::lemma41(&parse(m.args)?)?,
        "search" => {
            let mut a: commands::SearchArgs = parse(m.args)?;
            a.out = None;
            commands::search(&a)?
        }
        other => return Err(Failure::input(format!("unknown command {other:?} in manifest"))),
    };
    let summary = report.run.map(|r| r.summary).unwrap_or(Value::Null);
    let reproduced = summary == m.summary;
    let text = if reproduced {
        format!("{}: summary reproduced exactly\n", m.command)
    } else {
        format!("{}: summary differs from the manifest\n", m.command)
    };
    Ok(Report {
        text,
        json: json!({ "command": m.command, "reproduced": reproduced, "summary": summary }),
        code: if reproduced { 0 } else { 1 },
        run: None,
    })
}

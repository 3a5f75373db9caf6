//! Report envelopes shared by the subcommands.
//!
//! Reports carry exact rationals as `"p/q"` strings plus float conveniences,
//! and a single `generated_unix_ms` timestamp that byte-comparisons are
//! expected to exclude. Everything else is a pure function of the config and
//! seeds.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use shiftlab_core::Result;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportMeta {
    pub tool: String,
    pub tool_version: String,
    pub format_version: u32,
    pub generated_unix_ms: u64,
}

impl ReportMeta {
    pub fn now() -> Self {
        let ms = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0);
        ReportMeta {
            tool: "shiftlab".to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            format_version: crate::files::VERSION,
            generated_unix_ms: ms,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Passed,
    Failed,
    Skipped,
    Errored,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub detail: Value,
}

impl CheckResult {
    pub fn of(name: &str, passed: bool, detail: Value) -> Self {
        CheckResult {
            name: name.to_string(),
            status: if passed {
                CheckStatus::Passed
            } else {
                CheckStatus::Failed
            },
            detail,
        }
    }

    pub fn skipped(name: &str, why: &str) -> Self {
        CheckResult {
            name: name.to_string(),
            status: CheckStatus::Skipped,
            detail: serde_json::json!({ "reason": why }),
        }
    }

    pub fn errored(name: &str, err: &shiftlab_core::Error) -> Self {
        CheckResult {
            name: name.to_string(),
            status: CheckStatus::Errored,
            detail: serde_json::json!({ "error": err.to_string() }),
        }
    }
}

/// Writes a report as pretty JSON (to the path, or stdout when none).
pub fn emit_json<T: Serialize>(report: &T, output: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report).expect("report serialization");
    text.push('\n');
    match output {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

//! Output plumbing: format selection, stdout-or-file sinks and the JSON
//! envelope shared by every command.
//!
//! File outputs are byte-reproducible: CSV uses `.` decimals, `,`
//! separators, one header row and LF line endings; JSON objects are
//! emitted with sorted keys; nothing embeds timestamps.

use std::fs;
use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{json, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

/// Writes `bytes` to `path`, with "-" meaning stdout.
pub fn write_output(path: &str, bytes: &[u8]) -> Result<(), CliError> {
    if path == "-" {
        io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Io(e.to_string()))
    } else {
        fs::write(path, bytes).map_err(|e| CliError::Io(format!("{path}: {e}")))
    }
}

/// Reconstructs the invocation for the JSON meta block, normalizing the
/// binary path to the tool name so output does not depend on install
/// location.
pub fn command_line() -> String {
    let mut parts: Vec<String> = std::env::args().collect();
    if !parts.is_empty() {
        parts[0] = "finkin".to_string();
    }
    parts.join(" ")
}

/// Standard JSON envelope: `params`, `series`, `meta`.
pub fn json_envelope(params: Value, series: Value, extra: &[(&str, Value)]) -> Vec<u8> {
    let mut root = serde_json::Map::new();
    root.insert("params".into(), params);
    root.insert("series".into(), series);
    for (k, v) in extra {
        root.insert((*k).into(), v.clone());
    }
    root.insert(
        "meta".into(),
        json!({
            "tool_version": env!("CARGO_PKG_VERSION"),
            "command_line": command_line(),
        }),
    );
    let mut bytes = serde_json::to_vec_pretty(&Value::Object(root)).expect("serializable");
    bytes.push(b'\n');
    bytes
}

/// Builds a CSV table: header row plus formatted records, LF endings.
pub fn csv_table(header: &str, rows: impl Iterator<Item = String>) -> Vec<u8> {
    let mut out = String::with_capacity(1024);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out.into_bytes()
}

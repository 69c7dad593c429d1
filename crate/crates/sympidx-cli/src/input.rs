//! Spec ingestion. Every input is a JSON file or an inline JSON string holding
//! one `PathSpec` or an array of them.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use sympidx::PathSpec;

use crate::error::CliError;

/// An input as read, with its content hash.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRecord {
    pub source: String,
    pub sha256: String,
}

/// Read an argument: inline JSON when it starts with `{` or `[`, otherwise a
/// file path.
pub fn read_source(arg: &str) -> Result<(String, String), CliError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(("<inline>".to_string(), arg.to_string()))
    } else {
        let text = fs::read_to_string(Path::new(arg))
            .map_err(|e| CliError::Input { source_name: arg.to_string(), message: e.to_string() })?;
        Ok((arg.to_string(), text))
    }
}

/// Parse JSON, reporting the line and column of any syntax or schema error.
pub fn parse_json<T: DeserializeOwned>(source_name: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Json {
        source_name: source_name.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn hash_text(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Load and validate every spec named by `args`, in order.
pub fn load_specs(args: &[String]) -> Result<(Vec<PathSpec>, Vec<InputRecord>), CliError> {
    let mut specs = Vec::new();
    let mut records = Vec::new();
    for arg in args {
        let (name, text) = read_source(arg)?;
        // Dispatch on the leading bracket so schema errors keep their position.
        let batch: Vec<PathSpec> = if text.trim_start().starts_with('[') {
            parse_json(&name, &text)?
        } else {
            vec![parse_json(&name, &text)?]
        };
        for (i, spec) in batch.iter().enumerate() {
            spec.validate().map_err(|e| CliError::Input {
                source_name: if batch.len() > 1 { format!("{name}[{i}]") } else { name.clone() },
                message: e.to_string(),
            })?;
        }
        records.push(InputRecord { source: name, sha256: hash_text(&text) });
        specs.extend(batch);
    }
    if specs.is_empty() {
        return Err(CliError::Input { source_name: "<arguments>".into(), message: "no path specs given".into() });
    }
    Ok((specs, records))
}

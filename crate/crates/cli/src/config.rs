use std::fs;
use std::path::Path;

use serde_json::{Map, Value};
use thiserror::Error;

use dnls_core::evolution::SimConfig;
use dnls_core::{Grid, LabError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },

    #[error(transparent)]
    Lab(#[from] LabError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lab(e) if e.is_numerical() => 1,
            CliError::Write { .. } => 1,
            _ => 2,
        }
    }
}

/// Set `key` (dotted path) to `raw`, parsed as JSON when possible and kept as a
/// string otherwise.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<(), CliError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override `{assignment}` is not KEY=VALUE")))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = doc;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(CliError::Config(format!(
                "override key `{key}` has an empty segment"
            )));
        }
        let obj = node.as_object_mut().ok_or_else(|| {
            CliError::Config(format!(
                "override `{key}`: `{part}` is not inside an object"
            ))
        })?;
        if i + 1 == parts.len() {
            obj.insert(part.to_string(), value);
            return Ok(());
        }
        node = obj
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Map::new()));
    }
    unreachable!("split always yields at least one segment")
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Parse, validate and fill defaults. Rejects data that is identically zero
/// since none of the diagnostics are defined for it.
pub fn sim_config_from(doc: Value, origin: &str) -> Result<(SimConfig, Grid), CliError> {
    let config: SimConfig =
        serde_json::from_value(doc).map_err(|e| CliError::Config(format!("{origin}: {e}")))?;
    let grid = config
        .validate()
        .map_err(|e| CliError::Config(format!("{origin}: {e}")))?;
    if config.initial.is_trivially_zero() {
        return Err(CliError::Config(format!(
            "{origin}: initial: zero initial data has no diagnostics"
        )));
    }
    let datum = config
        .initial
        .build(&grid)
        .map_err(|e| CliError::Config(format!("{origin}: initial: {e}")))?;
    if datum.is_zero() {
        return Err(CliError::Config(format!(
            "{origin}: initial: zero initial data has no diagnostics"
        )));
    }
    Ok((config, grid))
}

pub fn load_sim_config(path: &Path, overrides: &[String]) -> Result<(SimConfig, Grid), CliError> {
    let mut doc = read_json(path)?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    sim_config_from(doc, &path.display().to_string())
}

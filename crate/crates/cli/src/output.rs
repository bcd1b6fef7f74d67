use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use dnls_core::evolution::TimeSeries;
use dnls_core::{Grid, GridSpec};

use crate::config::CliError;

/// An output directory that remembers what was written to it, so the manifest
/// can list every file.
pub struct OutputDir {
    root: PathBuf,
    files: Vec<String>,
}

fn write_err(path: &Path, source: std::io::Error) -> CliError {
    CliError::Write {
        path: path.display().to_string(),
        source,
    }
}

fn pretty<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Config(format!("serializing output: {e}")))?;
    s.push('\n');
    Ok(s)
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| write_err(root, e))?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn subdir(&mut self, name: &str) -> Result<OutputDir, CliError> {
        let sub = OutputDir::create(&self.root.join(name))?;
        Ok(sub)
    }

    fn record(&mut self, name: &str) -> PathBuf {
        self.files.push(name.to_string());
        self.root.join(name)
    }

    pub fn write_json<T: Serialize + ?Sized>(
        &mut self,
        name: &str,
        value: &T,
    ) -> Result<(), CliError> {
        let text = pretty(value)?;
        let path = self.record(name);
        fs::write(&path, text).map_err(|e| write_err(&path, e))
    }

    /// `series.csv` plus its `series.json` sidecar.
    pub fn write_series(&mut self, series: &TimeSeries) -> Result<(), CliError> {
        let path = self.record("series.csv");
        series.write_csv_file(&path).map_err(|e| CliError::Write {
            path: path.display().to_string(),
            source: std::io::Error::other(e.to_string()),
        })?;
        self.write_json("series.json", &series.sidecar_json())
    }

    /// Write the manifest last so it covers every other file.
    pub fn finish(
        mut self,
        command: &str,
        seed: Option<u64>,
        grid: Option<&Grid>,
        status: &str,
    ) -> Result<(), CliError> {
        let grid = grid.map(|g| {
            let spec: GridSpec = g.spec();
            json!({ "length": spec.length, "n_points": spec.n_points, "dx": g.dx() })
        });
        let mut files = self.files.clone();
        files.push("manifest.json".into());
        let manifest = json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "seed": seed,
            "grid": grid.unwrap_or(Value::Null),
            "status": status,
            "files": files,
        });
        self.write_json("manifest.json", &manifest)
    }
}

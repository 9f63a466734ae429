//! Output directory handling and the run manifest.

use std::fs::{self, File};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, Result};

pub const MANIFEST: &str = "manifest.toml";

/// Shortest representation that parses back to the same `f64`.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    files: Vec<String>,
}

#[derive(Serialize)]
struct RunInfo<'a> {
    tool: &'a str,
    version: &'a str,
    command: &'a str,
    outputs: &'a [String],
    failures: usize,
}

#[derive(Serialize)]
struct Manifest<'a> {
    run: RunInfo<'a>,
    config: &'a RunConfig,
}

impl OutputDir {
    pub fn create(dir: impl AsRef<Path>) -> Result<Self> {
        let root = dir.as_ref().to_path_buf();
        fs::create_dir_all(&root).map_err(|e| CliError::io(&root, e))?;
        Ok(Self { root, files: Vec::new() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn csv(&mut self, name: &str) -> Result<csv::Writer<File>> {
        let path = self.path(name);
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        self.files.push(name.to_string());
        Ok(csv::Writer::from_writer(file))
    }

    /// Records the resolved configuration; contains no timestamps so reruns are identical.
    pub fn write_manifest(&self, command: &str, cfg: &RunConfig, failures: usize) -> Result<()> {
        let manifest = Manifest {
            run: RunInfo {
                tool: "nlcausal",
                version: env!("CARGO_PKG_VERSION"),
                command,
                outputs: &self.files,
                failures,
            },
            config: cfg,
        };
        let text = toml::to_string(&manifest).map_err(|e| CliError::Config(e.to_string()))?;
        let path = self.path(MANIFEST);
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))
    }
}

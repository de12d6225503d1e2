//! Run manifests and artifact writing.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use batchdispatch_core::MarketParams;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::format;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "BATCHDISPATCH_OUT_DIR";

/// Everything needed to rerun a command and reproduce its bytes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    /// Subcommand name.
    pub command: String,
    /// Market parameters, when the command uses a single parameter set.
    pub params: Option<MarketParams>,
    /// Named grid axes.
    pub grid: BTreeMap<String, Vec<f64>>,
    /// Other settings (threshold, cycles, variant, ...).
    pub settings: BTreeMap<String, String>,
    /// Base seed, when randomness is involved.
    pub seed: Option<u64>,
    /// File names written next to this manifest.
    pub outputs: Vec<String>,
    /// Harness version.
    pub tool_version: String,
}

impl RunManifest {
    /// Empty manifest for `command`.
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_owned(),
            params: None,
            grid: BTreeMap::new(),
            settings: BTreeMap::new(),
            seed: None,
            outputs: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
        }
    }

    /// Attach market parameters.
    pub fn with_params(mut self, params: MarketParams) -> Self {
        self.params = Some(params);
        self
    }

    /// Record a grid axis.
    pub fn with_axis(mut self, name: &str, values: &[f64]) -> Self {
        self.grid.insert(name.to_owned(), values.to_vec());
        self
    }

    /// Record a scalar setting.
    pub fn with_setting(mut self, name: &str, value: impl ToString) -> Self {
        self.settings.insert(name.to_owned(), value.to_string());
        self
    }

    /// Record the seed.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// A named file body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    /// File name inside the output directory.
    pub name: String,
    /// File contents.
    pub contents: String,
}

impl Artifact {
    /// Pair a file name with its contents.
    pub fn new(name: impl Into<String>, contents: impl Into<String>) -> Self {
        Artifact {
            name: name.into(),
            contents: contents.into(),
        }
    }
}

/// Output directory: the flag if given, else the environment variable, else `.`.
pub fn resolve_out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Write `artifacts` into `dir` plus `<command>.manifest.json`. Returns the paths written.
pub fn write_bundle(
    dir: &Path,
    artifacts: &[Artifact],
    mut manifest: RunManifest,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    manifest.outputs = artifacts.iter().map(|a| a.name.clone()).collect();
    let mut written = Vec::with_capacity(artifacts.len() + 1);
    for a in artifacts {
        written.push(write_file(&dir.join(&a.name), &a.contents)?);
    }
    let name = format!("{}.manifest.json", manifest.command);
    written.push(write_file(&dir.join(name), &format::json(&manifest)?)?);
    Ok(written)
}

/// Write one artifact at `path` with a `<path>.manifest.json` sidecar.
pub fn write_single(
    path: &Path,
    contents: &str,
    mut manifest: RunManifest,
) -> Result<Vec<PathBuf>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    let file_name = path
        .file_name()
        .ok_or_else(|| CliError::Usage(format!("{} is not a file path", path.display())))?
        .to_string_lossy()
        .into_owned();
    manifest.outputs = vec![file_name.clone()];
    let sidecar = path.with_file_name(format!("{file_name}.manifest.json"));
    Ok(vec![
        write_file(path, contents)?,
        write_file(&sidecar, &format::json(&manifest)?)?,
    ])
}

fn write_file(path: &Path, contents: &str) -> Result<PathBuf> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))?;
    Ok(path.to_path_buf())
}

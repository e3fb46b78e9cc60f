use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{parse_fcidump, MolecularProblem};
use crate::error::{Error, Result};

/// Sidecar JSON stored next to `<basis>.fcidump` as `<basis>.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureMetadata {
    pub molecule: String,
    pub label: String,
    pub basis: String,
    pub generator: String,
    pub geometry_angstrom: String,
    #[serde(default)]
    pub charge: i32,
    #[serde(default)]
    pub ms2: i32,
    pub n_electrons: usize,
    pub n_spatial: usize,
    /// HF energy reported by the generating program (Ha).
    pub hf_energy: f64,
    /// Recommended number of frozen core orbitals.
    #[serde(default)]
    pub n_frozen: usize,
    /// Exact energy in the frozen-core active space from the generating program (Ha).
    #[serde(default)]
    pub active_fci_energy: Option<f64>,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub path: PathBuf,
    pub problem: MolecularProblem,
    pub metadata: Option<FixtureMetadata>,
}

impl Fixture {
    pub fn label(&self) -> String {
        match &self.metadata {
            Some(m) => m.label.clone(),
            None => self
                .path
                .parent()
                .and_then(|p| p.file_name())
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
        }
    }

    pub fn basis(&self) -> String {
        match &self.metadata {
            Some(m) => m.basis.clone(),
            None => self
                .path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
        }
    }

    pub fn recommended_frozen(&self) -> usize {
        self.metadata.as_ref().map_or(0, |m| m.n_frozen)
    }
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Loads `<dir>/<basis>.fcidump` and, if present, its `<basis>.json` sidecar.
pub fn load_fixture(path: impl AsRef<Path>) -> Result<Fixture> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut problem = parse_fcidump(&text)?;
    let meta_path = path.with_extension("json");
    let metadata = if meta_path.exists() {
        let raw = fs::read_to_string(&meta_path).map_err(|e| io_err(&meta_path, e))?;
        let meta: FixtureMetadata = serde_json::from_str(&raw).map_err(|e| Error::Metadata {
            path: meta_path.display().to_string(),
            message: e.to_string(),
        })?;
        if meta.n_electrons != problem.n_electrons || meta.n_spatial != problem.n_spatial() {
            return Err(Error::Metadata {
                path: meta_path.display().to_string(),
                message: "electron/orbital counts disagree with the FCIDUMP header".into(),
            });
        }
        Some(meta)
    } else {
        None
    };
    problem.label = match &metadata {
        Some(m) => format!("{} ({})", m.label, m.basis),
        None => path.display().to_string(),
    };
    Ok(Fixture {
        path: path.to_path_buf(),
        problem,
        metadata,
    })
}

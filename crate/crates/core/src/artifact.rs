//! On-disk stage artifacts.
//!
//! Every artifact is a pretty-printed JSON object with a `schemaVersion`
//! field, written atomically. Class documents are the exception: they use the
//! canonical document schema unchanged so they can be fed back to `ingest`.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extract::OracleRecord;
use crate::gateway::LlmExchange;
use crate::partition::PartitionUnit;
use crate::prompt::Ablation;
use crate::validate::CompileOutcome;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ArtifactError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {message}")]
    Format { path: String, message: String },
    #[error("{path}: schemaVersion {found} is not supported (expected {SCHEMA_VERSION})")]
    Version { path: String, found: u64 },
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> ArtifactError {
    ArtifactError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn format_err(path: &Path, e: impl std::fmt::Display) -> ArtifactError {
    ArtifactError::Format {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Writes `text` via a temporary sibling and a rename, creating parent
/// directories as needed.
pub fn write_text(path: &Path, text: &str) -> Result<(), ArtifactError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(dir, e))?;
    std::fs::write(tmp.path(), text).map_err(|e| io_err(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| io_err(path, e))?;
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("artifact serializes");
    text.push('\n');
    text
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), ArtifactError> {
    write_text(path, &to_json(value))
}

/// Reads a versioned artifact, rejecting unknown schema versions.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, ArtifactError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| format_err(path, e))?;
    check_version(path, &value)?;
    serde_json::from_value(value).map_err(|e| format_err(path, e))
}

fn check_version(path: &Path, value: &serde_json::Value) -> Result<(), ArtifactError> {
    match value.get("schemaVersion").map(|v| v.as_u64()) {
        Some(Some(v)) if v == u64::from(SCHEMA_VERSION) => Ok(()),
        Some(Some(found)) => Err(ArtifactError::Version {
            path: path.display().to_string(),
            found,
        }),
        _ => Err(format_err(path, "missing schemaVersion")),
    }
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UnitsArtifact {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub fqcn: String,
    pub units: Vec<PartitionUnit>,
}

impl UnitsArtifact {
    pub fn new(fqcn: impl Into<String>, units: Vec<PartitionUnit>) -> Self {
        UnitsArtifact {
            schema_version: SCHEMA_VERSION,
            fqcn: fqcn.into(),
            units,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PromptEntry {
    pub unit_id: String,
    pub prompt: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PromptsArtifact {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub fqcn: String,
    pub ablation: Vec<Ablation>,
    pub prompts: Vec<PromptEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UnitExchange {
    pub unit_id: String,
    pub exchange: LlmExchange,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExchangesArtifact {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub fqcn: String,
    pub exchanges: Vec<UnitExchange>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CorpusArtifact {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub fqcn: String,
    /// Number of documented methods in the class the corpus was built from.
    pub method_count: u64,
    pub records: Vec<OracleRecord>,
}

impl CorpusArtifact {
    pub fn new(fqcn: impl Into<String>, method_count: u64, records: Vec<OracleRecord>) -> Self {
        CorpusArtifact {
            schema_version: SCHEMA_VERSION,
            fqcn: fqcn.into(),
            method_count,
            records,
        }
    }

    /// Reads a corpus artifact, or a bare array of records whose class is
    /// taken from the records (or the file stem when empty).
    pub fn load(path: &Path) -> Result<Self, ArtifactError> {
        let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| format_err(path, e))?;
        if value.is_array() {
            let records: Vec<OracleRecord> = serde_json::from_value(value).map_err(|e| format_err(path, e))?;
            let fqcn = records.first().map(|r| r.target_class.clone()).unwrap_or_else(|| {
                path.file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default()
            });
            let method_count = distinct_anchors(&records);
            return Ok(CorpusArtifact::new(fqcn, method_count, records));
        }
        check_version(path, &value)?;
        serde_json::from_value(value).map_err(|e| format_err(path, e))
    }
}

/// Count of distinct unit keys among oracle ids of the form `unit#n`.
fn distinct_anchors(records: &[OracleRecord]) -> u64 {
    let mut units: Vec<&str> = records
        .iter()
        .map(|r| r.id.rsplit_once('#').map_or(r.id.as_str(), |(u, _)| u))
        .collect();
    units.sort_unstable();
    units.dedup();
    units.len() as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ValidationStatus {
    Checked,
    Unchecked,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidationArtifact {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub fqcn: String,
    pub status: ValidationStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub holder: PathBuf,
    pub outcomes: Vec<CompileOutcome>,
}

/// Path of the artifact for `fqcn` inside a stage directory.
pub fn class_file(dir: &Path, fqcn: &str, extension: &str) -> PathBuf {
    dir.join(format!("{fqcn}.{extension}"))
}

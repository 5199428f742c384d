//! Pipeline configuration and its TOML file form.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use serde::Deserialize;
use thiserror::Error;

use crate::conformance::DEFAULT_TIMEOUT;
use crate::gateway::{LlmRequest, Mode, DEFAULT_MODEL, DEFAULT_TEMPERATURE};
use crate::prompt::Ablation;

pub const DEFAULT_CONFIG_FILE: &str = "oracle-forge.toml";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    Read { path: String, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Prompt ablations plus the partition switch, which acts before prompting.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AblationSet {
    pub prompt: BTreeSet<Ablation>,
    pub no_partition: bool,
}

impl AblationSet {
    /// Accepts names such as `noFewShot`, `no-few-shot` or `noPartition`,
    /// either as separate items or comma-separated.
    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self, ConfigError> {
        let mut set = AblationSet::default();
        for item in items {
            for flag in item.as_ref().split(',').map(str::trim).filter(|f| !f.is_empty()) {
                let key: String = flag
                    .chars()
                    .filter(|c| c.is_alphanumeric())
                    .collect::<String>()
                    .to_ascii_lowercase();
                if key == "nopartition" || key == "partition" {
                    set.no_partition = true;
                    continue;
                }
                let parsed = Ablation::from_str(flag).map_err(|e| ConfigError::Invalid(e.to_string()))?;
                set.prompt.insert(parsed);
            }
        }
        Ok(set)
    }

    pub fn names(&self) -> Vec<String> {
        let mut out: Vec<String> = self.prompt.iter().map(|a| a.to_string()).collect();
        if self.no_partition {
            out.push("noPartition".into());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ToolchainChoice {
    /// `ORACLE_FORGE_JAVAC`, then `javac` on `PATH`; skipped when neither exists.
    Auto,
    Path(PathBuf),
    Disabled,
}

impl FromStr for ToolchainChoice {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "auto" => ToolchainChoice::Auto,
            "none" | "off" => ToolchainChoice::Disabled,
            path => ToolchainChoice::Path(PathBuf::from(path)),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureBinding {
    /// Class whose oracle holder the fixture exercises.
    pub fqcn: String,
    pub fixture: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunnerConfig {
    pub path: PathBuf,
    pub timeout: Duration,
    pub fixtures: Vec<FixtureBinding>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Documentation files, or directories scanned for `.json` and `.java`.
    pub input_docs: Vec<PathBuf>,
    pub cassette_dir: PathBuf,
    /// Root for all stage artifacts.
    pub output_dir: PathBuf,
    /// Defaults to `<output_dir>/corpus`.
    pub corpus_dir: Option<PathBuf>,
    pub mode: Mode,
    pub model_id: String,
    pub temperature: f64,
    pub ablations: AblationSet,
    pub toolchain: ToolchainChoice,
    pub catalog_dir: Option<PathBuf>,
    pub annotations_dir: Option<PathBuf>,
    pub runner: Option<RunnerConfig>,
    pub jobs: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            input_docs: Vec::new(),
            cassette_dir: PathBuf::from("cassettes"),
            output_dir: PathBuf::from("out"),
            corpus_dir: None,
            mode: Mode::Replay,
            model_id: DEFAULT_MODEL.to_string(),
            temperature: DEFAULT_TEMPERATURE,
            ablations: AblationSet::default(),
            toolchain: ToolchainChoice::Auto,
            catalog_dir: None,
            annotations_dir: None,
            runner: None,
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

impl PipelineConfig {
    pub fn corpus_dir(&self) -> PathBuf {
        self.corpus_dir.clone().unwrap_or_else(|| self.output_dir.join("corpus"))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.input_docs.is_empty() {
            return Err(ConfigError::Invalid("no input documents given".into()));
        }
        if self.jobs == 0 {
            return Err(ConfigError::Invalid("jobs must be at least 1".into()));
        }
        let probe = LlmRequest {
            model_id: self.model_id.clone(),
            temperature: self.temperature,
            prompt: "probe".into(),
        };
        probe.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if self.annotations_dir.is_some() && self.catalog_dir.is_none() {
            return Err(ConfigError::Invalid("annotations need a catalog directory".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunnerFile {
    path: PathBuf,
    timeout_secs: Option<u64>,
    #[serde(default)]
    fixtures: Vec<FixtureBinding>,
}

/// `oracle-forge.toml`. Every key is optional; relative paths are resolved
/// against the file's directory.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    input_docs: Option<Vec<PathBuf>>,
    cassette_dir: Option<PathBuf>,
    output_dir: Option<PathBuf>,
    corpus_dir: Option<PathBuf>,
    mode: Option<String>,
    model_id: Option<String>,
    temperature: Option<f64>,
    ablations: Option<Vec<String>>,
    toolchain: Option<String>,
    catalog_dir: Option<PathBuf>,
    annotations_dir: Option<PathBuf>,
    jobs: Option<usize>,
    runner: Option<RunnerFile>,
}

impl PipelineConfig {
    pub fn from_toml(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let at = |p: PathBuf| if p.is_absolute() { p } else { base.join(p) };
        let mut cfg = PipelineConfig::default();
        if let Some(docs) = file.input_docs {
            cfg.input_docs = docs.into_iter().map(at).collect();
        }
        cfg.cassette_dir = at(file.cassette_dir.unwrap_or(cfg.cassette_dir));
        cfg.output_dir = at(file.output_dir.unwrap_or(cfg.output_dir));
        cfg.corpus_dir = file.corpus_dir.map(at);
        if let Some(mode) = file.mode {
            cfg.mode = mode.parse().map_err(ConfigError::Invalid)?;
        }
        if let Some(model) = file.model_id {
            cfg.model_id = model;
        }
        if let Some(t) = file.temperature {
            cfg.temperature = t;
        }
        if let Some(flags) = file.ablations {
            cfg.ablations = AblationSet::parse(&flags)?;
        }
        if let Some(tc) = file.toolchain {
            cfg.toolchain = match tc.parse().expect("infallible") {
                ToolchainChoice::Path(p) => ToolchainChoice::Path(at(p)),
                other => other,
            };
        }
        cfg.catalog_dir = file.catalog_dir.map(at);
        cfg.annotations_dir = file.annotations_dir.map(at);
        if let Some(jobs) = file.jobs {
            cfg.jobs = jobs;
        }
        cfg.runner = file.runner.map(|r| RunnerConfig {
            path: at(r.path),
            timeout: r.timeout_secs.map_or(DEFAULT_TIMEOUT, Duration::from_secs),
            fixtures: r
                .fixtures
                .into_iter()
                .map(|f| FixtureBinding {
                    fqcn: f.fqcn,
                    fixture: at(f.fixture),
                })
                .collect(),
        });
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        PipelineConfig::from_toml(&text, base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_file() {
        let text = r#"
input_docs = ["docs/Object.java", "/abs/String.json"]
cassette_dir = "cassettes"
mode = "record"
model_id = "gpt-4"
temperature = 0.7
ablations = ["noFewShot", "noPartition"]
toolchain = "none"
catalog_dir = "catalog"
jobs = 2

[runner]
path = "bin/runner"
timeout_secs = 5
fixtures = [{ fqcn = "java.lang.Object", fixture = "fx/point.json" }]
"#;
        let cfg = PipelineConfig::from_toml(text, Path::new("/proj")).unwrap();
        assert_eq!(cfg.input_docs[0], PathBuf::from("/proj/docs/Object.java"));
        assert_eq!(cfg.input_docs[1], PathBuf::from("/abs/String.json"));
        assert_eq!(cfg.output_dir, PathBuf::from("/proj/out"));
        assert_eq!(cfg.corpus_dir(), PathBuf::from("/proj/out/corpus"));
        assert_eq!(cfg.mode, Mode::Record);
        assert!(cfg.ablations.no_partition);
        assert!(cfg.ablations.prompt.contains(&Ablation::NoFewShot));
        assert_eq!(cfg.toolchain, ToolchainChoice::Disabled);
        let runner = cfg.runner.unwrap();
        assert_eq!(runner.timeout, Duration::from_secs(5));
        assert_eq!(runner.fixtures[0].fixture, PathBuf::from("/proj/fx/point.json"));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(PipelineConfig::from_toml("colour = 1", Path::new(".")).is_err());
        assert!(PipelineConfig::from_toml("mode = \"dream\"", Path::new(".")).is_err());
        assert!(PipelineConfig::from_toml("ablations = [\"noSleep\"]", Path::new(".")).is_err());
        let cfg = PipelineConfig::from_toml("temperature = 0.75\ninput_docs = [\"a\"]", Path::new(".")).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn ablation_spellings() {
        let set = AblationSet::parse(&["no-assistant,noChainOfThought", "noPartition"]).unwrap();
        assert_eq!(set.names(), vec!["noAssistant", "noChainOfThought", "noPartition"]);
    }
}

//! Client side of the conformance runner protocol.
//!
//! The runner is an external program invoked as
//! `runner <holder.java> <fixture.json> <subject sources...>`. It prints one
//! JSON object per fixture invocation on stdout, in fixture order, and exits 0
//! when every observed outcome matches the expected one, 1 otherwise, and 2
//! when the holder and fixtures fail to compile.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

#[derive(Debug, Error)]
pub enum ConformanceError {
    #[error("invalid fixture {path}: {message}")]
    InvalidFixture { path: String, message: String },
    #[error("cannot start runner {path}: {message}")]
    RunnerUnavailable { path: String, message: String },
    #[error("holder or fixture did not compile: {0}")]
    CompileFailure(String),
    #[error("runner crashed: {0}")]
    HarnessCrash(String),
    #[error("runner exceeded {0:?}")]
    Timeout(Duration),
    #[error("runner broke the output protocol: {0}")]
    Protocol(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Invocation {
    pub oracle: String,
    /// Argument expressions in the oracle language, e.g. `new Point(3, 4)`.
    pub args: Vec<String>,
    pub expected: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FixtureSpec {
    /// Source files, relative to the fixture file's directory.
    pub subject_classes: Vec<PathBuf>,
    pub invocations: Vec<Invocation>,
}

impl FixtureSpec {
    pub fn load(path: &Path) -> Result<Self, ConformanceError> {
        let invalid = |message: String| ConformanceError::InvalidFixture {
            path: path.display().to_string(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| invalid(e.to_string()))?;
        let spec: FixtureSpec = serde_json::from_str(&text).map_err(|e| invalid(e.to_string()))?;
        if let Some(inv) = spec.invocations.iter().find(|i| i.expected == Outcome::Error) {
            return Err(invalid(format!("`{}` expects error; only pass or fail can be expected", inv.oracle)));
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConformanceResult {
    pub oracle: String,
    pub outcome: Outcome,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Mismatch {
    pub index: usize,
    pub oracle: String,
    pub expected: Outcome,
    pub observed: Outcome,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConformanceReport {
    pub results: Vec<ConformanceResult>,
    pub mismatches: Vec<Mismatch>,
    pub runner_exit: i32,
}

impl ConformanceReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Checks the runner's stdout against the fixture: one well-formed line per
/// invocation, naming the invoked oracle, in order.
pub fn parse_results(stdout: &str, fixture: &FixtureSpec) -> Result<Vec<ConformanceResult>, ConformanceError> {
    let lines: Vec<&str> = stdout.lines().filter(|l| !l.trim().is_empty()).collect();
    if lines.len() != fixture.invocations.len() {
        return Err(ConformanceError::Protocol(format!(
            "expected {} result lines, got {}",
            fixture.invocations.len(),
            lines.len()
        )));
    }
    lines
        .iter()
        .zip(&fixture.invocations)
        .enumerate()
        .map(|(i, (line, inv))| {
            let result: ConformanceResult = serde_json::from_str(line)
                .map_err(|e| ConformanceError::Protocol(format!("line {}: {e}", i + 1)))?;
            if result.oracle != inv.oracle {
                return Err(ConformanceError::Protocol(format!(
                    "line {} reports `{}`, fixture invokes `{}`",
                    i + 1,
                    result.oracle,
                    inv.oracle
                )));
            }
            if result.outcome == Outcome::Error && result.message.trim().is_empty() {
                return Err(ConformanceError::Protocol(format!("line {}: error without message", i + 1)));
            }
            Ok(result)
        })
        .collect()
}

pub fn compare(fixture: &FixtureSpec, results: &[ConformanceResult]) -> Vec<Mismatch> {
    fixture
        .invocations
        .iter()
        .zip(results)
        .enumerate()
        .filter(|(_, (inv, res))| inv.expected != res.outcome)
        .map(|(index, (inv, res))| Mismatch {
            index,
            oracle: inv.oracle.clone(),
            expected: inv.expected,
            observed: res.outcome,
            message: res.message.clone(),
        })
        .collect()
}

pub struct ConformanceRun<'a> {
    pub runner: &'a Path,
    pub holder: &'a Path,
    pub fixture: &'a Path,
    pub timeout: Duration,
}

impl ConformanceRun<'_> {
    pub fn execute(&self) -> Result<ConformanceReport, ConformanceError> {
        let spec = FixtureSpec::load(self.fixture)?;
        let base = self.fixture.parent().unwrap_or(Path::new("."));
        let subjects: Vec<PathBuf> = spec.subject_classes.iter().map(|p| base.join(p)).collect();

        let mut child = Command::new(self.runner)
            .arg(self.holder)
            .arg(self.fixture)
            .args(&subjects)
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| ConformanceError::RunnerUnavailable {
                path: self.runner.display().to_string(),
                message: e.to_string(),
            })?;
        let drain = |mut pipe: Box<dyn Read + Send>| {
            std::thread::spawn(move || {
                let mut buf = String::new();
                let _ = pipe.read_to_string(&mut buf);
                buf
            })
        };
        let stdout = drain(Box::new(child.stdout.take().expect("piped stdout")));
        let stderr = drain(Box::new(child.stderr.take().expect("piped stderr")));

        let started = Instant::now();
        let status = loop {
            match child.try_wait() {
                Ok(Some(status)) => break status,
                Ok(None) if started.elapsed() >= self.timeout => {
                    let _ = child.kill();
                    let _ = child.wait();
                    return Err(ConformanceError::Timeout(self.timeout));
                }
                Ok(None) => std::thread::sleep(Duration::from_millis(20)),
                Err(e) => return Err(ConformanceError::HarnessCrash(e.to_string())),
            }
        };
        let stdout = stdout.join().unwrap_or_default();
        let stderr = stderr.join().unwrap_or_default();
        let code = status.code().unwrap_or(-1);
        match code {
            0 | 1 => {}
            2 => return Err(ConformanceError::CompileFailure(stderr.trim().to_string())),
            _ => return Err(ConformanceError::HarnessCrash(format!("exit {code}: {}", stderr.trim()))),
        }

        let results = parse_results(&stdout, &spec)?;
        let mismatches = compare(&spec, &results);
        if mismatches.is_empty() != (code == 0) {
            log::warn!(
                "runner exited {code} but {} mismatches were observed",
                mismatches.len()
            );
        }
        Ok(ConformanceReport {
            results,
            mismatches,
            runner_exit: code,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> FixtureSpec {
        serde_json::from_str(
            r#"{"subjectClasses": ["Point.java"], "invocations": [
                {"oracle": "checkSymmetric", "args": ["new Point(3, 4)", "new Point3D(3, 4, 5)"], "expected": "fail"},
                {"oracle": "checkReflexive", "args": ["new Point(3, 4)"], "expected": "pass"}
            ]}"#,
        )
        .unwrap()
    }

    #[test]
    fn parses_and_compares() {
        let out = "{\"oracle\":\"checkSymmetric\",\"outcome\":\"fail\",\"message\":\"\"}\n{\"oracle\":\"checkReflexive\",\"outcome\":\"error\",\"message\":\"java.lang.NullPointerException\"}\n";
        let results = parse_results(out, &fixture()).unwrap();
        let mismatches = compare(&fixture(), &results);
        assert_eq!(mismatches.len(), 1);
        assert_eq!(mismatches[0].oracle, "checkReflexive");
        assert_eq!(mismatches[0].observed, Outcome::Error);
    }

    #[test]
    fn protocol_violations() {
        let one = "{\"oracle\":\"checkSymmetric\",\"outcome\":\"fail\",\"message\":\"\"}\n";
        assert!(matches!(parse_results(one, &fixture()), Err(ConformanceError::Protocol(_))));
        let swapped = "{\"oracle\":\"checkReflexive\",\"outcome\":\"pass\",\"message\":\"\"}\n{\"oracle\":\"checkSymmetric\",\"outcome\":\"fail\",\"message\":\"\"}\n";
        assert!(matches!(parse_results(swapped, &fixture()), Err(ConformanceError::Protocol(_))));
        let silent_error = "{\"oracle\":\"checkSymmetric\",\"outcome\":\"error\",\"message\":\"\"}\n{\"oracle\":\"checkReflexive\",\"outcome\":\"pass\",\"message\":\"\"}\n";
        assert!(matches!(parse_results(silent_error, &fixture()), Err(ConformanceError::Protocol(_))));
    }
}

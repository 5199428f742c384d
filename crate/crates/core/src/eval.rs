//! Compilability, precision and recall over a judged corpus.
//!
//! Property matching is never inferred: which oracle covers which catalog
//! property, and whether it is correct, comes from annotation files.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::extract::{CompileStatus, CorrectnessStatus, OracleRecord};
use crate::validate::CompileOutcome;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("annotation for `{oracle_id}` refers to {what}")]
    DanglingAnnotation { oracle_id: String, what: String },
    #[error("invalid catalog: {0}")]
    InvalidCatalog(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("unknown report format `{0}` (expected table, json or markdown)")]
    UnknownFormat(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropertyKind {
    Assertion,
    Exception,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PropertyCatalogEntry {
    pub id: String,
    pub target_class: String,
    pub target_method: String,
    pub kind: PropertyKind,
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exception_type: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnnotationEntry {
    pub oracle_id: String,
    pub matched_property_ids: Vec<String>,
    pub correct: bool,
    #[serde(default)]
    pub note: String,
}

pub fn validate_catalog(catalog: &[PropertyCatalogEntry]) -> Result<(), EvalError> {
    let mut ids = HashSet::new();
    for entry in catalog {
        if !ids.insert(entry.id.as_str()) {
            return Err(EvalError::InvalidCatalog(format!("duplicate id `{}`", entry.id)));
        }
        if entry.kind == PropertyKind::Exception && entry.exception_type.as_deref().is_none_or(str::is_empty) {
            return Err(EvalError::InvalidCatalog(format!(
                "exception entry `{}` has no exceptionType",
                entry.id
            )));
        }
    }
    Ok(())
}

/// Percentage with one decimal, rounded half up, or "n/a" for a zero
/// denominator. Stored as tenths of a percent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Percent(Option<u64>);

impl Percent {
    pub const NOT_APPLICABLE: Percent = Percent(None);

    pub fn ratio(numerator: u64, denominator: u64) -> Percent {
        if denominator == 0 {
            return Percent(None);
        }
        // tenths = round(numerator * 1000 / denominator), halves upward
        Percent(Some((numerator * 2000 + denominator) / (2 * denominator)))
    }

    /// Like [`Percent::ratio`] but an empty denominator reads as 0.0.
    pub fn ratio_or_zero(numerator: u64, denominator: u64) -> Percent {
        if denominator == 0 {
            Percent(Some(0))
        } else {
            Percent::ratio(numerator, denominator)
        }
    }

    pub fn tenths(self) -> Option<u64> {
        self.0
    }

    pub fn as_f64(self) -> Option<f64> {
        self.0.map(|t| t as f64 / 10.0)
    }
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(t) => write!(f, "{}.{}", t / 10, t % 10),
            None => f.write_str("n/a"),
        }
    }
}

impl FromStr for Percent {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "n/a" {
            return Ok(Percent(None));
        }
        let (whole, frac) = s.split_once('.').ok_or_else(|| format!("bad percentage `{s}`"))?;
        let whole: u64 = whole.parse().map_err(|_| format!("bad percentage `{s}`"))?;
        let frac: u64 = match frac.len() {
            1 => frac.parse().map_err(|_| format!("bad percentage `{s}`"))?,
            _ => return Err(format!("bad percentage `{s}`")),
        };
        Ok(Percent(Some(whole * 10 + frac)))
    }
}

impl Serialize for Percent {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Percent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CompilabilityRow {
    pub class: String,
    pub n_methods: u64,
    pub n_oracles: u64,
    pub n_compilable: u64,
    pub n_correct: u64,
    pub pct_compilable: Percent,
    pub pct_correct: Percent,
}

impl CompilabilityRow {
    pub fn from_counts(class: impl Into<String>, n_methods: u64, n_oracles: u64, n_compilable: u64, n_correct: u64) -> Self {
        CompilabilityRow {
            class: class.into(),
            n_methods,
            n_oracles,
            n_compilable,
            n_correct,
            pct_compilable: Percent::ratio_or_zero(n_compilable, n_oracles),
            pct_correct: Percent::ratio_or_zero(n_correct, n_oracles),
        }
    }

    pub fn total(rows: &[CompilabilityRow]) -> Self {
        let sum = |f: fn(&CompilabilityRow) -> u64| rows.iter().map(f).sum();
        CompilabilityRow::from_counts(
            "Total",
            sum(|r| r.n_methods),
            sum(|r| r.n_oracles),
            sum(|r| r.n_compilable),
            sum(|r| r.n_correct),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CoverageRow {
    pub class: String,
    pub n_documented: u64,
    pub n_generated: u64,
    pub n_checked: u64,
    pub precision: Percent,
    pub recall: Percent,
}

impl CoverageRow {
    pub fn from_counts(class: impl Into<String>, n_documented: u64, n_generated: u64, n_checked: u64) -> Self {
        CoverageRow {
            class: class.into(),
            n_documented,
            n_generated,
            n_checked,
            precision: Percent::ratio(n_checked, n_generated),
            recall: Percent::ratio(n_generated, n_documented),
        }
    }

    pub fn total(rows: &[CoverageRow]) -> Self {
        let sum = |f: fn(&CoverageRow) -> u64| rows.iter().map(f).sum();
        CoverageRow::from_counts(
            "Total",
            sum(|r| r.n_documented),
            sum(|r| r.n_generated),
            sum(|r| r.n_checked),
        )
    }
}

fn check_annotations(
    corpus: &[OracleRecord],
    catalog: Option<&[PropertyCatalogEntry]>,
    annotations: &[AnnotationEntry],
) -> Result<(), EvalError> {
    let ids: HashSet<&str> = corpus.iter().map(|r| r.id.as_str()).collect();
    let properties: Option<HashSet<&str>> = catalog.map(|c| c.iter().map(|e| e.id.as_str()).collect());
    for a in annotations {
        if !ids.contains(a.oracle_id.as_str()) {
            return Err(EvalError::DanglingAnnotation {
                oracle_id: a.oracle_id.clone(),
                what: "an oracle missing from the corpus".into(),
            });
        }
        if let Some(properties) = &properties {
            if let Some(p) = a.matched_property_ids.iter().find(|p| !properties.contains(p.as_str())) {
                return Err(EvalError::DanglingAnnotation {
                    oracle_id: a.oracle_id.clone(),
                    what: format!("unknown property `{p}`"),
                });
            }
        }
    }
    Ok(())
}

/// Per-oracle verdict: correct only if every annotation of the oracle says so.
fn verdicts(annotations: &[AnnotationEntry]) -> HashMap<&str, bool> {
    let mut verdicts: HashMap<&str, bool> = HashMap::new();
    for a in annotations {
        *verdicts.entry(a.oracle_id.as_str()).or_insert(true) &= a.correct;
    }
    verdicts
}

/// One compilability row for a class. An outcome overrides the status stored
/// on the record.
pub fn compute_compilability(
    class: &str,
    n_methods: u64,
    corpus: &[OracleRecord],
    outcomes: &[CompileOutcome],
    annotations: &[AnnotationEntry],
) -> Result<CompilabilityRow, EvalError> {
    check_annotations(corpus, None, annotations)?;
    let status: HashMap<&str, CompileStatus> = outcomes.iter().map(|o| (o.oracle_id.as_str(), o.status)).collect();
    let n_compilable = corpus
        .iter()
        .filter(|r| status.get(r.id.as_str()).copied().unwrap_or(r.compile_status) == CompileStatus::Compilable)
        .count() as u64;
    let n_correct = verdicts(annotations).values().filter(|v| **v).count() as u64;
    Ok(CompilabilityRow::from_counts(
        class,
        n_methods,
        corpus.len() as u64,
        n_compilable,
        n_correct,
    ))
}

/// One precision/recall row for the catalog entries of `kind`. A property is
/// generated when some annotation matches it, and checked when one of the
/// matching oracles is correct.
pub fn compute_coverage(
    class: &str,
    catalog: &[PropertyCatalogEntry],
    corpus: &[OracleRecord],
    annotations: &[AnnotationEntry],
    kind: PropertyKind,
) -> Result<CoverageRow, EvalError> {
    check_annotations(corpus, Some(catalog), annotations)?;
    let verdicts = verdicts(annotations);
    let mut generated: HashSet<&str> = HashSet::new();
    let mut checked: HashSet<&str> = HashSet::new();
    for a in annotations {
        for p in &a.matched_property_ids {
            generated.insert(p);
            if verdicts[a.oracle_id.as_str()] {
                checked.insert(p);
            }
        }
    }
    let of_kind: Vec<&PropertyCatalogEntry> = catalog.iter().filter(|e| e.kind == kind).collect();
    let count = |set: &HashSet<&str>| of_kind.iter().filter(|e| set.contains(e.id.as_str())).count() as u64;
    Ok(CoverageRow::from_counts(
        class,
        of_kind.len() as u64,
        count(&generated),
        count(&checked),
    ))
}

/// Sets correctness on each annotated record. An oracle annotated more than
/// once is correct only if every annotation says so.
pub fn apply_annotations(records: &mut [OracleRecord], annotations: &[AnnotationEntry]) {
    let verdicts = verdicts(annotations);
    for record in records {
        if let Some(correct) = verdicts.get(record.id.as_str()) {
            record.correctness_status = if *correct {
                CorrectnessStatus::Correct
            } else {
                CorrectnessStatus::Incorrect
            };
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EvalReport {
    pub schema_version: u32,
    pub compilability_rows: Vec<CompilabilityRow>,
    pub compilability_total: CompilabilityRow,
    pub assertion_rows: Vec<CoverageRow>,
    pub assertion_total: CoverageRow,
    pub exception_rows: Vec<CoverageRow>,
    pub exception_total: CoverageRow,
}

impl EvalReport {
    pub fn new(
        compilability_rows: Vec<CompilabilityRow>,
        assertion_rows: Vec<CoverageRow>,
        exception_rows: Vec<CoverageRow>,
    ) -> Self {
        EvalReport {
            schema_version: 1,
            compilability_total: CompilabilityRow::total(&compilability_rows),
            assertion_total: CoverageRow::total(&assertion_rows),
            exception_total: CoverageRow::total(&exception_rows),
            compilability_rows,
            assertion_rows,
            exception_rows,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.compilability_rows.is_empty() && self.assertion_rows.is_empty() && self.exception_rows.is_empty()
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        let rows = self
            .assertion_rows
            .iter()
            .chain(&self.exception_rows)
            .chain([&self.assertion_total, &self.exception_total]);
        for row in rows {
            if !(row.n_checked <= row.n_generated && row.n_generated <= row.n_documented) {
                return Err(format!(
                    "{}: counts {}/{}/{} out of order",
                    row.class, row.n_documented, row.n_generated, row.n_checked
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Json,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "json" => Ok(ReportFormat::Json),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(EvalError::UnknownFormat(other.to_string())),
        }
    }
}

const COMPILABILITY_HEADER: [&str; 5] = ["Class", "#Methods", "#Oracles", "Compilable Oracles", "Correct Oracles"];
const COVERAGE_HEADER: [&str; 6] = ["Class", "#Documented", "#Generated", "#Checked", "Precision", "Recall"];

struct Section {
    title: &'static str,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

fn sections(report: &EvalReport) -> Vec<Section> {
    let compil = |r: &CompilabilityRow| {
        vec![
            r.class.clone(),
            r.n_methods.to_string(),
            r.n_oracles.to_string(),
            format!("{} ({}%)", r.n_compilable, r.pct_compilable),
            format!("{} ({}%)", r.n_correct, r.pct_correct),
        ]
    };
    let cov = |r: &CoverageRow| {
        vec![
            r.class.clone(),
            r.n_documented.to_string(),
            r.n_generated.to_string(),
            r.n_checked.to_string(),
            r.precision.to_string(),
            r.recall.to_string(),
        ]
    };
    let with_total = |mut rows: Vec<Vec<String>>, total: Vec<String>| {
        if !rows.is_empty() {
            rows.push(total);
        }
        rows
    };
    vec![
        Section {
            title: "Compilability",
            header: COMPILABILITY_HEADER.to_vec(),
            rows: with_total(
                report.compilability_rows.iter().map(compil).collect(),
                compil(&report.compilability_total),
            ),
        },
        Section {
            title: "Assertion oracles",
            header: COVERAGE_HEADER.to_vec(),
            rows: with_total(report.assertion_rows.iter().map(cov).collect(), cov(&report.assertion_total)),
        },
        Section {
            title: "Exception oracles",
            header: COVERAGE_HEADER.to_vec(),
            rows: with_total(report.exception_rows.iter().map(cov).collect(), cov(&report.exception_total)),
        },
    ]
}

fn render_markdown(report: &EvalReport) -> String {
    let mut out = String::new();
    for (i, section) in sections(report).iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("## {}\n\n", section.title));
        out.push_str(&format!("| {} |\n", section.header.join(" | ")));
        out.push_str(&format!(
            "|{}\n",
            section
                .header
                .iter()
                .enumerate()
                .map(|(i, _)| if i == 0 { " --- |" } else { " ---: |" })
                .collect::<String>()
        ));
        for row in &section.rows {
            out.push_str(&format!("| {} |\n", row.join(" | ")));
        }
    }
    out
}

fn render_table(report: &EvalReport) -> String {
    let mut out = String::new();
    for (i, section) in sections(report).iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(section.title);
        out.push('\n');
        let mut widths: Vec<usize> = section.header.iter().map(|h| h.len()).collect();
        for row in &section.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: &[String]| {
            cells
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let header: Vec<String> = section.header.iter().map(|s| s.to_string()).collect();
        out.push_str(&line(&header));
        out.push('\n');
        out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
        out.push('\n');
        for row in &section.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
    }
    out
}

pub fn render_report(report: &EvalReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Table => render_table(report),
        ReportFormat::Markdown => render_markdown(report),
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

/// Reads a JSON array of `T`, or an object carrying the array under `records`.
pub fn load_entries<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>, EvalError> {
    let io = |message: String| EvalError::Io {
        path: path.display().to_string(),
        message,
    };
    let text = std::fs::read_to_string(path).map_err(|e| io(e.to_string()))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| io(e.to_string()))?;
    let array = match value {
        serde_json::Value::Object(mut map) => map
            .remove("records")
            .ok_or_else(|| io("expected an array or an object with `records`".into()))?,
        other => other,
    };
    serde_json::from_value(array).map_err(|e| io(e.to_string()))
}

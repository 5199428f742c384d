//! Compilability checks for extracted oracles.
//!
//! All oracles of a class are wrapped into one holder source file and compiled
//! in a single compiler run. Each method is preceded by an `// oracle: <id>`
//! marker line, which is how diagnostics are attributed back to oracles.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extract::{CompileStatus, OracleRecord};

pub const TOOLCHAIN_ENV: &str = "ORACLE_FORGE_JAVAC";
pub const PREAMBLE_ID: &str = "<preamble>";
const MARKER: &str = "// oracle: ";

const IMPORTS: &[&str] = &[
    "java.io.*",
    "java.math.*",
    "java.util.*",
    "java.util.concurrent.*",
    "java.util.function.*",
    "java.util.regex.*",
    "java.util.stream.*",
];

/// Common JDK types living outside the imported packages. An unresolved
/// reference to one of these is a missing import, not a missing helper.
const JDK_ELSEWHERE: &[&str] = &[
    "Path", "Paths", "Files", "LocalDate", "LocalDateTime", "LocalTime", "Instant", "Duration",
    "ZonedDateTime", "Charset", "StandardCharsets", "ByteBuffer", "CharBuffer", "AtomicInteger",
    "AtomicLong", "AtomicBoolean", "AtomicReference", "ReentrantLock", "Lock", "Field", "Method",
    "Constructor", "NumberFormat", "SimpleDateFormat", "MessageFormat", "Collator", "Normalizer",
    "URI", "URL",
];

#[derive(Debug, Error)]
pub enum ValidateError {
    #[error("no usable compiler: {0}")]
    ToolchainUnavailable(String),
    #[error("compiler failed without diagnostics: {0}")]
    ToolchainCrashed(String),
    #[error("oracle `{signature}` is declared more than once ({first} and {second}); dedupe names first")]
    NameCollision {
        signature: String,
        first: String,
        second: String,
    },
    #[error("holder source has no class declaration")]
    NotAHolder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "camelCase")]
pub enum ErrorClass {
    #[default]
    None,
    TypeError,
    SyntaxError,
    MissingHelper,
    NameCollision,
    Other,
}

impl fmt::Display for ErrorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorClass::None => "none",
            ErrorClass::TypeError => "typeError",
            ErrorClass::SyntaxError => "syntaxError",
            ErrorClass::MissingHelper => "missingHelper",
            ErrorClass::NameCollision => "nameCollision",
            ErrorClass::Other => "other",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostic {
    /// Line in the holder file, 1-based.
    pub line: usize,
    /// Column in the holder file, 1-based; 0 when the compiler gave no caret.
    pub column: usize,
    pub message: String,
    /// The `symbol:` detail line for unresolved names, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CompileOutcome {
    pub oracle_id: String,
    pub status: CompileStatus,
    pub diagnostics: Vec<Diagnostic>,
    pub error_class: ErrorClass,
    pub toolchain_version: String,
}

impl CompileOutcome {
    pub fn check_invariants(&self) -> Result<(), String> {
        match self.status {
            CompileStatus::Compilable if !self.diagnostics.is_empty() || self.error_class != ErrorClass::None => {
                Err(format!("{}: compilable outcome carries diagnostics", self.oracle_id))
            }
            CompileStatus::Unchecked => Err(format!("{}: outcome without a verdict", self.oracle_id)),
            _ => Ok(()),
        }
    }
}

/// `OracleHolder_` followed by the fqcn with every non-identifier character
/// replaced by `_`.
pub fn holder_class_name(fqcn: &str) -> String {
    let sanitized: String = fqcn
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    format!("OracleHolder_{sanitized}")
}

fn reindent_body(body: &str) -> String {
    let mut lines = body.lines();
    let first = lines.next().unwrap_or("{").trim().to_string();
    let rest: Vec<&str> = lines.collect();
    let strip = rest
        .iter()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.len() - l.trim_start().len())
        .min()
        .unwrap_or(0);
    let mut out = first;
    for line in rest {
        out.push('\n');
        if line.trim().is_empty() {
            continue;
        }
        out.push_str("    ");
        out.push_str(line.get(strip..).unwrap_or(line.trim_start()).trim_end());
    }
    out
}

fn reindent_comment(comment: &str) -> String {
    comment
        .lines()
        .map(|l| {
            let t = l.trim();
            if t.starts_with('*') {
                format!("     {t}")
            } else {
                format!("    {t}")
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Builds the holder compilation unit for one class's oracles.
///
/// Methods are emitted `public static` in corpus order. Two records with the
/// same name and parameter types are rejected.
pub fn wrap_for_compile(records: &[OracleRecord], fqcn: &str) -> Result<String, ValidateError> {
    let mut seen: HashMap<String, &str> = HashMap::new();
    for record in records {
        if let Some(first) = seen.insert(record.signature(), &record.id) {
            return Err(ValidateError::NameCollision {
                signature: record.signature(),
                first: first.to_string(),
                second: record.id.clone(),
            });
        }
    }
    let class_name = holder_class_name(fqcn);
    let mut out = String::new();
    for import in IMPORTS {
        out.push_str(&format!("import {import};\n"));
    }
    out.push_str(&format!("\npublic class {class_name} {{\n"));
    for record in records {
        out.push('\n');
        out.push_str(&format!("    {MARKER}{}\n", record.id));
        if !record.doc_comment.trim().is_empty() {
            out.push_str(&reindent_comment(&record.doc_comment));
            out.push('\n');
        }
        let mut source = record.clone();
        source.body_source = reindent_body(&record.body_source);
        out.push_str(&format!("    public static {}\n", source.method_source()));
    }
    out.push_str("}\n");
    Ok(out)
}

/// Oracle id and the first and last holder lines attributed to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSpan {
    pub oracle_id: String,
    pub first_line: usize,
    pub last_line: usize,
}

/// Line spans of each marked oracle. A span runs from its marker to the line
/// before the next marker; the last one stops before the closing brace of the
/// holder. Lines outside every span belong to the preamble.
pub fn oracle_spans(holder: &str) -> Vec<OracleSpan> {
    let lines: Vec<&str> = holder.lines().collect();
    let closing = lines
        .iter()
        .rposition(|l| l.trim() == "}")
        .map_or(lines.len(), |i| i + 1);
    let markers: Vec<(usize, String)> = lines
        .iter()
        .enumerate()
        .filter_map(|(i, l)| {
            l.trim_start()
                .strip_prefix(MARKER)
                .map(|id| (i + 1, id.trim().to_string()))
        })
        .collect();
    markers
        .iter()
        .enumerate()
        .map(|(n, (line, id))| OracleSpan {
            oracle_id: id.clone(),
            first_line: *line,
            last_line: markers.get(n + 1).map_or(closing - 1, |(next, _)| next - 1),
        })
        .collect()
}

fn holder_class_of(holder: &str) -> Option<String> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| Regex::new(r"(?m)^public class ([\w$]+)").expect("class pattern compiles"));
    re.captures(holder).map(|c| c[1].to_string())
}

fn diagnostic_head() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^(.+?):(\d+): (error|warning): (.*)$").expect("diagnostic pattern compiles"))
}

/// Reads errors for `file_name` out of compiler output in the
/// `file:line: error: message` format. Warnings and errors in other files are
/// dropped.
pub fn parse_diagnostics(output: &str, file_name: &str) -> Vec<Diagnostic> {
    let lines: Vec<&str> = output.lines().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let Some(caps) = diagnostic_head().captures(lines[i]) else {
            i += 1;
            continue;
        };
        let file = Path::new(&caps[1]).file_name().and_then(|f| f.to_str()).unwrap_or("");
        let keep = &caps[3] == "error" && file == file_name;
        let mut diagnostic = Diagnostic {
            line: caps[2].parse().unwrap_or(0),
            column: 0,
            message: caps[4].trim().to_string(),
            symbol: None,
            location: None,
        };
        i += 1;
        while i < lines.len() && !diagnostic_head().is_match(lines[i]) {
            let line = lines[i];
            let trimmed = line.trim();
            if trimmed == "^" && diagnostic.column == 0 {
                diagnostic.column = line.find('^').unwrap_or(0) + 1;
            } else if let Some(sym) = trimmed.strip_prefix("symbol:") {
                diagnostic.symbol = Some(sym.trim().to_string());
            } else if let Some(loc) = trimmed.strip_prefix("location:") {
                diagnostic.location = Some(loc.trim().to_string());
            }
            i += 1;
        }
        if keep {
            out.push(diagnostic);
        }
    }
    out
}

pub fn classify_diagnostic(diagnostic: &Diagnostic) -> ErrorClass {
    let message = diagnostic.message.to_ascii_lowercase();
    const TYPE: &[&str] = &[
        "incompatible types",
        "inconvertible types",
        "incomparable types",
        "bad operand type",
        "lossy conversion",
        "cannot be converted",
        "cannot be applied to",
        "cannot be dereferenced",
        "unexpected type",
    ];
    const SYNTAX: &[&str] = &[
        "not a statement",
        "expected",
        "illegal start of",
        "unclosed",
        "reached end of file",
        "orphaned",
        "class, interface, enum, or record",
        "else without if",
    ];
    if message.contains("already defined") {
        return ErrorClass::NameCollision;
    }
    if TYPE.iter().any(|p| message.contains(p)) {
        return ErrorClass::TypeError;
    }
    if SYNTAX.iter().any(|p| message.contains(p)) {
        return ErrorClass::SyntaxError;
    }
    if message.contains("cannot find symbol") {
        let symbol = diagnostic.symbol.as_deref().unwrap_or("");
        if let Some(class) = symbol.strip_prefix("class ") {
            if !JDK_ELSEWHERE.contains(&class.trim()) {
                return ErrorClass::MissingHelper;
            }
        }
        let in_holder = diagnostic
            .location
            .as_deref()
            .is_some_and(|l| l.starts_with("class OracleHolder_"));
        if symbol.starts_with("method ") && in_holder {
            return ErrorClass::MissingHelper;
        }
    }
    ErrorClass::Other
}

/// Result of one compiler invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompilerRun {
    pub success: bool,
    pub output: String,
}

pub trait Toolchain: Send + Sync {
    fn version(&self) -> Result<String, ValidateError>;
    /// Compiles one source file called `file_name` with contents `source`.
    fn compile(&self, file_name: &str, source: &str) -> Result<CompilerRun, ValidateError>;
}

/// A `javac` executable run as a subprocess in a scratch directory.
#[derive(Debug, Clone)]
pub struct JavacToolchain {
    path: PathBuf,
}

impl JavacToolchain {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        JavacToolchain { path: path.into() }
    }

    /// Explicit path, then `ORACLE_FORGE_JAVAC`, then `javac` on `PATH`.
    pub fn locate(explicit: Option<&Path>) -> Result<Self, ValidateError> {
        let candidate = explicit
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(TOOLCHAIN_ENV).map(PathBuf::from))
            .or_else(|| {
                std::env::var_os("PATH").and_then(|paths| {
                    std::env::split_paths(&paths)
                        .map(|dir| dir.join("javac"))
                        .find(|p| p.is_file())
                })
            })
            .ok_or_else(|| {
                ValidateError::ToolchainUnavailable(format!("javac not found; pass --toolchain or set {TOOLCHAIN_ENV}"))
            })?;
        if !candidate.is_file() {
            return Err(ValidateError::ToolchainUnavailable(format!(
                "{} does not exist",
                candidate.display()
            )));
        }
        Ok(JavacToolchain::new(candidate))
    }

    fn run(&self, cmd: &mut Command) -> Result<std::process::Output, ValidateError> {
        cmd.output().map_err(|e| {
            ValidateError::ToolchainUnavailable(format!("cannot run {}: {e}", self.path.display()))
        })
    }
}

impl Toolchain for JavacToolchain {
    fn version(&self) -> Result<String, ValidateError> {
        let output = self.run(Command::new(&self.path).arg("-version"))?;
        let text = format!(
            "{}{}",
            String::from_utf8_lossy(&output.stdout),
            String::from_utf8_lossy(&output.stderr)
        );
        Ok(text.trim().to_string())
    }

    fn compile(&self, file_name: &str, source: &str) -> Result<CompilerRun, ValidateError> {
        let dir = tempfile::tempdir().map_err(|e| ValidateError::ToolchainCrashed(e.to_string()))?;
        let file = dir.path().join(file_name);
        std::fs::write(&file, source).map_err(|e| ValidateError::ToolchainCrashed(e.to_string()))?;
        let classes = dir.path().join("classes");
        let output = self.run(
            Command::new(&self.path)
                .arg("-proc:none")
                .arg("-nowarn")
                .args(["-Xmaxerrs", "100000"])
                .arg("-d")
                .arg(&classes)
                .arg(&file),
        )?;
        Ok(CompilerRun {
            success: output.status.success(),
            output: format!(
                "{}{}",
                String::from_utf8_lossy(&output.stdout),
                String::from_utf8_lossy(&output.stderr)
            ),
        })
    }
}

/// Toolchain answering from a closure; used where no compiler is installed.
pub struct StubToolchain<F> {
    version: String,
    respond: F,
}

impl<F> StubToolchain<F>
where
    F: Fn(&str, &str) -> CompilerRun + Send + Sync,
{
    pub fn new(version: impl Into<String>, respond: F) -> Self {
        StubToolchain {
            version: version.into(),
            respond,
        }
    }
}

impl<F> Toolchain for StubToolchain<F>
where
    F: Fn(&str, &str) -> CompilerRun + Send + Sync,
{
    fn version(&self) -> Result<String, ValidateError> {
        Ok(self.version.clone())
    }

    fn compile(&self, file_name: &str, source: &str) -> Result<CompilerRun, ValidateError> {
        Ok((self.respond)(file_name, source))
    }
}

/// Compiles a holder and returns one outcome per marked oracle, in holder
/// order, plus a [`PREAMBLE_ID`] outcome when diagnostics fall outside every
/// oracle. An oracle with several diagnostics is classed by its first syntax
/// error, else its first unresolved helper, else its first diagnostic.
pub fn compile_check(holder: &str, toolchain: &dyn Toolchain) -> Result<Vec<CompileOutcome>, ValidateError> {
    let class_name = holder_class_of(holder).ok_or(ValidateError::NotAHolder)?;
    let file_name = format!("{class_name}.java");
    let version = toolchain.version()?;
    let run = toolchain.compile(&file_name, holder)?;
    let diagnostics = parse_diagnostics(&run.output, &file_name);
    if !run.success && diagnostics.is_empty() {
        return Err(ValidateError::ToolchainCrashed(run.output.trim().to_string()));
    }

    let spans = oracle_spans(holder);
    let mut per_oracle: Vec<Vec<Diagnostic>> = vec![Vec::new(); spans.len()];
    let mut preamble = Vec::new();
    for diagnostic in diagnostics {
        match spans
            .iter()
            .position(|s| (s.first_line..=s.last_line).contains(&diagnostic.line))
        {
            Some(i) => per_oracle[i].push(diagnostic),
            None => preamble.push(diagnostic),
        }
    }

    let outcome = |oracle_id: String, diagnostics: Vec<Diagnostic>, fallback: ErrorClass| {
        let error_class = match diagnostics.first() {
            None => ErrorClass::None,
            Some(_) if fallback != ErrorClass::None => fallback,
            Some(first) => {
                let classes: Vec<ErrorClass> = diagnostics.iter().map(classify_diagnostic).collect();
                [ErrorClass::SyntaxError, ErrorClass::MissingHelper]
                    .into_iter()
                    .find(|c| classes.contains(c))
                    .unwrap_or_else(|| classify_diagnostic(first))
            }
        };
        CompileOutcome {
            oracle_id,
            status: if diagnostics.is_empty() {
                CompileStatus::Compilable
            } else {
                CompileStatus::NonCompilable
            },
            diagnostics,
            error_class,
            toolchain_version: version.clone(),
        }
    };
    let mut outcomes: Vec<CompileOutcome> = spans
        .into_iter()
        .zip(per_oracle)
        .map(|(span, diags)| outcome(span.oracle_id, diags, ErrorClass::None))
        .collect();
    if !preamble.is_empty() {
        outcomes.push(outcome(PREAMBLE_ID.to_string(), preamble, ErrorClass::Other));
    }
    Ok(outcomes)
}

/// Copies outcome statuses onto the matching records. Records without an
/// outcome are left unchanged.
pub fn apply_outcomes(records: &mut [OracleRecord], outcomes: &[CompileOutcome]) {
    let by_id: HashMap<&str, &CompileOutcome> = outcomes.iter().map(|o| (o.oracle_id.as_str(), o)).collect();
    for record in records {
        if let Some(outcome) = by_id.get(record.id.as_str()) {
            record.compile_status = outcome.status;
        }
    }
}

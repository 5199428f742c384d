//! Turns model responses into oracle records.
//!
//! Code is located by triple-backtick fences; a response without fences falls
//! back to indented runs and then to the whole text. Inside a block, method
//! headers are found by pattern and bodies by brace matching, so one block may
//! yield several oracles. Only methods returning `boolean` become records.

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::doc_model::{is_identifier, normalize_type, simple_type_name, split_top_level};
use crate::gateway::LlmExchange;
use crate::java_text::{mask, matching_brace};
use crate::partition::PartitionUnit;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("response for {unit_id} contains no boolean oracle methods")]
    NoOraclesFound { unit_id: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    Assertion,
    Exception,
    Hybrid,
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleKind::Assertion => "assertion",
            OracleKind::Exception => "exception",
            OracleKind::Hybrid => "hybrid",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "camelCase")]
pub enum CompileStatus {
    #[default]
    Unchecked,
    Compilable,
    NonCompilable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "camelCase")]
pub enum CorrectnessStatus {
    #[default]
    Unjudged,
    Correct,
    Incorrect,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ParamDecl {
    pub type_name: String,
    pub param_name: String,
}

pub const REQUIRES_HELPERS: &str = "requiresHelpers";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleRecord {
    pub id: String,
    pub name: String,
    /// Generic parameter list such as `<E>`, or empty.
    #[serde(default)]
    pub type_params: String,
    pub param_decls: Vec<ParamDecl>,
    pub return_type: String,
    #[serde(default)]
    pub throws_clause: Vec<String>,
    /// Method body from the opening to the closing brace, verbatim.
    pub body_source: String,
    pub doc_comment: String,
    pub kind: OracleKind,
    pub target_class: String,
    pub target_methods: Vec<String>,
    pub property_label: String,
    pub compile_status: CompileStatus,
    pub correctness_status: CorrectnessStatus,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl OracleRecord {
    pub fn param_types(&self) -> Vec<String> {
        self.param_decls.iter().map(|p| p.type_name.clone()).collect()
    }

    /// `name(T1, T2)`.
    pub fn signature(&self) -> String {
        format!("{}({})", self.name, self.param_types().join(", "))
    }

    /// Full method source as it should appear in a compilation unit.
    pub fn method_source(&self) -> String {
        let mut out = String::new();
        if !self.type_params.is_empty() {
            out.push_str(&self.type_params);
            out.push(' ');
        }
        out.push_str(&self.return_type);
        out.push(' ');
        out.push_str(&self.name);
        out.push('(');
        out.push_str(
            &self
                .param_decls
                .iter()
                .map(|p| format!("{} {}", p.type_name, p.param_name))
                .collect::<Vec<_>>()
                .join(", "),
        );
        out.push(')');
        if !self.throws_clause.is_empty() {
            out.push_str(" throws ");
            out.push_str(&self.throws_clause.join(", "));
        }
        out.push(' ');
        out.push_str(&self.body_source);
        out
    }

    pub fn requires_helpers(&self) -> bool {
        self.notes.iter().any(|n| n == REQUIRES_HELPERS)
    }

    pub fn add_note(&mut self, note: &str) {
        if !self.notes.iter().any(|n| n == note) {
            self.notes.push(note.to_string());
        }
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        if self.return_type != "boolean" {
            return Err(format!("{}: return type `{}` is not boolean", self.id, self.return_type));
        }
        if !is_identifier(&self.name) {
            return Err(format!("{}: `{}` is not an identifier", self.id, self.name));
        }
        if let Some(p) = self.param_decls.iter().find(|p| !is_identifier(&p.param_name)) {
            return Err(format!("{}: parameter `{}` is not an identifier", self.id, p.param_name));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct CodeBlock {
    code: String,
    heading: Option<String>,
}

fn fenced_blocks(text: &str) -> Option<Vec<CodeBlock>> {
    let mut blocks = Vec::new();
    let mut prose: Vec<&str> = Vec::new();
    let mut code: Option<Vec<&str>> = None;
    let mut saw_fence = false;
    for line in text.lines() {
        let is_fence = line.trim_start().starts_with("```");
        match (&mut code, is_fence) {
            (None, true) => {
                saw_fence = true;
                code = Some(Vec::new());
            }
            (None, false) => prose.push(line),
            (Some(lines), false) => lines.push(line),
            (Some(lines), true) => {
                blocks.push(CodeBlock {
                    code: lines.join("\n"),
                    heading: heading_of(&prose),
                });
                prose.clear();
                code = None;
            }
        }
    }
    if let Some(lines) = code {
        blocks.push(CodeBlock {
            code: lines.join("\n"),
            heading: heading_of(&prose),
        });
    }
    saw_fence.then_some(blocks)
}

fn indented_blocks(text: &str) -> Vec<CodeBlock> {
    let mut blocks = Vec::new();
    let mut prose: Vec<&str> = Vec::new();
    let mut code: Vec<&str> = Vec::new();
    let flush = |code: &mut Vec<&str>, prose: &mut Vec<&str>, blocks: &mut Vec<CodeBlock>| {
        if code.iter().any(|l| !l.trim().is_empty()) {
            blocks.push(CodeBlock {
                code: code.join("\n"),
                heading: heading_of(prose),
            });
            prose.clear();
        }
        code.clear();
    };
    for line in text.lines() {
        if line.starts_with("    ") || line.starts_with('\t') || (line.trim().is_empty() && !code.is_empty()) {
            code.push(line);
        } else {
            flush(&mut code, &mut prose, &mut blocks);
            prose.push(line);
        }
    }
    flush(&mut code, &mut prose, &mut blocks);
    blocks
}

/// Last heading-like line of the prose before a block: markdown headings and
/// bold-only lines first, then lines introducing code with a colon.
fn heading_of(prose: &[&str]) -> Option<String> {
    let clean = |s: &str| -> Option<String> {
        let s = s.trim().trim_start_matches('#').trim();
        let s = s.trim_matches('*').trim().trim_end_matches(':').trim_matches('*').trim();
        let s = s
            .trim_start_matches(|c: char| c.is_ascii_digit())
            .trim_start_matches(['.', ')'])
            .trim();
        (!s.is_empty()).then(|| s.to_string())
    };
    let strong = prose.iter().rev().find(|l| {
        let t = l.trim();
        t.starts_with('#') || (t.starts_with("**") && t.trim_end_matches(':').ends_with("**") && t.len() > 4)
    });
    if let Some(line) = strong {
        return clean(line);
    }
    prose
        .iter()
        .rev()
        .find(|l| l.trim().ends_with(':'))
        .and_then(|l| clean(l))
}

struct ScannedMethod {
    doc_comment: String,
    type_params: String,
    return_type: String,
    name: String,
    params: String,
    throws: Vec<String>,
    body: String,
}

const KEYWORDS: &[&str] = &[
    "if", "else", "for", "while", "do", "switch", "case", "return", "new", "throw", "try",
    "catch", "finally", "synchronized", "class", "interface", "enum", "record", "extends",
    "implements", "import", "package",
];

fn header_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(concat!(
            r"(?m)^[ \t]*(?:@[\w.]+(?:\([^)]*\))?\s+)*",
            r"(?:(?:public|protected|private|static|final|synchronized|default|abstract)\s+)*",
            r"(?:(?P<tparams><[^(){};=]*>)\s*)?",
            r"(?P<ret>[A-Za-z_$][\w$.]*(?:\s*<[^(){};=]*>)?(?:\s*\[\s*\])*)\s+",
            r"(?P<name>[A-Za-z_$][\w$]*)\s*\((?P<params>[^()]*)\)\s*",
            r"(?:throws\s+(?P<throws>[\w$.,\s]+?)\s*)?\{",
        ))
        .expect("header pattern compiles")
    })
}

fn scan_methods(code: &str) -> Vec<ScannedMethod> {
    let masked = mask(code);
    let mut methods = Vec::new();
    let mut pos = 0;
    while let Some(caps) = header_regex().captures_at(&masked.text, pos) {
        let whole = caps.get(0).expect("match");
        let name = &caps["name"];
        let ret = caps["ret"].trim();
        let open = whole.end() - 1;
        if KEYWORDS.contains(&name) || KEYWORDS.contains(&ret) {
            pos = whole.end();
            continue;
        }
        let Some(close) = matching_brace(&masked.text, open) else {
            log::warn!("method `{name}` has an unbalanced body; skipped");
            pos = whole.end();
            continue;
        };
        let header_start = whole.start() + (whole.as_str().len() - whole.as_str().trim_start().len());
        methods.push(ScannedMethod {
            doc_comment: preceding_comment(code, &masked.comments, header_start),
            type_params: caps
                .name("tparams")
                .map(|m| normalize_type(m.as_str()))
                .unwrap_or_default(),
            return_type: normalize_type(ret),
            name: name.to_string(),
            params: code[caps.name("params").expect("params").range()].to_string(),
            throws: caps
                .name("throws")
                .map(|m| {
                    m.as_str()
                        .split(',')
                        .map(|t| t.trim().to_string())
                        .filter(|t| !t.is_empty())
                        .collect()
                })
                .unwrap_or_default(),
            body: code[open..=close].to_string(),
        });
        pos = close + 1;
    }
    methods
}

/// The comment block directly above `start`: one block comment, or a run of
/// line comments, with only whitespace between it and the declaration.
fn preceding_comment(code: &str, comments: &[crate::java_text::CommentSpan], start: usize) -> String {
    let mut cursor = start;
    let mut parts: Vec<&str> = Vec::new();
    loop {
        let before = code[..cursor].trim_end();
        let Some(span) = comments.iter().find(|c| c.end == before.len()) else {
            break;
        };
        // A line comment trailing code on the same line belongs to that code.
        let line_start = code[..span.start].rfind('\n').map_or(0, |n| n + 1);
        if !code[line_start..span.start].trim().is_empty() {
            break;
        }
        parts.push(&code[span.start..span.end]);
        cursor = span.start;
        if !span.line_comment {
            break;
        }
    }
    parts.reverse();
    parts.join("\n")
}

fn parse_params(text: &str) -> Option<Vec<ParamDecl>> {
    if text.trim().is_empty() {
        return Some(Vec::new());
    }
    split_top_level(text, ',')
        .into_iter()
        .map(|raw| {
            let cleaned: String = raw
                .split_whitespace()
                .filter(|w| *w != "final" && !w.starts_with('@'))
                .collect::<Vec<_>>()
                .join(" ");
            let (ty, name) = cleaned.rsplit_once(' ')?;
            let (ty, name) = match name.strip_suffix("[]") {
                Some(stripped) => (format!("{ty}[]"), stripped.to_string()),
                None => (ty.to_string(), name.to_string()),
            };
            Some(ParamDecl {
                type_name: normalize_type(&ty),
                param_name: name,
            })
        })
        .collect()
}

fn first_sentence(doc_comment: &str) -> Option<String> {
    let text: Vec<&str> = doc_comment
        .lines()
        .map(|l| {
            l.trim()
                .trim_start_matches("/**")
                .trim_start_matches("/*")
                .trim_start_matches("//")
                .trim_end_matches("*/")
                .trim_start_matches('*')
                .trim()
        })
        .take_while(|l| !l.starts_with('@'))
        .filter(|l| !l.is_empty())
        .collect();
    let joined = text.join(" ");
    let sentence = match joined.find(". ") {
        Some(i) => &joined[..i],
        None => joined.trim_end_matches('.'),
    };
    let sentence = sentence.trim();
    (!sentence.is_empty()).then(|| sentence.to_string())
}

fn target_methods(body: &str, unit: &PartitionUnit) -> Vec<String> {
    let masked = mask(body).text;
    let mut out: Vec<String> = Vec::new();
    for method in unit.methods() {
        if out.contains(&method.name) {
            continue;
        }
        let pattern = format!(r"(?:\.|::)\s*{}\b", regex::escape(&method.name));
        if Regex::new(&pattern).is_ok_and(|re| re.is_match(&masked)) {
            out.push(method.name.clone());
        }
    }
    if out.is_empty() {
        out.push(unit.anchor.name.clone());
    }
    out
}

pub fn extract_oracles(exchange: &LlmExchange, unit: &PartitionUnit) -> Result<Vec<OracleRecord>, ExtractError> {
    let text = exchange.response_text.as_str();
    let mut blocks = fenced_blocks(text).unwrap_or_else(|| indented_blocks(text));
    if blocks.iter().all(|b| scan_methods(&b.code).is_empty()) && fenced_blocks(text).is_none() {
        blocks = vec![CodeBlock {
            code: text.to_string(),
            heading: None,
        }];
    }

    let mut records = Vec::new();
    for block in &blocks {
        for (index_in_block, method) in scan_methods(&block.code).into_iter().enumerate() {
            if method.return_type != "boolean" {
                log::warn!(
                    "{}: skipping `{}` returning {}",
                    unit.id(),
                    method.name,
                    method.return_type
                );
                continue;
            }
            let Some(param_decls) = parse_params(&method.params) else {
                log::warn!("{}: cannot read parameters of `{}`", unit.id(), method.name);
                continue;
            };
            let label = if index_in_block == 0 { block.heading.clone() } else { None }
                .or_else(|| first_sentence(&method.doc_comment))
                .or_else(|| block.heading.clone())
                .unwrap_or_else(|| "unlabeled".to_string());
            let mut record = OracleRecord {
                id: format!("{}#{}", unit.id(), records.len() + 1),
                name: method.name,
                type_params: method.type_params,
                param_decls,
                return_type: method.return_type,
                throws_clause: method.throws,
                target_methods: target_methods(&method.body, unit),
                body_source: method.body,
                doc_comment: method.doc_comment,
                kind: OracleKind::Assertion,
                target_class: unit.class_fqcn.clone(),
                property_label: label,
                compile_status: CompileStatus::Unchecked,
                correctness_status: CorrectnessStatus::Unjudged,
                notes: Vec::new(),
            };
            if record.body_source.to_ascii_lowercase().contains("hypothetical") {
                record.add_note(REQUIRES_HELPERS);
            }
            record.kind = classify_kind(&record, unit);
            records.push(record);
        }
    }
    if records.is_empty() {
        return Err(ExtractError::NoOraclesFound { unit_id: unit.id() });
    }
    Ok(records)
}

fn catch_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"\bcatch\s*\(\s*(?:final\s+)?(?P<types>[\w$.]+(?:\s*\|\s*[\w$.]+)*)\s+[\w$]+\s*\)\s*\{")
            .expect("catch pattern compiles")
    })
}

fn comparison_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(concat!(
            r"==|!=|<=|>=|\s<\s|\s>\s",
            r"|\.\s*(?:equals|equalsIgnoreCase|contentEquals|compareTo)\s*\(",
            r"|\bObjects\s*\.\s*equals\s*\(",
            r"|\breturn\s+(?:[^;\s]|\s[^;])*?[^\s;]\s*;",
        ))
        .expect("comparison pattern compiles")
    })
}

/// True when code outside catch handlers compares behavior: relational or
/// equality operators, equality calls, or a non-literal return value.
fn compares_behavior(outside_catch: &str) -> bool {
    comparison_regex().find_iter(outside_catch).any(|m| {
        let s = m.as_str();
        match s.strip_prefix("return") {
            Some(expr) => {
                let expr = expr.trim().trim_end_matches(';').trim();
                expr != "true" && expr != "false"
            }
            None => true,
        }
    })
}

/// Assertion unless the body catches an exception the unit documents; among
/// those, exception when nothing outside the handlers compares behavior, hybrid
/// otherwise.
pub fn classify_kind(record: &OracleRecord, unit: &PartitionUnit) -> OracleKind {
    let documented = unit.documented_exceptions();
    let masked = mask(&record.body_source).text;
    let mut outside = masked.clone().into_bytes();
    let mut catches_documented = false;
    for caps in catch_regex().captures_iter(&masked) {
        let whole = caps.get(0).expect("match");
        let types = &caps["types"];
        if types
            .split('|')
            .any(|t| documented.iter().any(|d| d == simple_type_name(t)))
        {
            catches_documented = true;
        }
        let end = matching_brace(&masked, whole.end() - 1).unwrap_or(masked.len() - 1);
        for b in &mut outside[whole.start()..=end] {
            if *b != b'\n' {
                *b = b' ';
            }
        }
    }
    if !catches_documented {
        return OracleKind::Assertion;
    }
    let outside = String::from_utf8(outside).unwrap_or_default();
    if compares_behavior(&outside) {
        OracleKind::Hybrid
    } else {
        OracleKind::Exception
    }
}

/// Renames later oracles whose name and parameter types repeat an earlier one,
/// appending `_2`, `_3`, ... in encounter order. Nothing else changes.
pub fn dedupe_names(records: Vec<OracleRecord>) -> Vec<OracleRecord> {
    let mut taken: HashSet<(String, Vec<String>)> = HashSet::new();
    records
        .into_iter()
        .map(|mut record| {
            let types = record.param_types();
            if !taken.insert((record.name.clone(), types.clone())) {
                let base = record.name.clone();
                let mut n = 2;
                while taken.contains(&(format!("{base}_{n}"), types.clone())) {
                    n += 1;
                }
                record.name = format!("{base}_{n}");
                taken.insert((record.name.clone(), types));
            }
            record
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc_model::{MethodDoc, ThrowsTag};
    use crate::gateway::LlmRequest;

    fn unit(name: &str, throws: &[&str]) -> PartitionUnit {
        let anchor = MethodDoc {
            name: name.into(),
            param_types: vec![],
            return_type: "boolean".into(),
            description_text: String::new(),
            throws_tags: throws
                .iter()
                .map(|t| ThrowsTag {
                    exception_type: t.to_string(),
                    condition: String::new(),
                })
                .collect(),
            see_also: vec![],
            deprecated: false,
        };
        PartitionUnit::new("java.util.List", anchor, vec![])
    }

    fn exchange(text: &str) -> LlmExchange {
        let request = LlmRequest::new("gpt-4", "p");
        LlmExchange {
            cassette_key: request.cassette_key(),
            request,
            response_text: text.into(),
            recorded_at: chrono::DateTime::UNIX_EPOCH,
        }
    }

    #[test]
    fn prose_only_response_has_no_oracles() {
        let err = extract_oracles(&exchange("I would test that isEmpty agrees with size."), &unit("isEmpty", &[]))
            .unwrap_err();
        assert_eq!(
            err,
            ExtractError::NoOraclesFound {
                unit_id: "java.util.List.isEmpty()".into()
            }
        );
    }

    #[test]
    fn several_methods_per_block_and_labels() {
        let text = "### Emptiness\n```java\n/**\n * Checks emptiness. More text.\n */\nboolean checkIsEmpty(List<?> list) {\n    return list.isEmpty() == (list.size() == 0);\n}\n\n// Size is never negative\nboolean checkSize(List<?> list) { return list.size() >= 0; }\n\nvoid helper() {}\n```\n";
        let records = extract_oracles(&exchange(text), &unit("isEmpty", &[])).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].property_label, "Emptiness");
        assert_eq!(records[0].doc_comment, "/**\n * Checks emptiness. More text.\n */");
        assert_eq!(records[1].property_label, "Size is never negative");
        assert_eq!(records[1].id, "java.util.List.isEmpty()#2");
        assert_eq!(records[0].target_methods, vec!["isEmpty"]);
        assert_eq!(
            records[0].param_decls,
            vec![ParamDecl {
                type_name: "List<?>".into(),
                param_name: "list".into()
            }]
        );
        for r in &records {
            r.check_invariants().unwrap();
        }
    }

    #[test]
    fn unfenced_indented_code_is_scanned() {
        let text = "Here is the oracle:\n\n    boolean checkReflexive(Object x) {\n        return x != null ? x.equals(x) : true;\n    }\n\nThat is all.";
        let records = extract_oracles(&exchange(text), &unit("equals", &[])).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].property_label, "Here is the oracle");
    }

    #[test]
    fn method_source_round_trips_signature() {
        let text = "```\n<E> boolean check(List<E> list, final E o) throws Exception {\n  return list.remove(o);\n}\n```";
        let r = &extract_oracles(&exchange(text), &unit("remove", &[])).unwrap()[0];
        assert_eq!(r.type_params, "<E>");
        assert_eq!(r.throws_clause, vec!["Exception"]);
        assert_eq!(
            r.method_source(),
            "<E> boolean check(List<E> list, E o) throws Exception {\n  return list.remove(o);\n}"
        );
    }

    #[test]
    fn pure_catch_shape_is_exception() {
        let text = "```java\nboolean checkThrows(List<?> l) {\n  try { l.get(-1); } catch (IndexOutOfBoundsException e) { return true; }\n  return false;\n}\n```";
        let u = unit("get", &["IndexOutOfBoundsException"]);
        let r = &extract_oracles(&exchange(text), &u).unwrap()[0];
        assert_eq!(r.kind, OracleKind::Exception);
        // Undocumented catch types do not make an exception oracle.
        let u = unit("get", &["NullPointerException"]);
        assert_eq!(classify_kind(r, &u), OracleKind::Assertion);
    }

    #[test]
    fn comparison_outside_handler_is_hybrid() {
        let text = "```java\nboolean checkGet(List<String> l, int i) {\n  try { return l.get(i) != null || l.contains(null); }\n  catch (java.lang.IndexOutOfBoundsException | ClassCastException e) { return i < 0; }\n}\n```";
        let u = unit("get", &["IndexOutOfBoundsException"]);
        let r = &extract_oracles(&exchange(text), &u).unwrap()[0];
        assert_eq!(r.kind, OracleKind::Hybrid);
    }

    fn record(name: &str, types: &[&str], body: &str) -> OracleRecord {
        OracleRecord {
            id: format!("c.X.m()#{name}{body}"),
            name: name.into(),
            type_params: String::new(),
            param_decls: types
                .iter()
                .enumerate()
                .map(|(i, t)| ParamDecl {
                    type_name: t.to_string(),
                    param_name: format!("p{i}"),
                })
                .collect(),
            return_type: "boolean".into(),
            throws_clause: vec![],
            body_source: body.into(),
            doc_comment: String::new(),
            kind: OracleKind::Assertion,
            target_class: "c.X".into(),
            target_methods: vec![],
            property_label: "unlabeled".into(),
            compile_status: CompileStatus::Unchecked,
            correctness_status: CorrectnessStatus::Unjudged,
            notes: vec![],
        }
    }

    #[test]
    fn dedupe_two_way_collision() {
        let a = record("checkIndexValidation", &["String", "int"], "{ a }");
        let b = record("checkIndexValidation", &["String", "int"], "{ b }");
        let out = dedupe_names(vec![a.clone(), b.clone()]);
        assert_eq!(out[0], a);
        assert_eq!(out[1].name, "checkIndexValidation_2");
        assert_eq!(out[1].body_source, b.body_source);
        assert_eq!(out[1].param_decls, b.param_decls);
    }

    #[test]
    fn dedupe_three_way_and_overloads() {
        let recs = vec![
            record("f", &["int"], "{1}"),
            record("f", &["long"], "{2}"),
            record("f", &["int"], "{3}"),
            record("f", &["int"], "{4}"),
        ];
        let names: Vec<String> = dedupe_names(recs).into_iter().map(|r| r.name).collect();
        assert_eq!(names, vec!["f", "f", "f_2", "f_3"]);
    }

    #[test]
    fn dedupe_without_collisions_is_identity() {
        let recs = vec![record("a", &[], "{}"), record("b", &[], "{}")];
        assert_eq!(dedupe_names(recs.clone()), recs);
    }

    #[test]
    fn hypothetical_helper_is_noted() {
        let text = "```java\nboolean checkClone(Object x) {\n  // CloneExample is a hypothetical class\n  return x instanceof CloneExample;\n}\n```";
        let r = &extract_oracles(&exchange(text), &unit("clone", &[])).unwrap()[0];
        assert!(r.requires_helpers());
    }
}

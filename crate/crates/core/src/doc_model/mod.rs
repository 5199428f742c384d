//! Documentation model: classes, methods, throws tags and see-also references.
//!
//! Two ingestion routes produce a [`ClassDoc`]: the canonical JSON interchange
//! format (one file per class) and a doc-comment scanner over Java source
//! files. Both normalize prose the same way, so a document parsed from either
//! route serializes to the same canonical JSON.

mod javadoc;

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use javadoc::parse_java_source;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DocError {
    #[error("malformed documentation at {line}:{column}: {message}")]
    MalformedDoc {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate method signature `{signature}` in {fqcn}")]
    DuplicateSignature { fqcn: String, signature: String },
    #[error("cannot determine documentation format: {0}")]
    UnresolvableFormat(String),
    #[error("see-also reference `{reference}` is ambiguous; candidates: {}", candidates.join(", "))]
    AmbiguousReference {
        reference: String,
        candidates: Vec<String>,
    },
    #[error("invalid documentation: {0}")]
    Invalid(String),
    #[error("i/o error reading {path}: {message}")]
    Io { path: String, message: String },
}

impl DocError {
    fn malformed(message: impl Into<String>) -> Self {
        DocError::MalformedDoc {
            line: 0,
            column: 0,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TypeKind {
    Class,
    Interface,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThrowsTag {
    #[serde(rename = "type")]
    pub exception_type: String,
    pub condition: String,
}

impl ThrowsTag {
    /// Unqualified exception name, e.g. `IndexOutOfBoundsException`.
    pub fn simple_type(&self) -> &str {
        simple_type_name(&self.exception_type)
    }
}

pub(crate) fn simple_type_name(name: &str) -> &str {
    name.rsplit('.').next().unwrap_or(name).trim()
}

/// A same-class method reference as written in a see-also entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MethodRef {
    pub name: String,
    /// `None` for a bare name (`hashCode`), `Some(vec![])` for `hashCode()`.
    pub param_types: Option<Vec<String>>,
}

impl MethodRef {
    pub fn by_name(name: impl Into<String>) -> Self {
        MethodRef {
            name: name.into(),
            param_types: None,
        }
    }

    pub fn with_params<I, S>(name: impl Into<String>, params: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        MethodRef {
            name: name.into(),
            param_types: Some(params.into_iter().map(Into::into).collect()),
        }
    }

    pub fn matches(&self, method: &MethodDoc) -> bool {
        if self.name != method.name {
            return false;
        }
        match &self.param_types {
            None => true,
            Some(params) => {
                params.len() == method.param_types.len()
                    && params
                        .iter()
                        .zip(&method.param_types)
                        .all(|(a, b)| erase_type(a) == erase_type(b))
            }
        }
    }
}

impl fmt::Display for MethodRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.param_types {
            None => write!(f, "{}", self.name),
            Some(params) => write!(f, "{}({})", self.name, params.join(", ")),
        }
    }
}

impl FromStr for MethodRef {
    type Err = DocError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let s = s.strip_prefix('#').unwrap_or(s);
        let (name, params) = match s.find('(') {
            Some(open) => {
                let close = s.rfind(')').filter(|&c| c > open && c == s.len() - 1);
                let Some(close) = close else {
                    return Err(DocError::malformed(format!(
                        "see-also `{s}` has an unterminated parameter list"
                    )));
                };
                let inner = s[open + 1..close].trim();
                let params = if inner.is_empty() {
                    Vec::new()
                } else {
                    split_top_level(inner, ',')
                        .into_iter()
                        .map(|p| normalize_type(&p))
                        .collect()
                };
                if params.iter().any(|p| p.is_empty()) {
                    return Err(DocError::malformed(format!(
                        "see-also `{s}` has an empty parameter type"
                    )));
                }
                (s[..open].trim(), Some(params))
            }
            None => (s, None),
        };
        if !is_identifier(name) {
            return Err(DocError::malformed(format!(
                "see-also `{s}` is not a method reference"
            )));
        }
        Ok(MethodRef {
            name: name.to_string(),
            param_types: params,
        })
    }
}

impl Serialize for MethodRef {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MethodRef {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MethodDoc {
    pub name: String,
    pub param_types: Vec<String>,
    pub return_type: String,
    #[serde(rename = "description")]
    pub description_text: String,
    #[serde(rename = "throws")]
    pub throws_tags: Vec<ThrowsTag>,
    pub see_also: Vec<MethodRef>,
    pub deprecated: bool,
}

impl MethodDoc {
    /// `name(T1, T2)`; the identity used for uniqueness within a class.
    pub fn signature(&self) -> String {
        format!("{}({})", self.name, self.param_types.join(", "))
    }

    /// `ReturnType name(T1, T2)`.
    pub fn declaration(&self) -> String {
        format!("{} {}", self.return_type, self.signature())
    }

    /// The text a reader of the rendered documentation page sees for this
    /// method: declaration line, deprecation marker, prose, then throws.
    pub fn documentation_block(&self) -> String {
        let mut out = self.declaration();
        if self.deprecated {
            out.push_str("\nDeprecated.");
        }
        if !self.description_text.is_empty() {
            out.push('\n');
            out.push_str(&self.description_text);
        }
        if !self.throws_tags.is_empty() {
            out.push_str("\n\nThrows:");
            for tag in &self.throws_tags {
                out.push('\n');
                out.push_str(&tag.exception_type);
                if !tag.condition.is_empty() {
                    out.push_str(" - ");
                    out.push_str(&tag.condition);
                }
            }
        }
        out
    }

    fn validate(&self) -> Result<(), DocError> {
        if !is_identifier(&self.name) {
            return Err(DocError::Invalid(format!(
                "method name `{}` is not an identifier",
                self.name
            )));
        }
        if self.return_type.trim().is_empty() {
            return Err(DocError::Invalid(format!(
                "method `{}` has an empty return type",
                self.name
            )));
        }
        if let Some(tag) = self
            .throws_tags
            .iter()
            .find(|t| t.exception_type.trim().is_empty())
        {
            return Err(DocError::Invalid(format!(
                "method `{}` has a throws tag without exception type (condition `{}`)",
                self.name, tag.condition
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDoc {
    pub fqcn: String,
    pub kind: TypeKind,
    pub methods: Vec<MethodDoc>,
    /// Where this document was loaded from; not part of the interchange format.
    pub source_path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocFormat {
    SourceComments,
    CanonicalJson,
}

impl DocFormat {
    pub fn detect(path: &Path) -> Result<Self, DocError> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Ok(DocFormat::CanonicalJson),
            Some("java") => Ok(DocFormat::SourceComments),
            _ => Err(DocError::UnresolvableFormat(format!(
                "{} (expected a .json or .java file)",
                path.display()
            ))),
        }
    }
}

impl FromStr for DocFormat {
    type Err = DocError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" | "canonical-json" | "canonicalJson" => Ok(DocFormat::CanonicalJson),
            "java" | "source" | "source-comments" | "sourceComments" => {
                Ok(DocFormat::SourceComments)
            }
            other => Err(DocError::UnresolvableFormat(other.to_string())),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CanonicalClass {
    fqcn: String,
    kind: TypeKind,
    methods: Vec<CanonicalMethod>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct CanonicalMethod {
    name: String,
    #[serde(default)]
    param_types: Vec<String>,
    return_type: String,
    description: String,
    #[serde(default)]
    throws: Vec<ThrowsTag>,
    #[serde(default)]
    see_also: Vec<MethodRef>,
    #[serde(default)]
    deprecated: bool,
}

pub fn parse_class_doc(source: &str, format: DocFormat) -> Result<ClassDoc, DocError> {
    let doc = match format {
        DocFormat::CanonicalJson => parse_canonical_json(source)?,
        DocFormat::SourceComments => parse_java_source(source)?,
    };
    doc.validate()?;
    Ok(doc)
}

/// Reads and parses a documentation file, picking the format from its extension.
pub fn load_class_doc(path: &Path) -> Result<ClassDoc, DocError> {
    let format = DocFormat::detect(path)?;
    let source = std::fs::read_to_string(path).map_err(|e| DocError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut doc = parse_class_doc(&source, format)?;
    doc.source_path = Some(path.to_path_buf());
    Ok(doc)
}

fn parse_canonical_json(source: &str) -> Result<ClassDoc, DocError> {
    let raw: CanonicalClass =
        serde_json::from_str(source).map_err(|e| DocError::MalformedDoc {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
    let methods = raw
        .methods
        .into_iter()
        .map(|m| MethodDoc {
            name: m.name,
            param_types: m.param_types.iter().map(|t| normalize_type(t)).collect(),
            return_type: normalize_type(&m.return_type),
            description_text: normalize_prose(&m.description),
            throws_tags: m
                .throws
                .into_iter()
                .map(|t| ThrowsTag {
                    exception_type: t.exception_type.trim().to_string(),
                    condition: normalize_prose(&t.condition),
                })
                .collect(),
            see_also: m.see_also,
            deprecated: m.deprecated,
        })
        .collect();
    Ok(ClassDoc {
        fqcn: raw.fqcn,
        kind: raw.kind,
        methods,
        source_path: None,
    })
}

impl ClassDoc {
    pub fn simple_name(&self) -> &str {
        simple_type_name(&self.fqcn)
    }

    pub fn validate(&self) -> Result<(), DocError> {
        let segments: Vec<&str> = self.fqcn.split('.').collect();
        if segments.len() < 2 || !segments.iter().all(|s| is_identifier(s)) {
            return Err(DocError::Invalid(format!(
                "`{}` is not a dot-separated fully-qualified name",
                self.fqcn
            )));
        }
        let mut seen = HashSet::new();
        for method in &self.methods {
            method.validate()?;
            if !seen.insert(method.signature()) {
                return Err(DocError::DuplicateSignature {
                    fqcn: self.fqcn.clone(),
                    signature: method.signature(),
                });
            }
        }
        Ok(())
    }

    /// Finds the in-class method a see-also entry points at.
    ///
    /// Returns `Ok(None)` when nothing in this class matches; a bare-name
    /// reference that matches several overloads is an error.
    pub fn resolve_see_also(&self, reference: &MethodRef) -> Result<Option<&MethodDoc>, DocError> {
        let mut hits = self.methods.iter().filter(|m| reference.matches(m));
        let first = hits.next();
        let rest: Vec<&MethodDoc> = hits.collect();
        if rest.is_empty() {
            return Ok(first);
        }
        let candidates = first
            .into_iter()
            .chain(rest)
            .map(MethodDoc::signature)
            .collect();
        Err(DocError::AmbiguousReference {
            reference: reference.to_string(),
            candidates,
        })
    }

    pub fn find_method(&self, signature: &str) -> Option<&MethodDoc> {
        self.methods.iter().find(|m| m.signature() == signature)
    }

    pub fn to_canonical_json(&self) -> String {
        let raw = CanonicalClass {
            fqcn: self.fqcn.clone(),
            kind: self.kind,
            methods: self
                .methods
                .iter()
                .map(|m| CanonicalMethod {
                    name: m.name.clone(),
                    param_types: m.param_types.clone(),
                    return_type: m.return_type.clone(),
                    description: m.description_text.clone(),
                    throws: m.throws_tags.clone(),
                    see_also: m.see_also.clone(),
                    deprecated: m.deprecated,
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&raw).expect("class doc serializes");
        out.push('\n');
        out
    }
}

/// Collapses runs of spaces and tabs to one space and joins the lines of each
/// paragraph; paragraphs stay separated by a single blank line.
pub fn normalize_prose(text: &str) -> String {
    let mut paragraphs: Vec<String> = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            if !current.is_empty() {
                paragraphs.push(collapse_spaces(&current.join(" ")));
                current.clear();
            }
        } else {
            current.push(line);
        }
    }
    if !current.is_empty() {
        paragraphs.push(collapse_spaces(&current.join(" ")));
    }
    paragraphs.join("\n\n")
}

fn collapse_spaces(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Canonical spelling of a type name: whitespace collapsed, none inside `<`/`>`
/// delimiters except after commas and around wildcard bounds.
pub(crate) fn normalize_type(t: &str) -> String {
    let collapsed = collapse_spaces(t);
    let mut out = String::with_capacity(collapsed.len());
    let chars: Vec<char> = collapsed.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        if c == ' ' {
            let prev = out.chars().last();
            let next = chars.get(i + 1).copied();
            if matches!(prev, Some('<') | Some('['))
                || matches!(next, Some('>') | Some(',') | Some('[') | Some(']') | Some('<'))
            {
                continue;
            }
        }
        out.push(c);
        if c == ',' && chars.get(i + 1) != Some(&' ') {
            out.push(' ');
        }
    }
    out
}

/// Type identity used when matching see-also parameter lists: generic
/// arguments and package qualifiers dropped, varargs treated as arrays, and
/// single-letter type variables treated as `Object`.
pub(crate) fn erase_type(t: &str) -> String {
    let mut depth = 0usize;
    let mut base = String::new();
    for c in t.chars() {
        match c {
            '<' => depth += 1,
            '>' => depth = depth.saturating_sub(1),
            c if depth == 0 && !c.is_whitespace() => base.push(c),
            _ => {}
        }
    }
    let base = base.replace("...", "[]");
    let dims = base.matches("[]").count();
    let name = base.trim_end_matches("[]");
    let mut name = simple_type_name(name).to_string();
    if name.len() == 1 && name.chars().all(|c| c.is_ascii_uppercase()) {
        name = "Object".to_string();
    }
    name + &"[]".repeat(dims)
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' || c == '$' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_' || c == '$')
}

/// Splits on `sep` at generic nesting depth zero.
pub(crate) fn split_top_level(s: &str, sep: char) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for c in s.chars() {
        match c {
            '<' | '(' | '[' => depth += 1,
            '>' | ')' | ']' => depth -= 1,
            _ => {}
        }
        if c == sep && depth == 0 {
            parts.push(current.trim().to_string());
            current.clear();
        } else {
            current.push(c);
        }
    }
    if !current.trim().is_empty() || !parts.is_empty() {
        parts.push(current.trim().to_string());
    }
    parts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn object_equals_json() -> &'static str {
        r#"{
          "fqcn": "java.lang.Object",
          "kind": "class",
          "methods": [
            {
              "name": "equals",
              "paramTypes": ["Object"],
              "returnType": "boolean",
              "description": "Indicates whether some other object is \"equal to\" this one.\n\nThe equals method implements an equivalence relation on non-null object references:\n\nIt is reflexive: for any non-null reference value x, x.equals(x) should return true.\n\nIt is symmetric: for any non-null reference values x and y, x.equals(y) should return true if and only if y.equals(x) returns true.\n\nIt is transitive: for any non-null reference values x, y, and z, if x.equals(y) returns true and y.equals(z) returns true, then x.equals(z) should return true.\n\nIt is consistent: for any non-null reference values x and y, multiple invocations of x.equals(y) consistently return true or consistently return false, provided no information used in equals comparisons on the objects is modified.\n\nFor any non-null reference value x, x.equals(null) should return false.",
              "throws": [],
              "seeAlso": ["hashCode"],
              "deprecated": false
            }
          ]
        }"#
    }

    #[test]
    fn parses_object_equals_with_see_also() {
        let doc = parse_class_doc(object_equals_json(), DocFormat::CanonicalJson).unwrap();
        assert_eq!(doc.fqcn, "java.lang.Object");
        assert_eq!(doc.kind, TypeKind::Class);
        assert_eq!(doc.methods.len(), 1);
        let equals = &doc.methods[0];
        assert_eq!(equals.see_also, vec![MethodRef::by_name("hashCode")]);
        assert_eq!(equals.description_text.split("\n\n").count(), 7);
        assert!(equals.description_text.contains("It is symmetric"));
    }

    #[test]
    fn empty_class_has_no_methods() {
        let doc = parse_class_doc(
            r#"{"fqcn":"com.example.Empty","kind":"interface","methods":[]}"#,
            DocFormat::CanonicalJson,
        )
        .unwrap();
        assert!(doc.methods.is_empty());
        assert_eq!(doc.kind, TypeKind::Interface);
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse_class_doc("{\n  \"fqcn\": \"a.B\",\n  oops\n}", DocFormat::CanonicalJson)
            .unwrap_err();
        match err {
            DocError::MalformedDoc { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_class_doc(
            r#"{"fqcn":"a.B","kind":"class","methods":[],"extra":1}"#,
            DocFormat::CanonicalJson,
        )
        .unwrap_err();
        assert!(matches!(err, DocError::MalformedDoc { .. }));
    }

    #[test]
    fn duplicate_signature_is_rejected() {
        let json = r#"{"fqcn":"a.B","kind":"class","methods":[
            {"name":"f","paramTypes":["int"],"returnType":"void","description":""},
            {"name":"f","paramTypes":["int"],"returnType":"int","description":""}]}"#;
        let err = parse_class_doc(json, DocFormat::CanonicalJson).unwrap_err();
        assert_eq!(
            err,
            DocError::DuplicateSignature {
                fqcn: "a.B".into(),
                signature: "f(int)".into()
            }
        );
    }

    #[test]
    fn fqcn_must_be_qualified() {
        let err = parse_class_doc(
            r#"{"fqcn":"Object","kind":"class","methods":[]}"#,
            DocFormat::CanonicalJson,
        )
        .unwrap_err();
        assert!(matches!(err, DocError::Invalid(_)));
    }

    #[test]
    fn throws_tag_needs_type() {
        let json = r#"{"fqcn":"a.B","kind":"class","methods":[
            {"name":"f","returnType":"void","description":"","throws":[{"type":" ","condition":"never"}]}]}"#;
        assert!(matches!(
            parse_class_doc(json, DocFormat::CanonicalJson),
            Err(DocError::Invalid(_))
        ));
    }

    #[test]
    fn see_also_must_be_method_reference() {
        let json = r#"{"fqcn":"a.B","kind":"class","methods":[
            {"name":"f","returnType":"void","description":"","seeAlso":["not a ref"]}]}"#;
        assert!(matches!(
            parse_class_doc(json, DocFormat::CanonicalJson),
            Err(DocError::MalformedDoc { .. })
        ));
    }

    #[test]
    fn unknown_extension_is_unresolvable() {
        assert!(matches!(
            DocFormat::detect(Path::new("docs/Object.html")),
            Err(DocError::UnresolvableFormat(_))
        ));
        assert_eq!(
            DocFormat::detect(Path::new("Object.java")).unwrap(),
            DocFormat::SourceComments
        );
    }

    #[test]
    fn prose_whitespace_is_normalized() {
        assert_eq!(
            normalize_prose("  one\t\ttwo\n   three  \n\n\n\nfour   five\n"),
            "one two three\n\nfour five"
        );
        assert_eq!(normalize_prose(""), "");
    }

    #[test]
    fn method_ref_parsing() {
        assert_eq!("hashCode".parse::<MethodRef>().unwrap(), MethodRef::by_name("hashCode"));
        assert_eq!(
            "#hashCode()".parse::<MethodRef>().unwrap(),
            MethodRef::with_params("hashCode", Vec::<String>::new())
        );
        assert_eq!(
            "indexOf(String,  int)".parse::<MethodRef>().unwrap(),
            MethodRef::with_params("indexOf", ["String", "int"])
        );
        assert_eq!(
            "putAll(Map<? extends K,? extends V>)".parse::<MethodRef>().unwrap(),
            MethodRef::with_params("putAll", ["Map<? extends K, ? extends V>"])
        );
        assert!("indexOf(String".parse::<MethodRef>().is_err());
        assert!("java.util.HashMap".parse::<MethodRef>().is_err());
    }

    fn overloads() -> ClassDoc {
        let method = |name: &str, params: &[&str]| MethodDoc {
            name: name.into(),
            param_types: params.iter().map(|s| s.to_string()).collect(),
            return_type: "int".into(),
            description_text: String::new(),
            throws_tags: vec![],
            see_also: vec![],
            deprecated: false,
        };
        ClassDoc {
            fqcn: "java.lang.String".into(),
            kind: TypeKind::Class,
            methods: vec![
                method("indexOf", &["int"]),
                method("indexOf", &["String"]),
                method("toArray", &["T[]"]),
                method("hashCode", &[]),
            ],
            source_path: None,
        }
    }

    #[test]
    fn resolves_unique_and_absent_refs() {
        let doc = overloads();
        let hit = doc.resolve_see_also(&MethodRef::by_name("hashCode")).unwrap();
        assert_eq!(hit.unwrap().name, "hashCode");
        assert!(doc
            .resolve_see_also(&MethodRef::by_name("length"))
            .unwrap()
            .is_none());
        let hit = doc
            .resolve_see_also(&MethodRef::with_params("indexOf", ["java.lang.String"]))
            .unwrap();
        assert_eq!(hit.unwrap().signature(), "indexOf(String)");
        let hit = doc
            .resolve_see_also(&MethodRef::with_params("toArray", ["Object[]"]))
            .unwrap();
        assert_eq!(hit.unwrap().signature(), "toArray(T[])");
    }

    #[test]
    fn name_only_ref_to_overloads_is_ambiguous() {
        let err = overloads()
            .resolve_see_also(&MethodRef::by_name("indexOf"))
            .unwrap_err();
        assert_eq!(
            err,
            DocError::AmbiguousReference {
                reference: "indexOf".into(),
                candidates: vec!["indexOf(int)".into(), "indexOf(String)".into()],
            }
        );
    }

    #[test]
    fn documentation_block_layout() {
        let m = MethodDoc {
            name: "codePointAt".into(),
            param_types: vec!["int".into()],
            return_type: "int".into(),
            description_text: "Returns the character (Unicode code point) at the specified index.".into(),
            throws_tags: vec![ThrowsTag {
                exception_type: "IndexOutOfBoundsException".into(),
                condition: "if the index argument is negative".into(),
            }],
            see_also: vec![],
            deprecated: false,
        };
        assert_eq!(
            m.documentation_block(),
            "int codePointAt(int)\nReturns the character (Unicode code point) at the specified index.\n\nThrows:\nIndexOutOfBoundsException - if the index argument is negative"
        );
    }

    #[test]
    fn type_erasure_for_matching() {
        assert_eq!(erase_type("java.util.Map<? extends K, ? extends V>"), "Map");
        assert_eq!(erase_type("E"), "Object");
        assert_eq!(erase_type("T[]"), "Object[]");
        assert_eq!(erase_type("String..."), "String[]");
        assert_eq!(normalize_type("Map< K ,V >"), "Map<K, V>");
        assert_eq!(normalize_type("int [ ]"), "int[]");
    }
}

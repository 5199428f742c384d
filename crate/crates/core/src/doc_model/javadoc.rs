//! Doc-comment scanner for Java source files.
//!
//! Only the first top-level type in a file is read. Members are recognized at
//! brace depth one; method bodies, initializers and nested types are skipped
//! by brace matching. Private methods and constructors are not documented API
//! and are dropped.

use super::{
    is_identifier, normalize_prose, normalize_type, simple_type_name, split_top_level, ClassDoc,
    DocError, MethodDoc, MethodRef, ThrowsTag, TypeKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug)]
enum Token {
    Doc(String),
    Text(String),
    Open,
    Close,
    Semi,
}

fn malformed(pos: Pos, message: impl Into<String>) -> DocError {
    DocError::MalformedDoc {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

struct Lexer {
    chars: Vec<char>,
    idx: usize,
    pos: Pos,
}

impl Lexer {
    fn new(source: &str) -> Self {
        Lexer {
            chars: source.chars().collect(),
            idx: 0,
            pos: Pos { line: 1, column: 1 },
        }
    }

    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.idx + ahead).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.idx).copied()?;
        self.idx += 1;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.peek(i) == Some(c))
    }

    fn tokens(mut self) -> Result<Vec<(Pos, Token)>, DocError> {
        let mut out = Vec::new();
        let mut text = String::new();
        let mut text_pos = self.pos;
        let flush = |text: &mut String, text_pos: Pos, out: &mut Vec<(Pos, Token)>| {
            if !text.trim().is_empty() {
                out.push((text_pos, Token::Text(std::mem::take(text))));
            } else {
                text.clear();
            }
        };
        while let Some(c) = self.peek(0) {
            let start = self.pos;
            if self.starts_with("//") {
                while let Some(c) = self.peek(0) {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if self.starts_with("/**") && !self.starts_with("/**/") {
                flush(&mut text, text_pos, &mut out);
                self.bump();
                self.bump();
                self.bump();
                let mut body = String::new();
                loop {
                    if self.starts_with("*/") {
                        self.bump();
                        self.bump();
                        break;
                    }
                    match self.bump() {
                        Some(c) => body.push(c),
                        None => return Err(malformed(start, "unterminated doc comment")),
                    }
                }
                out.push((start, Token::Doc(body)));
            } else if self.starts_with("/*") {
                self.bump();
                self.bump();
                loop {
                    if self.starts_with("*/") {
                        self.bump();
                        self.bump();
                        break;
                    }
                    if self.bump().is_none() {
                        return Err(malformed(start, "unterminated block comment"));
                    }
                }
                text.push(' ');
            } else if c == '"' || c == '\'' {
                if text.trim().is_empty() {
                    text_pos = start;
                }
                self.literal(c, &mut text, start)?;
            } else if c == '{' || c == '}' || c == ';' {
                flush(&mut text, text_pos, &mut out);
                self.bump();
                out.push((
                    start,
                    match c {
                        '{' => Token::Open,
                        '}' => Token::Close,
                        _ => Token::Semi,
                    },
                ));
            } else {
                if text.trim().is_empty() && !c.is_whitespace() {
                    text_pos = start;
                }
                text.push(c);
                self.bump();
            }
        }
        flush(&mut text, text_pos, &mut out);
        Ok(out)
    }

    fn literal(&mut self, quote: char, text: &mut String, start: Pos) -> Result<(), DocError> {
        if quote == '"' && self.starts_with("\"\"\"") {
            for _ in 0..3 {
                text.push(self.bump().unwrap_or('"'));
            }
            loop {
                if self.starts_with("\"\"\"") {
                    for _ in 0..3 {
                        text.push(self.bump().unwrap_or('"'));
                    }
                    return Ok(());
                }
                match self.bump() {
                    Some('\\') => {
                        text.push('\\');
                        if let Some(c) = self.bump() {
                            text.push(c);
                        }
                    }
                    Some(c) => text.push(c),
                    None => return Err(malformed(start, "unterminated text block")),
                }
            }
        }
        text.push(self.bump().unwrap_or(quote));
        loop {
            match self.bump() {
                Some('\\') => {
                    text.push('\\');
                    match self.bump() {
                        Some(c) => text.push(c),
                        None => break,
                    }
                }
                Some('\n') | None => break,
                Some(c) => {
                    text.push(c);
                    if c == quote {
                        return Ok(());
                    }
                }
            }
        }
        Err(malformed(start, "unterminated literal"))
    }
}

struct TypeHeader {
    name: String,
    kind: TypeKind,
}

fn parse_type_header(text: &str) -> Option<TypeHeader> {
    let words: Vec<&str> = text.split_whitespace().collect();
    for (i, word) in words.iter().enumerate() {
        let kind = match *word {
            "class" | "enum" | "record" => TypeKind::Class,
            "interface" | "@interface" => TypeKind::Interface,
            _ => continue,
        };
        let name = words.get(i + 1)?;
        let name: String = name
            .chars()
            .take_while(|c| c.is_alphanumeric() || *c == '_' || *c == '$')
            .collect();
        if is_identifier(&name) {
            return Some(TypeHeader { name, kind });
        }
    }
    None
}

pub fn parse_java_source(source: &str) -> Result<ClassDoc, DocError> {
    let tokens = Lexer::new(source).tokens()?;
    let mut package: Option<String> = None;
    let mut iter = tokens.into_iter().peekable();
    let mut header_text = String::new();
    let mut last_pos = Pos { line: 1, column: 1 };

    let header = loop {
        let Some((pos, token)) = iter.next() else {
            return Err(malformed(last_pos, "no type declaration found"));
        };
        last_pos = pos;
        match token {
            Token::Doc(_) => {}
            Token::Text(t) => header_text.push_str(&t),
            Token::Semi => {
                let stmt = header_text.trim();
                if let Some(rest) = stmt.strip_prefix("package") {
                    package = Some(rest.split_whitespace().collect::<String>());
                }
                header_text.clear();
            }
            Token::Open => match parse_type_header(&header_text) {
                Some(h) => break h,
                None => return Err(malformed(pos, "expected a type declaration before `{`")),
            },
            Token::Close => return Err(malformed(pos, "unbalanced `}`")),
        }
    };
    let Some(package) = package.filter(|p| !p.is_empty()) else {
        return Err(malformed(
            Pos { line: 1, column: 1 },
            "missing package declaration; a fully-qualified name is required",
        ));
    };
    let fqcn = format!("{package}.{}", header.name);

    let mut methods = Vec::new();
    let mut pending_doc: Option<String> = None;
    let mut decl = String::new();
    let mut closed = false;
    while let Some((pos, token)) = iter.next() {
        last_pos = pos;
        match token {
            Token::Doc(d) => {
                pending_doc = Some(d);
                decl.clear();
            }
            Token::Text(t) => decl.push_str(&t),
            Token::Semi => {
                if let Some(m) = member(&decl, pending_doc.take(), &header.name, &fqcn)? {
                    methods.push(m);
                }
                decl.clear();
            }
            Token::Open => {
                if let Some(m) = member(&decl, pending_doc.take(), &header.name, &fqcn)? {
                    methods.push(m);
                }
                decl.clear();
                let mut depth = 1usize;
                while depth > 0 {
                    match iter.next() {
                        Some((_, Token::Open)) => depth += 1,
                        Some((_, Token::Close)) => depth -= 1,
                        Some((p, _)) => last_pos = p,
                        None => return Err(malformed(pos, "unbalanced `{`")),
                    }
                }
            }
            Token::Close => {
                closed = true;
                break;
            }
        }
    }
    if !closed {
        return Err(malformed(last_pos, "type body is not closed"));
    }

    Ok(ClassDoc {
        fqcn,
        kind: header.kind,
        methods,
        source_path: None,
    })
}

const MODIFIERS: &[&str] = &[
    "public",
    "protected",
    "private",
    "static",
    "final",
    "abstract",
    "synchronized",
    "native",
    "default",
    "strictfp",
    "transient",
    "volatile",
    "sealed",
    "non-sealed",
];

/// Removes annotations from a declaration, reporting whether `@Deprecated` was seen.
fn strip_annotations(decl: &str) -> (String, bool) {
    let chars: Vec<char> = decl.chars().collect();
    let mut out = String::new();
    let mut deprecated = false;
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == '@' && chars.get(i + 1).is_some_and(|c| c.is_alphabetic()) {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '.' || chars[j] == '_') {
                j += 1;
            }
            let name: String = chars[i + 1..j].iter().collect();
            if name == "interface" {
                out.push_str("@interface");
                i = j;
                continue;
            }
            if simple_type_name(&name) == "Deprecated" {
                deprecated = true;
            }
            let mut k = j;
            while k < chars.len() && chars[k].is_whitespace() {
                k += 1;
            }
            if chars.get(k) == Some(&'(') {
                let mut depth = 0;
                while k < chars.len() {
                    match chars[k] {
                        '(' => depth += 1,
                        ')' => {
                            depth -= 1;
                            if depth == 0 {
                                k += 1;
                                break;
                            }
                        }
                        _ => {}
                    }
                    k += 1;
                }
                j = k;
            }
            out.push(' ');
            i = j;
        } else {
            out.push(chars[i]);
            i += 1;
        }
    }
    (out, deprecated)
}

fn member(
    decl: &str,
    doc: Option<String>,
    class_name: &str,
    fqcn: &str,
) -> Result<Option<MethodDoc>, DocError> {
    let (decl, annotated_deprecated) = strip_annotations(decl);
    let Some(open) = decl.find('(') else {
        return Ok(None);
    };
    let head = &decl[..open];
    if head.contains('=') || parse_type_header(head).is_some() {
        return Ok(None);
    }
    let Some(close) = decl.rfind(')') else {
        return Ok(None);
    };
    if close < open {
        return Ok(None);
    }

    // Head: modifiers, optional type parameters, return type, name.
    let mut words = split_type_words(head);
    let name = match words.pop() {
        Some(n) if is_identifier(&n) => n,
        _ => return Ok(None),
    };
    let mut is_private = false;
    words.retain(|w| {
        if w == "private" {
            is_private = true;
        }
        !MODIFIERS.contains(&w.as_str())
    });
    if words.first().is_some_and(|w| w.starts_with('<')) {
        words.remove(0);
    }
    if is_private || words.is_empty() || name == class_name {
        return Ok(None);
    }
    let return_type = normalize_type(&words.join(" "));

    let params_text = &decl[open + 1..close];
    let mut param_types = Vec::new();
    if !params_text.trim().is_empty() {
        for param in split_top_level(params_text, ',') {
            let mut parts = split_type_words(&param);
            parts.retain(|w| w != "final");
            if parts.len() < 2 {
                return Err(DocError::Invalid(format!(
                    "cannot read parameter `{param}` of {name} in {fqcn}"
                )));
            }
            let mut pname = parts.pop().unwrap_or_default();
            let mut ptype = parts.join(" ");
            while pname.ends_with("[]") {
                pname.truncate(pname.len() - 2);
                ptype.push_str("[]");
            }
            param_types.push(normalize_type(&ptype));
        }
    }

    let mut method = MethodDoc {
        name,
        param_types,
        return_type,
        description_text: String::new(),
        throws_tags: Vec::new(),
        see_also: Vec::new(),
        deprecated: annotated_deprecated,
    };
    if let Some(doc) = doc {
        apply_doc_comment(&mut method, &doc, class_name, fqcn);
    }
    Ok(Some(method))
}

/// Splits on whitespace outside generic brackets, so `Map<K, V> m` gives two words.
fn split_type_words(s: &str) -> Vec<String> {
    let mut words = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for c in s.chars() {
        match c {
            '<' => depth += 1,
            '>' => depth -= 1,
            _ => {}
        }
        if c.is_whitespace() && depth == 0 {
            if !current.is_empty() {
                words.push(std::mem::take(&mut current));
            }
        } else {
            current.push(c);
        }
    }
    if !current.is_empty() {
        words.push(current);
    }
    // `String ...args` and `int [] a` both end up as separate words; glue them back.
    let mut glued: Vec<String> = Vec::new();
    for w in words {
        if (w.starts_with("...") || w.starts_with('[')) && !glued.is_empty() {
            let last = glued.last_mut().unwrap();
            let split = w.trim_start_matches(['.', '[', ']']);
            let suffix = &w[..w.len() - split.len()];
            last.push_str(suffix);
            if !split.is_empty() {
                glued.push(split.to_string());
            }
        } else if let Some(pos) = w.find("...") {
            glued.push(w[..pos + 3].to_string());
            if pos + 3 < w.len() {
                glued.push(w[pos + 3..].to_string());
            }
        } else {
            glued.push(w);
        }
    }
    glued
}

fn doc_lines(raw: &str) -> String {
    raw.lines()
        .map(|line| {
            let t = line.trim_start();
            let t = t.strip_prefix('*').unwrap_or(t);
            t.strip_prefix(' ').unwrap_or(t)
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn apply_doc_comment(method: &mut MethodDoc, raw: &str, class_name: &str, fqcn: &str) {
    let text = doc_lines(raw);
    let mut description = String::new();
    let mut tags: Vec<String> = Vec::new();
    for line in text.lines() {
        let trimmed = line.trim_start();
        if trimmed.starts_with('@') && trimmed[1..].starts_with(|c: char| c.is_alphabetic()) {
            tags.push(trimmed.to_string());
        } else if let Some(tag) = tags.last_mut() {
            tag.push('\n');
            tag.push_str(line);
        } else {
            description.push_str(line);
            description.push('\n');
        }
    }
    method.description_text = normalize_prose(&render_doc_text(&description));

    for tag in tags {
        let (name, rest) = match tag.find(char::is_whitespace) {
            Some(i) => (&tag[1..i], tag[i..].trim()),
            None => (&tag[1..], ""),
        };
        match name {
            "throws" | "exception" => {
                let (ty, cond) = match rest.find(char::is_whitespace) {
                    Some(i) => (&rest[..i], rest[i..].trim()),
                    None => (rest, ""),
                };
                if !ty.is_empty() {
                    method.throws_tags.push(ThrowsTag {
                        exception_type: ty.to_string(),
                        condition: normalize_prose(&render_doc_text(cond)),
                    });
                }
            }
            "see" => {
                if let Some(r) = see_reference(rest, class_name, fqcn) {
                    method.see_also.push(r);
                }
            }
            "deprecated" => method.deprecated = true,
            _ => {}
        }
    }
}

/// A `@see` target in this class, or `None` for cross-class, URL and string forms.
fn see_reference(target: &str, class_name: &str, fqcn: &str) -> Option<MethodRef> {
    let target = target.trim();
    if target.starts_with('"') || target.starts_with('<') {
        return None;
    }
    // Drop an optional trailing label: the reference ends at the closing paren
    // or, without one, at the first whitespace.
    let reference = match (target.find('('), target.find(char::is_whitespace)) {
        (Some(open), Some(ws)) if open < ws => {
            let close = target.find(')')?;
            &target[..=close]
        }
        (_, Some(ws)) => &target[..ws],
        _ => target,
    };
    let hash = reference.find('#')?;
    let owner = &reference[..hash];
    if !owner.is_empty() && owner != class_name && owner != fqcn {
        return None;
    }
    reference[hash + 1..].parse().ok()
}

/// Renders doc-comment markup as plain prose with blank lines between blocks.
fn render_doc_text(raw: &str) -> String {
    let chars: Vec<char> = raw.chars().collect();
    let mut out = String::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '{' && chars.get(i + 1) == Some(&'@') {
            let mut depth = 0;
            let mut j = i;
            while j < chars.len() {
                match chars[j] {
                    '{' => depth += 1,
                    '}' => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                }
                j += 1;
            }
            let inner: String = chars[i + 2..j.min(chars.len())].iter().collect();
            out.push_str(&render_inline_tag(&inner));
            i = j + 1;
        } else if c == '<' && chars.get(i + 1).is_some_and(|n| n.is_alphabetic() || *n == '/') {
            let Some(end) = chars[i..].iter().position(|&c| c == '>') else {
                out.push(c);
                i += 1;
                continue;
            };
            let tag: String = chars[i + 1..i + end].iter().collect();
            let tag_name: String = tag
                .trim_start_matches('/')
                .chars()
                .take_while(|c| c.is_alphanumeric())
                .collect::<String>()
                .to_ascii_lowercase();
            match tag_name.as_str() {
                "li" if !tag.starts_with('/') => out.push_str("\n\n- "),
                "p" | "ul" | "ol" | "li" | "pre" | "blockquote" | "table" | "tr" | "dl" | "dt"
                | "dd" | "div" | "h1" | "h2" | "h3" | "h4" | "h5" | "h6" | "hr" => {
                    out.push_str("\n\n")
                }
                "br" => out.push('\n'),
                _ => {}
            }
            i += end + 1;
        } else if c == '&' {
            let rest: String = chars[i..chars.len().min(i + 8)].iter().collect();
            let entity = [
                ("&lt;", '<'),
                ("&gt;", '>'),
                ("&amp;", '&'),
                ("&quot;", '"'),
                ("&#39;", '\''),
                ("&apos;", '\''),
                ("&nbsp;", ' '),
            ]
            .into_iter()
            .find(|(e, _)| rest.starts_with(e));
            match entity {
                Some((e, ch)) => {
                    out.push(ch);
                    i += e.len();
                }
                None => {
                    out.push(c);
                    i += 1;
                }
            }
        } else {
            out.push(c);
            i += 1;
        }
    }
    out
}

fn render_inline_tag(inner: &str) -> String {
    let (name, body) = match inner.find(char::is_whitespace) {
        Some(i) => (&inner[..i], inner[i..].trim()),
        None => (inner, ""),
    };
    match name {
        // Only the single separator is dropped; `{@code  - 1}` keeps its leading space.
        "code" | "literal" => inner
            .find(char::is_whitespace)
            .map(|i| inner[i + 1..].to_string())
            .unwrap_or_default(),
        "inheritDoc" => String::new(),
        "link" | "linkplain" | "value" => {
            let (target, label) = match (body.find('('), body.find(char::is_whitespace)) {
                (Some(open), Some(ws)) if open < ws => match body.find(')') {
                    Some(close) => (&body[..=close], body[close + 1..].trim()),
                    None => (body, ""),
                },
                (_, Some(ws)) => (&body[..ws], body[ws..].trim()),
                _ => (body, ""),
            };
            if !label.is_empty() {
                label.to_string()
            } else {
                let t = target.strip_prefix('#').unwrap_or(target);
                t.replace('#', ".")
            }
        }
        _ => body.to_string(),
    }
}

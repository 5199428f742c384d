//! Lexical helpers for scanning Java snippets without a grammar.

/// Comment span in byte offsets, `end` exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct CommentSpan {
    pub start: usize,
    pub end: usize,
    pub line_comment: bool,
}

/// Copy of `code` with comment and literal contents blanked to spaces.
///
/// Byte offsets and newlines are preserved, so indices found in the mask can
/// slice the original text.
pub(crate) struct Masked {
    pub text: String,
    pub comments: Vec<CommentSpan>,
}

pub(crate) fn mask(code: &str) -> Masked {
    let mut out = String::with_capacity(code.len());
    let mut comments = Vec::new();
    let mut i = 0;
    let blank = |out: &mut String, s: &str| {
        for c in s.chars() {
            if c == '\n' {
                out.push('\n');
            } else {
                for _ in 0..c.len_utf8() {
                    out.push(' ');
                }
            }
        }
    };
    while i < code.len() {
        let rest = &code[i..];
        if rest.starts_with("//") {
            let end = rest.find('\n').map_or(code.len(), |n| i + n);
            blank(&mut out, &code[i..end]);
            comments.push(CommentSpan {
                start: i,
                end,
                line_comment: true,
            });
            i = end;
        } else if let Some(body) = rest.strip_prefix("/*") {
            let end = body.find("*/").map_or(code.len(), |n| i + 2 + n + 2);
            blank(&mut out, &code[i..end]);
            comments.push(CommentSpan {
                start: i,
                end,
                line_comment: false,
            });
            i = end;
        } else if rest.starts_with('"') || rest.starts_with('\'') {
            let quote = rest.chars().next().unwrap_or('"');
            let mut inner_end = code.len();
            let mut closed = false;
            let mut escaped = false;
            for (off, c) in rest.char_indices().skip(1) {
                if escaped {
                    escaped = false;
                } else if c == '\\' {
                    escaped = true;
                } else if c == '\n' || c == quote {
                    inner_end = i + off;
                    closed = c == quote;
                    break;
                }
            }
            out.push(quote);
            blank(&mut out, &code[i + 1..inner_end]);
            i = inner_end;
            if closed {
                out.push(quote);
                i += 1;
            }
        } else {
            let c = rest.chars().next().unwrap_or(' ');
            out.push(c);
            i += c.len_utf8();
        }
    }
    Masked {
        text: out,
        comments,
    }
}

/// Index of the `}` closing the `{` at `open`, scanning masked text.
pub(crate) fn matching_brace(masked: &str, open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (idx, b) in masked.as_bytes().iter().enumerate().skip(open) {
        match b {
            b'{' => depth += 1,
            b'}' => {
                depth = depth.checked_sub(1)?;
                if depth == 0 {
                    return Some(idx);
                }
            }
            _ => {}
        }
    }
    None
}

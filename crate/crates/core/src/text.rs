//! Line-oriented helpers shared by the file-format parsers.

use crate::error::{Error, Result};

/// A non-blank source line with comments stripped. `line` is 1-based.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Line<'a> {
    pub line: usize,
    pub text: &'a str,
    /// Byte offset of `text` within the original line.
    pub offset: usize,
}

impl<'a> Line<'a> {
    pub fn err(&self, msg: impl Into<String>) -> Error {
        Error::syntax(self.line, self.offset + 1, msg)
    }

    pub fn err_at(&self, col_in_text: usize, msg: impl Into<String>) -> Error {
        Error::syntax(self.line, self.offset + col_in_text + 1, msg)
    }

    /// Splits `key: rest` and returns `rest` if the key matches.
    pub fn keyed(&self, key: &str) -> Option<&'a str> {
        let rest = self.text.strip_prefix(key)?;
        let rest = rest.trim_start().strip_prefix(':')?;
        Some(rest.trim())
    }
}

pub(crate) fn lines(src: &str) -> Vec<Line<'_>> {
    src.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = match raw.find('#') {
                Some(k) => &raw[..k],
                None => raw,
            };
            let trimmed = body.trim_start();
            let offset = body.len() - trimmed.len();
            let text = trimmed.trim_end();
            (!text.is_empty()).then_some(Line { line: i + 1, text, offset })
        })
        .collect()
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Splits a parenthesized tuple `(x,y,z)` into its trimmed components.
pub(crate) fn split_tuple(tok: &str) -> Option<Vec<&str>> {
    let inner = tok.strip_prefix('(')?.strip_suffix(')')?;
    Some(inner.split(',').map(str::trim).collect())
}

/// Tokenizes a list of tuples and bare words separated by whitespace, keeping
/// whitespace inside parentheses.
pub(crate) fn tuple_tokens(s: &str) -> std::result::Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                if depth == 0 {
                    return Err("unbalanced `)`".into());
                }
                depth -= 1;
                cur.push(c);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c if c.is_whitespace() => {}
            _ => cur.push(c),
        }
    }
    if depth != 0 {
        return Err("unbalanced `(`".into());
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_comments_and_blanks() {
        let ls = lines("# header\n  a: b  # trailing\n\n");
        assert_eq!(ls.len(), 1);
        assert_eq!(ls[0].line, 2);
        assert_eq!(ls[0].text, "a: b");
        assert_eq!(ls[0].keyed("a"), Some("b"));
    }

    #[test]
    fn tuples() {
        assert_eq!(tuple_tokens("(q0, a) b (x,y)").unwrap(), vec!["(q0,a)", "b", "(x,y)"]);
        assert_eq!(split_tuple("(q0,a)").unwrap(), vec!["q0", "a"]);
        assert!(tuple_tokens("(a").is_err());
    }
}

use std::collections::HashMap;

use super::{atomic_name, valid_name, At, BoolExpr, BraspProgram, Mask, Readout, Tiebreak, Vector, VectorDef};
use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::text::{self, Line};

struct Names<'a> {
    index: &'a HashMap<String, usize>,
    current: usize,
    current_name: &'a str,
}

/// Recursive-descent parser for `| & ! 0 1 NAME(t) NAME(t') ( )`.
struct ExprParser<'a, 'n> {
    line: &'a Line<'a>,
    src: &'a str,
    base: usize,
    pos: usize,
    names: &'a Names<'n>,
}

impl ExprParser<'_, '_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        self.line.err_at(self.base + self.pos, msg)
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn or(&mut self) -> Result<BoolExpr> {
        let mut l = self.and()?;
        while self.eat("|") {
            l = BoolExpr::or(l, self.and()?);
        }
        Ok(l)
    }

    fn and(&mut self) -> Result<BoolExpr> {
        let mut l = self.unary()?;
        while self.eat("&") {
            l = BoolExpr::and(l, self.unary()?);
        }
        Ok(l)
    }

    fn unary(&mut self) -> Result<BoolExpr> {
        if self.eat("!") {
            return Ok(BoolExpr::not(self.unary()?));
        }
        if self.eat("(") {
            let e = self.or()?;
            if !self.eat(")") {
                return Err(self.err("expected `)`"));
            }
            return Ok(e);
        }
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if rest.starts_with('0') || rest.starts_with('1') {
            let v = rest.starts_with('1');
            self.pos += 1;
            return Ok(BoolExpr::Const(v));
        }
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.err("expected a vector reference, `0`, `1`, `!` or `(`"));
        }
        let name = &rest[..len];
        self.pos += len;
        let at = if self.eat("(t')") {
            At::Key
        } else if self.eat("(t)") {
            At::Query
        } else {
            return Err(self.err(format!("expected `(t)` or `(t')` after `{name}`")));
        };
        match self.names.index.get(name) {
            Some(&i) if i < self.names.current => Ok(BoolExpr::var(i, at)),
            Some(_) => Err(Error::ForwardReference {
                vector: self.names.current_name.to_string(),
                referenced: name.to_string(),
            }),
            None => Err(Error::UnknownVector(name.to_string())),
        }
    }
}

fn parse_expr(line: &Line<'_>, src: &str, base: usize, names: &Names<'_>) -> Result<BoolExpr> {
    let mut p = ExprParser { line, src, base, pos: 0, names };
    let e = p.or()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.err("unexpected trailing input in expression"));
    }
    Ok(e)
}

fn only_query(line: &Line<'_>, e: &BoolExpr, what: &str) -> Result<()> {
    if e.uses(At::Key) {
        return Err(line.err(format!("{what} may only reference position t")));
    }
    Ok(())
}

/// Byte offset of `inner` inside `outer` (both slices of the same string).
fn offset(outer: &str, inner: &str) -> usize {
    inner.as_ptr() as usize - outer.as_ptr() as usize
}

fn parse_def(line: &Line<'_>, rhs: &str, names: &Names<'_>) -> Result<VectorDef> {
    let t = line.text;
    let trimmed = rhs.trim_start();
    let head = trimmed.get(..5);
    let tiebreak = match head {
        Some("lmost") => Some(Tiebreak::Left),
        Some("rmost") => Some(Tiebreak::Right),
        _ => None,
    };
    let Some(tiebreak) = tiebreak.filter(|_| trimmed[5..].trim_start().starts_with('[')) else {
        let e = parse_expr(line, rhs, offset(t, rhs), names)?;
        only_query(line, &e, "a position-wise expression")?;
        return Ok(VectorDef::PositionWise(e));
    };
    let after = trimmed[5..].trim_start();
    let open = offset(t, after);
    let close = after
        .find(']')
        .ok_or_else(|| line.err_at(open, "missing `]`"))?;
    let inside = &after[1..close];
    let (mask_src, score_src) = inside
        .split_once(',')
        .ok_or_else(|| line.err_at(open, "expected `[t' < t, SCORE]`"))?;
    let mask_norm: String = mask_src.chars().filter(|c| !c.is_whitespace()).collect();
    let mask = match mask_norm.as_str() {
        "t'<t" => Mask::Future,
        "t'>t" => Mask::Past,
        _ => return Err(line.err_at(offset(t, mask_src), "mask must be `t' < t` or `t' > t`")),
    };
    let score = parse_expr(line, score_src, offset(t, score_src), names)?;
    let tail = &after[close + 1..];
    let (value_src, default_src) = tail
        .split_once(':')
        .ok_or_else(|| line.err_at(offset(t, tail), "expected `VALUE : DEFAULT`"))?;
    let value = parse_expr(line, value_src, offset(t, value_src), names)?;
    let default = parse_expr(line, default_src, offset(t, default_src), names)?;
    only_query(line, &default, "a default")?;
    Ok(VectorDef::Attention { tiebreak, mask, score, value, default })
}

/// Parses the program text format. Names are collected first so references
/// to later vectors are reported as forward references rather than unknown.
pub fn parse_brasp(src: &str) -> Result<BraspProgram> {
    let lines = text::lines(src);
    let mut iter = lines.iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::syntax(1, 1, "expected `alphabet:` header"))?;
    let names_src = first
        .keyed("alphabet")
        .ok_or_else(|| first.err("expected `alphabet:` header"))?;
    let alphabet = Alphabet::new(names_src.split_whitespace().map(str::to_string))
        .map_err(|e| first.err(e.to_string()))?;

    let mut index: HashMap<String, usize> = HashMap::new();
    let mut vectors: Vec<Vector> = Vec::new();
    for s in alphabet.symbols() {
        let name = atomic_name(&alphabet, s);
        index.insert(name.clone(), vectors.len());
        vectors.push(Vector { name, def: VectorDef::Atomic(s) });
    }

    enum Item<'a> {
        Def(&'a Line<'a>, String, &'a str),
        Output(&'a Line<'a>, &'a str),
        Readout(&'a Line<'a>, &'a str),
    }
    let mut items = Vec::new();
    let mut next = vectors.len();
    for l in iter {
        if let Some(r) = l.keyed("output") {
            items.push(Item::Output(l, r));
        } else if let Some(r) = l.keyed("readout") {
            items.push(Item::Readout(l, r));
        } else {
            let (lhs, rhs) = l
                .text
                .split_once('=')
                .ok_or_else(|| l.err("expected `NAME(t) = ...`"))?;
            let lhs = lhs.trim();
            let name = lhs
                .strip_suffix("(t)")
                .map(str::trim_end)
                .filter(|n| valid_name(n))
                .ok_or_else(|| l.err("left-hand side must be `NAME(t)`"))?;
            if index.insert(name.to_string(), next).is_some() {
                return Err(l.err(format!("vector `{name}` is already defined")));
            }
            next += 1;
            items.push(Item::Def(l, name.to_string(), rhs));
        }
    }

    let mut output = None;
    let mut readout = Readout::Last;
    for item in items {
        match item {
            Item::Def(l, name, rhs) => {
                let names = Names { index: &index, current: vectors.len(), current_name: &name };
                let def = parse_def(l, rhs, &names)?;
                vectors.push(Vector { name, def });
            }
            Item::Output(l, r) => {
                if output.is_some() {
                    return Err(l.err("duplicate `output:` line"));
                }
                output = Some(*index.get(r).ok_or_else(|| Error::UnknownVector(r.to_string()))?);
            }
            Item::Readout(l, r) => {
                readout = match r {
                    "last" => Readout::Last,
                    "first" => Readout::First,
                    _ => return Err(l.err("readout must be `first` or `last`")),
                };
            }
        }
    }
    let output = output.ok_or(Error::MissingOutput)?;
    BraspProgram::new(alphabet, vectors, output, readout)
}

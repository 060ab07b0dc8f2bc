use std::collections::BTreeSet;
use std::fmt;

use super::{and, atom, future, not, or, past, since, until, Ltl, LtlFormula, Node};
use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::text;

pub const MAX_DEPTH: usize = 500;
pub const MAX_NODES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Atom(String),
    Not,
    And,
    Or,
    Past,
    Future,
    Since,
    Until,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(lines: &[text::Line<'_>]) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    for l in lines {
        let line = l.line;
        let chars: Vec<char> = l.text.chars().collect();
        let mut k = 0;
        while k < chars.len() {
            let c = chars[k];
            let col = l.offset + k + 1;
            let simple = match c {
                '!' => Some(Tok::Not),
                '&' => Some(Tok::And),
                '|' => Some(Tok::Or),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                'P' => Some(Tok::Past),
                'F' => Some(Tok::Future),
                'S' => Some(Tok::Since),
                'U' => Some(Tok::Until),
                _ => None,
            };
            if let Some(tok) = simple {
                out.push(Spanned { tok, line, col });
                k += 1;
            } else if c.is_whitespace() {
                k += 1;
            } else if c.is_ascii_lowercase() {
                out.push(Spanned { tok: Tok::Atom(c.to_string()), line, col });
                k += 1;
            } else if c == '"' {
                let start = k + 1;
                let mut end = start;
                while end < chars.len() && chars[end] != '"' {
                    end += 1;
                }
                if end >= chars.len() {
                    return Err(Error::syntax(line, col, "unterminated quoted atom"));
                }
                let name: String = chars[start..end].iter().collect();
                if name.is_empty() || name.chars().any(char::is_whitespace) {
                    return Err(Error::syntax(line, col, "quoted atom must be a non-empty word"));
                }
                out.push(Spanned { tok: Tok::Atom(name), line, col });
                k = end + 1;
            } else {
                return Err(Error::syntax(line, col, format!("unexpected character `{c}`")));
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    depth: usize,
    nodes: usize,
    alphabet: &'a Alphabet,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|s| (s.line, s.col)).unwrap_or(self.end)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (l, c) = self.here();
        Error::syntax(l, c, msg)
    }

    fn count(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > MAX_NODES {
            return Err(self.err(format!("formula exceeds {MAX_NODES} nodes")));
        }
        Ok(())
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.err(format!("formula nesting exceeds {MAX_DEPTH}")));
        }
        Ok(())
    }

    fn or_expr(&mut self) -> Result<Node> {
        let mut l = self.and_expr()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            let r = self.and_expr()?;
            self.count()?;
            l = or(l, r);
        }
        Ok(l)
    }

    fn and_expr(&mut self) -> Result<Node> {
        let mut l = self.temporal()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            let r = self.temporal()?;
            self.count()?;
            l = and(l, r);
        }
        Ok(l)
    }

    fn temporal(&mut self) -> Result<Node> {
        let l = self.unary()?;
        let op = match self.peek() {
            Some(Tok::Since) => Tok::Since,
            Some(Tok::Until) => Tok::Until,
            _ => return Ok(l),
        };
        self.pos += 1;
        let r = self.unary()?;
        if matches!(self.peek(), Some(Tok::Since | Tok::Until)) {
            return Err(self.err("`S` and `U` do not associate; add parentheses"));
        }
        self.count()?;
        Ok(if op == Tok::Since { since(l, r) } else { until(l, r) })
    }

    fn unary(&mut self) -> Result<Node> {
        self.enter()?;
        let (line, col) = self.here();
        let node = match self.peek().cloned() {
            Some(Tok::Not) => {
                self.pos += 1;
                not(self.unary()?)
            }
            Some(Tok::Past) => {
                self.pos += 1;
                past(self.unary()?)
            }
            Some(Tok::Future) => {
                self.pos += 1;
                future(self.unary()?)
            }
            Some(Tok::Atom(name)) => {
                self.pos += 1;
                let s = self.alphabet.lookup(&name).ok_or_else(|| {
                    Error::syntax(line, col, format!("atom `{name}` is not in the declared alphabet"))
                })?;
                atom(s)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.or_expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                self.depth -= 1;
                return Ok(inner);
            }
            Some(t) => return Err(self.err(format!("unexpected token {t:?}"))),
            None => return Err(self.err("unexpected end of formula")),
        };
        self.count()?;
        self.depth -= 1;
        Ok(node)
    }
}

/// Parses a formula, optionally preceded by an `alphabet:` header line.
/// Without a header the alphabet is the set of atoms that occur.
pub fn parse_ltl(src: &str) -> Result<LtlFormula> {
    let mut lines = text::lines(src);
    let mut header: Option<(usize, Vec<String>)> = None;
    if let Some(rest) = lines.first().and_then(|l| l.keyed("alphabet")) {
        header = Some((lines[0].line, rest.split_whitespace().map(str::to_string).collect()));
        lines.remove(0);
    }
    let body_start = lines.first().map(|l| l.line).unwrap_or(1);
    let toks = lex(&lines)?;
    if toks.is_empty() {
        return Err(Error::syntax(body_start, 1, "empty formula"));
    }
    let alphabet = match header {
        Some((line, names)) => {
            Alphabet::new(names).map_err(|e| Error::syntax(line, 1, e.to_string()))?
        }
        None => {
            let names: BTreeSet<String> = toks
                .iter()
                .filter_map(|t| match &t.tok {
                    Tok::Atom(n) => Some(n.clone()),
                    _ => None,
                })
                .collect();
            if names.is_empty() {
                return Err(Error::syntax(body_start, 1, "formula has no atoms"));
            }
            Alphabet::new(names)?
        }
    };
    let last = toks.last().unwrap();
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        depth: 0,
        nodes: 0,
        alphabet: &alphabet,
        end: (last.line, last.col + 1),
    };
    let root = p.or_expr()?;
    if p.pos != toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    LtlFormula::new(alphabet, root)
}

const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_TEMPORAL: u8 = 3;
const PREC_UNARY: u8 = 4;

fn prec(n: &Ltl) -> u8 {
    match n {
        Ltl::Or(..) => PREC_OR,
        Ltl::And(..) => PREC_AND,
        Ltl::Since(..) | Ltl::Until(..) => PREC_TEMPORAL,
        _ => PREC_UNARY,
    }
}

fn atom_name(n: &str) -> String {
    let mut cs = n.chars();
    match (cs.next(), cs.next()) {
        (Some(c), None) if c.is_ascii_lowercase() => n.to_string(),
        _ => format!("\"{n}\""),
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, a: &Alphabet, n: &Ltl, min: u8) -> fmt::Result {
    let paren = prec(n) < min;
    if paren {
        f.write_str("(")?;
    }
    match n {
        Ltl::Atom(s) => f.write_str(&atom_name(a.name(*s)))?,
        Ltl::Not(x) => {
            f.write_str("!")?;
            write_at(f, a, x, PREC_UNARY)?;
        }
        Ltl::Past(x) | Ltl::Future(x) => {
            f.write_str(if matches!(n, Ltl::Past(_)) { "P " } else { "F " })?;
            write_at(f, a, x, PREC_UNARY)?;
        }
        Ltl::And(l, r) | Ltl::Or(l, r) => {
            let (p, op) = if matches!(n, Ltl::And(..)) { (PREC_AND, " & ") } else { (PREC_OR, " | ") };
            write_at(f, a, l, p)?;
            f.write_str(op)?;
            write_at(f, a, r, p + 1)?;
        }
        Ltl::Since(l, r) | Ltl::Until(l, r) => {
            write_at(f, a, l, PREC_UNARY)?;
            f.write_str(if matches!(n, Ltl::Since(..)) { " S " } else { " U " })?;
            write_at(f, a, r, PREC_UNARY)?;
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

pub(super) fn write_formula(f: &mut fmt::Formatter<'_>, a: &Alphabet, root: &Node) -> fmt::Result {
    write_at(f, a, root, PREC_OR)
}

//! Finite-precision unique-hard-attention transformers in tuple normal form.
//!
//! The representation of a position after layer `l` is a tuple of `2^l`
//! tokens: the layer-`(l-1)` representation followed by the attended
//! layer-`(l-1)` representation, or by a `_` tuple when nothing is unmasked.
//! An end marker `EOS` is appended at position `T+1`, and a string is
//! accepted when the final `EOS` representation is in the accepting set.

mod run;
mod states;

use std::collections::BTreeSet;
use std::fmt;

use crate::alphabet::{Alphabet, Sym};
use crate::brasp::{Mask, Tiebreak};
use crate::error::{Error, Result};
use crate::text;

pub use run::UhatTrace;
pub use states::{Exploration, SubsetState};
pub(crate) use states::select;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Token {
    Sym(Sym),
    Eos,
    Bot,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rep(pub Vec<Token>);

impl Rep {
    pub fn bot(len: usize) -> Rep {
        Rep(vec![Token::Bot; len])
    }

    pub fn concat(&self, other: &Rep) -> Rep {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Rep(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// First `len` tokens.
    pub fn prefix(&self, len: usize) -> Rep {
        Rep(self.0[..len].to_vec())
    }

    pub fn suffix(&self, from: usize) -> Rep {
        Rep(self.0[from..].to_vec())
    }

    pub fn is_bot(&self) -> bool {
        self.0.iter().all(|t| *t == Token::Bot)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> RepDisplay<'a> {
        RepDisplay { rep: self, alphabet }
    }
}

pub struct RepDisplay<'a> {
    rep: &'a Rep,
    alphabet: &'a Alphabet,
}

fn token_name(alphabet: &Alphabet, t: Token) -> &str {
    match t {
        Token::Sym(s) => alphabet.name(s),
        Token::Eos => "EOS",
        Token::Bot => "_",
    }
}

impl fmt::Display for RepDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.rep.0.iter().map(|&t| token_name(self.alphabet, t)).collect();
        if parts.len() == 1 {
            f.write_str(parts[0])
        } else {
            write!(f, "({})", parts.join(","))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cond {
    Query { index: usize, token: Token },
    Key { index: usize, token: Token },
}

/// Conditions are conjoined; an empty list is the wildcard `*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScoreRule {
    pub conds: Vec<Cond>,
    pub score: i64,
}

impl ScoreRule {
    fn matches(&self, query: &Rep, key: &Rep) -> bool {
        self.conds.iter().all(|c| match *c {
            Cond::Query { index, token } => query.0.get(index) == Some(&token),
            Cond::Key { index, token } => key.0.get(index) == Some(&token),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Layer {
    pub tiebreak: Tiebreak,
    pub mask: Mask,
    pub rules: Vec<ScoreRule>,
}

impl Layer {
    /// First matching rule wins; unmatched pairs score 0.
    pub fn score(&self, query: &Rep, key: &Rep) -> i64 {
        self.rules
            .iter()
            .find(|r| r.matches(query, key))
            .map_or(0, |r| r.score)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UhatModel {
    alphabet: Alphabet,
    layers: Vec<Layer>,
    accept: BTreeSet<Rep>,
}

fn check_token(t: Token, alphabet: &Alphabet) -> Result<()> {
    match t {
        Token::Sym(s) if s.index() >= alphabet.len() => {
            Err(Error::InvalidModel(format!("symbol #{} outside the alphabet", s.0)))
        }
        _ => Ok(()),
    }
}

impl UhatModel {
    pub fn new(alphabet: Alphabet, layers: Vec<Layer>, accept: BTreeSet<Rep>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidModel("at least one layer is required".into()));
        }
        if layers.len() > 8 {
            return Err(Error::InvalidModel("at most 8 layers are supported".into()));
        }
        for n in alphabet.names() {
            if n == "EOS" || n == "_" || n.contains(['(', ')', ',', '[', ']', '=', '&']) {
                return Err(Error::InvalidAlphabet(format!("`{n}` is reserved in model files")));
            }
        }
        for (l, layer) in layers.iter().enumerate() {
            let width = 1usize << l;
            for r in &layer.rules {
                for c in &r.conds {
                    let (Cond::Query { index, token } | Cond::Key { index, token }) = *c;
                    if index >= width {
                        return Err(Error::InvalidModel(format!(
                            "layer {} reads component {index} of a {width}-tuple",
                            l + 1
                        )));
                    }
                    check_token(token, &alphabet)?;
                }
            }
        }
        let width = 1usize << layers.len();
        for rep in &accept {
            if rep.len() != width || rep.0[0] != Token::Eos {
                return Err(Error::InvalidModel(format!(
                    "accepting tuple {} must have {width} components starting with EOS",
                    rep.display(&alphabet)
                )));
            }
            for &t in &rep.0 {
                check_token(t, &alphabet)?;
            }
        }
        Ok(UhatModel { alphabet, layers, accept })
    }

    pub fn parse(src: &str) -> Result<Self> {
        parse_model(src)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn accept(&self) -> &BTreeSet<Rep> {
        &self.accept
    }

    pub fn with_accept(&self, accept: BTreeSet<Rep>) -> Result<Self> {
        UhatModel::new(self.alphabet.clone(), self.layers.clone(), accept)
    }

    /// Every layer uses future masking and leftmost tiebreaking.
    pub fn is_fl(&self) -> bool {
        self.layers
            .iter()
            .all(|l| (l.mask, l.tiebreak) == (Mask::Future, Tiebreak::Left))
    }

    pub fn run(&self, word: &[Sym]) -> Result<UhatTrace> {
        self.alphabet.check_word(word)?;
        Ok(run::run(self, word))
    }

    pub fn accepts(&self, word: &[Sym]) -> Result<bool> {
        let trace = self.run(word)?;
        Ok(self.accept.contains(trace.eos_rep()))
    }

    /// Upper bound on distinct layer-`l` representations: `(|Sigma|+1)^(2^l)`
    /// where `Sigma` counts the input symbols and `EOS`, and `+1` is `_`.
    pub fn rep_bound(&self, layer: usize) -> u128 {
        let base = self.alphabet.len() as u128 + 2;
        base.saturating_pow(1u32 << layer)
    }

    pub fn parse_rep(&self, tok: &str) -> Result<Rep> {
        parse_rep(&self.alphabet, tok).map_err(Error::InvalidModel)
    }

    pub fn explore(&self, caps: &crate::caps::Caps) -> Result<Exploration> {
        states::explore(self, caps.states)
    }

    /// Representations reachable at each level `0..=max_layer` over all
    /// strings, including those at the `EOS` position.
    pub fn reachable_representations(
        &self,
        max_layer: usize,
        caps: &crate::caps::Caps,
    ) -> Result<Vec<BTreeSet<Rep>>> {
        if max_layer > self.depth() {
            return Err(Error::InvalidModel(format!(
                "model has {} layers, asked for {max_layer}",
                self.depth()
            )));
        }
        let mut sets = self.explore(caps)?.reachable_reps();
        sets.truncate(max_layer + 1);
        Ok(sets)
    }

    pub fn to_file_string(&self) -> String {
        self.to_string()
    }
}

fn parse_token(alphabet: &Alphabet, s: &str) -> std::result::Result<Token, String> {
    match s {
        "EOS" => Ok(Token::Eos),
        "_" => Ok(Token::Bot),
        _ => alphabet
            .lookup(s)
            .map(Token::Sym)
            .ok_or_else(|| format!("unknown token `{s}`")),
    }
}

fn parse_rep(alphabet: &Alphabet, tok: &str) -> std::result::Result<Rep, String> {
    let parts = match text::split_tuple(tok) {
        Some(p) => p,
        None => vec![tok],
    };
    parts.into_iter().map(|p| parse_token(alphabet, p)).collect::<std::result::Result<_, _>>().map(Rep)
}

fn parse_cond(alphabet: &Alphabet, s: &str) -> std::result::Result<Option<Cond>, String> {
    let s = s.trim();
    if s == "*" {
        return Ok(None);
    }
    let (lhs, rhs) = s.split_once('=').ok_or_else(|| format!("bad condition `{s}`"))?;
    let lhs = lhs.trim();
    let (side, rest) = if let Some(r) = lhs.strip_prefix("query[") {
        (true, r)
    } else if let Some(r) = lhs.strip_prefix("key[") {
        (false, r)
    } else {
        return Err(format!("condition must start with `query[` or `key[`: `{s}`"));
    };
    let index: usize = rest
        .strip_suffix(']')
        .and_then(|i| i.trim().parse().ok())
        .ok_or_else(|| format!("bad index in `{s}`"))?;
    let token = parse_token(alphabet, rhs.trim())?;
    Ok(Some(if side { Cond::Query { index, token } } else { Cond::Key { index, token } }))
}

fn parse_model(src: &str) -> Result<UhatModel> {
    let lines = text::lines(src);
    let mut alphabet: Option<Alphabet> = None;
    let mut count: Option<usize> = None;
    let mut layers: Vec<Option<Layer>> = Vec::new();
    let mut current: Option<usize> = None;
    let mut accept_raw: Vec<(String, text::Line<'_>)> = Vec::new();
    for l in &lines {
        if let Some(r) = l.keyed("alphabet") {
            alphabet = Some(
                Alphabet::new(r.split_whitespace().map(str::to_string))
                    .map_err(|e| l.err(e.to_string()))?,
            );
        } else if let Some(r) = l.keyed("layers") {
            let n: usize = r.parse().map_err(|_| l.err("`layers:` needs a number"))?;
            count = Some(n);
            layers = vec![None; n];
        } else if let Some(rest) = l.text.strip_prefix("layer ") {
            let (num, body) = rest.split_once(':').ok_or_else(|| l.err("expected `layer K: ...`"))?;
            let k: usize = num.trim().parse().map_err(|_| l.err("bad layer number"))?;
            let n = count.ok_or_else(|| l.err("`layers:` must come first"))?;
            if k == 0 || k > n {
                return Err(l.err(format!("layer {k} out of range 1..={n}")));
            }
            let mut tiebreak = None;
            let mut mask = None;
            for kv in body.split_whitespace() {
                match kv.split_once('=') {
                    Some(("tiebreak", "left")) => tiebreak = Some(Tiebreak::Left),
                    Some(("tiebreak", "right")) => tiebreak = Some(Tiebreak::Right),
                    Some(("mask", "future")) => mask = Some(Mask::Future),
                    Some(("mask", "past")) => mask = Some(Mask::Past),
                    _ => return Err(l.err(format!("bad layer setting `{kv}`"))),
                }
            }
            if layers[k - 1].is_some() {
                return Err(l.err(format!("layer {k} defined twice")));
            }
            layers[k - 1] = Some(Layer {
                tiebreak: tiebreak.ok_or_else(|| l.err("missing tiebreak="))?,
                mask: mask.ok_or_else(|| l.err("missing mask="))?,
                rules: Vec::new(),
            });
            current = Some(k - 1);
        } else if let Some(r) = l.keyed("score") {
            let alphabet = alphabet.as_ref().ok_or_else(|| l.err("`alphabet:` must come first"))?;
            let k = current.ok_or_else(|| l.err("score rule outside a layer"))?;
            let (conds, value) = r.split_once("=>").ok_or_else(|| l.err("expected `CONDS => INT`"))?;
            let score: i64 = value.trim().parse().map_err(|_| l.err("score must be an integer"))?;
            let mut parsed = Vec::new();
            for c in conds.split('&') {
                if let Some(c) = parse_cond(alphabet, c).map_err(|e| l.err(e))? {
                    parsed.push(c);
                }
            }
            layers[k].as_mut().unwrap().rules.push(ScoreRule { conds: parsed, score });
        } else if let Some(r) = l.keyed("accept") {
            for t in text::tuple_tokens(r).map_err(|e| l.err(e))? {
                accept_raw.push((t, *l));
            }
        } else {
            return Err(l.err("unrecognized line"));
        }
    }
    let alphabet = alphabet.ok_or_else(|| Error::InvalidModel("missing `alphabet:`".into()))?;
    count.ok_or_else(|| Error::InvalidModel("missing `layers:`".into()))?;
    let layers = layers
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or_else(|| Error::InvalidModel(format!("layer {} is not defined", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    let mut accept = BTreeSet::new();
    for (t, l) in accept_raw {
        accept.insert(parse_rep(&alphabet, &t).map_err(|e| l.err(e))?);
    }
    UhatModel::new(alphabet, layers, accept)
}

impl fmt::Display for UhatModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.alphabet;
        writeln!(f, "alphabet: {a}")?;
        writeln!(f, "layers: {}", self.layers.len())?;
        for (i, layer) in self.layers.iter().enumerate() {
            let tb = if layer.tiebreak == Tiebreak::Left { "left" } else { "right" };
            let m = if layer.mask == Mask::Future { "future" } else { "past" };
            writeln!(f, "layer {}: tiebreak={tb} mask={m}", i + 1)?;
            for r in &layer.rules {
                let conds: Vec<String> = r
                    .conds
                    .iter()
                    .map(|c| match *c {
                        Cond::Query { index, token } => format!("query[{index}]={}", token_name(a, token)),
                        Cond::Key { index, token } => format!("key[{index}]={}", token_name(a, token)),
                    })
                    .collect();
                let lhs = if conds.is_empty() { "*".to_string() } else { conds.join(" & ") };
                writeln!(f, "score: {lhs} => {}", r.score)?;
            }
        }
        let acc: Vec<String> = self.accept.iter().map(|r| r.display(a).to_string()).collect();
        if acc.is_empty() {
            writeln!(f, "accept:")
        } else {
            writeln!(f, "accept: {}", acc.join(" "))
        }
    }
}

//! B-RASP programs: Boolean vectors computed by position-wise operations and
//! strictly masked unique-hard-attention operations.

mod parse;
mod rewrite;
mod run;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Sym};
use crate::error::{Error, Result};

pub use parse::parse_brasp;
pub use rewrite::rewrite_leftmost_to_rightmost;
pub use run::RunTrace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tiebreak {
    Left,
    Right,
}

impl Tiebreak {
    pub fn flip(self) -> Self {
        match self {
            Tiebreak::Left => Tiebreak::Right,
            Tiebreak::Right => Tiebreak::Left,
        }
    }
}

/// `Future` restricts attention to `t' < t`, `Past` to `t' > t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mask {
    Future,
    Past,
}

impl Mask {
    pub fn flip(self) -> Self {
        match self {
            Mask::Future => Mask::Past,
            Mask::Past => Mask::Future,
        }
    }
}

/// Whether a vector reference reads the query position `t` or the key `t'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum At {
    Query,
    Key,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    Const(bool),
    Var { vector: usize, at: At },
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn var(vector: usize, at: At) -> Self {
        BoolExpr::Var { vector, at }
    }

    pub fn not(x: BoolExpr) -> Self {
        BoolExpr::Not(Box::new(x))
    }

    pub fn and(l: BoolExpr, r: BoolExpr) -> Self {
        BoolExpr::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: BoolExpr, r: BoolExpr) -> Self {
        BoolExpr::Or(Box::new(l), Box::new(r))
    }

    pub fn and_all(items: impl IntoIterator<Item = BoolExpr>) -> Self {
        items.into_iter().reduce(BoolExpr::and).unwrap_or(BoolExpr::Const(true))
    }

    pub fn or_all(items: impl IntoIterator<Item = BoolExpr>) -> Self {
        items.into_iter().reduce(BoolExpr::or).unwrap_or(BoolExpr::Const(false))
    }

    pub fn eval(&self, query: &dyn Fn(usize) -> bool, key: &dyn Fn(usize) -> bool) -> bool {
        match self {
            BoolExpr::Const(b) => *b,
            BoolExpr::Var { vector, at: At::Query } => query(*vector),
            BoolExpr::Var { vector, at: At::Key } => key(*vector),
            BoolExpr::Not(x) => !x.eval(query, key),
            BoolExpr::And(l, r) => l.eval(query, key) && r.eval(query, key),
            BoolExpr::Or(l, r) => l.eval(query, key) || r.eval(query, key),
        }
    }

    pub fn refs(&self, out: &mut Vec<(usize, At)>) {
        match self {
            BoolExpr::Const(_) => {}
            BoolExpr::Var { vector, at } => out.push((*vector, *at)),
            BoolExpr::Not(x) => x.refs(out),
            BoolExpr::And(l, r) | BoolExpr::Or(l, r) => {
                l.refs(out);
                r.refs(out);
            }
        }
    }

    pub fn uses(&self, at: At) -> bool {
        let mut v = Vec::new();
        self.refs(&mut v);
        v.iter().any(|&(_, a)| a == at)
    }

    /// Replaces every `(t)` reference with `(t')`.
    pub fn to_key(&self) -> BoolExpr {
        self.map_vars(&|v, _| BoolExpr::var(v, At::Key))
    }

    pub fn map_vars(&self, f: &dyn Fn(usize, At) -> BoolExpr) -> BoolExpr {
        match self {
            BoolExpr::Const(b) => BoolExpr::Const(*b),
            BoolExpr::Var { vector, at } => f(*vector, *at),
            BoolExpr::Not(x) => BoolExpr::not(x.map_vars(f)),
            BoolExpr::And(l, r) => BoolExpr::and(l.map_vars(f), r.map_vars(f)),
            BoolExpr::Or(l, r) => BoolExpr::or(l.map_vars(f), r.map_vars(f)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VectorDef {
    Atomic(Sym),
    PositionWise(BoolExpr),
    Attention {
        tiebreak: Tiebreak,
        mask: Mask,
        score: BoolExpr,
        value: BoolExpr,
        default: BoolExpr,
    },
}

impl VectorDef {
    /// Attention ops whose score and value only read the key position.
    pub fn is_unary(&self) -> bool {
        match self {
            VectorDef::Attention { score, value, .. } => {
                !score.uses(At::Query) && !value.uses(At::Query)
            }
            _ => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vector {
    pub name: String,
    pub def: VectorDef,
}

/// Position whose output value decides acceptance. Programs read `Y(T)`;
/// mirrored programs read `Y(1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Readout {
    #[default]
    Last,
    First,
}

impl Readout {
    pub fn flip(self) -> Self {
        match self {
            Readout::Last => Readout::First,
            Readout::First => Readout::Last,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Restriction {
    FL,
    FR,
    PL,
    PR,
    Any,
}

impl Restriction {
    pub fn allows(self, tiebreak: Tiebreak, mask: Mask) -> bool {
        use Restriction::*;
        match self {
            Any => true,
            FL => (mask, tiebreak) == (Mask::Future, Tiebreak::Left),
            FR => (mask, tiebreak) == (Mask::Future, Tiebreak::Right),
            PL => (mask, tiebreak) == (Mask::Past, Tiebreak::Left),
            PR => (mask, tiebreak) == (Mask::Past, Tiebreak::Right),
        }
    }
}

impl std::str::FromStr for Restriction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "FL" => Ok(Restriction::FL),
            "FR" => Ok(Restriction::FR),
            "PL" => Ok(Restriction::PL),
            "PR" => Ok(Restriction::PR),
            "ANY" => Ok(Restriction::Any),
            _ => Err(Error::Unsupported(format!("unknown restriction `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub vector: String,
    pub tiebreak: Tiebreak,
    pub mask: Mask,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraspProgram {
    alphabet: Alphabet,
    vectors: Vec<Vector>,
    output: usize,
    readout: Readout,
}

pub(crate) fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn atomic_name(alphabet: &Alphabet, s: Sym) -> String {
    format!("Q_{}", alphabet.name(s))
}

impl BraspProgram {
    /// Checks the structural invariants: atomic vectors first, references
    /// only to earlier vectors, `(t')` only inside score and value.
    pub fn new(
        alphabet: Alphabet,
        vectors: Vec<Vector>,
        output: usize,
        readout: Readout,
    ) -> Result<Self> {
        for (i, s) in alphabet.symbols().enumerate() {
            if !alphabet.name(s).chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::InvalidAlphabet(format!(
                    "symbol `{}` cannot name a vector",
                    alphabet.name(s)
                )));
            }
            match vectors.get(i) {
                Some(Vector { name, def: VectorDef::Atomic(a) })
                    if *a == s && *name == atomic_name(&alphabet, s) => {}
                _ => {
                    return Err(Error::InvalidProgram(format!(
                        "vector {i} must be the atomic vector {}",
                        atomic_name(&alphabet, s)
                    )))
                }
            }
        }
        let mut names = HashSet::new();
        for (i, v) in vectors.iter().enumerate() {
            if !valid_name(&v.name) {
                return Err(Error::InvalidProgram(format!("bad vector name `{}`", v.name)));
            }
            if !names.insert(v.name.as_str()) {
                return Err(Error::InvalidProgram(format!("vector `{}` defined twice", v.name)));
            }
            let check = |e: &BoolExpr, key_ok: bool, what: &str| -> Result<()> {
                let mut refs = Vec::new();
                e.refs(&mut refs);
                for (r, at) in refs {
                    if r >= i {
                        let referenced = vectors
                            .get(r)
                            .map(|x| x.name.clone())
                            .unwrap_or_else(|| format!("#{r}"));
                        return Err(Error::ForwardReference { vector: v.name.clone(), referenced });
                    }
                    if at == At::Key && !key_ok {
                        return Err(Error::InvalidProgram(format!(
                            "{what} of `{}` may only reference position t",
                            v.name
                        )));
                    }
                }
                Ok(())
            };
            match &v.def {
                VectorDef::Atomic(s) => {
                    if i >= alphabet.len() || s.index() != i {
                        return Err(Error::InvalidProgram(format!(
                            "atomic vector `{}` out of place",
                            v.name
                        )));
                    }
                }
                VectorDef::PositionWise(e) => check(e, false, "position-wise expression")?,
                VectorDef::Attention { score, value, default, .. } => {
                    check(score, true, "score")?;
                    check(value, true, "value")?;
                    check(default, false, "default")?;
                }
            }
        }
        if output >= vectors.len() {
            return Err(Error::MissingOutput);
        }
        Ok(BraspProgram { alphabet, vectors, output, readout })
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_brasp(text)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn readout(&self) -> Readout {
        self.readout
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vectors.iter().position(|v| v.name == name)
    }

    pub fn with_output(&self, output: usize) -> Result<Self> {
        BraspProgram::new(self.alphabet.clone(), self.vectors.clone(), output, self.readout)
    }

    /// Number of vectors beyond the atomic ones.
    pub fn non_atomic_len(&self) -> usize {
        self.vectors.len() - self.alphabet.len()
    }

    pub fn attention_ops(&self) -> impl Iterator<Item = (usize, Tiebreak, Mask)> + '_ {
        self.vectors.iter().enumerate().filter_map(|(i, v)| match v.def {
            VectorDef::Attention { tiebreak, mask, .. } => Some((i, tiebreak, mask)),
            _ => None,
        })
    }

    /// Attention ops that fall outside `restriction`; empty means compliant.
    pub fn validate_restriction(&self, restriction: Restriction) -> Vec<Violation> {
        self.attention_ops()
            .filter(|&(_, tb, m)| !restriction.allows(tb, m))
            .map(|(i, tiebreak, mask)| Violation {
                vector: self.vectors[i].name.clone(),
                tiebreak,
                mask,
            })
            .collect()
    }

    /// Swaps masks and tiebreaks, and reads acceptance at the other end.
    pub fn mirror(&self) -> BraspProgram {
        let vectors = self
            .vectors
            .iter()
            .map(|v| Vector {
                name: v.name.clone(),
                def: match &v.def {
                    VectorDef::Attention { tiebreak, mask, score, value, default } => {
                        VectorDef::Attention {
                            tiebreak: tiebreak.flip(),
                            mask: mask.flip(),
                            score: score.clone(),
                            value: value.clone(),
                            default: default.clone(),
                        }
                    }
                    d => d.clone(),
                },
            })
            .collect();
        BraspProgram {
            alphabet: self.alphabet.clone(),
            vectors,
            output: self.output,
            readout: self.readout.flip(),
        }
    }

    pub fn run(&self, word: &[Sym]) -> Result<RunTrace> {
        self.alphabet.check_word(word)?;
        Ok(run::run(self, word))
    }

    /// Output value at the readout position; the empty string is rejected.
    pub fn accepts(&self, word: &[Sym]) -> Result<bool> {
        self.alphabet.check_word(word)?;
        if word.is_empty() {
            return Ok(false);
        }
        let trace = run::run(self, word);
        Ok(trace.accepts(self.output, self.readout))
    }

    /// Output vector values at positions `1..=T`.
    pub fn output_values(&self, word: &[Sym]) -> Result<Vec<bool>> {
        Ok(self.run(word)?.values[self.output].clone())
    }

    pub fn to_file_string(&self) -> String {
        self.to_string()
    }

    fn write_expr(&self, f: &mut fmt::Formatter<'_>, e: &BoolExpr, min: u8) -> fmt::Result {
        let p = match e {
            BoolExpr::Or(..) => 1,
            BoolExpr::And(..) => 2,
            _ => 3,
        };
        if p < min {
            f.write_str("(")?;
        }
        match e {
            BoolExpr::Const(b) => f.write_str(if *b { "1" } else { "0" })?,
            BoolExpr::Var { vector, at } => {
                let t = if *at == At::Key { "t'" } else { "t" };
                write!(f, "{}({t})", self.vectors[*vector].name)?
            }
            BoolExpr::Not(x) => {
                f.write_str("!")?;
                self.write_expr(f, x, 3)?;
            }
            BoolExpr::And(l, r) | BoolExpr::Or(l, r) => {
                let op = if p == 2 { " & " } else { " | " };
                self.write_expr(f, l, p)?;
                f.write_str(op)?;
                self.write_expr(f, r, p + 1)?;
            }
        }
        if p < min {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for BraspProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet: {}", self.alphabet)?;
        for v in &self.vectors {
            match &v.def {
                VectorDef::Atomic(_) => {}
                VectorDef::PositionWise(e) => {
                    write!(f, "{}(t) = ", v.name)?;
                    self.write_expr(f, e, 1)?;
                    writeln!(f)?;
                }
                VectorDef::Attention { tiebreak, mask, score, value, default } => {
                    let tb = if *tiebreak == Tiebreak::Left { "lmost" } else { "rmost" };
                    let m = if *mask == Mask::Future { "t' < t" } else { "t' > t" };
                    write!(f, "{}(t) = {tb}[{m}, ", v.name)?;
                    self.write_expr(f, score, 1)?;
                    f.write_str("] ")?;
                    self.write_expr(f, value, 1)?;
                    f.write_str(" : ")?;
                    self.write_expr(f, default, 1)?;
                    writeln!(f)?;
                }
            }
        }
        if self.readout == Readout::First {
            writeln!(f, "readout: first")?;
        }
        writeln!(f, "output: {}", self.vectors[self.output].name)
    }
}

/// Incremental construction with automatic name disambiguation.
#[derive(Debug, Clone)]
pub struct Builder {
    alphabet: Alphabet,
    vectors: Vec<Vector>,
    names: HashSet<String>,
    reserved: HashSet<String>,
}

impl Builder {
    pub fn new(alphabet: &Alphabet) -> Self {
        let vectors: Vec<Vector> = alphabet
            .symbols()
            .map(|s| Vector { name: atomic_name(alphabet, s), def: VectorDef::Atomic(s) })
            .collect();
        let names = vectors.iter().map(|v| v.name.clone()).collect();
        Builder { alphabet: alphabet.clone(), vectors, names, reserved: HashSet::new() }
    }

    pub fn from_program(p: &BraspProgram) -> Self {
        Builder {
            alphabet: p.alphabet.clone(),
            vectors: p.vectors.clone(),
            names: p.vectors.iter().map(|v| v.name.clone()).collect(),
            reserved: HashSet::new(),
        }
    }

    pub fn atomic(&self, s: Sym) -> usize {
        s.index()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Keeps `names` away from [`Builder::push`]'s generated names.
    pub fn reserve(&mut self, names: impl IntoIterator<Item = String>) {
        self.reserved.extend(names);
    }

    pub fn fresh_name(&self, base: &str) -> String {
        let taken = |n: &str| self.names.contains(n) || self.reserved.contains(n);
        if !taken(base) {
            return base.to_string();
        }
        (1..).map(|k| format!("{base}_{k}")).find(|n| !taken(n)).unwrap()
    }

    /// Adds a vector under exactly `name`; duplicates surface in `finish`.
    pub fn push_exact(&mut self, name: &str, def: VectorDef) -> usize {
        self.names.insert(name.to_string());
        self.vectors.push(Vector { name: name.to_string(), def });
        self.vectors.len() - 1
    }

    pub fn push(&mut self, base: &str, def: VectorDef) -> usize {
        let name = self.fresh_name(base);
        self.names.insert(name.clone());
        self.vectors.push(Vector { name, def });
        self.vectors.len() - 1
    }

    pub fn finish(self, output: usize, readout: Readout) -> Result<BraspProgram> {
        BraspProgram::new(self.alphabet, self.vectors, output, readout)
    }
}

#[cfg(test)]
mod tests;

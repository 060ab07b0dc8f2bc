//! Linear temporal logic over finite strings with past (`P`), future (`F`),
//! since (`S`) and until (`U`).
//!
//! Positions run over `0..=T+1`: `1..=T` are the symbols of the string, while
//! `0` and `T+1` are virtual positions where every atom is false. Temporal
//! witnesses always range over `1..=T`.

mod eval;
mod parse;
mod simplify;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Sym};
use crate::error::{Error, Result};

pub use eval::{Convention, Evaluator};
pub use parse::{parse_ltl, MAX_DEPTH, MAX_NODES};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ltl {
    Atom(Sym),
    Not(Arc<Ltl>),
    And(Arc<Ltl>, Arc<Ltl>),
    Or(Arc<Ltl>, Arc<Ltl>),
    Past(Arc<Ltl>),
    Future(Arc<Ltl>),
    Since(Arc<Ltl>, Arc<Ltl>),
    Until(Arc<Ltl>, Arc<Ltl>),
}

pub type Node = Arc<Ltl>;

pub fn atom(s: Sym) -> Node {
    Arc::new(Ltl::Atom(s))
}

pub fn not(x: Node) -> Node {
    Arc::new(Ltl::Not(x))
}

pub fn and(l: Node, r: Node) -> Node {
    Arc::new(Ltl::And(l, r))
}

pub fn or(l: Node, r: Node) -> Node {
    Arc::new(Ltl::Or(l, r))
}

pub fn past(x: Node) -> Node {
    Arc::new(Ltl::Past(x))
}

pub fn future(x: Node) -> Node {
    Arc::new(Ltl::Future(x))
}

pub fn since(l: Node, r: Node) -> Node {
    Arc::new(Ltl::Since(l, r))
}

pub fn until(l: Node, r: Node) -> Node {
    Arc::new(Ltl::Until(l, r))
}

/// Constant false, written `(a & !a)` for the first symbol `a` of the alphabet.
pub fn bottom(alphabet: &Alphabet) -> Node {
    let a = atom(Sym(0));
    debug_assert!(!alphabet.is_empty());
    and(a.clone(), not(a))
}

pub fn top(alphabet: &Alphabet) -> Node {
    not(bottom(alphabet))
}

/// Conjunction of all items, or `top` if there are none.
pub fn and_all(alphabet: &Alphabet, items: impl IntoIterator<Item = Node>) -> Node {
    items.into_iter().reduce(and).unwrap_or_else(|| top(alphabet))
}

/// Disjunction of all items, or `bottom` if there are none.
pub fn or_all(alphabet: &Alphabet, items: impl IntoIterator<Item = Node>) -> Node {
    items.into_iter().reduce(or).unwrap_or_else(|| bottom(alphabet))
}

impl Ltl {
    pub fn children(&self) -> Vec<&Node> {
        match self {
            Ltl::Atom(_) => vec![],
            Ltl::Not(x) | Ltl::Past(x) | Ltl::Future(x) => vec![x],
            Ltl::And(l, r) | Ltl::Or(l, r) | Ltl::Since(l, r) | Ltl::Until(l, r) => vec![l, r],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Fragment {
    #[serde(rename = "P-only")]
    POnly,
    #[serde(rename = "F-only")]
    FOnly,
    #[serde(rename = "PF")]
    PF,
    #[serde(rename = "Full")]
    Full,
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fragment::POnly => "P-only",
            Fragment::FOnly => "F-only",
            Fragment::PF => "PF",
            Fragment::Full => "Full",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtlFormula {
    alphabet: Alphabet,
    root: Node,
}

#[derive(Default)]
struct OpsUsed {
    past: bool,
    future: bool,
    since: bool,
    until: bool,
}

impl LtlFormula {
    /// Wraps a root node, checking that every atom belongs to `alphabet`.
    pub fn new(alphabet: Alphabet, root: Node) -> Result<Self> {
        let mut bad = None;
        visit(&root, &mut |n| {
            if let Ltl::Atom(s) = n {
                if s.index() >= alphabet.len() {
                    bad = Some(*s);
                }
            }
        });
        if let Some(s) = bad {
            return Err(Error::UnknownSymbol(format!("#{}", s.0)));
        }
        Ok(LtlFormula { alphabet, root })
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_ltl(text)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Number of distinct subformulas (shared subterms count once).
    pub fn dag_size(&self) -> usize {
        let mut n = 0;
        visit(&self.root, &mut |_| n += 1);
        n
    }

    /// Number of nodes in the formula as a tree, saturating.
    pub fn size(&self) -> u64 {
        fn go(n: &Node, memo: &mut HashMap<*const Ltl, u64>) -> u64 {
            if let Some(&v) = memo.get(&Arc::as_ptr(n)) {
                return v;
            }
            let v = n
                .children()
                .into_iter()
                .fold(1u64, |acc, c| acc.saturating_add(go(c, memo)));
            memo.insert(Arc::as_ptr(n), v);
            v
        }
        go(&self.root, &mut HashMap::new())
    }

    /// Operator nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        fn go(n: &Node, memo: &mut HashMap<*const Ltl, usize>) -> usize {
            if let Some(&v) = memo.get(&Arc::as_ptr(n)) {
                return v;
            }
            let v = n.children().into_iter().map(|c| 1 + go(c, memo)).max().unwrap_or(0);
            memo.insert(Arc::as_ptr(n), v);
            v
        }
        go(&self.root, &mut HashMap::new())
    }

    fn ops_used(&self) -> OpsUsed {
        let mut ops = OpsUsed::default();
        visit(&self.root, &mut |n| match n {
            Ltl::Past(_) => ops.past = true,
            Ltl::Future(_) => ops.future = true,
            Ltl::Since(..) => ops.since = true,
            Ltl::Until(..) => ops.until = true,
            _ => {}
        });
        ops
    }

    /// Syntactic fragment. Formulas without temporal operators are reported
    /// as `POnly` (they also satisfy [`LtlFormula::is_f_only`]).
    pub fn fragment(&self) -> Fragment {
        let o = self.ops_used();
        if o.since || o.until {
            Fragment::Full
        } else if o.past && o.future {
            Fragment::PF
        } else if o.future {
            Fragment::FOnly
        } else {
            Fragment::POnly
        }
    }

    pub fn is_p_only(&self) -> bool {
        let o = self.ops_used();
        !(o.future || o.since || o.until)
    }

    pub fn is_f_only(&self) -> bool {
        let o = self.ops_used();
        !(o.past || o.since || o.until)
    }

    pub fn count_since(&self) -> usize {
        let mut n = 0;
        visit(&self.root, &mut |x| {
            if matches!(x, Ltl::Since(..)) {
                n += 1;
            }
        });
        n
    }

    /// Swaps `P` with `F` and `S` with `U`, preserving sharing.
    pub fn mirror(&self) -> LtlFormula {
        fn go(n: &Node, memo: &mut HashMap<*const Ltl, Node>) -> Node {
            if let Some(v) = memo.get(&Arc::as_ptr(n)) {
                return v.clone();
            }
            let v = match &**n {
                Ltl::Atom(_) => n.clone(),
                Ltl::Not(x) => not(go(x, memo)),
                Ltl::And(l, r) => and(go(l, memo), go(r, memo)),
                Ltl::Or(l, r) => or(go(l, memo), go(r, memo)),
                Ltl::Past(x) => future(go(x, memo)),
                Ltl::Future(x) => past(go(x, memo)),
                Ltl::Since(l, r) => until(go(l, memo), go(r, memo)),
                Ltl::Until(l, r) => since(go(l, memo), go(r, memo)),
            };
            memo.insert(Arc::as_ptr(n), v.clone());
            v
        }
        LtlFormula {
            alphabet: self.alphabet.clone(),
            root: go(&self.root, &mut HashMap::new()),
        }
    }

    /// Constant folding, double negation, idempotence, and `x & !x`.
    pub fn simplify(&self) -> LtlFormula {
        LtlFormula {
            alphabet: self.alphabet.clone(),
            root: simplify::simplify(&self.alphabet, &self.root),
        }
    }

    pub fn evaluator(&self) -> Evaluator {
        Evaluator::new(self)
    }

    /// Truth value at `pos`, where `0` and `T+1` are the virtual positions.
    pub fn eval(&self, word: &[Sym], pos: usize) -> Result<bool> {
        self.alphabet.check_word(word)?;
        if pos > word.len() + 1 {
            return Err(Error::PositionOutOfRange { pos, len: word.len() });
        }
        Ok(self.evaluator().table(word)[pos])
    }

    /// Values at every position `0..=T+1`.
    pub fn eval_all(&self, word: &[Sym]) -> Result<Vec<bool>> {
        self.alphabet.check_word(word)?;
        Ok(self.evaluator().table(word))
    }

    pub fn accepts(&self, word: &[Sym], conv: Convention) -> Result<bool> {
        self.alphabet.check_word(word)?;
        Ok(self.evaluator().accepts(word, conv))
    }

    /// File form: an `alphabet:` header followed by the formula.
    pub fn to_file_string(&self) -> String {
        format!("alphabet: {}\n{}\n", self.alphabet, self)
    }

    /// Re-targets the formula to a larger alphabet containing this one.
    pub fn with_alphabet(&self, alphabet: &Alphabet) -> Result<LtlFormula> {
        if alphabet == &self.alphabet {
            return Ok(self.clone());
        }
        let mut map = Vec::new();
        for name in self.alphabet.names() {
            map.push(alphabet.lookup(name).ok_or_else(|| {
                Error::AlphabetMismatch(format!("symbol `{name}` missing from target alphabet"))
            })?);
        }
        fn go(n: &Node, map: &[Sym], memo: &mut HashMap<*const Ltl, Node>) -> Node {
            if let Some(v) = memo.get(&Arc::as_ptr(n)) {
                return v.clone();
            }
            let v = match &**n {
                Ltl::Atom(s) => atom(map[s.index()]),
                Ltl::Not(x) => not(go(x, map, memo)),
                Ltl::And(l, r) => and(go(l, map, memo), go(r, map, memo)),
                Ltl::Or(l, r) => or(go(l, map, memo), go(r, map, memo)),
                Ltl::Past(x) => past(go(x, map, memo)),
                Ltl::Future(x) => future(go(x, map, memo)),
                Ltl::Since(l, r) => since(go(l, map, memo), go(r, map, memo)),
                Ltl::Until(l, r) => until(go(l, map, memo), go(r, map, memo)),
            };
            memo.insert(Arc::as_ptr(n), v.clone());
            v
        }
        Ok(LtlFormula {
            alphabet: alphabet.clone(),
            root: go(&self.root, &map, &mut HashMap::new()),
        })
    }
}

/// Visits each distinct node (by pointer) once, children first.
pub(crate) fn visit(root: &Node, f: &mut impl FnMut(&Ltl)) {
    let mut seen: HashSet<*const Ltl> = HashSet::new();
    let mut stack: Vec<(&Node, bool)> = vec![(root, false)];
    while let Some((n, expanded)) = stack.pop() {
        if expanded {
            f(n);
            continue;
        }
        if !seen.insert(Arc::as_ptr(n)) {
            continue;
        }
        stack.push((n, true));
        for c in n.children() {
            stack.push((c, false));
        }
    }
}

impl fmt::Display for LtlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        parse::write_formula(f, &self.alphabet, &self.root)
    }
}

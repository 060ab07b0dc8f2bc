use std::collections::HashMap;
use std::fmt;

use super::{minimize, reverse_dfa, Dfa};
use crate::alphabet::{Alphabet, Sym};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExprKind {
    /// `w_t` not in `Sigma_{t-1}`; matched left to right.
    R,
    /// `w_t` not in `Sigma_t`; matched right to left.
    L,
}

/// One pattern `Sigma_0* w_1 Sigma_1* ... w_n Sigma_n*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    /// `n + 1` symbol sets as membership masks.
    pub sets: Vec<Vec<bool>>,
    pub letters: Vec<Sym>,
}

impl Branch {
    fn reversed(&self) -> Branch {
        Branch {
            sets: self.sets.iter().rev().cloned().collect(),
            letters: self.letters.iter().rev().copied().collect(),
        }
    }

    /// Greedy left-to-right match; complete whenever `w_t` is not in
    /// `Sigma_{t-1}`, since then no symbol can both stay and advance.
    fn match_forward(&self, word: &[Sym]) -> bool {
        let mut i = 0;
        for &c in word {
            if self.sets[i][c.index()] {
                continue;
            }
            if i < self.letters.len() && self.letters[i] == c {
                i += 1;
            } else {
                return false;
            }
        }
        i == self.letters.len()
    }

    fn forward_table(&self, k: usize) -> (Vec<Vec<usize>>, Vec<bool>) {
        let n = self.letters.len();
        let sink = n + 1;
        let mut delta = Vec::with_capacity(n + 2);
        for i in 0..=n {
            delta.push(
                (0..k)
                    .map(|c| {
                        if self.sets[i][c] {
                            i
                        } else if i < n && self.letters[i].index() == c {
                            i + 1
                        } else {
                            sink
                        }
                    })
                    .collect(),
            );
        }
        delta.push(vec![sink; k]);
        let finals = (0..=sink).map(|i| i == n).collect();
        (delta, finals)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RExpression {
    alphabet: Alphabet,
    kind: ExprKind,
    branches: Vec<Branch>,
}

impl RExpression {
    pub fn new(alphabet: Alphabet, kind: ExprKind, branches: Vec<Branch>) -> Result<Self> {
        for b in &branches {
            if b.sets.len() != b.letters.len() + 1
                || b.sets.iter().any(|s| s.len() != alphabet.len())
                || b.letters.iter().any(|w| w.index() >= alphabet.len())
            {
                return Err(Error::InvalidAutomaton("malformed expression branch".into()));
            }
            for (t, w) in b.letters.iter().enumerate() {
                let guard = match kind {
                    ExprKind::R => &b.sets[t],
                    ExprKind::L => &b.sets[t + 1],
                };
                if guard[w.index()] {
                    return Err(Error::InvalidAutomaton(format!(
                        "letter `{}` also occurs in its adjacent set",
                        alphabet.name(*w)
                    )));
                }
            }
        }
        Ok(RExpression { alphabet, kind, branches })
    }

    /// Parses branches separated by `|`, each a sequence of `{a,b}*` sets and
    /// single symbols. Missing sets between letters are taken as empty.
    pub fn parse(alphabet: &Alphabet, kind: ExprKind, src: &str) -> Result<Self> {
        let mut branches = Vec::new();
        for part in src.split('|') {
            let mut sets: Vec<Vec<bool>> = Vec::new();
            let mut letters = Vec::new();
            let mut expect_set = true;
            let mut rest = part.trim();
            while !rest.is_empty() {
                if let Some(body) = rest.strip_prefix('{') {
                    let close = body
                        .find('}')
                        .ok_or_else(|| Error::InvalidAutomaton("missing `}`".into()))?;
                    let mut mask = vec![false; alphabet.len()];
                    for name in body[..close].split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        mask[alphabet.sym(name)?.index()] = true;
                    }
                    rest = body[close + 1..]
                        .strip_prefix('*')
                        .ok_or_else(|| Error::InvalidAutomaton("set must be starred".into()))?
                        .trim_start();
                    if !expect_set {
                        return Err(Error::InvalidAutomaton("two adjacent sets".into()));
                    }
                    sets.push(mask);
                    expect_set = false;
                } else {
                    let end = rest.find(|c: char| c.is_whitespace() || c == '{').unwrap_or(rest.len());
                    let w = alphabet.sym(&rest[..end])?;
                    if expect_set {
                        sets.push(vec![false; alphabet.len()]);
                    }
                    letters.push(w);
                    expect_set = true;
                    rest = rest[end..].trim_start();
                }
            }
            if expect_set {
                sets.push(vec![false; alphabet.len()]);
            }
            branches.push(Branch { sets, letters });
        }
        RExpression::new(alphabet.clone(), kind, branches)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn kind(&self) -> ExprKind {
        self.kind
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn matches(&self, word: &[Sym]) -> Result<bool> {
        self.alphabet.check_word(word)?;
        Ok(self.branches.iter().any(|b| match self.kind {
            ExprKind::R => b.match_forward(word),
            ExprKind::L => {
                let rev: Vec<Sym> = word.iter().rev().copied().collect();
                b.reversed().match_forward(&rev)
            }
        }))
    }

    /// Minimal DFA of the union of the branch matchers.
    pub fn to_dfa(&self) -> Result<Dfa> {
        let k = self.alphabet.len();
        let tables: Vec<(Vec<Vec<usize>>, Vec<bool>)> = self
            .branches
            .iter()
            .map(|b| match self.kind {
                ExprKind::R => b.forward_table(k),
                ExprKind::L => b.reversed().forward_table(k),
            })
            .collect();
        let start = vec![0usize; tables.len()];
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::from([(start.clone(), 0)]);
        let mut tuples = vec![start];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < tuples.len() {
            let mut row = Vec::with_capacity(k);
            for c in 0..k {
                let next: Vec<usize> = tuples[i]
                    .iter()
                    .zip(&tables)
                    .map(|(&q, (d, _))| d[q][c])
                    .collect();
                let n = tuples.len();
                let id = *ids.entry(next.clone()).or_insert(n);
                if id == n {
                    tuples.push(next);
                }
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        let finals = tuples
            .iter()
            .map(|t| t.iter().zip(&tables).any(|(&q, (_, f))| f[q]))
            .collect();
        let dfa = Dfa::from_table(self.alphabet.clone(), delta, 0, finals)?;
        match self.kind {
            ExprKind::R => Ok(minimize(&dfa)),
            ExprKind::L => reverse_dfa(&dfa),
        }
    }
}

impl fmt::Display for RExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = |m: &Vec<bool>| {
            let names: Vec<&str> = self
                .alphabet
                .symbols()
                .filter(|s| m[s.index()])
                .map(|s| self.alphabet.name(s))
                .collect();
            format!("{{{}}}*", names.join(","))
        };
        let parts: Vec<String> = self
            .branches
            .iter()
            .map(|b| {
                let mut s = set(&b.sets[0]);
                for (w, m) in b.letters.iter().zip(&b.sets[1..]) {
                    s.push(' ');
                    s.push_str(self.alphabet.name(*w));
                    s.push(' ');
                    s.push_str(&set(m));
                }
                s
            })
            .collect();
        f.write_str(&parts.join(" | "))
    }
}

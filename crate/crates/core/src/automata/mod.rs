//! Deterministic automata over finite alphabets: minimization, partial-order
//! checks, reversal, transition monoids, cascades of half-resets, and
//! R-/L-expressions.

mod cascade;
mod minimize;
mod monoid;
mod order;
mod rexpr;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Sym};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::text;

pub use cascade::{
    cascade, check_homomorphism, CascadeSpec, HalfReset, HomCheck, PartialSemiautomaton,
};
pub use minimize::minimize;
pub use monoid::Monoid;
pub use order::{is_pofa, is_rpofa, reverse_dfa, reverse_dfa_with, PoCheck};
pub use rexpr::{Branch, ExprKind, RExpression};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semiautomaton {
    alphabet: Alphabet,
    states: Vec<String>,
    /// `delta[q][a]`
    delta: Vec<Vec<usize>>,
}

impl Semiautomaton {
    pub fn new(alphabet: Alphabet, states: Vec<String>, delta: Vec<Vec<usize>>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidAutomaton("no states".into()));
        }
        if delta.len() != states.len() {
            return Err(Error::InvalidAutomaton("transition table has wrong height".into()));
        }
        for row in &delta {
            if row.len() != alphabet.len() || row.iter().any(|&p| p >= states.len()) {
                return Err(Error::InvalidAutomaton("transition table is not total".into()));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for s in &states {
            if s.is_empty() || s.chars().any(char::is_whitespace) || !seen.insert(s) {
                return Err(Error::InvalidAutomaton(format!("bad or duplicate state name `{s}`")));
            }
        }
        Ok(Semiautomaton { alphabet, states, delta })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn step(&self, q: usize, a: Sym) -> usize {
        self.delta[q][a.index()]
    }

    pub fn run(&self, q: usize, word: &[Sym]) -> usize {
        word.iter().fold(q, |q, &a| self.step(q, a))
    }

    pub fn delta(&self) -> &[Vec<usize>] {
        &self.delta
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    semi: Semiautomaton,
    initial: usize,
    finals: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    #[serde(rename = "in_ltlP")]
    pub in_ltl_p: bool,
    #[serde(rename = "in_ltlF")]
    pub in_ltl_f: bool,
    pub star_free: bool,
    pub monoid_size: usize,
}

impl Dfa {
    pub fn new(semi: Semiautomaton, initial: usize, finals: Vec<bool>) -> Result<Self> {
        if initial >= semi.len() {
            return Err(Error::InvalidAutomaton("initial state out of range".into()));
        }
        if finals.len() != semi.len() {
            return Err(Error::InvalidAutomaton("final-state mask has wrong length".into()));
        }
        Ok(Dfa { semi, initial, finals })
    }

    /// Builds a DFA with states named `q0, q1, ...`.
    pub fn from_table(
        alphabet: Alphabet,
        delta: Vec<Vec<usize>>,
        initial: usize,
        finals: Vec<bool>,
    ) -> Result<Self> {
        let states = (0..delta.len()).map(|i| format!("q{i}")).collect();
        Dfa::new(Semiautomaton::new(alphabet, states, delta)?, initial, finals)
    }

    pub fn parse(src: &str) -> Result<Self> {
        let (semi, initial, finals) = parse_automaton(src)?;
        let initial = initial.ok_or_else(|| Error::InvalidAutomaton("missing `initial:`".into()))?;
        Dfa::new(semi, initial, finals)
    }

    pub fn semi(&self) -> &Semiautomaton {
        &self.semi
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.semi.alphabet
    }

    pub fn len(&self) -> usize {
        self.semi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.semi.is_empty()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn finals(&self) -> &[bool] {
        &self.finals
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    pub fn step(&self, q: usize, a: Sym) -> usize {
        self.semi.step(q, a)
    }

    pub fn accepts(&self, word: &[Sym]) -> Result<bool> {
        self.semi.alphabet.check_word(word)?;
        Ok(self.finals[self.semi.run(self.initial, word)])
    }

    /// Whether each non-empty prefix `w[..t]` is accepted, for `t` in `1..=T`.
    pub fn prefix_acceptance(&self, word: &[Sym]) -> Result<Vec<bool>> {
        self.semi.alphabet.check_word(word)?;
        let mut q = self.initial;
        Ok(word
            .iter()
            .map(|&a| {
                q = self.step(q, a);
                self.finals[q]
            })
            .collect())
    }

    pub fn minimize(&self) -> Dfa {
        minimize(self)
    }

    pub fn is_pofa(&self) -> PoCheck {
        is_pofa(self)
    }

    /// Minimizes, then checks partial order in both directions, aperiodicity,
    /// and R-/L-triviality of the transition monoid as a cross-check.
    pub fn classify(&self, caps: &Caps) -> Result<Classification> {
        let m = self.minimize();
        let in_ltl_p = is_pofa(&m).holds;
        let in_ltl_f = is_pofa(&reverse_dfa_with(&m, caps)?).holds;
        let monoid = Monoid::of_dfa(&m, caps.monoid)?;
        let r = monoid.is_r_trivial();
        let l = monoid.is_l_trivial();
        if r != in_ltl_p {
            return Err(Error::Inconsistency(format!(
                "partial order check says {in_ltl_p} but R-triviality says {r}"
            )));
        }
        if l != in_ltl_f {
            return Err(Error::Inconsistency(format!(
                "reverse partial order check says {in_ltl_f} but L-triviality says {l}"
            )));
        }
        Ok(Classification {
            in_ltl_p,
            in_ltl_f,
            star_free: monoid.is_aperiodic(),
            monoid_size: monoid.len(),
        })
    }

    /// Graphviz rendering with nodes in index order and edge labels merged
    /// per target.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  __start [shape=point];\n");
        for (q, name) in self.semi.states.iter().enumerate() {
            let shape = if self.finals[q] { "doublecircle" } else { "circle" };
            out.push_str(&format!("  \"{}\" [shape={shape}];\n", escape(name)));
        }
        out.push_str(&format!(
            "  __start -> \"{}\";\n",
            escape(&self.semi.states[self.initial])
        ));
        for (q, row) in self.semi.delta.iter().enumerate() {
            let mut by_target: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
            for (a, &p) in row.iter().enumerate() {
                by_target.entry(p).or_default().push(self.alphabet().name(Sym(a as u16)));
            }
            for (p, labels) in by_target {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                    escape(&self.semi.states[q]),
                    escape(&self.semi.states[p]),
                    escape(&labels.join(","))
                ));
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_file_string(&self) -> String {
        self.to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl fmt::Display for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.semi;
        writeln!(f, "alphabet: {}", s.alphabet)?;
        writeln!(f, "states: {}", s.states.join(" "))?;
        writeln!(f, "initial: {}", s.states[self.initial])?;
        let finals: Vec<&str> = (0..s.len())
            .filter(|&q| self.finals[q])
            .map(|q| s.states[q].as_str())
            .collect();
        if finals.is_empty() {
            writeln!(f, "finals:")?;
        } else {
            writeln!(f, "finals: {}", finals.join(" "))?;
        }
        for (q, row) in s.delta.iter().enumerate() {
            for (a, &p) in row.iter().enumerate() {
                writeln!(f, "{} {} {}", s.states[q], s.alphabet.name(Sym(a as u16)), s.states[p])?;
            }
        }
        Ok(())
    }
}

/// Parses the shared automaton file format. `initial:` and `finals:` are
/// optional here; [`Dfa::parse`] requires `initial:`.
pub fn parse_automaton(src: &str) -> Result<(Semiautomaton, Option<usize>, Vec<bool>)> {
    let lines = text::lines(src);
    let mut alphabet = None;
    let mut states: Option<Vec<String>> = None;
    let mut initial_name = None;
    let mut final_names: Vec<(String, &text::Line<'_>)> = Vec::new();
    let mut transitions = Vec::new();
    for l in &lines {
        if let Some(r) = l.keyed("alphabet") {
            alphabet = Some(
                Alphabet::new(r.split_whitespace().map(str::to_string))
                    .map_err(|e| l.err(e.to_string()))?,
            );
        } else if let Some(r) = l.keyed("states") {
            states = Some(r.split_whitespace().map(str::to_string).collect());
        } else if let Some(r) = l.keyed("initial") {
            initial_name = Some((r.to_string(), l));
        } else if let Some(r) = l.keyed("finals") {
            final_names.extend(r.split_whitespace().map(|s| (s.to_string(), l)));
        } else {
            let parts: Vec<&str> = l.text.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(l.err("expected `STATE SYMBOL STATE`"));
            }
            transitions.push((parts, l));
        }
    }
    let alphabet = alphabet.ok_or_else(|| Error::InvalidAutomaton("missing `alphabet:`".into()))?;
    let states = states.ok_or_else(|| Error::InvalidAutomaton("missing `states:`".into()))?;
    let index: HashMap<&str, usize> =
        states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    if index.len() != states.len() {
        return Err(Error::InvalidAutomaton("duplicate state name".into()));
    }
    let lookup = |name: &str, l: &text::Line<'_>| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| l.err(format!("unknown state `{name}`")))
    };
    let mut delta = vec![vec![usize::MAX; alphabet.len()]; states.len()];
    for (parts, l) in transitions {
        let q = lookup(parts[0], l)?;
        let a = alphabet.lookup(parts[1]).ok_or_else(|| l.err(format!("unknown symbol `{}`", parts[1])))?;
        let p = lookup(parts[2], l)?;
        if delta[q][a.index()] != usize::MAX {
            return Err(l.err(format!("duplicate transition for ({}, {})", parts[0], parts[1])));
        }
        delta[q][a.index()] = p;
    }
    for (q, row) in delta.iter().enumerate() {
        if let Some(a) = row.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidAutomaton(format!(
                "missing transition for ({}, {})",
                states[q],
                alphabet.name(Sym(a as u16))
            )));
        }
    }
    let initial = match initial_name {
        Some((n, l)) => Some(lookup(&n, l)?),
        None => None,
    };
    let mut finals = vec![false; states.len()];
    for (n, l) in final_names {
        finals[lookup(&n, l)?] = true;
    }
    Ok((Semiautomaton::new(alphabet, states, delta)?, initial, finals))
}

#[cfg(test)]
mod tests;

//! Finite alphabets and words over them.
//!
//! Symbols are interned as indices into a sorted name list, so the natural
//! order on [`Sym`] is the lexicographic order on symbol names. Every core
//! object (formula, program, automaton, model) carries its own [`Alphabet`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Sym(pub u16);

impl Sym {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub type Word = Vec<Sym>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    /// Builds an alphabet from symbol names. Names are sorted and must be
    /// unique, non-empty, and free of whitespace.
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must be non-empty".into()));
        }
        for n in &names {
            if n.is_empty() || n.chars().any(char::is_whitespace) {
                return Err(Error::InvalidAlphabet(format!("bad symbol name {n:?}")));
            }
        }
        names.sort();
        let before = names.len();
        names.dedup();
        if names.len() != before {
            return Err(Error::InvalidAlphabet("duplicate symbol".into()));
        }
        if names.len() > u16::MAX as usize {
            return Err(Error::InvalidAlphabet("too many symbols".into()));
        }
        Ok(Alphabet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> + '_ {
        (0..self.names.len()).map(|i| Sym(i as u16))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.names[s.index()]
    }

    pub fn lookup(&self, name: &str) -> Option<Sym> {
        self.names
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
            .map(|i| Sym(i as u16))
    }

    pub fn sym(&self, name: &str) -> Result<Sym> {
        self.lookup(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    fn single_chars(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Parses a word. When every symbol is a single character the text is
    /// read character by character (whitespace ignored); otherwise symbols
    /// are separated by whitespace.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        if self.single_chars() {
            text.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| self.sym(c.encode_utf8(&mut [0; 4])))
                .collect()
        } else {
            text.split_whitespace().map(|t| self.sym(t)).collect()
        }
    }

    pub fn format_word(&self, word: &[Sym]) -> String {
        let sep = if self.single_chars() { "" } else { " " };
        word.iter()
            .map(|&s| self.name(s))
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Returns `true` when `word` only uses symbols of this alphabet.
    pub fn contains_word(&self, word: &[Sym]) -> bool {
        word.iter().all(|s| s.index() < self.names.len())
    }

    pub(crate) fn check_word(&self, word: &[Sym]) -> Result<()> {
        match word.iter().find(|s| s.index() >= self.names.len()) {
            Some(s) => Err(Error::UnknownSymbol(format!("#{}", s.0))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names.join(" "))
    }
}

pub fn reversed(word: &[Sym]) -> Word {
    word.iter().rev().copied().collect()
}

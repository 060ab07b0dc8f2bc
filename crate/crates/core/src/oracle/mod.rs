//! Bounded equivalence checking over all short strings, and seeded
//! generators for random test populations.

mod generate;

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::alphabet::{Alphabet, Sym, Word};
use crate::automata::Dfa;
use crate::brasp::BraspProgram;
use crate::error::{Error, Result};
use crate::ltl::{Convention, Evaluator, LtlFormula};
use crate::uhat::UhatModel;

pub use generate::{
    random_brasp, random_dfa, random_formula, random_uhat, BraspParams, DfaParams, FormulaParams,
    UhatParams,
};

/// All strings of length `0..=max_len` in length-then-lexicographic order.
pub fn enumerate_strings(alphabet: &Alphabet, max_len: usize) -> Strings {
    Strings { k: alphabet.len(), max_len, next: Some(Vec::new()) }
}

/// All strings of exactly length `n`, in lexicographic order.
pub fn strings_of_len(alphabet: &Alphabet, n: usize) -> impl Iterator<Item = Word> {
    enumerate_strings(alphabet, n).skip_while(move |w| w.len() < n)
}

#[derive(Debug, Clone)]
pub struct Strings {
    k: usize,
    max_len: usize,
    next: Option<Word>,
}

impl Iterator for Strings {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.next.take()?;
        let mut w = cur.clone();
        // Odometer increment; on overflow move to the next length.
        let mut i = w.len();
        loop {
            if i == 0 {
                let n = cur.len() + 1;
                self.next = (n <= self.max_len && self.k > 0).then(|| vec![Sym(0); n]);
                break;
            }
            i -= 1;
            if w[i].index() + 1 < self.k {
                w[i] = Sym(w[i].0 + 1);
                for s in &mut w[i + 1..] {
                    *s = Sym(0);
                }
                self.next = Some(w);
                break;
            }
        }
        Some(cur)
    }
}

/// A language recognizer with its acceptance convention attached.
#[derive(Debug, Clone)]
pub enum Recognizer {
    Ltl { formula: LtlFormula, convention: Convention, evaluator: Evaluator },
    Brasp(BraspProgram),
    Dfa(Dfa),
    Uhat(UhatModel),
}

impl Recognizer {
    pub fn ltl(formula: LtlFormula, convention: Convention) -> Self {
        let evaluator = formula.evaluator();
        Recognizer::Ltl { formula, convention, evaluator }
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Recognizer::Ltl { formula, .. } => formula.alphabet(),
            Recognizer::Brasp(p) => p.alphabet(),
            Recognizer::Dfa(d) => d.alphabet(),
            Recognizer::Uhat(m) => m.alphabet(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Recognizer::Ltl { .. } => "ltl",
            Recognizer::Brasp(_) => "brasp",
            Recognizer::Dfa(_) => "dfa",
            Recognizer::Uhat(_) => "uhat",
        }
    }

    pub fn accepts(&self, word: &[Sym]) -> Result<bool> {
        match self {
            Recognizer::Ltl { formula, convention, evaluator } => {
                formula.alphabet().check_word(word)?;
                Ok(evaluator.accepts(word, *convention))
            }
            Recognizer::Brasp(p) => p.accepts(word),
            Recognizer::Dfa(d) => d.accepts(word),
            Recognizer::Uhat(m) => m.accepts(word),
        }
    }

    /// Values at positions `1..=T`: the formula's truth value, the output
    /// vector, or acceptance of each prefix.
    pub fn values(&self, word: &[Sym]) -> Result<Vec<bool>> {
        match self {
            Recognizer::Ltl { formula, evaluator, .. } => {
                formula.alphabet().check_word(word)?;
                let t = evaluator.table(word);
                Ok(t[1..=word.len()].to_vec())
            }
            Recognizer::Brasp(p) => p.output_values(word),
            Recognizer::Dfa(d) => d.prefix_acceptance(word),
            Recognizer::Uhat(_) => Err(Error::Unsupported(
                "transformer models have no positionwise mode".into(),
            )),
        }
    }

    pub fn has_positions(&self) -> bool {
        !matches!(self, Recognizer::Uhat(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Language,
    Positionwise,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivResult {
    Equal { max_len: usize },
    /// `position` is the first differing position in positionwise mode.
    Counterexample { word: Word, a: bool, b: bool, position: Option<usize> },
}

impl EquivResult {
    pub fn is_equal(&self) -> bool {
        matches!(self, EquivResult::Equal { .. })
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> EquivDisplay<'a> {
        EquivDisplay { r: self, alphabet }
    }
}

pub struct EquivDisplay<'a> {
    r: &'a EquivResult,
    alphabet: &'a Alphabet,
}

impl fmt::Display for EquivDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.r {
            EquivResult::Equal { max_len } => write!(f, "EQUAL up to {max_len}"),
            EquivResult::Counterexample { word, a, b, position } => {
                write!(f, "COUNTEREXAMPLE \"{}\" a={a} b={b}", self.alphabet.format_word(word))?;
                if let Some(p) = position {
                    write!(f, " position={p}")?;
                }
                Ok(())
            }
        }
    }
}

fn compare(a: &Recognizer, b: &Recognizer, w: &[Sym], mode: Mode) -> Result<Option<EquivResult>> {
    let hit = |x: bool, y: bool, position| EquivResult::Counterexample {
        word: w.to_vec(),
        a: x,
        b: y,
        position,
    };
    match mode {
        Mode::Language => {
            let (x, y) = (a.accepts(w)?, b.accepts(w)?);
            Ok((x != y).then(|| hit(x, y, None)))
        }
        Mode::Positionwise => {
            let (xs, ys) = (a.values(w)?, b.values(w)?);
            Ok(xs
                .iter()
                .zip(&ys)
                .position(|(x, y)| x != y)
                .map(|i| hit(xs[i], ys[i], Some(i + 1))))
        }
    }
}

/// Compares two recognizers on every string up to `max_len`, returning the
/// shortest, then lexicographically least, distinguishing string. The empty
/// string is skipped when a program participates or in positionwise mode.
/// `jobs > 1` spreads each length over a worker pool; the result does not
/// depend on it.
pub fn check_equiv(
    a: &Recognizer,
    b: &Recognizer,
    max_len: usize,
    mode: Mode,
    jobs: usize,
) -> Result<EquivResult> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch(format!(
            "`{}` vs `{}`",
            a.alphabet(),
            b.alphabet()
        )));
    }
    if mode == Mode::Positionwise && !(a.has_positions() && b.has_positions()) {
        return Err(Error::Unsupported(
            "positionwise mode needs formulas, programs, or automata".into(),
        ));
    }
    let skip_empty = mode == Mode::Positionwise
        || matches!(a, Recognizer::Brasp(_))
        || matches!(b, Recognizer::Brasp(_));
    let alphabet = a.alphabet();
    let pool = if jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| Error::Io(e.to_string()))?,
        )
    } else {
        None
    };
    for n in usize::from(skip_empty)..=max_len {
        let found = match &pool {
            None => {
                let mut found = None;
                for w in strings_of_len(alphabet, n) {
                    if let Some(r) = compare(a, b, &w, mode)? {
                        found = Some(r);
                        break;
                    }
                }
                found
            }
            Some(pool) => {
                let words: Vec<Word> = strings_of_len(alphabet, n).collect();
                let first = pool.install(|| {
                    words
                        .par_iter()
                        .map(|w| compare(a, b, w, mode))
                        .find_first(|r| !matches!(r, Ok(None)))
                });
                first.transpose()?.flatten()
            }
        };
        if let Some(r) = found {
            return Ok(r);
        }
    }
    Ok(EquivResult::Equal { max_len })
}

/// Alphabet of the first `k` lowercase letters.
pub fn letters(k: usize) -> Alphabet {
    Alphabet::new((0..k).map(|i| ((b'a' + i as u8) as char).to_string())).expect("1 <= k <= 26")
}

#[cfg(test)]
mod tests;

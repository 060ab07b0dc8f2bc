use super::{BraspProgram, Mask, Readout, Tiebreak, VectorDef};
use crate::alphabet::Sym;

/// Values of every vector at positions `1..=T` (stored 0-based), plus, for
/// attention vectors, the attended position `t*` (1-based) or `None` when
/// no unmasked position had score 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTrace {
    pub values: Vec<Vec<bool>>,
    pub attended: Vec<Option<Vec<Option<usize>>>>,
}

impl RunTrace {
    pub fn len(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Value of `vector` at 1-based position `t`.
    pub fn get(&self, vector: usize, t: usize) -> bool {
        self.values[vector][t - 1]
    }

    pub fn accepts(&self, output: usize, readout: Readout) -> bool {
        let row = &self.values[output];
        match readout {
            Readout::Last => row.last().copied().unwrap_or(false),
            Readout::First => row.first().copied().unwrap_or(false),
        }
    }
}

pub(super) fn run(p: &BraspProgram, word: &[Sym]) -> RunTrace {
    let n = word.len();
    let mut values: Vec<Vec<bool>> = Vec::with_capacity(p.vectors.len());
    let mut attended = Vec::with_capacity(p.vectors.len());
    for v in &p.vectors {
        let (row, att) = match &v.def {
            VectorDef::Atomic(s) => (word.iter().map(|w| w == s).collect(), None),
            VectorDef::PositionWise(e) => {
                let row = (0..n)
                    .map(|t| {
                        let q = |i: usize| values[i][t];
                        e.eval(&q, &q)
                    })
                    .collect();
                (row, None)
            }
            VectorDef::Attention { tiebreak, mask, score, value, default } => {
                let mut row = Vec::with_capacity(n);
                let mut att = Vec::with_capacity(n);
                for t in 0..n {
                    let q = |i: usize| values[i][t];
                    let candidates: Box<dyn Iterator<Item = usize>> = match mask {
                        Mask::Future => Box::new(0..t),
                        Mask::Past => Box::new(t + 1..n),
                    };
                    let mut maximizers = candidates.filter(|&u| {
                        let k = |i: usize| values[i][u];
                        score.eval(&q, &k)
                    });
                    let star = match tiebreak {
                        Tiebreak::Left => maximizers.next(),
                        Tiebreak::Right => maximizers.last(),
                    };
                    let bit = match star {
                        Some(u) => {
                            let k = |i: usize| values[i][u];
                            value.eval(&q, &k)
                        }
                        None => default.eval(&q, &q),
                    };
                    row.push(bit);
                    att.push(star.map(|u| u + 1));
                }
                (row, Some(att))
            }
        };
        values.push(row);
        attended.push(att);
    }
    RunTrace { values, attended }
}

use crate::alphabet::Sym;
use crate::brasp::{Mask, Tiebreak};

use super::{Rep, Token, UhatModel};

/// Per-position representations of one run. Positions `1..=T+1` are stored
/// at indices `0..=T`; the last one is the `EOS` position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UhatTrace {
    /// `reps[l][t-1]` for levels `0..=L`.
    pub reps: Vec<Vec<Rep>>,
    /// `attended[l-1][t-1]`: the 1-based attended position of layer `l`.
    pub attended: Vec<Vec<Option<usize>>>,
}

impl UhatTrace {
    pub fn len(&self) -> usize {
        self.reps[0].len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Final-layer representation at the `EOS` position.
    pub fn eos_rep(&self) -> &Rep {
        self.reps.last().unwrap().last().unwrap()
    }

    pub fn rep(&self, level: usize, t: usize) -> &Rep {
        &self.reps[level][t - 1]
    }
}

pub(super) fn run(model: &UhatModel, word: &[Sym]) -> UhatTrace {
    let n = word.len() + 1;
    let mut cur: Vec<Rep> = word
        .iter()
        .map(|&s| Rep(vec![Token::Sym(s)]))
        .chain(std::iter::once(Rep(vec![Token::Eos])))
        .collect();
    let mut reps = vec![cur.clone()];
    let mut attended = Vec::new();
    for (l, layer) in model.layers().iter().enumerate() {
        let width = 1usize << l;
        let mut next = Vec::with_capacity(n);
        let mut att = Vec::with_capacity(n);
        for t in 0..n {
            let keys: Box<dyn Iterator<Item = usize>> = match layer.mask {
                Mask::Future => Box::new(0..t),
                Mask::Past => Box::new(t + 1..n),
            };
            let mut best: Option<(i64, usize)> = None;
            for k in keys {
                let s = layer.score(&cur[t], &cur[k]);
                best = match best {
                    None => Some((s, k)),
                    Some((b, _)) if s > b => Some((s, k)),
                    Some((b, _)) if s == b && layer.tiebreak == Tiebreak::Right => Some((s, k)),
                    keep => keep,
                };
            }
            match best {
                Some((_, k)) => {
                    next.push(cur[t].concat(&cur[k]));
                    att.push(Some(k + 1));
                }
                None => {
                    next.push(cur[t].concat(&Rep::bot(width)));
                    att.push(None);
                }
            }
        }
        cur = next;
        reps.push(cur.clone());
        attended.push(att);
    }
    UhatTrace { reps, attended }
}

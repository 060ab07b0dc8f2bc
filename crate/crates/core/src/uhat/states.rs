//! Exploration of the ordered-subset state space.
//!
//! A state records, for each level, the distinct representations produced so
//! far in processing order. Attention at layer `l` only depends on the query
//! and on the level-`(l-1)` list, so extending a prefix by one symbol is a
//! function of the state. For future masks symbols are processed left to
//! right; for past masks the string is processed from `EOS` leftwards.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::alphabet::Sym;
use crate::brasp::{Mask, Tiebreak};
use crate::error::{Error, Result};

use super::{Layer, Rep, Token, UhatModel};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetState {
    /// `sets[l]` for levels `0..=L`, ordered by first occurrence, or by last
    /// occurrence when the reading layer picks the most recent maximizer.
    pub sets: Vec<Vec<Rep>>,
}

#[derive(Debug, Clone)]
pub struct Exploration {
    pub mask: Mask,
    /// State 0 is the start state.
    pub states: Vec<SubsetState>,
    /// `delta[q][a]`.
    pub delta: Vec<Vec<usize>>,
    /// Representations at every level of an `EOS` position read in each
    /// state. For past masks this is the same for every state.
    pub eos: Vec<Vec<Rep>>,
}

impl Exploration {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn eos_rep(&self, q: usize) -> &Rep {
        self.eos[q].last().unwrap()
    }

    /// Union over states of all per-level sets and `EOS` representations.
    pub fn reachable_reps(&self) -> Vec<BTreeSet<Rep>> {
        let levels = self.states[0].sets.len();
        let mut out = vec![BTreeSet::new(); levels];
        for (s, e) in self.states.iter().zip(&self.eos) {
            for l in 0..levels {
                out[l].extend(s.sets[l].iter().cloned());
                out[l].insert(e[l].clone());
            }
        }
        out
    }
}

/// Whether the list read by `layer` keeps first occurrences (and picks the
/// first maximizer) rather than moving repeats to the end (and picking the
/// last one).
fn keeps_first(layer: Option<&Layer>) -> bool {
    match layer {
        None => true,
        Some(l) => matches!(
            (l.mask, l.tiebreak),
            (Mask::Future, Tiebreak::Left) | (Mask::Past, Tiebreak::Right)
        ),
    }
}

pub(crate) fn uniform_mask(model: &UhatModel) -> Result<Mask> {
    let m = model.layers()[0].mask;
    if model.layers().iter().any(|l| l.mask != m) {
        return Err(Error::Unsupported(
            "models mixing future and past masks have no ordered-subset construction".into(),
        ));
    }
    Ok(m)
}

/// Attention of `query` over the list `keys` read by `layer`.
pub(crate) fn select(layer: &Layer, level: usize, query: &Rep, keys: &[Rep]) -> Rep {
    let first = keeps_first(Some(layer));
    let mut best: Option<(i64, &Rep)> = None;
    for k in keys {
        let s = layer.score(query, k);
        best = match best {
            None => Some((s, k)),
            Some((b, _)) if s > b || (s == b && !first) => Some((s, k)),
            keep => keep,
        };
    }
    best.map_or_else(|| Rep::bot(1 << level), |(_, k)| k.clone())
}

/// Representations of a new position holding `token`, at levels `0..=L`.
pub(crate) fn reps_for(model: &UhatModel, state: &SubsetState, token: Token) -> Vec<Rep> {
    let mut out = vec![Rep(vec![token])];
    for (l, layer) in model.layers().iter().enumerate() {
        let q = &out[l];
        let y = select(layer, l, q, &state.sets[l]);
        let next = q.concat(&y);
        out.push(next);
    }
    out
}

fn extend(model: &UhatModel, state: &SubsetState, reps: Vec<Rep>) -> SubsetState {
    let mut sets = state.sets.clone();
    for (l, rep) in reps.into_iter().enumerate() {
        let list = &mut sets[l];
        let at = list.iter().position(|r| *r == rep);
        if keeps_first(model.layers().get(l)) {
            if at.is_none() {
                list.push(rep);
            }
        } else {
            if let Some(i) = at {
                list.remove(i);
            }
            list.push(rep);
        }
    }
    SubsetState { sets }
}

pub(super) fn explore(model: &UhatModel, cap: usize) -> Result<Exploration> {
    let mask = uniform_mask(model)?;
    let empty = SubsetState { sets: vec![Vec::new(); model.depth() + 1] };
    let (start, past_eos) = match mask {
        Mask::Future => (empty, None),
        Mask::Past => {
            let reps = reps_for(model, &empty, Token::Eos);
            (extend(model, &empty, reps.clone()), Some(reps))
        }
    };
    let k = model.alphabet().len();
    let mut index: HashMap<SubsetState, usize> = HashMap::new();
    let mut states = vec![start.clone()];
    index.insert(start, 0);
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(q) = queue.pop_front() {
        let mut row = Vec::with_capacity(k);
        for a in 0..k {
            let state = &states[q];
            let reps = reps_for(model, state, Token::Sym(Sym(a as u16)));
            let next = extend(model, state, reps);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    if states.len() >= cap {
                        return Err(Error::CapExceeded { what: "ordered-subset states", cap });
                    }
                    let id = states.len();
                    index.insert(next.clone(), id);
                    states.push(next);
                    queue.push_back(id);
                    id
                }
            };
            row.push(id);
        }
        // BFS pops states in index order.
        delta.push(row);
    }
    let eos = states
        .iter()
        .map(|s| match &past_eos {
            Some(r) => r.clone(),
            None => reps_for(model, s, Token::Eos),
        })
        .collect();
    Ok(Exploration { mask, states, delta, eos })
}

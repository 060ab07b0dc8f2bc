use std::collections::HashMap;

use super::{minimize, Dfa};
use crate::caps::Caps;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PoCheck {
    pub holds: bool,
    /// Two distinct mutually reachable states when `holds` is false.
    pub witness: Option<(usize, usize)>,
}

/// Strongly connected components (iterative Tarjan). Returns the component
/// id of each state.
pub(crate) fn scc(succ: &[Vec<usize>]) -> Vec<usize> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, i)) = call.last() {
            if i < succ[v].len() {
                let w = succ[v][i];
                call.last_mut().unwrap().1 += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// A DFA is partially ordered when its transition graph has only singleton
/// strongly connected components (self-loops allowed).
pub fn is_pofa(dfa: &Dfa) -> PoCheck {
    let succ: Vec<Vec<usize>> = dfa.semi().delta().to_vec();
    let comp = scc(&succ);
    let mut members: HashMap<usize, Vec<usize>> = HashMap::new();
    for (q, &c) in comp.iter().enumerate() {
        members.entry(c).or_default().push(q);
    }
    let witness = members
        .values()
        .filter(|m| m.len() > 1)
        .map(|m| (m[0], m[1]))
        .min();
    PoCheck { holds: witness.is_none(), witness }
}

pub fn reverse_dfa(dfa: &Dfa) -> Result<Dfa> {
    reverse_dfa_with(dfa, &Caps::default())
}

/// Minimal DFA for the reversed language, by subset construction over the
/// reversed transitions starting from the final states.
pub fn reverse_dfa_with(dfa: &Dfa, caps: &Caps) -> Result<Dfa> {
    let n = dfa.len();
    let words = n.div_ceil(64).max(1);
    let k = dfa.alphabet().len();
    // pre[a][p] = states q with delta(q, a) = p
    let mut pre = vec![vec![Vec::new(); n]; k];
    for q in 0..n {
        for a in dfa.alphabet().symbols() {
            pre[a.index()][dfa.step(q, a)].push(q);
        }
    }
    let mut start = vec![0u64; words];
    for q in (0..n).filter(|&q| dfa.is_final(q)) {
        start[q / 64] |= 1 << (q % 64);
    }
    let mut ids: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut sets = vec![start.clone()];
    ids.insert(start, 0);
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < sets.len() {
        let mut row = Vec::with_capacity(k);
        for a in 0..k {
            let mut next = vec![0u64; words];
            for p in 0..n {
                if sets[i][p / 64] >> (p % 64) & 1 == 1 {
                    for &q in &pre[a][p] {
                        next[q / 64] |= 1 << (q % 64);
                    }
                }
            }
            let id = match ids.get(&next) {
                Some(&id) => id,
                None => {
                    if sets.len() >= caps.states {
                        return Err(Error::CapExceeded { what: "reverse automaton states", cap: caps.states });
                    }
                    ids.insert(next.clone(), sets.len());
                    sets.push(next);
                    sets.len() - 1
                }
            };
            row.push(id);
        }
        delta.push(row);
        i += 1;
    }
    let init = dfa.initial();
    let finals = sets.iter().map(|s| s[init / 64] >> (init % 64) & 1 == 1).collect();
    let raw = Dfa::from_table(dfa.alphabet().clone(), delta, 0, finals)?;
    Ok(minimize(&raw))
}

/// Partial order of the reverse automaton.
pub fn is_rpofa(dfa: &Dfa) -> Result<bool> {
    Ok(is_pofa(&reverse_dfa(dfa)?).holds)
}

use std::collections::{HashMap, VecDeque};

use super::Dfa;

/// Minimal DFA with unreachable states removed and states renamed `q0, q1,
/// ...` in breadth-first order from the initial state, visiting successors
/// in alphabet order.
pub fn minimize(dfa: &Dfa) -> Dfa {
    let k = dfa.alphabet().len();
    // Reachable states in BFS order.
    let mut order = vec![dfa.initial()];
    let mut seen = vec![false; dfa.len()];
    seen[dfa.initial()] = true;
    let mut i = 0;
    while i < order.len() {
        let q = order[i];
        for a in dfa.alphabet().symbols() {
            let p = dfa.step(q, a);
            if !seen[p] {
                seen[p] = true;
                order.push(p);
            }
        }
        i += 1;
    }

    // Moore refinement over reachable states.
    let mut class: Vec<usize> = vec![0; dfa.len()];
    for &q in &order {
        class[q] = dfa.is_final(q) as usize;
    }
    let mut count = {
        let mut c: Vec<usize> = order.iter().map(|&q| class[q]).collect();
        c.sort_unstable();
        c.dedup();
        c.len()
    };
    loop {
        let mut sig_ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut next = class.clone();
        for &q in &order {
            let mut sig = Vec::with_capacity(k + 1);
            sig.push(class[q]);
            sig.extend(dfa.alphabet().symbols().map(|a| class[dfa.step(q, a)]));
            let n = sig_ids.len();
            next[q] = *sig_ids.entry(sig).or_insert(n);
        }
        let new_count = sig_ids.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }

    // Canonical numbering by BFS over classes.
    let mut number: HashMap<usize, usize> = HashMap::new();
    let mut reps: Vec<usize> = Vec::new();
    let mut queue = VecDeque::from([dfa.initial()]);
    number.insert(class[dfa.initial()], 0);
    reps.push(dfa.initial());
    while let Some(q) = queue.pop_front() {
        for a in dfa.alphabet().symbols() {
            let p = dfa.step(q, a);
            if !number.contains_key(&class[p]) {
                number.insert(class[p], reps.len());
                reps.push(p);
                queue.push_back(p);
            }
        }
    }
    let delta = reps
        .iter()
        .map(|&q| {
            dfa.alphabet()
                .symbols()
                .map(|a| number[&class[dfa.step(q, a)]])
                .collect()
        })
        .collect();
    let finals = reps.iter().map(|&q| dfa.is_final(q)).collect();
    Dfa::from_table(dfa.alphabet().clone(), delta, 0, finals)
        .expect("minimization preserves totality")
}

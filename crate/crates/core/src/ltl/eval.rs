use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Ltl, LtlFormula, Node};
use crate::alphabet::Sym;

/// Where language acceptance is read: the virtual position after the string
/// (`End`, `T+1`) or before it (`Start`, `0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    #[default]
    End,
    Start,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Op {
    Atom(Sym),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Past(usize),
    Future(usize),
    Since(usize, usize),
    Until(usize, usize),
}

/// A formula compiled to a hash-consed DAG in topological order. Evaluation
/// fills one boolean row per node over positions `0..=T+1`, so each call is
/// `O(nodes * T)`.
#[derive(Debug, Clone)]
pub struct Evaluator {
    ops: Vec<Op>,
    root: usize,
}

impl Evaluator {
    pub fn new(f: &LtlFormula) -> Self {
        let mut ops = Vec::new();
        let mut intern: HashMap<Op, usize> = HashMap::new();
        let mut by_ptr: HashMap<*const Ltl, usize> = HashMap::new();
        let root = compile(f.root(), &mut ops, &mut intern, &mut by_ptr);
        Evaluator { ops, root }
    }

    pub fn node_count(&self) -> usize {
        self.ops.len()
    }

    /// Root values at positions `0..=T+1`. Symbols must be in range.
    pub fn table(&self, word: &[Sym]) -> Vec<bool> {
        let n = word.len();
        let width = n + 2;
        let mut vals: Vec<Vec<bool>> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let mut row = vec![false; width];
            match *op {
                Op::Atom(s) => {
                    for t in 1..=n {
                        row[t] = word[t - 1] == s;
                    }
                }
                Op::Not(x) => {
                    for t in 0..width {
                        row[t] = !vals[x][t];
                    }
                }
                Op::And(l, r) => {
                    for t in 0..width {
                        row[t] = vals[l][t] && vals[r][t];
                    }
                }
                Op::Or(l, r) => {
                    for t in 0..width {
                        row[t] = vals[l][t] || vals[r][t];
                    }
                }
                Op::Past(x) => {
                    // some t' in 1..=T with t' < t
                    for t in 2..width {
                        row[t] = row[t - 1] || vals[x][t - 1];
                    }
                }
                Op::Future(x) => {
                    // some t' in 1..=T with t' > t
                    for t in (0..n).rev() {
                        row[t] = row[t + 1] || vals[x][t + 1];
                    }
                }
                Op::Since(l, r) => {
                    for t in 2..width {
                        row[t] = vals[r][t - 1] || (vals[l][t - 1] && row[t - 1]);
                    }
                }
                Op::Until(l, r) => {
                    for t in (0..n).rev() {
                        row[t] = vals[r][t + 1] || (vals[l][t + 1] && row[t + 1]);
                    }
                }
            }
            vals.push(row);
        }
        vals.swap_remove(self.root)
    }

    pub fn accepts(&self, word: &[Sym], conv: Convention) -> bool {
        let t = self.table(word);
        match conv {
            Convention::End => t[word.len() + 1],
            Convention::Start => t[0],
        }
    }
}

fn compile(
    n: &Node,
    ops: &mut Vec<Op>,
    intern: &mut HashMap<Op, usize>,
    by_ptr: &mut HashMap<*const Ltl, usize>,
) -> usize {
    if let Some(&i) = by_ptr.get(&Arc::as_ptr(n)) {
        return i;
    }
    let mut c = |x: &Node| compile(x, ops, intern, by_ptr);
    let op = match &**n {
        Ltl::Atom(s) => Op::Atom(*s),
        Ltl::Not(x) => Op::Not(c(x)),
        Ltl::And(l, r) => {
            let l = c(l);
            Op::And(l, c(r))
        }
        Ltl::Or(l, r) => {
            let l = c(l);
            Op::Or(l, c(r))
        }
        Ltl::Past(x) => Op::Past(c(x)),
        Ltl::Future(x) => Op::Future(c(x)),
        Ltl::Since(l, r) => {
            let l = c(l);
            Op::Since(l, c(r))
        }
        Ltl::Until(l, r) => {
            let l = c(l);
            Op::Until(l, c(r))
        }
    };
    let i = *intern.entry(op).or_insert_with(|| {
        ops.push(op);
        ops.len() - 1
    });
    by_ptr.insert(Arc::as_ptr(n), i);
    i
}

use std::collections::HashMap;

use super::Dfa;
use crate::error::{Error, Result};

/// Transition monoid of a DFA: the transformations `f_w` for all words `w`.
/// Products follow word order, so `f_{uv} = f_v . f_u`.
#[derive(Debug, Clone)]
pub struct Monoid {
    elements: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    /// `right[m][a]` = element of `m * a`
    right: Vec<Vec<usize>>,
    /// `left[m][a]` = element of `a * m`
    left: Vec<Vec<usize>>,
    generators: Vec<usize>,
}

fn compose(f: &[u32], g: &[u32]) -> Vec<u32> {
    // first f, then g
    f.iter().map(|&q| g[q as usize]).collect()
}

impl Monoid {
    /// Closure of the letter transformations under composition, starting from
    /// the identity. Fails when more than `cap` elements appear.
    pub fn of_dfa(dfa: &Dfa, cap: usize) -> Result<Monoid> {
        let n = dfa.len();
        let gens: Vec<Vec<u32>> = dfa
            .alphabet()
            .symbols()
            .map(|a| (0..n).map(|q| dfa.step(q, a) as u32).collect())
            .collect();
        let identity: Vec<u32> = (0..n as u32).collect();
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::from([(identity, 0usize)]);
        let mut right = Vec::new();
        let mut i = 0;
        while i < elements.len() {
            let mut row = Vec::with_capacity(gens.len());
            for g in &gens {
                let p = compose(&elements[i], g);
                let id = match index.get(&p) {
                    Some(&id) => id,
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::CapExceeded { what: "monoid elements", cap });
                        }
                        index.insert(p.clone(), elements.len());
                        elements.push(p);
                        elements.len() - 1
                    }
                };
                row.push(id);
            }
            right.push(row);
            i += 1;
        }
        let left = elements
            .iter()
            .map(|m| gens.iter().map(|g| index[&compose(g, m)]).collect())
            .collect();
        let generators = gens.iter().map(|g| index[g]).collect();
        Ok(Monoid { elements, index, right, left, generators })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn element(&self, m: usize) -> &[u32] {
        &self.elements[m]
    }

    pub fn generator(&self, a: crate::alphabet::Sym) -> usize {
        self.generators[a.index()]
    }

    pub fn lookup(&self, f: &[u32]) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// Product `x * y` (first `x`, then `y`).
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.index[&compose(&self.elements[x], &self.elements[y])]
    }

    /// Full multiplication table; quadratic in the monoid size.
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.len()).map(|x| (0..self.len()).map(|y| self.mul(x, y)).collect()).collect()
    }

    /// `reach[p]` = the ideal generated by `p` along `edges`, as a bitset.
    fn ideals(&self, edges: &[Vec<usize>]) -> Vec<Vec<u64>> {
        let n = self.len();
        let words = n.div_ceil(64);
        let mut out = Vec::with_capacity(n);
        for p in 0..n {
            let mut bits = vec![0u64; words];
            let mut stack = vec![p];
            bits[p / 64] |= 1 << (p % 64);
            while let Some(x) = stack.pop() {
                for &y in &edges[x] {
                    if bits[y / 64] >> (y % 64) & 1 == 0 {
                        bits[y / 64] |= 1 << (y % 64);
                        stack.push(y);
                    }
                }
            }
            out.push(bits);
        }
        out
    }

    /// `m1 m2 m3 = m1` implies `m1 m2 = m1`. For each pair with
    /// `p = m1 m2 != m1`, a violating `m3` exists iff `m1` lies in `pM`.
    pub fn is_r_trivial(&self) -> bool {
        let ideal = self.ideals(&self.right);
        (0..self.len()).all(|m1| {
            (0..self.len()).all(|m2| {
                let p = self.mul(m1, m2);
                p == m1 || ideal[p][m1 / 64] >> (m1 % 64) & 1 == 0
            })
        })
    }

    /// `m1 m2 m3 = m3` implies `m2 m3 = m3`, via left ideals `Mp`.
    pub fn is_l_trivial(&self) -> bool {
        let ideal = self.ideals(&self.left);
        (0..self.len()).all(|m3| {
            (0..self.len()).all(|m2| {
                let p = self.mul(m2, m3);
                p == m3 || ideal[p][m3 / 64] >> (m3 % 64) & 1 == 0
            })
        })
    }

    /// Every element satisfies `m^k = m^(k+1)` for some `k`.
    pub fn is_aperiodic(&self) -> bool {
        (0..self.len()).all(|m| {
            let mut seen = HashMap::new();
            let mut x = m;
            for k in 0.. {
                if let Some(&j) = seen.get(&x) {
                    // powers cycle with period k - j
                    return k - j == 1;
                }
                seen.insert(x, k);
                x = self.mul(x, m);
            }
            unreachable!()
        })
    }
}

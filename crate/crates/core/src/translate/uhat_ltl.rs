use std::collections::{BTreeSet, HashMap};

use crate::alphabet::Alphabet;
use crate::caps::Caps;
use crate::error::Result;
use crate::ltl::{self, LtlFormula, Node};
use crate::uhat::{select, Rep, Token, UhatModel};

/// Builds the P-only formula `pi_x` for every representation `x`: it holds
/// at a position exactly when that position's representation is `x`. Only
/// representations and ordered subsets reachable at non-`EOS` positions are
/// enumerated; the rest never occur.
struct Construction<'a> {
    model: &'a UhatModel,
    alphabet: &'a Alphabet,
    /// Distinct non-`EOS` representations per level.
    keys: Vec<BTreeSet<Rep>>,
    /// Distinct ordered subsets per level, as lists by first occurrence.
    subsets: Vec<Vec<Vec<Rep>>>,
    no_past: Node,
    pi: HashMap<Rep, Node>,
    past_pi: HashMap<Rep, Node>,
    order: HashMap<(usize, usize), Node>,
}

impl Construction<'_> {
    fn pi(&mut self, x: &Rep) -> Node {
        if let Some(n) = self.pi.get(x) {
            return n.clone();
        }
        let n = if x.len() == 1 {
            match x.0[0] {
                Token::Sym(s) => ltl::atom(s),
                Token::Eos => ltl::and_all(
                    self.alphabet,
                    self.alphabet.symbols().map(|s| ltl::not(ltl::atom(s))),
                ),
                Token::Bot => ltl::bottom(self.alphabet),
            }
        } else {
            let half = x.len() / 2;
            let (q, y) = (x.prefix(half), x.suffix(half));
            let level = half.trailing_zeros() as usize + 1;
            let head = self.pi(&q);
            ltl::and(head, self.add(level, &q, &y))
        };
        self.pi.insert(x.clone(), n.clone());
        n
    }

    fn past_pi(&mut self, x: &Rep) -> Node {
        if let Some(n) = self.past_pi.get(x) {
            return n.clone();
        }
        let p = ltl::past(self.pi(x));
        self.past_pi.insert(x.clone(), p.clone());
        p
    }

    fn not_past(&mut self, x: &Rep) -> Node {
        ltl::not(self.past_pi(x))
    }

    /// Query `x` at level `layer-1` attends to `y` in layer `layer`.
    fn add(&mut self, layer: usize, x: &Rep, y: &Rep) -> Node {
        let qx = self.pi(x);
        if y.is_bot() {
            return ltl::and(qx, self.no_past.clone());
        }
        if layer == 1 {
            return self.add_base(x, y);
        }
        let lvl = layer - 1;
        let l = &self.model.layers()[layer - 1];
        let mut disjuncts = Vec::new();
        for i in 0..self.subsets[lvl].len() {
            let xs = &self.subsets[lvl][i];
            // Only the representation attention actually selects can satisfy
            // `best` once `order` fixes the set of earlier representations.
            if xs.is_empty() || select(l, lvl, x, xs) != *y {
                continue;
            }
            let xs = xs.clone();
            let ord = self.order(lvl, i);
            let best = self.best(layer, x, y, &xs);
            disjuncts.push(ltl::and(ord, best));
        }
        ltl::or_all(self.alphabet, disjuncts)
    }

    fn add_base(&mut self, x: &Rep, y: &Rep) -> Node {
        let Token::Sym(_) = y.0[0] else {
            return ltl::bottom(self.alphabet);
        };
        let l = &self.model.layers()[0];
        let sb = l.score(x, y);
        let mut conj = vec![self.pi(x)];
        let mut ties = vec![self.pi(y)];
        for w in self.alphabet.symbols() {
            let wr = Rep(vec![Token::Sym(w)]);
            let sw = l.score(x, &wr);
            if sw > sb {
                conj.push(self.not_past(&wr));
            } else if sw == sb && wr != *y {
                ties.push(self.not_past(&wr));
            }
        }
        conj.push(ltl::past(ltl::and_all(self.alphabet, ties)));
        ltl::and_all(self.alphabet, conj)
    }

    /// Every element of the subset occurs earlier, nested by first
    /// occurrence, and no other reachable representation does.
    fn order(&mut self, lvl: usize, i: usize) -> Node {
        if let Some(n) = self.order.get(&(lvl, i)) {
            return n.clone();
        }
        let xs = self.subsets[lvl][i].clone();
        let mut nested = self.past_pi(&xs[0]);
        for z in &xs[1..] {
            nested = ltl::past(ltl::and(self.pi(z), nested));
        }
        let absent: Vec<Rep> = self.keys[lvl].iter().filter(|z| !xs.contains(z)).cloned().collect();
        let mut conj = vec![nested];
        conj.extend(absent.iter().map(|z| self.not_past(z)));
        let n = ltl::and_all(self.alphabet, conj);
        self.order.insert((lvl, i), n.clone());
        n
    }

    fn best(&mut self, layer: usize, x: &Rep, y: &Rep, xs: &[Rep]) -> Node {
        let l = &self.model.layers()[layer - 1];
        let sy = l.score(x, y);
        let mut conj = vec![self.pi(x)];
        let mut ties = vec![self.pi(y)];
        for z in xs {
            let sz = l.score(x, z);
            if sz > sy {
                conj.push(self.not_past(z));
            } else if sz == sy && z != y {
                ties.push(self.not_past(z));
            }
        }
        conj.push(ltl::past(ltl::and_all(self.alphabet, ties)));
        ltl::and_all(self.alphabet, conj)
    }
}

/// A P-only formula that holds at `T+1` exactly on the strings the model
/// accepts (the `EOS` position is the one where every atom is false).
pub fn uhat_to_ltl(model: &UhatModel, caps: &Caps) -> Result<LtlFormula> {
    super::require_fl(model)?;
    let ex = model.explore(caps)?;
    let levels = model.depth() + 1;
    let mut keys = vec![BTreeSet::new(); levels];
    let mut subsets: Vec<Vec<Vec<Rep>>> = vec![Vec::new(); levels];
    let mut seen: Vec<BTreeSet<Vec<Rep>>> = vec![BTreeSet::new(); levels];
    for s in &ex.states {
        for (l, set) in s.sets.iter().enumerate() {
            keys[l].extend(set.iter().cloned());
            if seen[l].insert(set.clone()) {
                subsets[l].push(set.clone());
            }
        }
    }
    let alphabet = model.alphabet();
    let mut c = Construction {
        model,
        alphabet,
        keys,
        subsets,
        no_past: ltl::not(ltl::past(ltl::top(alphabet))),
        pi: HashMap::new(),
        past_pi: HashMap::new(),
        order: HashMap::new(),
    };
    let accept: Vec<Rep> = model.accept().iter().cloned().collect();
    let disjuncts: Vec<Node> = accept.iter().map(|x| c.pi(x)).collect();
    LtlFormula::new(alphabet.clone(), ltl::or_all(alphabet, disjuncts))
}

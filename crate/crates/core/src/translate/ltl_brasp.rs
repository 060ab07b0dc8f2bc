use std::collections::HashMap;
use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::brasp::{
    At, BoolExpr, BraspProgram, Builder, Mask, Readout, Tiebreak, VectorDef,
};
use crate::error::{Error, Result};
use crate::ltl::{self, Ltl, LtlFormula, Node};

/// Compiles a P-only formula into an FL program whose output vector holds
/// the formula's value at every position `1..=T`. Shared subformulas become
/// a single vector.
pub fn ltl_to_brasp(formula: &LtlFormula) -> Result<BraspProgram> {
    #[derive(PartialEq, Eq, Hash)]
    enum Key {
        Not(usize),
        And(usize, usize),
        Or(usize, usize),
        Past(usize),
    }
    let mut b = Builder::new(formula.alphabet());
    let mut by_ptr: HashMap<*const Ltl, usize> = HashMap::new();
    let mut by_key: HashMap<Key, usize> = HashMap::new();
    let q = |v: usize| BoolExpr::var(v, At::Query);
    let k = |v: usize| BoolExpr::var(v, At::Key);

    // Iterative post-order so deep formulas do not exhaust the stack.
    let mut stack: Vec<(&Node, bool)> = vec![(formula.root(), false)];
    while let Some((n, expanded)) = stack.pop() {
        let ptr = Arc::as_ptr(n);
        if by_ptr.contains_key(&ptr) {
            continue;
        }
        if !expanded {
            stack.push((n, true));
            for c in n.children() {
                stack.push((c, false));
            }
            continue;
        }
        let id = |c: &Node| by_ptr[&Arc::as_ptr(c)];
        let (key, base, def) = match &**n {
            Ltl::Atom(s) => {
                by_ptr.insert(ptr, b.atomic(*s));
                continue;
            }
            Ltl::Not(x) => {
                let x = id(x);
                (Key::Not(x), "not", VectorDef::PositionWise(BoolExpr::not(q(x))))
            }
            Ltl::And(l, r) => {
                let (l, r) = (id(l), id(r));
                (Key::And(l, r), "and", VectorDef::PositionWise(BoolExpr::and(q(l), q(r))))
            }
            Ltl::Or(l, r) => {
                let (l, r) = (id(l), id(r));
                (Key::Or(l, r), "or", VectorDef::PositionWise(BoolExpr::or(q(l), q(r))))
            }
            Ltl::Past(x) => {
                let x = id(x);
                let def = VectorDef::Attention {
                    tiebreak: Tiebreak::Left,
                    mask: Mask::Future,
                    score: k(x),
                    value: k(x),
                    default: BoolExpr::Const(false),
                };
                (Key::Past(x), "past", def)
            }
            Ltl::Future(_) | Ltl::Since(..) | Ltl::Until(..) => {
                return Err(Error::Unsupported(format!(
                    "formula is {}, only P-only formulas compile to programs",
                    formula.fragment()
                )));
            }
        };
        let v = match by_key.get(&key) {
            Some(&v) => v,
            None => {
                let v = b.push(base, def);
                by_key.insert(key, v);
                v
            }
        };
        by_ptr.insert(ptr, v);
    }
    let out = by_ptr[&Arc::as_ptr(formula.root())];
    b.finish(out, Readout::Last)
}

/// Formulas equivalent to each vector of a program, plus a formula that
/// holds at `T+1` exactly when the program accepts.
#[derive(Debug, Clone)]
pub struct BraspFormulas {
    pub vectors: Vec<LtlFormula>,
    pub output: usize,
    pub acceptance: LtlFormula,
}

impl BraspFormulas {
    pub fn output_formula(&self) -> &LtlFormula {
        &self.vectors[self.output]
    }

    pub fn simplify(&self) -> BraspFormulas {
        BraspFormulas {
            vectors: self.vectors.iter().map(LtlFormula::simplify).collect(),
            output: self.output,
            acceptance: self.acceptance.simplify(),
        }
    }
}

fn expr_to_ltl(alphabet: &Alphabet, e: &BoolExpr, nodes: &[Node]) -> Node {
    match e {
        BoolExpr::Const(true) => ltl::top(alphabet),
        BoolExpr::Const(false) => ltl::bottom(alphabet),
        BoolExpr::Var { vector, .. } => nodes[*vector].clone(),
        BoolExpr::Not(x) => ltl::not(expr_to_ltl(alphabet, x, nodes)),
        BoolExpr::And(l, r) => {
            ltl::and(expr_to_ltl(alphabet, l, nodes), expr_to_ltl(alphabet, r, nodes))
        }
        BoolExpr::Or(l, r) => {
            ltl::or(expr_to_ltl(alphabet, l, nodes), expr_to_ltl(alphabet, r, nodes))
        }
    }
}

/// Per-vector formulas for a future-masked program.
fn future_nodes(p: &BraspProgram) -> Result<Vec<Node>> {
    let a = p.alphabet();
    let mut nodes: Vec<Node> = Vec::with_capacity(p.vectors().len());
    for v in p.vectors() {
        let node = match &v.def {
            VectorDef::Atomic(s) => ltl::atom(*s),
            VectorDef::PositionWise(e) => expr_to_ltl(a, e, &nodes),
            VectorDef::Attention { tiebreak, mask, score, value, default } => {
                debug_assert_eq!(*mask, Mask::Future);
                if score.uses(At::Query) || value.uses(At::Query) {
                    return Err(Error::Unsupported(format!(
                        "vector `{}` has a binary score or value",
                        v.name
                    )));
                }
                let s = expr_to_ltl(a, score, &nodes);
                let val = expr_to_ltl(a, value, &nodes);
                let d = expr_to_ltl(a, default, &nodes);
                let none = ltl::and(ltl::not(ltl::past(s.clone())), d);
                let found = match tiebreak {
                    Tiebreak::Left => ltl::past(ltl::and(
                        s.clone(),
                        ltl::and(ltl::not(ltl::past(s)), val),
                    )),
                    Tiebreak::Right => ltl::since(ltl::not(s.clone()), ltl::and(s, val)),
                };
                ltl::or(found, none)
            }
        };
        nodes.push(node);
    }
    Ok(nodes)
}

/// Translates each vector into a formula with the same value at every
/// position `1..=T`. Leftmost operations use `P` only, rightmost ones `S`.
/// Programs whose attention is entirely past-masked are mirrored, translated,
/// and mirrored back.
pub fn brasp_to_ltl(program: &BraspProgram) -> Result<BraspFormulas> {
    let a = program.alphabet().clone();
    let masks: Vec<Mask> = program.attention_ops().map(|(_, _, m)| m).collect();
    let all_past = !masks.is_empty() && masks.iter().all(|&m| m == Mask::Past);
    if !all_past && masks.contains(&Mask::Past) {
        return Err(Error::Unsupported(
            "programs mixing future- and past-masked attention".into(),
        ));
    }
    let vectors: Vec<LtlFormula> = if all_past {
        future_nodes(&program.mirror())?
            .into_iter()
            .map(|n| LtlFormula::new(a.clone(), n).map(|f| f.mirror()))
            .collect::<Result<_>>()?
    } else {
        future_nodes(program)?
            .into_iter()
            .map(|n| LtlFormula::new(a.clone(), n))
            .collect::<Result<_>>()?
    };
    let y = vectors[program.output()].root().clone();
    let acc = match program.readout() {
        // Holds at T+1 iff y holds at T.
        Readout::Last => ltl::since(ltl::bottom(&a), y),
        // Holds at T+1 iff y holds at 1.
        Readout::First => ltl::past(ltl::and(y, ltl::not(ltl::past(ltl::top(&a))))),
    };
    Ok(BraspFormulas {
        vectors,
        output: program.output(),
        acceptance: LtlFormula::new(a, acc)?,
    })
}

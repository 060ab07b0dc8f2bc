use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::letters;
use crate::alphabet::{Alphabet, Sym};
use crate::automata::Dfa;
use crate::brasp::{
    At, BoolExpr, BraspProgram, Mask, Readout, Restriction, Tiebreak, Vector, VectorDef,
};
use crate::caps::Caps;
use crate::error::Result;
use crate::ltl::{self, Fragment, LtlFormula, Node};
use crate::uhat::{Cond, Layer, Rep, ScoreRule, Token, UhatModel};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaParams {
    pub alphabet_size: usize,
    pub depth: usize,
    pub fragment: Fragment,
}

impl Default for FormulaParams {
    fn default() -> Self {
        FormulaParams { alphabet_size: 2, depth: 3, fragment: Fragment::POnly }
    }
}

#[derive(Clone, Copy)]
enum Op {
    Not,
    And,
    Or,
    Past,
    Future,
    Since,
    Until,
}

fn formula_node(r: &mut ChaCha8Rng, k: usize, depth: usize, ops: &[Op]) -> Node {
    if depth == 0 || r.gen_bool(0.2) {
        return ltl::atom(Sym(r.gen_range(0..k) as u16));
    }
    let d = depth - 1;
    match *ops.choose(r).unwrap() {
        Op::Not => ltl::not(formula_node(r, k, d, ops)),
        Op::And => ltl::and(formula_node(r, k, d, ops), formula_node(r, k, d, ops)),
        Op::Or => ltl::or(formula_node(r, k, d, ops), formula_node(r, k, d, ops)),
        Op::Past => ltl::past(formula_node(r, k, d, ops)),
        Op::Future => ltl::future(formula_node(r, k, d, ops)),
        Op::Since => ltl::since(formula_node(r, k, d, ops), formula_node(r, k, d, ops)),
        Op::Until => ltl::until(formula_node(r, k, d, ops), formula_node(r, k, d, ops)),
    }
}

/// A random formula of depth at most `depth` over the first `alphabet_size`
/// letters, using only the temporal operators of `fragment`.
pub fn random_formula(seed: u64, p: FormulaParams) -> LtlFormula {
    let mut r = rng(seed);
    let mut ops = vec![Op::Not, Op::And, Op::Or];
    match p.fragment {
        Fragment::POnly => ops.push(Op::Past),
        Fragment::FOnly => ops.push(Op::Future),
        Fragment::PF => ops.extend([Op::Past, Op::Future]),
        Fragment::Full => ops.extend([Op::Past, Op::Future, Op::Since, Op::Until]),
    }
    let root = formula_node(&mut r, p.alphabet_size, p.depth, &ops);
    LtlFormula::new(letters(p.alphabet_size), root).expect("atoms are in range")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraspParams {
    pub alphabet_size: usize,
    /// Upper bound on non-atomic vectors; at least one is generated.
    pub max_vectors: usize,
    pub restriction: Restriction,
    /// Scores and values read only the key position.
    pub unary: bool,
}

impl Default for BraspParams {
    fn default() -> Self {
        BraspParams { alphabet_size: 2, max_vectors: 4, restriction: Restriction::FL, unary: true }
    }
}

fn bool_expr(r: &mut ChaCha8Rng, n: usize, depth: usize, at: &dyn Fn(&mut ChaCha8Rng) -> At) -> BoolExpr {
    if depth == 0 || r.gen_bool(0.4) {
        if r.gen_bool(0.08) {
            return BoolExpr::Const(r.gen_bool(0.5));
        }
        let a = at(r);
        return BoolExpr::var(r.gen_range(0..n), a);
    }
    match r.gen_range(0..3) {
        0 => BoolExpr::not(bool_expr(r, n, depth - 1, at)),
        1 => BoolExpr::and(bool_expr(r, n, depth - 1, at), bool_expr(r, n, depth - 1, at)),
        _ => BoolExpr::or(bool_expr(r, n, depth - 1, at), bool_expr(r, n, depth - 1, at)),
    }
}

fn op_kind(r: &mut ChaCha8Rng, restriction: Restriction) -> (Tiebreak, Mask) {
    match restriction {
        Restriction::FL => (Tiebreak::Left, Mask::Future),
        Restriction::FR => (Tiebreak::Right, Mask::Future),
        Restriction::PL => (Tiebreak::Left, Mask::Past),
        Restriction::PR => (Tiebreak::Right, Mask::Past),
        Restriction::Any => (
            *[Tiebreak::Left, Tiebreak::Right].choose(r).unwrap(),
            *[Mask::Future, Mask::Past].choose(r).unwrap(),
        ),
    }
}

/// A random program over the first `alphabet_size` letters whose attention
/// operations all satisfy `restriction`. The last vector is the output.
pub fn random_brasp(seed: u64, p: BraspParams) -> BraspProgram {
    let mut r = rng(seed);
    let alphabet = letters(p.alphabet_size);
    let mut vectors: Vec<Vector> = alphabet
        .symbols()
        .map(|s| Vector { name: format!("Q_{}", alphabet.name(s)), def: VectorDef::Atomic(s) })
        .collect();
    let count = r.gen_range(1..=p.max_vectors.max(1));
    let query = |_: &mut ChaCha8Rng| At::Query;
    let key = |_: &mut ChaCha8Rng| At::Key;
    let mixed = |r: &mut ChaCha8Rng| if r.gen_bool(0.5) { At::Key } else { At::Query };
    for i in 0..count {
        let n = vectors.len();
        let def = if r.gen_bool(0.3) {
            VectorDef::PositionWise(bool_expr(&mut r, n, 2, &query))
        } else {
            let (tiebreak, mask) = op_kind(&mut r, p.restriction);
            let side: &dyn Fn(&mut ChaCha8Rng) -> At = if p.unary { &key } else { &mixed };
            VectorDef::Attention {
                tiebreak,
                mask,
                score: bool_expr(&mut r, n, 2, side),
                value: bool_expr(&mut r, n, 1, side),
                default: bool_expr(&mut r, n, 1, &query),
            }
        };
        vectors.push(Vector { name: format!("v{}", i + 1), def });
    }
    let out = vectors.len() - 1;
    BraspProgram::new(alphabet, vectors, out, Readout::Last).expect("well-formed by construction")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaParams {
    pub alphabet_size: usize,
    /// Upper bound on states; at least one is generated.
    pub max_states: usize,
}

impl Default for DfaParams {
    fn default() -> Self {
        DfaParams { alphabet_size: 2, max_states: 4 }
    }
}

/// A random total DFA with initial state `q0`.
pub fn random_dfa(seed: u64, p: DfaParams) -> Dfa {
    let mut r = rng(seed);
    let n = r.gen_range(1..=p.max_states.max(1));
    let delta = (0..n)
        .map(|_| (0..p.alphabet_size).map(|_| r.gen_range(0..n)).collect())
        .collect();
    let finals = (0..n).map(|_| r.gen_bool(0.5)).collect();
    Dfa::from_table(letters(p.alphabet_size), delta, 0, finals).expect("total by construction")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UhatParams {
    pub alphabet_size: usize,
    /// Upper bound on layers; at least one is generated.
    pub max_layers: usize,
    /// Upper bound on score rules per layer.
    pub max_rules: usize,
}

impl Default for UhatParams {
    fn default() -> Self {
        UhatParams { alphabet_size: 2, max_layers: 2, max_rules: 3 }
    }
}

fn token(r: &mut ChaCha8Rng, alphabet: &Alphabet, query: bool, index: usize) -> Token {
    let mut pool: Vec<Token> = alphabet.symbols().map(Token::Sym).collect();
    if index > 0 {
        pool.push(Token::Bot);
    }
    if query && index == 0 {
        pool.push(Token::Eos);
    }
    *pool.choose(r).unwrap()
}

/// A random leftmost/future-masked model. The accepting set is a random
/// subset of the reachable final `EOS` representations, so both outcomes
/// typically occur.
pub fn random_uhat(seed: u64, p: UhatParams) -> Result<UhatModel> {
    let mut r = rng(seed);
    let alphabet = letters(p.alphabet_size);
    let depth = r.gen_range(1..=p.max_layers.max(1));
    let mut layers = Vec::with_capacity(depth);
    for l in 0..depth {
        let width = 1usize << l;
        let rules = (0..r.gen_range(0..=p.max_rules))
            .map(|_| {
                let conds = (0..r.gen_range(0..=2))
                    .map(|_| {
                        let index = r.gen_range(0..width);
                        if r.gen_bool(0.5) {
                            Cond::Query { index, token: token(&mut r, &alphabet, true, index) }
                        } else {
                            Cond::Key { index, token: token(&mut r, &alphabet, false, index) }
                        }
                    })
                    .collect();
                ScoreRule { conds, score: r.gen_range(-1..=2) }
            })
            .collect();
        layers.push(Layer { tiebreak: Tiebreak::Left, mask: Mask::Future, rules });
    }
    let model = UhatModel::new(alphabet, layers, BTreeSet::new())?;
    let ex = model.explore(&Caps::default())?;
    let finals: BTreeSet<Rep> = (0..ex.len()).map(|q| ex.eos_rep(q).clone()).collect();
    let accept = finals.into_iter().filter(|_| r.gen_bool(0.5)).collect();
    model.with_accept(accept)
}

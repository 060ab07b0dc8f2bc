use crate::alphabet::Sym;
use crate::automata::{CascadeSpec, HomCheck};
use crate::brasp::{At, BoolExpr, BraspProgram, Builder, Mask, Readout, Tiebreak, VectorDef};
use crate::error::{Error, Result};

fn sanitize(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    s.trim_matches('_').to_string()
}

/// Builds an FL program simulating a cascade of half-resets followed by its
/// homomorphism onto the target automaton.
///
/// For level `k`, `B{k}_0(t)` holds when the level is still in `q0` before
/// reading position `t`, i.e. no earlier position carried a resetting
/// symbol. `A_q(t)` is the target state before reading `t` and `Y_q(t)` the
/// state after it; the output `Y` is the disjunction of `Y_q` over finals.
pub fn cascade_to_brasp(spec: &CascadeSpec) -> Result<BraspProgram> {
    if let HomCheck::Violation { state, symbol } = spec.check()? {
        return Err(Error::Homomorphism(format!(
            "not a homomorphism at reachable state #{state} on `{}`",
            spec.alphabet().name(symbol)
        )));
    }
    let alphabet = spec.alphabet();
    let k = alphabet.len();
    let n = spec.levels().len();
    let q = |v: usize| BoolExpr::var(v, At::Query);
    let key = |v: usize| BoolExpr::var(v, At::Key);
    let mut b = Builder::new(alphabet);

    // bits[j] = (B{j}_0, B{j}_1)
    let mut bits: Vec<(usize, usize)> = Vec::with_capacity(n);
    for (j, level) in spec.levels().iter().enumerate() {
        let mut fire = Vec::new();
        for (s, _) in level.sigma1.iter().enumerate().filter(|(_, &on)| on) {
            let (prefix, w) = (s / k, s % k);
            let mut conj: Vec<BoolExpr> = (0..j)
                .map(|i| {
                    let bit = (prefix >> (j - 1 - i)) & 1;
                    key(if bit == 0 { bits[i].0 } else { bits[i].1 })
                })
                .collect();
            conj.push(key(b.atomic(Sym(w as u16))));
            fire.push(BoolExpr::and_all(conj));
        }
        let b0 = b.push(
            &format!("B{}_0", j + 1),
            VectorDef::Attention {
                tiebreak: Tiebreak::Left,
                mask: Mask::Future,
                score: BoolExpr::or_all(fire),
                value: BoolExpr::Const(false),
                default: BoolExpr::Const(true),
            },
        );
        let b1 = b.push(&format!("B{}_1", j + 1), VectorDef::PositionWise(BoolExpr::not(q(b0))));
        bits.push((b0, b1));
    }

    let target = spec.target();
    let mut before: Vec<Vec<BoolExpr>> = vec![Vec::new(); target.len()];
    for &p in spec.reachable() {
        let conj = (0..n).map(|j| {
            q(if spec.level_bit(p, j) == 0 { bits[j].0 } else { bits[j].1 })
        });
        let c = BoolExpr::and_all(conj);
        before[spec.phi(p).expect("reachable")].push(c);
    }
    let names = target.semi().states();
    let a_vecs: Vec<usize> = before
        .into_iter()
        .enumerate()
        .map(|(t, cs)| {
            b.push(&format!("A_{}", sanitize(&names[t])), VectorDef::PositionWise(BoolExpr::or_all(cs)))
        })
        .collect();
    let mut after: Vec<Vec<BoolExpr>> = vec![Vec::new(); target.len()];
    for (p, &av) in a_vecs.iter().enumerate() {
        for s in alphabet.symbols() {
            after[target.step(p, s)].push(BoolExpr::and(q(av), q(b.atomic(s))));
        }
    }
    let y_vecs: Vec<usize> = after
        .into_iter()
        .enumerate()
        .map(|(t, ds)| {
            b.push(&format!("Y_{}", sanitize(&names[t])), VectorDef::PositionWise(BoolExpr::or_all(ds)))
        })
        .collect();
    let finals = (0..target.len()).filter(|&t| target.is_final(t)).map(|t| q(y_vecs[t]));
    let out = b.push("Y", VectorDef::PositionWise(BoolExpr::or_all(finals)));
    b.finish(out, Readout::Last)
}

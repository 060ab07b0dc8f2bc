use std::collections::HashMap;
use std::sync::Arc;

use super::{and, bottom, future, not, or, past, since, top, until, Ltl, Node};
use crate::alphabet::Alphabet;

#[derive(Clone)]
enum S {
    Const(bool),
    F(Node),
}

fn is_negation_of(x: &Node, y: &Node) -> bool {
    matches!(&**x, Ltl::Not(inner) if inner == y) || matches!(&**y, Ltl::Not(inner) if inner == x)
}

fn go(a: &Alphabet, n: &Node, memo: &mut HashMap<*const Ltl, S>) -> S {
    if let Some(v) = memo.get(&Arc::as_ptr(n)) {
        return v.clone();
    }
    let mat = |s: S| match s {
        S::Const(true) => top(a),
        S::Const(false) => bottom(a),
        S::F(f) => f,
    };
    let v = match &**n {
        Ltl::Atom(_) => S::F(n.clone()),
        Ltl::Not(x) => match go(a, x, memo) {
            S::Const(c) => S::Const(!c),
            S::F(f) => match &*f {
                Ltl::Not(inner) => S::F(inner.clone()),
                _ => S::F(not(f)),
            },
        },
        Ltl::And(l, r) => match (go(a, l, memo), go(a, r, memo)) {
            (S::Const(false), _) | (_, S::Const(false)) => S::Const(false),
            (S::Const(true), x) | (x, S::Const(true)) => x,
            (S::F(x), S::F(y)) if x == y => S::F(x),
            (S::F(x), S::F(y)) if is_negation_of(&x, &y) => S::Const(false),
            (S::F(x), S::F(y)) => S::F(and(x, y)),
        },
        Ltl::Or(l, r) => match (go(a, l, memo), go(a, r, memo)) {
            (S::Const(true), _) | (_, S::Const(true)) => S::Const(true),
            (S::Const(false), x) | (x, S::Const(false)) => x,
            (S::F(x), S::F(y)) if x == y => S::F(x),
            (S::F(x), S::F(y)) if is_negation_of(&x, &y) => S::Const(true),
            (S::F(x), S::F(y)) => S::F(or(x, y)),
        },
        Ltl::Past(x) => match go(a, x, memo) {
            S::Const(false) => S::Const(false),
            s => S::F(past(mat(s))),
        },
        Ltl::Future(x) => match go(a, x, memo) {
            S::Const(false) => S::Const(false),
            s => S::F(future(mat(s))),
        },
        Ltl::Since(l, r) => match go(a, r, memo) {
            S::Const(false) => S::Const(false),
            rs => {
                let ls = go(a, l, memo);
                S::F(since(mat(ls), mat(rs)))
            }
        },
        Ltl::Until(l, r) => match go(a, r, memo) {
            S::Const(false) => S::Const(false),
            rs => {
                let ls = go(a, l, memo);
                S::F(until(mat(ls), mat(rs)))
            }
        },
    };
    memo.insert(Arc::as_ptr(n), v.clone());
    v
}

pub(super) fn simplify(a: &Alphabet, root: &Node) -> Node {
    match go(a, root, &mut HashMap::new()) {
        S::Const(true) => top(a),
        S::Const(false) => bottom(a),
        S::F(f) => f,
    }
}

use super::*;
use crate::alphabet::Sym;
use crate::automata::CascadeSpec;
use crate::brasp::{BraspProgram, Restriction, VectorDef};
use crate::caps::Caps;
use crate::ltl::{Convention, Fragment, LtlFormula};
use crate::uhat::UhatModel;

fn words(k: usize, max_len: usize) -> Vec<Vec<Sym>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<Vec<Sym>> = vec![vec![]];
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|w| {
                (0..k).map(move |a| {
                    let mut v = w.clone();
                    v.push(Sym(a as u16));
                    v
                })
            })
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

fn positionwise_eq(p: &BraspProgram, vector: usize, f: &LtlFormula, max_len: usize) {
    for w in words(p.alphabet().len(), max_len).into_iter().filter(|w| !w.is_empty()) {
        let trace = p.run(&w).unwrap();
        let vals = f.eval_all(&w).unwrap();
        for t in 1..=w.len() {
            assert_eq!(trace.get(vector, t), vals[t], "{:?} at {t}", p.alphabet().format_word(&w));
        }
    }
}

#[test]
fn ltl_to_brasp_atom_and_past() {
    let f = LtlFormula::parse("alphabet: a b\na").unwrap();
    let p = ltl_to_brasp(&f).unwrap();
    assert_eq!(p.vectors()[p.output()].name, "Q_a");

    let f = LtlFormula::parse("alphabet: a b\nP a").unwrap();
    let p = ltl_to_brasp(&f).unwrap();
    assert_eq!(p.non_atomic_len(), 1);
    assert!(p.validate_restriction(Restriction::FL).is_empty());
    assert!(p.to_file_string().contains("past(t) = lmost[t' < t, Q_a(t')] Q_a(t') : 0"));
}

#[test]
fn ltl_to_brasp_positionwise() {
    let f = LtlFormula::parse("alphabet: a b\nP a & !b").unwrap();
    let p = ltl_to_brasp(&f).unwrap();
    positionwise_eq(&p, p.output(), &f, 5);
}

#[test]
fn ltl_to_brasp_shares_subformulas() {
    let f = LtlFormula::parse("alphabet: a b\n(P a & b) | (P a & !b)").unwrap();
    let p = ltl_to_brasp(&f).unwrap();
    let pasts = p.vectors().iter().filter(|v| matches!(v.def, VectorDef::Attention { .. })).count();
    assert_eq!(pasts, 1);
}

#[test]
fn ltl_to_brasp_rejects_future() {
    for src in ["F a", "a S b", "P a & (a U b)"] {
        let f = LtlFormula::parse(&format!("alphabet: a b\n{src}")).unwrap();
        assert!(matches!(ltl_to_brasp(&f), Err(crate::Error::Unsupported(_))));
    }
}

#[test]
fn brasp_to_ltl_leftmost() {
    let p = BraspProgram::parse(
        "alphabet: a b\nY(t) = lmost[t' < t, Q_a(t')] Q_a(t') : 0\noutput: Y\n",
    )
    .unwrap();
    let out = brasp_to_ltl(&p).unwrap();
    let f = out.output_formula();
    assert_eq!(f.fragment(), Fragment::POnly);
    assert_eq!(f.to_string(), "P (a & (!P a & a)) | !P a & (a & !a)");
    let pa = LtlFormula::parse("alphabet: a b\nP a").unwrap();
    for w in words(2, 6) {
        assert_eq!(f.eval_all(&w).unwrap(), pa.eval_all(&w).unwrap());
    }
    positionwise_eq(&p, p.output(), f, 6);
}

#[test]
fn brasp_to_ltl_rightmost() {
    let p = BraspProgram::parse(
        "alphabet: a b\nY(t) = rmost[t' < t, 1] Q_a(t') : 0\noutput: Y\n",
    )
    .unwrap();
    let out = brasp_to_ltl(&p).unwrap();
    let f = out.output_formula();
    assert_eq!(f.count_since(), 1);
    let a = p.alphabet();
    for (s, want) in [("ab", [false, true]), ("ba", [false, false])] {
        let w = a.parse_word(s).unwrap();
        let vals = f.eval_all(&w).unwrap();
        assert_eq!([vals[1], vals[2]], want, "{s}");
    }
    positionwise_eq(&p, p.output(), f, 5);
}

#[test]
fn brasp_to_ltl_acceptance() {
    let p = BraspProgram::parse("alphabet: a b\noutput: Q_a\n").unwrap();
    let out = brasp_to_ltl(&p).unwrap();
    for w in words(2, 5) {
        assert_eq!(
            out.acceptance.accepts(&w, Convention::End).unwrap(),
            p.accepts(&w).unwrap()
        );
    }
    let m = p.mirror();
    let out = brasp_to_ltl(&m).unwrap();
    for w in words(2, 5) {
        assert_eq!(out.acceptance.accepts(&w, Convention::End).unwrap(), m.accepts(&w).unwrap());
    }
}

#[test]
fn brasp_to_ltl_past_masked_via_mirror() {
    let p = BraspProgram::parse(
        "alphabet: a b\nY(t) = lmost[t' > t, Q_b(t')] Q_b(t') : 0\nZ(t) = rmost[t' > t, Y(t')] Q_a(t') : 1\noutput: Z\n",
    )
    .unwrap();
    let out = brasp_to_ltl(&p).unwrap();
    for (i, f) in out.vectors.iter().enumerate() {
        positionwise_eq(&p, i, f, 5);
    }
    let mixed = BraspProgram::parse(
        "alphabet: a b\nY(t) = lmost[t' > t, Q_b(t')] Q_b(t') : 0\nZ(t) = lmost[t' < t, Y(t')] Y(t') : 0\noutput: Z\n",
    )
    .unwrap();
    assert!(brasp_to_ltl(&mixed).is_err());
}

#[test]
fn brasp_to_ltl_rejects_binary() {
    let p = BraspProgram::parse(
        "alphabet: a b\nY(t) = lmost[t' < t, Q_a(t) & Q_a(t')] Q_b(t') : 0\noutput: Y\n",
    )
    .unwrap();
    assert!(matches!(brasp_to_ltl(&p), Err(crate::Error::Unsupported(_))));
}

const HALF_RESET: &str = "\
alphabet: a b
levels: 1
halfreset 1: sigma1 = a
finals: q1
";

const SUBSEQ_AB: &str = "\
alphabet: a b
levels: 2
halfreset 1: sigma1 = a
halfreset 2: sigma1 = (q1,b)
finals: (q1,q1)
";

#[test]
fn cascade_single_half_reset() {
    let spec = CascadeSpec::parse(HALF_RESET).unwrap();
    let p = cascade_to_brasp(&spec).unwrap();
    assert!(p.validate_restriction(Restriction::FL).is_empty());
    let text = p.to_file_string();
    assert!(text.contains("B1_0(t) = lmost[t' < t, Q_a(t')] 0 : 1"), "{text}");
    let a = spec.alphabet();
    assert!(!p.accepts(&[]).unwrap());
    for w in words(2, 6).into_iter().skip(1) {
        let contains = w.contains(&a.sym("a").unwrap());
        assert_eq!(p.accepts(&w).unwrap(), contains);
    }
}

#[test]
fn cascade_subsequence() {
    let spec = CascadeSpec::parse(SUBSEQ_AB).unwrap();
    let p = cascade_to_brasp(&spec).unwrap();
    assert!(p.validate_restriction(Restriction::FL).is_empty());
    let dfa = spec.target();
    for w in words(2, 6).into_iter().skip(1) {
        assert_eq!(p.accepts(&w).unwrap(), dfa.accepts(&w).unwrap());
        // Y_q tracks the target state after each prefix.
        let trace = p.run(&w).unwrap();
        for t in 1..=w.len() {
            let state = dfa.semi().run(dfa.initial(), &w[..t]);
            let name = dfa.semi().states()[state].replace(['(', ')'], "").replace(',', "_");
            let y = p.index_of(&format!("Y_{name}")).unwrap();
            assert!(trace.get(y, t));
        }
    }
}

const LEFTMOST_A: &str = "\
alphabet: a b
layers: 1
layer 1: tiebreak=left mask=future
score: key[0]=a => 1
accept: (EOS,a)
";

fn uhat_agrees(m: &UhatModel, max_len: usize) {
    let caps = Caps::default();
    let f = uhat_to_ltl(m, &caps).unwrap();
    assert_eq!(f.fragment(), Fragment::POnly);
    let d = uhat_to_pofa(m, &caps).unwrap();
    assert!(d.is_pofa().holds);
    for w in words(m.alphabet().len(), max_len) {
        let want = m.accepts(&w).unwrap();
        assert_eq!(f.accepts(&w, Convention::End).unwrap(), want, "ltl {w:?}");
        assert_eq!(d.accepts(&w).unwrap(), want, "dfa {w:?}");
    }
}

#[test]
fn uhat_leftmost_a_is_contains_a() {
    let m = UhatModel::parse(LEFTMOST_A).unwrap();
    uhat_agrees(&m, 6);
    let f = uhat_to_ltl(&m, &Caps::default()).unwrap();
    let a = Sym(0);
    for w in words(2, 5) {
        assert_eq!(f.accepts(&w, Convention::End).unwrap(), w.contains(&a));
    }
}

#[test]
fn uhat_constant_score_is_first_symbol() {
    let src = LEFTMOST_A.replace("score: key[0]=a => 1\n", "");
    let m = UhatModel::parse(&src).unwrap();
    uhat_agrees(&m, 5);
    let f = uhat_to_ltl(&m, &Caps::default()).unwrap();
    for w in words(2, 5) {
        assert_eq!(f.accepts(&w, Convention::End).unwrap(), w.first() == Some(&Sym(0)));
    }
}

#[test]
fn uhat_empty_accepting_set() {
    let src = LEFTMOST_A.replace("accept: (EOS,a)\n", "");
    let m = UhatModel::parse(&src).unwrap();
    let f = uhat_to_ltl(&m, &Caps::default()).unwrap();
    assert_eq!(f.simplify().to_string(), "a & !a");
    let d = uhat_to_pofa(&m, &Caps::default()).unwrap();
    assert!(d.finals().iter().all(|&x| !x));
}

#[test]
fn uhat_two_layers() {
    let m = UhatModel::parse(
        "alphabet: a b
layers: 2
layer 1: tiebreak=left mask=future
score: query[0]=b & key[0]=a => 2
score: key[0]=b => 1
layer 2: tiebreak=left mask=future
score: query[0]=EOS & key[1]=b => 2
score: key[0]=b & key[1]=_ => 1
accept: (EOS,b,a,b) (EOS,a,a,_) (EOS,b,b,_)
",
    )
    .unwrap();
    let accepted = crate::oracle::enumerate_strings(m.alphabet(), 5)
        .filter(|w| m.accepts(w).unwrap())
        .count();
    assert!(accepted > 0 && accepted < 63);
    uhat_agrees(&m, 6);
}

#[test]
fn uhat_pofa_first_step() {
    let m = UhatModel::parse(LEFTMOST_A).unwrap();
    let ex = m.explore(&Caps::default()).unwrap();
    assert!(ex.states[0].sets.iter().all(Vec::is_empty));
    let q = ex.delta[0][0];
    let a = m.alphabet();
    let show = |l: usize| -> Vec<String> {
        ex.states[q].sets[l].iter().map(|r| r.display(a).to_string()).collect()
    };
    assert_eq!(show(0), ["a"]);
    assert_eq!(show(1), ["(a,_)"]);
    let d = uhat_to_pofa(&m, &Caps::default()).unwrap().minimize();
    assert_eq!(d.len(), 2);
}

#[test]
fn uhat_requires_fl() {
    let src = LEFTMOST_A.replace("tiebreak=left", "tiebreak=right");
    let m = UhatModel::parse(&src).unwrap();
    assert!(uhat_to_ltl(&m, &Caps::default()).is_err());
    assert!(uhat_to_pofa(&m, &Caps::default()).is_err());
}

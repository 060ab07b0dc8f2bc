use super::*;

fn prog(body: &str) -> BraspProgram {
    parse_brasp(&format!("alphabet: a b\n{body}")).unwrap()
}

fn w(p: &BraspProgram, s: &str) -> Vec<Sym> {
    p.alphabet().parse_word(s).unwrap()
}

fn all_words(len: usize) -> Vec<Vec<Sym>> {
    (0..1usize << len)
        .map(|code| (0..len).map(|i| Sym(((code >> i) & 1) as u16)).collect())
        .collect()
}

const SEEN_A: &str = "V3(t) = lmost[t' < t, Q_a(t')] Q_a(t') : 0\noutput: V3\n";

#[test]
fn parses_attention() {
    let p = prog(SEEN_A);
    let v = &p.vectors()[2];
    assert_eq!(v.name, "V3");
    assert_eq!(
        v.def,
        VectorDef::Attention {
            tiebreak: Tiebreak::Left,
            mask: Mask::Future,
            score: BoolExpr::var(0, At::Key),
            value: BoolExpr::var(0, At::Key),
            default: BoolExpr::Const(false),
        }
    );
}

#[test]
fn parses_position_wise() {
    let p = prog("V3(t) = lmost[t' < t, Q_a(t')] Q_a(t') : 0\nV4(t) = V3(t) & !Q_b(t)\noutput: V4");
    assert_eq!(
        p.vectors()[3].def,
        VectorDef::PositionWise(BoolExpr::and(
            BoolExpr::var(2, At::Query),
            BoolExpr::not(BoolExpr::var(1, At::Query))
        ))
    );
}

#[test]
fn parse_errors() {
    let fwd = parse_brasp("alphabet: a b\nV3(t) = V5(t)\nV5(t) = Q_a(t)\noutput: V3");
    assert!(matches!(fwd, Err(Error::ForwardReference { .. })));
    let unknown = parse_brasp("alphabet: a b\nV3(t) = V9(t)\noutput: V3");
    assert_eq!(unknown, Err(Error::UnknownVector("V9".into())));
    let missing = parse_brasp("alphabet: a b\nV3(t) = Q_a(t)");
    assert_eq!(missing, Err(Error::MissingOutput));
    let key_in_default = parse_brasp("alphabet: a b\nV(t) = lmost[t' < t, 1] 1 : Q_a(t')\noutput: V");
    assert!(matches!(key_in_default, Err(Error::Syntax { line: 2, .. })));
    let key_in_pw = parse_brasp("alphabet: a b\nV(t) = Q_a(t')\noutput: V");
    assert!(matches!(key_in_pw, Err(Error::Syntax { .. })));
    let self_ref = parse_brasp("alphabet: a b\nV(t) = V(t)\noutput: V");
    assert!(matches!(self_ref, Err(Error::ForwardReference { .. })));
    let bad_mask = parse_brasp("alphabet: a b\nV(t) = lmost[t' <= t, 1] 1 : 0\noutput: V");
    assert!(matches!(bad_mask, Err(Error::Syntax { line: 2, .. })));
}

#[test]
fn print_parse_roundtrip() {
    let src = "alphabet: a b\n\
        V3(t) = lmost[t' < t, Q_a(t') | !Q_b(t)] Q_a(t') & Q_b(t) : !Q_a(t)\n\
        V4(t) = (V3(t) | Q_a(t)) & !(Q_b(t) & 1)\n\
        V5(t) = rmost[t' > t, 0] V4(t') : V3(t)\n\
        readout: first\n\
        output: V5\n";
    let p = parse_brasp(src).unwrap();
    let back = parse_brasp(&p.to_string()).unwrap();
    assert_eq!(back, p);
    assert_eq!(p.to_string(), src);
}

#[test]
fn restriction_report() {
    let fl = prog(SEEN_A);
    assert!(fl.validate_restriction(Restriction::FL).is_empty());
    let mixed = prog("V3(t) = lmost[t' < t, 1] Q_a(t') : 0\nV4(t) = rmost[t' < t, 1] Q_a(t') : 0\noutput: V4");
    let v = mixed.validate_restriction(Restriction::FL);
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].vector, "V4");
    assert!(mixed.validate_restriction(Restriction::Any).is_empty());
}

#[test]
fn run_examples() {
    let prev = prog("V3(t) = rmost[t' < t, 1] Q_a(t') : 0\noutput: V3");
    assert_eq!(prev.output_values(&w(&prev, "ab")).unwrap(), vec![false, true]);
    assert_eq!(prev.output_values(&w(&prev, "ba")).unwrap(), vec![false, false]);
    let seen = prog(SEEN_A);
    assert_eq!(seen.output_values(&w(&seen, "aba")).unwrap(), vec![false, true, true]);
}

#[test]
fn acceptance_examples() {
    let seen = prog(SEEN_A);
    assert!(seen.accepts(&w(&seen, "aa")).unwrap());
    assert!(!seen.accepts(&w(&seen, "a")).unwrap());
    assert!(!seen.accepts(&[]).unwrap());
    assert!(seen.accepts(&[Sym(2)]).is_err());
}

#[test]
fn empty_maximizer_uses_default() {
    let p = prog("V3(t) = lmost[t' < t, Q_a(t') & Q_b(t')] Q_a(t') : !Q_a(t)\noutput: V3");
    for len in 1..=5 {
        for word in all_words(len) {
            let tr = p.run(&word).unwrap();
            let att = tr.attended[2].as_ref().unwrap();
            for t in 1..=len {
                assert_eq!(att[t - 1], None);
                assert_eq!(tr.get(2, t), !tr.get(0, t));
            }
        }
    }
}

#[test]
fn rewrite_constant_score() {
    let p = prog("V3(t) = lmost[t' < t, 1] Q_b(t') : Q_a(t)\noutput: V3");
    let r = rewrite_leftmost_to_rightmost(&p).unwrap();
    assert!(r.validate_restriction(Restriction::FR).is_empty());
    assert_eq!(r.vectors()[2].name, "V3_seen");
    assert_eq!(r.vectors()[r.output()].name, "V3");
    for len in 0..=5 {
        for word in all_words(len) {
            let a = p.run(&word).unwrap();
            let b = r.run(&word).unwrap();
            assert_eq!(a.values[p.output()], b.values[r.output()]);
            // t* is position 1 for every t > 1
            let att = b.attended[r.output()].as_ref().unwrap();
            for t in 2..=len {
                assert_eq!(att[t - 1], Some(1));
            }
        }
    }
}

#[test]
fn rewrite_never_attending() {
    let p = prog("V3(t) = lmost[t' < t, 0] Q_b(t') : Q_a(t)\noutput: V3");
    let r = rewrite_leftmost_to_rightmost(&p).unwrap();
    for word in all_words(4) {
        assert_eq!(r.output_values(&word).unwrap(), p.output_values(&word).unwrap());
        assert_eq!(r.output_values(&word).unwrap(), p.run(&word).unwrap().values[0]);
    }
}

#[test]
fn rewrite_avoids_name_clashes() {
    let p = prog("V(t) = lmost[t' < t, Q_a(t')] Q_b(t') : 0\nV_seen(t) = !V(t)\noutput: V_seen");
    let r = rewrite_leftmost_to_rightmost(&p).unwrap();
    assert_eq!(r.vectors()[2].name, "V_seen_1");
    for word in all_words(5) {
        assert_eq!(r.output_values(&word).unwrap(), p.output_values(&word).unwrap());
    }
}

#[test]
fn rewrite_rejects_binary_score() {
    let p = prog("V(t) = lmost[t' < t, Q_a(t) & Q_b(t')] 1 : 0\noutput: V");
    assert!(matches!(rewrite_leftmost_to_rightmost(&p), Err(Error::Unsupported(_))));
}

#[test]
fn mirror_swaps_and_reverses() {
    let p = prog(SEEN_A);
    let m = p.mirror();
    match &m.vectors()[2].def {
        VectorDef::Attention { tiebreak, mask, .. } => {
            assert_eq!((*tiebreak, *mask), (Tiebreak::Right, Mask::Past));
        }
        d => panic!("unexpected {d:?}"),
    }
    assert_eq!(m.readout(), Readout::First);
    assert_eq!(m.mirror(), p);
    for len in 0..=5 {
        for word in all_words(len) {
            let rev: Vec<Sym> = word.iter().rev().copied().collect();
            assert_eq!(p.accepts(&word).unwrap(), m.accepts(&rev).unwrap());
        }
    }
}

#[test]
fn prefix_locality_for_future_masks() {
    let p = prog("V3(t) = lmost[t' < t, Q_a(t')] Q_b(t') : 1\nV4(t) = rmost[t' < t, V3(t')] !Q_a(t') : V3(t)\noutput: V4");
    for len in 1..=4 {
        for word in all_words(len) {
            let base = p.run(&word).unwrap();
            for ext in [Sym(0), Sym(1)] {
                let mut longer = word.clone();
                longer.push(ext);
                let tr = p.run(&longer).unwrap();
                for (row_a, row_b) in base.values.iter().zip(&tr.values) {
                    assert_eq!(row_a[..], row_b[..len]);
                }
            }
        }
    }
}

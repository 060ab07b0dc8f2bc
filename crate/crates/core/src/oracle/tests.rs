use super::*;
use crate::brasp::Restriction;
use crate::ltl::Fragment;
use crate::translate::ltl_to_brasp;

fn ab() -> Alphabet {
    letters(2)
}

#[test]
fn enumeration_order() {
    let a = ab();
    let show = |n| -> Vec<String> { enumerate_strings(&a, n).map(|w| a.format_word(&w)).collect() };
    assert_eq!(show(1), ["", "a", "b"]);
    assert_eq!(show(2), ["", "a", "b", "aa", "ab", "ba", "bb"]);
    assert_eq!(enumerate_strings(&a, 6).count(), 127);
    assert_eq!(enumerate_strings(&letters(3), 4).count(), 121);
    assert_eq!(strings_of_len(&a, 3).count(), 8);
}

#[test]
fn enumeration_is_strictly_increasing() {
    let a = letters(3);
    let all: Vec<Word> = enumerate_strings(&a, 4).collect();
    for pair in all.windows(2) {
        let key = |w: &Word| (w.len(), w.clone());
        assert!(key(&pair[0]) < key(&pair[1]));
    }
}

fn ltl(src: &str) -> LtlFormula {
    LtlFormula::parse(&format!("alphabet: a b\n{src}")).unwrap()
}

#[test]
fn equiv_examples() {
    let pa = Recognizer::ltl(ltl("P a"), Convention::End);
    assert_eq!(check_equiv(&pa, &pa, 6, Mode::Language, 1).unwrap(), EquivResult::Equal { max_len: 6 });
    let fa = Recognizer::ltl(ltl("F a"), Convention::End);
    let r = check_equiv(&pa, &fa, 6, Mode::Language, 1).unwrap();
    assert_eq!(
        r,
        EquivResult::Counterexample { word: vec![Sym(0)], a: true, b: false, position: None }
    );
    assert_eq!(r.display(&ab()).to_string(), "COUNTEREXAMPLE \"a\" a=true b=false");
    let prog = Recognizer::Brasp(ltl_to_brasp(&ltl("P a")).unwrap());
    let r = check_equiv(&prog, &pa, 5, Mode::Positionwise, 1).unwrap();
    assert_eq!(r.display(&ab()).to_string(), "EQUAL up to 5");
}

#[test]
fn counterexamples_are_minimal() {
    for seed in 0..30 {
        let p = FormulaParams { alphabet_size: 2, depth: 3, fragment: Fragment::PF };
        let f = Recognizer::ltl(random_formula(seed, p), Convention::End);
        let g = Recognizer::ltl(random_formula(seed + 1000, p), Convention::End);
        for mode in [Mode::Language, Mode::Positionwise] {
            let r = check_equiv(&f, &g, 5, mode, 1).unwrap();
            assert_eq!(check_equiv(&f, &g, 5, mode, 4).unwrap(), r);
            if let EquivResult::Counterexample { word, .. } = r {
                let start = usize::from(mode == Mode::Positionwise);
                for w in enumerate_strings(&ab(), word.len()).skip(start) {
                    if w == word {
                        break;
                    }
                    assert!(compare(&f, &g, &w, mode).unwrap().is_none());
                }
            }
        }
    }
}

#[test]
fn equiv_errors() {
    let a = Recognizer::ltl(ltl("a"), Convention::End);
    let other = LtlFormula::parse("alphabet: a c\na").unwrap();
    let b = Recognizer::ltl(other, Convention::End);
    assert!(matches!(check_equiv(&a, &b, 3, Mode::Language, 1), Err(Error::AlphabetMismatch(_))));
}

#[test]
fn generators_are_deterministic() {
    let p = FormulaParams { alphabet_size: 2, depth: 3, fragment: Fragment::POnly };
    assert_eq!(random_formula(1, p), random_formula(1, p));
    assert!(random_formula(1, p).depth() <= 3);
    for seed in 0..50 {
        assert_eq!(random_formula(seed, p).fragment(), Fragment::POnly);
    }
    let bp = BraspParams { alphabet_size: 2, max_vectors: 3, restriction: Restriction::FL, unary: true };
    let prog = random_brasp(7, bp);
    assert_eq!(prog, random_brasp(7, bp));
    assert!(prog.validate_restriction(Restriction::FL).is_empty());
    assert!(prog.non_atomic_len() <= 3);
    let d = random_dfa(3, DfaParams { alphabet_size: 2, max_states: 4 });
    assert_eq!(d, random_dfa(3, DfaParams { alphabet_size: 2, max_states: 4 }));
    assert!(d.len() <= 4 && d.semi().delta().iter().all(|row| row.len() == 2));
    let up = UhatParams::default();
    let m = random_uhat(5, up).unwrap();
    assert_eq!(m, random_uhat(5, up).unwrap());
    assert!(m.is_fl() && m.depth() <= 2);
}

#[test]
fn generated_programs_respect_restriction() {
    for r in [Restriction::FL, Restriction::FR, Restriction::PL, Restriction::PR] {
        for seed in 0..20 {
            let p = random_brasp(seed, BraspParams { restriction: r, ..BraspParams::default() });
            assert!(p.validate_restriction(r).is_empty());
            assert!(p.vectors().iter().all(|v| v.def.is_unary()));
        }
    }
}

#[test]
fn dfa_positionwise_is_prefix_acceptance() {
    let d = random_dfa(11, DfaParams::default());
    let r = Recognizer::Dfa(d.clone());
    let w = vec![Sym(0), Sym(1), Sym(1)];
    let vals = r.values(&w).unwrap();
    for t in 1..=3 {
        assert_eq!(vals[t - 1], d.accepts(&w[..t]).unwrap());
    }
}

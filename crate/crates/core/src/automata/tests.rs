use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

pub(crate) const CONTAINS_A: &str = "alphabet: a b\nstates: q0 q1\ninitial: q0\nfinals: q1\n\
    q0 a q1\nq0 b q0\nq1 a q1\nq1 b q1\n";
pub(crate) const ENDS_WITH_A: &str = "alphabet: a b\nstates: q0 q1\ninitial: q0\nfinals: q1\n\
    q0 a q1\nq0 b q0\nq1 a q1\nq1 b q0\n";
const A_SIGMA_B: &str = "alphabet: a b\nstates: s0 s1 s2 s3\ninitial: s0\nfinals: s3\n\
    s0 a s2\ns0 b s1\ns1 a s1\ns1 b s1\ns2 a s2\ns2 b s3\ns3 a s2\ns3 b s3\n";
const PARITY: &str = "alphabet: 0 1\nstates: e o\ninitial: e\nfinals: o\n\
    e 0 e\ne 1 o\no 0 o\no 1 e\n";

fn dfa(src: &str) -> Dfa {
    Dfa::parse(src).unwrap()
}

fn words(k: usize, max: usize) -> Vec<Vec<Sym>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<Sym>> = vec![vec![]];
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..k {
                let mut x = w.clone();
                x.push(Sym(a as u16));
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn same_language(x: &Dfa, y: &Dfa, max: usize) -> bool {
    words(x.alphabet().len(), max)
        .iter()
        .all(|w| x.accepts(w).unwrap() == y.accepts(w).unwrap())
}

fn random_dfa(rng: &mut ChaCha8Rng, max_states: usize, k: usize) -> Dfa {
    let n = rng.gen_range(1..=max_states);
    let delta = (0..n).map(|_| (0..k).map(|_| rng.gen_range(0..n)).collect()).collect();
    let finals = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let names: Vec<String> = (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    Dfa::from_table(Alphabet::new(names).unwrap(), delta, 0, finals).unwrap()
}

/// Partial order by pairwise reachability, independent of the SCC code.
fn po_by_reachability(d: &Dfa) -> bool {
    let n = d.len();
    let mut reach = vec![vec![false; n]; n];
    for q in 0..n {
        let mut stack = vec![q];
        reach[q][q] = true;
        while let Some(x) = stack.pop() {
            for a in d.alphabet().symbols() {
                let y = d.step(x, a);
                if !reach[q][y] {
                    reach[q][y] = true;
                    stack.push(y);
                }
            }
        }
    }
    (0..n).all(|p| (0..n).all(|q| p == q || !(reach[p][q] && reach[q][p])))
}

/// The definitions of R-/L-triviality as literal triple loops.
fn r_trivial_brute(m: &Monoid) -> bool {
    let t = m.table();
    let n = m.len();
    (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| t[t[a][b]][c] != a || t[a][b] == a)))
}

fn l_trivial_brute(m: &Monoid) -> bool {
    let t = m.table();
    let n = m.len();
    (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| t[t[a][b]][c] != c || t[b][c] == c)))
}

#[test]
fn parse_and_print() {
    let d = dfa(CONTAINS_A);
    assert_eq!(Dfa::parse(&d.to_string()).unwrap(), d);
    assert!(matches!(
        Dfa::parse("alphabet: a\nstates: q\ninitial: q\n"),
        Err(Error::InvalidAutomaton(_))
    ));
    assert!(matches!(
        Dfa::parse("alphabet: a\nstates: q\ninitial: q\nq a r\n"),
        Err(Error::Syntax { line: 4, .. })
    ));
    assert!(matches!(
        Dfa::parse("alphabet: a\nstates: q\ninitial: q\nq a q\nq a q\n"),
        Err(Error::Syntax { line: 5, .. })
    ));
}

#[test]
fn accepts_fork() {
    let d = dfa(CONTAINS_A);
    let w = |s: &str| d.alphabet().parse_word(s).unwrap();
    assert!(d.accepts(&w("ba")).unwrap());
    assert!(!d.accepts(&w("bb")).unwrap());
    assert!(!d.accepts(&w("")).unwrap());
}

#[test]
fn minimize_examples() {
    let d = dfa(CONTAINS_A);
    assert_eq!(d.minimize(), d);
    let redundant = dfa("alphabet: a b\nstates: x y z\ninitial: x\nfinals: y z\n\
        x a y\nx b x\ny a z\ny b z\nz a y\nz b y\n");
    let m = redundant.minimize();
    assert_eq!(m.len(), 2);
    assert!(same_language(&m, &redundant, 6));
    assert_eq!(m.semi().states(), &["q0".to_string(), "q1".to_string()]);
}

#[test]
fn minimize_random_population() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let d = random_dfa(&mut rng, 5, 2);
        let m = d.minimize();
        assert!(same_language(&d, &m, 6));
        assert_eq!(m.minimize(), m);
        assert!(m.len() <= d.len());
    }
}

#[test]
fn pofa_examples() {
    assert!(dfa(CONTAINS_A).minimize().is_pofa().holds);
    let e = dfa(ENDS_WITH_A).minimize().is_pofa();
    assert!(!e.holds);
    assert_eq!(e.witness, Some((0, 1)));
    assert!(!dfa(PARITY).minimize().is_pofa().holds);
}

#[test]
fn reverse_examples() {
    let r = reverse_dfa(&dfa(ENDS_WITH_A)).unwrap();
    let starts_with_a = dfa("alphabet: a b\nstates: q0 q1 q2\ninitial: q0\nfinals: q1\n\
        q0 a q1\nq0 b q2\nq1 a q1\nq1 b q1\nq2 a q2\nq2 b q2\n");
    assert!(same_language(&r, &starts_with_a, 6));
    assert_eq!(r, starts_with_a.minimize());

    let ab = dfa("alphabet: a b\nstates: s0 s1 s2 x\ninitial: s0\nfinals: s2\n\
        s0 a s1\ns0 b x\ns1 a x\ns1 b s2\ns2 a x\ns2 b x\nx a x\nx b x\n");
    let rab = reverse_dfa(&ab).unwrap();
    for w in words(2, 5) {
        let is_ba = w == vec![Sym(1), Sym(0)];
        assert_eq!(rab.accepts(&w).unwrap(), is_ba);
    }

    assert!(is_rpofa(&dfa(ENDS_WITH_A)).unwrap());
    assert!(is_rpofa(&dfa(CONTAINS_A)).unwrap());
    let asb = dfa(A_SIGMA_B).minimize();
    assert!(!is_rpofa(&asb).unwrap());
    assert!(!asb.is_pofa().holds);
}

#[test]
fn reverse_involution_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let d = random_dfa(&mut rng, 4, 2);
        let rr = reverse_dfa(&reverse_dfa(&d).unwrap()).unwrap();
        assert!(same_language(&d, &rr, 6));
        let r = reverse_dfa(&d).unwrap();
        for w in words(2, 5) {
            let rev: Vec<Sym> = w.iter().rev().copied().collect();
            assert_eq!(d.accepts(&w).unwrap(), r.accepts(&rev).unwrap());
        }
    }
}

#[test]
fn monoid_examples() {
    let c = Monoid::of_dfa(&dfa(CONTAINS_A).minimize(), 10_000).unwrap();
    assert_eq!(c.len(), 2);
    assert!(c.is_r_trivial());
    let e = Monoid::of_dfa(&dfa(ENDS_WITH_A).minimize(), 10_000).unwrap();
    assert_eq!(e.len(), 3);
    assert!(!e.is_r_trivial());
    assert!(e.is_l_trivial());
    let p = Monoid::of_dfa(&dfa(PARITY).minimize(), 10_000).unwrap();
    assert!(!p.is_aperiodic());
    let single = Dfa::from_table(Alphabet::new(["a"]).unwrap(), vec![vec![0]], 0, vec![true]).unwrap();
    assert_eq!(Monoid::of_dfa(&single, 10).unwrap().len(), 1);
    assert!(matches!(
        Monoid::of_dfa(&dfa(ENDS_WITH_A), 2),
        Err(Error::CapExceeded { cap: 2, .. })
    ));
}

#[test]
fn monoid_table_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let d = random_dfa(&mut rng, 4, 2).minimize();
        let m = Monoid::of_dfa(&d, 10_000).unwrap();
        let t = m.table();
        let id = m.identity();
        for x in 0..m.len() {
            assert_eq!(t[id][x], x);
            assert_eq!(t[x][id], x);
            for y in 0..m.len() {
                for z in 0..m.len() {
                    assert_eq!(t[t[x][y]][z], t[x][t[y][z]]);
                }
            }
        }
        assert_eq!(m.is_r_trivial(), r_trivial_brute(&m));
        assert_eq!(m.is_l_trivial(), l_trivial_brute(&m));
    }
}

#[test]
fn classification_goldens() {
    let caps = Caps::default();
    let c = |src: &str| {
        let r = dfa(src).classify(&caps).unwrap();
        (r.in_ltl_p, r.in_ltl_f, r.star_free)
    };
    assert_eq!(c(CONTAINS_A), (true, true, true));
    assert_eq!(c(ENDS_WITH_A), (false, true, true));
    assert_eq!(c(A_SIGMA_B), (false, false, true));
    assert_eq!(c(PARITY), (false, false, false));
}

#[test]
fn pofa_iff_r_trivial_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        let d = random_dfa(&mut rng, 4, 2).minimize();
        let m = Monoid::of_dfa(&d, 10_000).unwrap();
        let po = d.is_pofa().holds;
        assert_eq!(po, po_by_reachability(&d));
        assert_eq!(po, m.is_r_trivial());
        assert_eq!(is_rpofa(&d).unwrap(), m.is_l_trivial());
        if po {
            assert!(m.is_aperiodic());
        }
    }
}

#[test]
fn half_reset_cascades() {
    let ab = Alphabet::new(["a", "b"]).unwrap();
    let src = "alphabet: a b\nlevels: 2\nhalfreset 1: sigma1 = a\nhalfreset 2: sigma1 = (q1,b)\nfinals: (q1,q1)\n";
    let spec = CascadeSpec::parse(src).unwrap();
    assert_eq!(spec.product().len(), 4);
    assert_eq!(spec.reachable().len(), 3);
    let subseq = |w: &[Sym]| {
        let first_a = w.iter().position(|&s| s == Sym(0));
        first_a.is_some_and(|i| w[i..].contains(&Sym(1)))
    };
    for w in words(2, 6) {
        assert_eq!(spec.target().accepts(&w).unwrap(), subseq(&w));
        assert_eq!(spec.cascade_dfa().accepts(&w).unwrap(), subseq(&w));
    }
    assert_eq!(spec.check().unwrap(), HomCheck::Holds);
    let again = CascadeSpec::parse(&spec.to_string()).unwrap();
    assert_eq!(again.target(), spec.target());

    // Every two-level cascade of half-resets is partially ordered.
    let pairs: Vec<(usize, usize)> = (0..2).flat_map(|q| (0..2).map(move |a| (q, a))).collect();
    for m1 in 1..3u32 {
        for m2 in 1..15u32 {
            let l1 = HalfReset::new((0..2).map(|i| m1 >> i & 1 == 1).collect()).unwrap();
            let l2 = HalfReset::new(pairs.iter().enumerate().map(|(i, _)| m2 >> i & 1 == 1).collect())
                .unwrap();
            let spec = CascadeSpec::new(ab.clone(), vec![l1, l2], vec![], &[]).unwrap();
            let d = Dfa::new(spec.product().clone(), 0, vec![false; 4]).unwrap();
            assert!(d.is_pofa().holds);
        }
    }
}

#[test]
fn generic_cascade_total_factor() {
    let ab = Alphabet::new(["a", "b"]).unwrap();
    let b1 = Semiautomaton::new(ab.clone(), vec!["x".into(), "y".into()], vec![vec![1, 0], vec![0, 1]]).unwrap();
    let b2 = PartialSemiautomaton {
        sigma_len: 2,
        q1_len: 2,
        states: vec!["u".into(), "v".into(), "w".into()],
        delta: vec![vec![Some(1); 4], vec![Some(2); 4], vec![Some(0); 4]],
    };
    let c = cascade(&b1, &b2).unwrap();
    assert_eq!(c.len(), 6);
    assert_eq!(c.states()[0], "(x,u)");
    let partial = PartialSemiautomaton {
        delta: vec![vec![Some(0), None, Some(0), Some(0)], vec![Some(1); 4], vec![Some(2); 4]],
        ..b2
    };
    assert!(matches!(cascade(&b1, &partial), Err(Error::InvalidAutomaton(_))));
}

#[test]
fn homomorphism_checks() {
    let src = "alphabet: a b\nlevels: 2\nhalfreset 1: sigma1 = a\nhalfreset 2: sigma1 = (q1,b)\n";
    let spec = CascadeSpec::parse(src).unwrap();
    let prod = spec.product();
    let id: Vec<usize> = (0..prod.len()).collect();
    assert_eq!(check_homomorphism(prod, prod, &id).unwrap(), HomCheck::Holds);

    // Merge both states whose second component is q1.
    let target = Semiautomaton::new(
        prod.alphabet().clone(),
        vec!["s0".into(), "s1".into(), "s2".into()],
        vec![vec![1, 0], vec![1, 2], vec![2, 2]],
    )
    .unwrap();
    // product order: (q0,q0) (q0,q1) (q1,q0) (q1,q1)
    assert_eq!(check_homomorphism(prod, &target, &[0, 2, 1, 2]).unwrap(), HomCheck::Holds);
    assert!(matches!(
        check_homomorphism(prod, &target, &[0, 1, 1, 2]).unwrap(),
        HomCheck::Violation { .. }
    ));
    assert!(matches!(
        check_homomorphism(prod, &target, &[0, 0, 0, 0]),
        Err(Error::Homomorphism(_))
    ));

    let fork = dfa(CONTAINS_A);
    let one = Semiautomaton::new(fork.alphabet().clone(), vec!["s".into()], vec![vec![0, 0]]).unwrap();
    assert_eq!(check_homomorphism(fork.semi(), &one, &[0, 0]).unwrap(), HomCheck::Holds);

    let inconsistent = "alphabet: a b\nlevels: 1\nhalfreset 1: sigma1 = a\nhom: q0 -> s\nhom: q1 -> t\nfinals: t\n";
    assert!(CascadeSpec::parse(inconsistent).is_ok());
    let bad = "alphabet: a b\nlevels: 2\nhalfreset 1: sigma1 = a\nhalfreset 2: sigma1 = (q1,b)\n\
        hom: (q0,q0) -> s\nhom: (q1,q0) -> s\nhom: (q1,q1) -> t\nfinals: t\n";
    assert!(matches!(CascadeSpec::parse(bad), Err(Error::Homomorphism(_))));
}

#[test]
fn r_expression_matching() {
    let ab = Alphabet::new(["a", "b"]).unwrap();
    let e = RExpression::parse(&ab, ExprKind::R, "{a}* b {a,b}*").unwrap();
    let w = |s: &str| ab.parse_word(s).unwrap();
    assert!(e.matches(&w("aab")).unwrap());
    assert!(!e.matches(&w("aaa")).unwrap());
    let all = RExpression::parse(&ab, ExprKind::R, "{a,b}*").unwrap();
    assert!(all.matches(&[]).unwrap());
    assert!(RExpression::parse(&ab, ExprKind::R, "{a}* a").is_err());
    assert_eq!(e.to_string(), "{a}* b {a,b}*");
}

/// Brute-force regular-expression matcher over the same branch shape.
fn brute_branch(b: &Branch, w: &[Sym]) -> bool {
    fn go(b: &Branch, seg: usize, w: &[Sym]) -> bool {
        // consume any prefix in sets[seg], then either finish or take a letter
        for cut in 0..=w.len() {
            if !w[..cut].iter().all(|c| b.sets[seg][c.index()]) {
                break;
            }
            let rest = &w[cut..];
            if seg == b.letters.len() {
                if rest.is_empty() {
                    return true;
                }
            } else if rest.first() == Some(&b.letters[seg]) && go(b, seg + 1, &rest[1..]) {
                return true;
            }
        }
        false
    }
    go(b, 0, w)
}

fn random_expr(rng: &mut ChaCha8Rng, alphabet: &Alphabet, kind: ExprKind) -> RExpression {
    let k = alphabet.len();
    let branches = (0..rng.gen_range(1..=2))
        .map(|_| {
            let n = rng.gen_range(0..=2);
            let letters: Vec<Sym> = (0..n).map(|_| Sym(rng.gen_range(0..k) as u16)).collect();
            let mut sets: Vec<Vec<bool>> =
                (0..=n).map(|_| (0..k).map(|_| rng.gen_bool(0.5)).collect()).collect();
            for (t, w) in letters.iter().enumerate() {
                match kind {
                    ExprKind::R => sets[t][w.index()] = false,
                    ExprKind::L => sets[t + 1][w.index()] = false,
                }
            }
            Branch { sets, letters }
        })
        .collect();
    RExpression::new(alphabet.clone(), kind, branches).unwrap()
}

#[test]
fn r_expressions_are_pofa_languages() {
    let abc = Alphabet::new(["a", "b", "c"]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..20 {
        let e = random_expr(&mut rng, &abc, ExprKind::R);
        let d = e.to_dfa().unwrap();
        for w in words(3, 5) {
            let brute = e.branches().iter().any(|b| brute_branch(b, &w));
            assert_eq!(e.matches(&w).unwrap(), brute, "{e} on {w:?}");
            assert_eq!(d.accepts(&w).unwrap(), brute);
        }
        assert!(d.classify(&Caps::default()).unwrap().in_ltl_p, "{e}");
    }
    for _ in 0..20 {
        let e = random_expr(&mut rng, &abc, ExprKind::L);
        let d = e.to_dfa().unwrap();
        for w in words(3, 5) {
            let brute = e.branches().iter().any(|b| brute_branch(b, &w));
            assert_eq!(e.matches(&w).unwrap(), brute);
            assert_eq!(d.accepts(&w).unwrap(), brute);
        }
        assert!(d.classify(&Caps::default()).unwrap().in_ltl_f);
    }
}

#[test]
fn dot_is_deterministic() {
    let d = dfa(CONTAINS_A);
    let dot = d.to_dot();
    assert_eq!(dot, d.to_dot());
    assert!(dot.contains("\"q0\" -> \"q1\" [label=\"a\"];"));
    assert!(dot.contains("\"q1\" -> \"q1\" [label=\"a,b\"];"));
    assert!(dot.contains("\"q1\" [shape=doublecircle];"));
}

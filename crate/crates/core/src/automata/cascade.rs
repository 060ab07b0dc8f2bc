use std::collections::{HashMap, VecDeque};
use std::fmt;

use super::{Dfa, Semiautomaton};
use crate::alphabet::{Alphabet, Sym};
use crate::error::{Error, Result};
use crate::text;

/// A semiautomaton over `Q1 x Sigma` whose transitions may be undefined.
/// Symbol `(q1, w)` has index `q1 * |Sigma| + w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSemiautomaton {
    pub sigma_len: usize,
    pub q1_len: usize,
    pub states: Vec<String>,
    pub delta: Vec<Vec<Option<usize>>>,
}

/// Partition of an alphabet of size `sigma1.len()`; symbols marked `true`
/// move `q0` to `q1`, every symbol fixes `q1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfReset {
    pub sigma1: Vec<bool>,
}

impl HalfReset {
    pub fn new(sigma1: Vec<bool>) -> Result<Self> {
        if !sigma1.iter().any(|&b| b) || sigma1.iter().all(|&b| b) {
            return Err(Error::InvalidAutomaton(
                "half-reset needs non-empty sigma0 and sigma1".into(),
            ));
        }
        Ok(HalfReset { sigma1 })
    }

    pub fn step(&self, q: usize, sym: usize) -> usize {
        if q == 0 && self.sigma1[sym] {
            1
        } else {
            q
        }
    }

    fn table(&self) -> Vec<Vec<usize>> {
        (0..2).map(|q| (0..self.sigma1.len()).map(|s| self.step(q, s)).collect()).collect()
    }
}

fn components(name: &str) -> Vec<String> {
    match text::split_tuple(name) {
        Some(parts) => parts.into_iter().map(str::to_string).collect(),
        None => vec![name.to_string()],
    }
}

fn tuple_name(parts: &[String]) -> String {
    if parts.len() == 1 {
        parts[0].clone()
    } else {
        format!("({})", parts.join(","))
    }
}

/// Cascade product `b1 . b2`: states are the pairs `(q1, q2)` at which `b2`
/// is defined, with `delta((q1,q2), w) = (delta1(q1,w), delta2(q2,(q1,w)))`.
pub fn cascade(b1: &Semiautomaton, b2: &PartialSemiautomaton) -> Result<Semiautomaton> {
    let k = b1.alphabet().len();
    if b2.sigma_len != k || b2.q1_len != b1.len() {
        return Err(Error::InvalidAutomaton("second factor has the wrong input alphabet".into()));
    }
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs = Vec::new();
    for q1 in 0..b1.len() {
        for q2 in 0..b2.states.len() {
            let row = &b2.delta[q2][q1 * k..(q1 + 1) * k];
            let defined = row.iter().filter(|d| d.is_some()).count();
            if defined != 0 && defined != k {
                return Err(Error::InvalidAutomaton(format!(
                    "second factor is partially defined at ({}, {})",
                    b1.states()[q1],
                    b2.states[q2]
                )));
            }
            if defined == k {
                ids.insert((q1, q2), pairs.len());
                pairs.push((q1, q2));
            }
        }
    }
    let mut delta = Vec::with_capacity(pairs.len());
    for &(q1, q2) in &pairs {
        let mut row = Vec::with_capacity(k);
        for a in b1.alphabet().symbols() {
            let p1 = b1.step(q1, a);
            let p2 = b2.delta[q2][q1 * k + a.index()].unwrap();
            let id = ids.get(&(p1, p2)).ok_or_else(|| {
                Error::InvalidAutomaton("cascade product leaves its state set".into())
            })?;
            row.push(*id);
        }
        delta.push(row);
    }
    let states = pairs
        .iter()
        .map(|&(q1, q2)| {
            let mut c = components(&b1.states()[q1]);
            c.push(b2.states[q2].clone());
            tuple_name(&c)
        })
        .collect();
    Semiautomaton::new(b1.alphabet().clone(), states, delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomCheck {
    Holds,
    Violation { state: usize, symbol: Sym },
}

/// Checks `phi(delta(q,w)) = delta'(phi(q),w)` for all pairs. A map that is
/// not total or not surjective is an error.
pub fn check_homomorphism(
    source: &Semiautomaton,
    target: &Semiautomaton,
    phi: &[usize],
) -> Result<HomCheck> {
    if source.alphabet() != target.alphabet() {
        return Err(Error::AlphabetMismatch("homomorphism between different alphabets".into()));
    }
    if phi.len() != source.len() || phi.iter().any(|&p| p >= target.len()) {
        return Err(Error::Homomorphism("map is not total on the source states".into()));
    }
    let mut hit = vec![false; target.len()];
    for &p in phi {
        hit[p] = true;
    }
    if let Some(miss) = hit.iter().position(|&h| !h) {
        return Err(Error::Homomorphism(format!(
            "map is not surjective: `{}` has no preimage",
            target.states()[miss]
        )));
    }
    for q in 0..source.len() {
        for a in source.alphabet().symbols() {
            if phi[source.step(q, a)] != target.step(phi[q], a) {
                return Ok(HomCheck::Violation { state: q, symbol: a });
            }
        }
    }
    Ok(HomCheck::Holds)
}

/// A cascade of half-resets with a homomorphism onto a target automaton.
/// Level `k` (1-based) reads pairs of a state of levels `1..k` and a symbol;
/// cascade states are bit tuples with level 1 as the most significant bit.
#[derive(Debug, Clone)]
pub struct CascadeSpec {
    alphabet: Alphabet,
    levels: Vec<HalfReset>,
    product: Semiautomaton,
    /// `(cascade state, target name)` as written in the file.
    hom_lines: Vec<(usize, String)>,
    reachable: Vec<usize>,
    /// `phi[p]` for reachable `p`, indexing target states.
    phi: HashMap<usize, usize>,
    target: Dfa,
}

impl CascadeSpec {
    /// `hom` maps cascade states to target names; empty means identity on
    /// the reachable states. `finals` are target names.
    pub fn new(
        alphabet: Alphabet,
        levels: Vec<HalfReset>,
        hom: Vec<(usize, String)>,
        finals: &[String],
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidAutomaton("cascade needs at least one level".into()));
        }
        let k = alphabet.len();
        let first = &levels[0];
        if first.sigma1.len() != k {
            return Err(Error::InvalidAutomaton("level 1 has the wrong alphabet".into()));
        }
        let mut product = Semiautomaton::new(
            alphabet.clone(),
            vec!["q0".into(), "q1".into()],
            first.table(),
        )?;
        for (i, level) in levels.iter().enumerate().skip(1) {
            if level.sigma1.len() != product.len() * k {
                return Err(Error::InvalidAutomaton(format!("level {} has the wrong alphabet", i + 1)));
            }
            let b2 = PartialSemiautomaton {
                sigma_len: k,
                q1_len: product.len(),
                states: vec!["q0".into(), "q1".into()],
                delta: level
                    .table()
                    .into_iter()
                    .map(|row| row.into_iter().map(Some).collect())
                    .collect(),
            };
            product = cascade(&product, &b2)?;
        }

        let mut reachable = vec![0usize];
        let mut seen = vec![false; product.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(p) = queue.pop_front() {
            for a in alphabet.symbols() {
                let q = product.step(p, a);
                if !seen[q] {
                    seen[q] = true;
                    reachable.push(q);
                    queue.push_back(q);
                }
            }
        }

        let mut name_of: HashMap<usize, String> = HashMap::new();
        if hom.is_empty() {
            for &p in &reachable {
                name_of.insert(p, product.states()[p].clone());
            }
        } else {
            for (p, t) in &hom {
                if *p >= product.len() {
                    return Err(Error::InvalidAutomaton("hom source out of range".into()));
                }
                if name_of.insert(*p, t.clone()).is_some_and(|old| old != *t) {
                    return Err(Error::Homomorphism(format!(
                        "`{}` is mapped twice",
                        product.states()[*p]
                    )));
                }
            }
            if let Some(&p) = reachable.iter().find(|p| !name_of.contains_key(p)) {
                return Err(Error::Homomorphism(format!(
                    "reachable cascade state `{}` has no image",
                    product.states()[p]
                )));
            }
        }

        // Target states in order of first appearance along the BFS.
        let mut target_names: Vec<String> = Vec::new();
        let mut target_id: HashMap<String, usize> = HashMap::new();
        let mut phi = HashMap::new();
        for &p in &reachable {
            let n = &name_of[&p];
            let id = *target_id.entry(n.clone()).or_insert_with(|| {
                target_names.push(n.clone());
                target_names.len() - 1
            });
            phi.insert(p, id);
        }
        let mut delta = vec![vec![usize::MAX; k]; target_names.len()];
        for &p in &reachable {
            for a in alphabet.symbols() {
                let img = phi[&product.step(p, a)];
                let cell = &mut delta[phi[&p]][a.index()];
                if *cell != usize::MAX && *cell != img {
                    return Err(Error::Homomorphism(format!(
                        "images disagree at state `{}` on symbol `{}`",
                        product.states()[p],
                        alphabet.name(a)
                    )));
                }
                *cell = img;
            }
        }
        let mut final_mask = vec![false; target_names.len()];
        for f in finals {
            let id = target_id.get(f).ok_or_else(|| {
                Error::InvalidAutomaton(format!("final state `{f}` is not a target state"))
            })?;
            final_mask[*id] = true;
        }
        let target = Dfa::new(
            Semiautomaton::new(alphabet.clone(), target_names, delta)?,
            0,
            final_mask,
        )?;
        Ok(CascadeSpec { alphabet, levels, product, hom_lines: hom, reachable, phi, target })
    }

    pub fn parse(src: &str) -> Result<Self> {
        let lines = text::lines(src);
        let mut alphabet: Option<Alphabet> = None;
        let mut level_count: Option<usize> = None;
        let mut raw_levels: Vec<Option<(Vec<String>, text::Line<'_>)>> = Vec::new();
        let mut raw_hom = Vec::new();
        let mut finals_raw: Vec<String> = Vec::new();
        for l in &lines {
            if let Some(r) = l.keyed("alphabet") {
                alphabet = Some(
                    Alphabet::new(r.split_whitespace().map(str::to_string))
                        .map_err(|e| l.err(e.to_string()))?,
                );
            } else if let Some(r) = l.keyed("levels") {
                let n: usize = r.parse().map_err(|_| l.err("`levels:` needs a number"))?;
                if n == 0 {
                    return Err(l.err("at least one level is required"));
                }
                level_count = Some(n);
                raw_levels = vec![None; n];
            } else if let Some(rest) = l.text.strip_prefix("halfreset") {
                let (num, body) = rest
                    .split_once(':')
                    .ok_or_else(|| l.err("expected `halfreset K: sigma1 = ...`"))?;
                let k: usize = num.trim().parse().map_err(|_| l.err("bad level number"))?;
                let body = body
                    .trim()
                    .strip_prefix("sigma1")
                    .and_then(|b| b.trim_start().strip_prefix('='))
                    .ok_or_else(|| l.err("expected `sigma1 = ...`"))?;
                let toks = text::tuple_tokens(body).map_err(|e| l.err(e))?;
                let n = level_count.ok_or_else(|| l.err("`levels:` must come first"))?;
                if k == 0 || k > n {
                    return Err(l.err(format!("level {k} out of range 1..={n}")));
                }
                if raw_levels[k - 1].is_some() {
                    return Err(l.err(format!("level {k} defined twice")));
                }
                raw_levels[k - 1] = Some((toks, *l));
            } else if let Some(r) = l.keyed("hom") {
                let (src_state, dst) = r
                    .split_once("->")
                    .ok_or_else(|| l.err("expected `hom: STATE -> TARGET`"))?;
                raw_hom.push((src_state.trim().to_string(), dst.trim().to_string(), *l));
            } else if let Some(r) = l.keyed("finals") {
                finals_raw.extend(text::tuple_tokens(r).map_err(|e| l.err(e))?);
            } else {
                return Err(l.err("unrecognized line"));
            }
        }
        let alphabet = alphabet.ok_or_else(|| Error::InvalidAutomaton("missing `alphabet:`".into()))?;
        let n = level_count.ok_or_else(|| Error::InvalidAutomaton("missing `levels:`".into()))?;
        let k = alphabet.len();
        let mut levels = Vec::with_capacity(n);
        for (i, raw) in raw_levels.into_iter().enumerate() {
            let (toks, l) = raw.ok_or_else(|| {
                Error::InvalidAutomaton(format!("level {} has no `halfreset` line", i + 1))
            })?;
            let mut sigma1 = vec![false; (1usize << i) * k];
            for tok in toks {
                let comps = components(&tok);
                if comps.len() != i + 1 {
                    return Err(l.err(format!(
                        "level {} tokens need {} state component(s) and a symbol",
                        i + 1,
                        i
                    )));
                }
                let prior = state_bits(&comps[..i]).ok_or_else(|| l.err(format!("bad state in `{tok}`")))?;
                let a = alphabet
                    .lookup(&comps[i])
                    .ok_or_else(|| l.err(format!("unknown symbol in `{tok}`")))?;
                sigma1[prior * k + a.index()] = true;
            }
            levels.push(HalfReset::new(sigma1).map_err(|e| l.err(e.to_string()))?);
        }
        let mut hom = Vec::new();
        for (s, t, l) in raw_hom {
            let comps = components(&s);
            if comps.len() != n {
                return Err(l.err(format!("cascade states have {n} components")));
            }
            let p = state_bits(&comps).ok_or_else(|| l.err(format!("bad cascade state `{s}`")))?;
            if t.is_empty() || t.chars().any(char::is_whitespace) {
                return Err(l.err("bad target state name"));
            }
            hom.push((p, t));
        }
        let identity = hom.is_empty();
        let finals: Vec<String> = finals_raw
            .into_iter()
            .map(|f| {
                if identity {
                    let comps = components(&f);
                    match state_bits(&comps) {
                        Some(p) if comps.len() == n => Ok(tuple_name(&bits_to_names(p, n))),
                        _ => Err(Error::InvalidAutomaton(format!("bad final state `{f}`"))),
                    }
                } else {
                    Ok(f)
                }
            })
            .collect::<Result<_>>()?;
        CascadeSpec::new(alphabet, levels, hom, &finals)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn levels(&self) -> &[HalfReset] {
        &self.levels
    }

    /// The full cascade product semiautomaton (all bit tuples).
    pub fn product(&self) -> &Semiautomaton {
        &self.product
    }

    /// Cascade states reachable from the all-`q0` state, in BFS order.
    pub fn reachable(&self) -> &[usize] {
        &self.reachable
    }

    /// Target state of a reachable cascade state.
    pub fn phi(&self, p: usize) -> Option<usize> {
        self.phi.get(&p).copied()
    }

    pub fn target(&self) -> &Dfa {
        &self.target
    }

    /// The cascade product itself as a DFA accepting through `phi`.
    pub fn cascade_dfa(&self) -> Dfa {
        let finals = (0..self.product.len())
            .map(|p| self.phi(p).is_some_and(|q| self.target.is_final(q)))
            .collect();
        Dfa::new(self.product.clone(), 0, finals).expect("state 0 exists")
    }

    /// Bit of level `k` (0-based) in cascade state `p`.
    pub fn level_bit(&self, p: usize, k: usize) -> usize {
        (p >> (self.levels.len() - 1 - k)) & 1
    }

    /// Checks the derived target against the reachable part of the cascade.
    pub fn check(&self) -> Result<HomCheck> {
        let (sub, phi) = self.reachable_semiautomaton();
        check_homomorphism(&sub, self.target.semi(), &phi)
    }

    fn reachable_semiautomaton(&self) -> (Semiautomaton, Vec<usize>) {
        let pos: HashMap<usize, usize> =
            self.reachable.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let delta = self
            .reachable
            .iter()
            .map(|&p| self.alphabet.symbols().map(|a| pos[&self.product.step(p, a)]).collect())
            .collect();
        let states = self.reachable.iter().map(|&p| self.product.states()[p].clone()).collect();
        let phi = self.reachable.iter().map(|&p| self.phi[&p]).collect();
        (
            Semiautomaton::new(self.alphabet.clone(), states, delta).expect("closed under delta"),
            phi,
        )
    }
}

fn state_bits(comps: &[String]) -> Option<usize> {
    comps.iter().try_fold(0usize, |acc, c| match c.as_str() {
        "q0" => Some(acc << 1),
        "q1" => Some(acc << 1 | 1),
        _ => None,
    })
}

fn bits_to_names(p: usize, n: usize) -> Vec<String> {
    (0..n).map(|k| format!("q{}", (p >> (n - 1 - k)) & 1)).collect()
}

impl fmt::Display for CascadeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.alphabet.len();
        writeln!(f, "alphabet: {}", self.alphabet)?;
        writeln!(f, "levels: {}", self.levels.len())?;
        for (i, level) in self.levels.iter().enumerate() {
            let toks: Vec<String> = (0..level.sigma1.len())
                .filter(|&s| level.sigma1[s])
                .map(|s| {
                    let mut c = if i == 0 { vec![] } else { bits_to_names(s / k, i) };
                    c.push(self.alphabet.name(Sym((s % k) as u16)).to_string());
                    format!("({})", c.join(","))
                })
                .collect();
            writeln!(f, "halfreset {}: sigma1 = {}", i + 1, toks.join(" "))?;
        }
        for (p, t) in &self.hom_lines {
            writeln!(f, "hom: {} -> {t}", self.product.states()[*p])?;
        }
        let finals: Vec<&str> = (0..self.target.len())
            .filter(|&q| self.target.is_final(q))
            .map(|q| self.target.semi().states()[q].as_str())
            .collect();
        if finals.is_empty() {
            writeln!(f, "finals:")
        } else {
            writeln!(f, "finals: {}", finals.join(" "))
        }
    }
}

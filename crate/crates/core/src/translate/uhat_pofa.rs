use crate::automata::{Dfa, Semiautomaton};
use crate::caps::Caps;
use crate::error::Result;
use crate::uhat::UhatModel;

/// The ordered-subset automaton of an FL model. A state lists, per level,
/// the distinct representations seen so far by first occurrence; it is final
/// when the `EOS` representation it induces is accepting.
pub fn uhat_to_pofa(model: &UhatModel, caps: &Caps) -> Result<Dfa> {
    super::require_fl(model)?;
    let ex = model.explore(caps)?;
    let names = (0..ex.len()).map(|i| format!("s{i}")).collect();
    let finals = (0..ex.len()).map(|q| model.accept().contains(ex.eos_rep(q))).collect();
    let semi = Semiautomaton::new(model.alphabet().clone(), names, ex.delta)?;
    Dfa::new(semi, 0, finals)
}

//! Constructive translations between formulas, programs, automata, and
//! transformer models.

mod cascade;
mod ltl_brasp;
mod uhat_ltl;
mod uhat_pofa;

pub use cascade::cascade_to_brasp;
pub use ltl_brasp::{brasp_to_ltl, ltl_to_brasp, BraspFormulas};
pub use uhat_ltl::uhat_to_ltl;
pub use uhat_pofa::uhat_to_pofa;

use crate::error::{Error, Result};
use crate::uhat::UhatModel;

fn require_fl(model: &UhatModel) -> Result<()> {
    if model.is_fl() {
        Ok(())
    } else {
        Err(Error::Unsupported(
            "only models with leftmost tiebreaking and future masking at every layer".into(),
        ))
    }
}

#[cfg(test)]
mod tests;

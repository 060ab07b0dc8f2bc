//! Evaluators, translators, and an enumeration oracle for LTL over finite
//! strings, B-RASP programs, unique-hard-attention transformers in tuple
//! normal form, and partially ordered automata.

pub mod alphabet;
pub mod automata;
pub mod brasp;
pub mod caps;
pub mod cli;
pub mod error;
pub mod ltl;
pub mod oracle;
pub mod translate;
pub mod uhat;

mod text;

pub use alphabet::{Alphabet, Sym, Word};
pub use error::{Error, Result};

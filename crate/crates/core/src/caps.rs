//! Resource caps for closure computations, overridable through `UHAX_CAPS`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Reachable states for automaton and ordered-subset constructions.
    pub states: usize,
    /// Elements of a transition monoid.
    pub monoid: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { states: 50_000, monoid: 10_000 }
    }
}

impl Caps {
    /// Parses `states=N,monoid=M`; missing keys keep their defaults.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut caps = Caps::default();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Io(format!("bad UHAX_CAPS entry `{part}`")))?;
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Io(format!("bad UHAX_CAPS value `{v}`")))?;
            match k.trim() {
                "states" => caps.states = n,
                "monoid" => caps.monoid = n,
                other => return Err(Error::Io(format!("unknown UHAX_CAPS key `{other}`"))),
            }
        }
        Ok(caps)
    }

    pub fn from_env() -> Result<Self> {
        match std::env::var("UHAX_CAPS") {
            Ok(s) => Caps::parse(&s),
            Err(_) => Ok(Caps::default()),
        }
    }
}

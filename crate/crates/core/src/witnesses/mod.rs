//! Bounded, executable replays of the constructions used to show that a
//! boolean algebra of rational subsets forces commutation.
//!
//! Every witness is deterministic given its configuration and returns a
//! [`WitnessReport`]: a list of checked facts with evidence. A failed fact
//! refutes the replayed claim inside the window; passing facts only mean the
//! window is consistent with it.

mod heisenberg;
mod lamplighter;
mod metabelian;
mod orbit;

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

pub use heisenberg::{heisenberg_diagonal, HeisenbergConfig};
pub use lamplighter::{lamplighter_howson, LamplighterConfig};
pub use metabelian::{metabelian_r1r4, MetabelianConfig, EPSILON_WINDOW_CAP};
pub use orbit::{polycyclic_orbit, OrbitConfig};

use crate::error::Result;

/// Names accepted by [`WitnessConfig::name`] and the command line.
pub const WITNESS_NAMES: [&str; 4] =
    ["polycyclic_orbit", "heisenberg_diagonal", "metabelian_r1r4", "lamplighter_howson"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ConsistentWithPaper,
    ViolationFound,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ConsistentWithPaper => "consistent-with-paper",
            Verdict::ViolationFound => "violation-found",
        })
    }
}

/// One checked statement with its evidence as `key=value` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fact {
    pub id: String,
    pub description: String,
    pub pass: bool,
    pub evidence: Vec<(String, String)>,
}

impl Fact {
    pub fn new(id: impl Into<String>, description: impl Into<String>, pass: bool) -> Fact {
        Fact { id: id.into(), description: description.into(), pass, evidence: Vec::new() }
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Fact {
        self.evidence.push((key.into(), value.to_string()));
        self
    }

    /// Value recorded under `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.evidence.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub name: String,
    pub facts: Vec<Fact>,
    pub bounds: Vec<(String, String)>,
    pub notes: Vec<String>,
}

impl WitnessReport {
    pub fn new(name: &str) -> WitnessReport {
        WitnessReport { name: name.into(), facts: Vec::new(), bounds: Vec::new(), notes: Vec::new() }
    }

    /// `ViolationFound` exactly when some fact failed.
    pub fn verdict(&self) -> Verdict {
        if self.facts.iter().all(|f| f.pass) {
            Verdict::ConsistentWithPaper
        } else {
            Verdict::ViolationFound
        }
    }

    pub fn fact(&self, id: &str) -> Option<&Fact> {
        self.facts.iter().find(|f| f.id == id)
    }

    pub(crate) fn push(&mut self, fact: Fact) {
        self.facts.push(fact);
    }

    pub(crate) fn bound(&mut self, key: &str, value: impl fmt::Display) {
        self.bounds.push((key.into(), value.to_string()));
    }

    pub(crate) fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }
}

/// A fully specified witness run.
#[derive(Debug, Clone)]
pub enum WitnessConfig {
    PolycyclicOrbit(OrbitConfig),
    HeisenbergDiagonal(HeisenbergConfig),
    MetabelianR1R4(MetabelianConfig),
    LamplighterHowson(LamplighterConfig),
}

impl WitnessConfig {
    pub fn name(&self) -> &'static str {
        match self {
            WitnessConfig::PolycyclicOrbit(_) => WITNESS_NAMES[0],
            WitnessConfig::HeisenbergDiagonal(_) => WITNESS_NAMES[1],
            WitnessConfig::MetabelianR1R4(_) => WITNESS_NAMES[2],
            WitnessConfig::LamplighterHowson(_) => WITNESS_NAMES[3],
        }
    }
}

pub fn run(cfg: &WitnessConfig) -> Result<WitnessReport> {
    match cfg {
        WitnessConfig::PolycyclicOrbit(c) => polycyclic_orbit(c),
        WitnessConfig::HeisenbergDiagonal(c) => heisenberg_diagonal(c),
        WitnessConfig::MetabelianR1R4(c) => metabelian_r1r4(c),
        WitnessConfig::LamplighterHowson(c) => lamplighter_howson(c),
    }
}

/// `{a, b, c}` rendering of a list of displayable items.
pub(crate) fn render_set<T: fmt::Display>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
    let mut out = String::from("{");
    out.push_str(&parts.join(","));
    out.push('}');
    out
}

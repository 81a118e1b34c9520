//! Rational expressions and finite automata with group-labelled edges.

mod automaton;
mod expr;
mod gens;
mod hom;
mod pump;

pub use automaton::{
    compile, enumerate, intersect_bounded, member_bounded, Edge, GroupAutomaton, Membership,
};
pub use expr::RatExpr;
pub use gens::subgroup_generators;
pub use hom::{image, preimage_finite_kernel, GroupHom};
pub use pump::{pump, PumpingWitness};

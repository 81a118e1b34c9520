//! Rational subsets of finitely generated groups.
//!
//! The crate is `no_std` (it needs `alloc`). It provides:
//!
//! * [`groups`]: exact arithmetic in five concrete group families (free
//!   abelian, `ℤʳ ⋊ ℤ`, the Heisenberg group, the lamplighter groups and the
//!   one-relator metabelian groups `⟨a, x | [a, a^{xⁱ}], a^{f(x)}⟩`).
//! * [`automata`]: rational expressions and finite automata labelled by group
//!   elements, with bounded enumeration, pumping, subgroup generators and
//!   images/preimages under homomorphisms.
//! * [`semilinear`]: the exact boolean algebra `Rat(ℤʳ)` as semilinear sets.
//! * [`presburger`]: Presburger formulas, Cooper quantifier elimination and
//!   the decision procedures built on it.
//! * [`witnesses`]: bounded replays of the constructions showing that a
//!   boolean algebra of rational subsets forces commutation.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod automata;
pub mod error;
pub mod groups;
pub mod presburger;
pub mod semilinear;
pub mod witnesses;

pub use num_bigint::BigInt;

pub use error::{Error, Result};

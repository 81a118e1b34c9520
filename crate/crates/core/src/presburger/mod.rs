//! Presburger arithmetic: linear formulas over ℤ with divisibility, Cooper
//! quantifier elimination, and decisions about semilinear sets.

mod cooper;
mod formula;
mod sets;
mod term;

pub use cooper::{cooper_qe, cooper_qe_with, decide, decide_with, QeConfig};
pub use formula::Formula;
pub use sets::{decide_empty, decide_equal, decide_inclusion, from_semilinear, member_complement, SetExpr};
pub use term::{Term, Var};

//! Command-line front end for `ratg-core`: text formats for group specs,
//! words, rational expressions, Presburger formulas and semilinear sets,
//! plus the `ratg` command dispatcher.

pub mod cli;
pub mod error;
pub mod parse;

pub use cli::run;
pub use error::CliError;

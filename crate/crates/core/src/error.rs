use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed group description.
    InvalidSpec(String),
    /// Two values that must live in the same group do not.
    SpecMismatch,
    /// A word mentions a generator the backend does not know.
    UnknownGenerator(String),
    /// An exponent left the range that a finite representation can hold.
    ExponentOverflow,
    /// Vectors or matrices of incompatible sizes.
    DimensionMismatch { expected: usize, found: usize },
    /// Operation restricted to free abelian groups.
    NotAbelian,
    /// A guarded search exceeded its configured size cap.
    InstanceTooLarge(String),
    /// Cooper elimination produced a modulus above the guardrail.
    LcmTooLarge { lcm: String, limit: String },
    /// `decide` was given a formula with free variables.
    FreeVariables,
    /// Preimage requested without a finite kernel and a section.
    FiniteKernelRequired,
    /// A homomorphism does not respect the defining relations.
    InvalidHom(String),
    /// Witness preconditions are not met.
    HypothesisViolated(String),
    /// Witness not applicable to the given configuration.
    NotApplicable(String),
    InvalidParameter(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSpec(msg) => write!(f, "invalid group spec: {msg}"),
            Error::SpecMismatch => f.write_str("spec mismatch"),
            Error::UnknownGenerator(name) => write!(f, "unknown generator `{name}`"),
            Error::ExponentOverflow => f.write_str("exponent out of representable range"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotAbelian => f.write_str("operation requires a free abelian group"),
            Error::InstanceTooLarge(msg) => write!(f, "instance too large: {msg}"),
            Error::LcmTooLarge { lcm, limit } => {
                write!(f, "lcm {lcm} exceeds the guardrail {limit}")
            }
            Error::FreeVariables => f.write_str("sentence has free variables"),
            Error::FiniteKernelRequired => f.write_str("finite kernel required"),
            Error::InvalidHom(msg) => write!(f, "invalid homomorphism: {msg}"),
            Error::HypothesisViolated(msg) => write!(f, "hypothesis violated: {msg}"),
            Error::NotApplicable(msg) => write!(f, "witness not applicable: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

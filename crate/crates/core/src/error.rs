use thiserror::Error;

/// Errors raised by the arithmetic routines in this crate.
///
/// Every variant carries enough context to be rendered as a structured
/// error by the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(String, String),

    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: String, modulus: String },

    #[error("invalid discriminant {disc}: {reason}")]
    InvalidDiscriminant { disc: i64, reason: String },

    #[error("elements belong to different orders (discriminants {0} and {1})")]
    OrderMismatch(i64, i64),

    #[error("outside convergence domain: {0}")]
    ConvergenceDomain(String),

    #[error("insufficient precision: {0}")]
    Precision(String),

    #[error("incompatible targets at {place}: {detail}")]
    IncompatibleTargets { place: String, detail: String },

    #[error("ramified prime {p}: {detail}")]
    Ramified { p: u64, detail: String },

    #[error("bound {requested} exceeds the configured cap {cap}")]
    CapExceeded { requested: u64, cap: u64 },

    #[error("iteration cap of {0} exceeded")]
    IterationCap(u64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("module invariant violated: {0}")]
    ModuleInvariant(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::NotPrime(_) => "not_prime",
            Error::NonCoprimeModuli(..) => "non_coprime_moduli",
            Error::NotInvertible { .. } => "not_invertible",
            Error::InvalidDiscriminant { .. } => "invalid_discriminant",
            Error::OrderMismatch(..) => "order_mismatch",
            Error::ConvergenceDomain(_) => "convergence_domain",
            Error::Precision(_) => "precision",
            Error::IncompatibleTargets { .. } => "incompatible_targets",
            Error::Ramified { .. } => "ramified",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::IterationCap(_) => "iteration_cap",
            Error::Unsupported(_) => "unsupported",
            Error::ModuleInvariant(_) => "module_invariant",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

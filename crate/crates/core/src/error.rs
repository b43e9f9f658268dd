use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Element index outside `x_elements`.
    UnknownElement(usize),
    /// Parameter index outside `y_parameters`.
    UnknownParameter(usize),
    /// The same parameter was assigned both signs.
    LiteralClash { param: usize },
    /// A structure violates one of its invariants.
    InvalidStructure(String),
    /// A Δ tuple does not have the family's arity.
    ArityMismatch { expected: usize, found: usize },
    /// A search or table would exceed its configured limit.
    ResourceLimit {
        what: &'static str,
        required: u128,
        limit: u128,
    },
    /// An operation was called outside its precondition.
    Precondition(String),
    /// A generator specification is malformed.
    InvalidSpec(String),
    /// A pair passed the extension conditions but the extended list failed the
    /// good-configuration checker.
    UnsoundExtension(String),
    /// A checked postcondition failed; always a bug in this crate.
    Invariant(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownElement(a) => write!(f, "unknown element a{a}"),
            Error::UnknownParameter(b) => write!(f, "unknown parameter b{b}"),
            Error::LiteralClash { param } => {
                write!(f, "parameter b{param} assigned both signs")
            }
            Error::InvalidStructure(msg) => write!(f, "invalid structure: {msg}"),
            Error::ArityMismatch { expected, found } => {
                write!(f, "delta arity mismatch: expected {expected}, found {found}")
            }
            Error::ResourceLimit {
                what,
                required,
                limit,
            } => write!(f, "{what}: {required} exceeds limit {limit}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::InvalidSpec(msg) => write!(f, "invalid generator spec: {msg}"),
            Error::UnsoundExtension(msg) => write!(f, "unsound extension: {msg}"),
            Error::Invariant(msg) => write!(f, "invariant violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

/// Fails with [`Error::ResourceLimit`] when `required > limit`.
pub(crate) fn guard(what: &'static str, required: u128, limit: usize) -> Result<()> {
    if required > limit as u128 {
        Err(Error::ResourceLimit {
            what,
            required,
            limit: limit as u128,
        })
    } else {
        Ok(())
    }
}

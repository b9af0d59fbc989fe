use alloc::string::String;
use core::fmt;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input: malformed parameters, wrong shapes, unknown names.
    Usage,
    /// The request is well formed but outside what the algorithms support.
    Unsupported,
    /// An internal consistency check failed.
    Integrity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// The modulus is not an odd prime.
    InvalidPrime(u64),
    /// Two operands were reduced modulo different primes.
    MixedModulus {
        left: u32,
        right: u32,
    },
    /// Matrix or vector dimensions do not compose.
    Shape(String),
    /// Labels on a matrix side repeat.
    DuplicateLabel(String),
    /// A chain complex failed `d∘d = 0` or a cell was missing from a basis.
    Integrity(String),
    /// A group, degree, or size falls outside the supported range.
    Unsupported(String),
    /// Arities or degrees of combined objects disagree.
    Arity {
        expected: usize,
        found: usize,
    },
    /// A combinatorial guard refused the request.
    Bound {
        what: &'static str,
        bound: usize,
    },
    UnknownPolicy(String),
    Parse(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Integrity(_) => ErrorKind::Integrity,
            Error::Unsupported(_) | Error::Bound { .. } => ErrorKind::Unsupported,
            _ => ErrorKind::Usage,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidPrime(p) => write!(f, "modulus {p} is not an odd prime"),
            Error::MixedModulus { left, right } => {
                write!(f, "cannot combine values mod {left} and mod {right}")
            }
            Error::Shape(msg) => write!(f, "shape mismatch: {msg}"),
            Error::DuplicateLabel(l) => write!(f, "duplicate basis label {l:?}"),
            Error::Integrity(msg) => write!(f, "integrity check failed: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported case: {msg}"),
            Error::Arity { expected, found } => {
                write!(f, "arity mismatch: expected {expected}, found {found}")
            }
            Error::Bound { what, bound } => write!(f, "{what} exceeds the bound {bound}"),
            Error::UnknownPolicy(name) => {
                write!(f, "unknown excess policy {name:?} (expected rational, am-literal or strict)")
            }
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

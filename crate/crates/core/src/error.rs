use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong in the core crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Non-finite, non-square or visibly asymmetric input matrix.
    InvalidMatrix(String),
    /// Operand sizes disagree, or an order is outside `1..=MAX_ORDER`.
    Dimension(String),
    /// A point lies outside the domain of a function or of a formula.
    Domain(String),
    /// The operator is required to be positive definite.
    NotPositive { min_eigenvalue: f64 },
    /// A scalar parameter is out of range (windows, `s`, grid sizes, ...).
    InvalidParameter(String),
    /// The hypotheses of the selected lemma or theorem fail. Each entry
    /// names one failed condition together with its slack.
    Regime(Vec<String>),
    /// A closed-form expression hits a pole (`K == k` or `mK - Mk == 0`).
    Degenerate(&'static str),
    /// A verifier precondition fails (uncertified `s`, `A` not below `B`, ...).
    Precondition(String),
    UnknownCheck(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidMatrix(msg) => write!(f, "invalid matrix: {msg}"),
            Error::Dimension(msg) => write!(f, "dimension error: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::NotPositive { min_eigenvalue } => {
                write!(f, "operator is not positive (smallest eigenvalue {min_eigenvalue:e})")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Regime(failed) => {
                write!(f, "regime conditions fail: ")?;
                for (i, c) in failed.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
            Error::Degenerate(what) => write!(f, "degenerate bound: {what}"),
            Error::Precondition(msg) => write!(f, "precondition failed: {msg}"),
            Error::UnknownCheck(id) => write!(f, "unknown check id `{id}`"),
        }
    }
}

impl core::error::Error for Error {}

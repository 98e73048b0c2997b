use thiserror::Error;

use crate::report::Violation;

/// Errors raised by constructions in this crate.
///
/// Law violations discovered while *validating* a candidate are normally
/// returned as [`Violation`] lists instead; `Error::Law` is used when a
/// constructor refuses an input because of them.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("element {elem} is not a member of {context}")]
    NotAnElement { elem: usize, context: String },

    #[error("not a complete lattice: {0}")]
    NotALattice(String),

    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    #[error("quantale is not divisible: {0}")]
    NotDivisible(String),

    #[error("law violation: {}", fmt_violations(.0))]
    Law(Vec<Violation>),

    #[error("resource cap exceeded: {what} would exceed {cap}")]
    CapExceeded { what: String, cap: usize },

    #[error("not sup-preserving: {0}")]
    NotSupPreserving(String),

    #[error("not continuous: {0}")]
    NotContinuous(String),

    #[error("not a closure system: {0}")]
    NotClosureSystem(String),

    #[error("not complete: {0}")]
    NotComplete(String),

    #[error("not separated: {0}")]
    NotSeparated(String),

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    /// Two characterisations that must coincide gave different answers.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

fn fmt_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| format!("{} ({})", x.law, x.witness))
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

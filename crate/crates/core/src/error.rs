use alloc::string::String;

use crate::series::Order;

/// Errors raised by the algebra kernel.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("series belong to different contexts")]
    ContextMismatch,
    #[error("symbol `{0}` is not declared in this context")]
    UnknownSymbol(String),
    #[error("symbol id {0} is out of range for this context")]
    UnknownSymbolId(u32),
    #[error("symbol `{0}` is declared twice")]
    DuplicateSymbol(String),
    #[error("`{0}` is not a valid symbol name")]
    InvalidSymbolName(String),
    #[error("symbol `{0}` is not a variable")]
    NotAVariable(String),
    #[error("symbol `{0}` is not a constant")]
    NotAConstant(String),
    #[error("placeholder `{0}` already occurs in the series")]
    PlaceholderCollision(String),
    #[error("non-convergent substitution: {0}")]
    NonconvergentSubstitution(String),
    #[error("insufficient precision: requested order {requested}, coefficients only valid up to {available}")]
    InsufficientPrecision { requested: Order, available: Order },
    #[error("alphabet of {0} letters is too large for exhaustive enumeration (at most 4)")]
    InfeasibleEnumeration(usize),
    #[error("at least {0} variables must be declared")]
    MissingVariables(usize),
    #[error("the alphabet is empty")]
    EmptyAlphabet,
    #[error("invalid generator parameters: {0}")]
    InvalidParams(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

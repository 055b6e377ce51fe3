use alloc::string::String;

/// Errors raised by the model, the fusion chains and the simulator.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("small-angle model invalid: |epsilon| = {0} rad >= pi/2")]
    AngleTooLarge(f64),
    #[error("zero-length vector: {0}")]
    ZeroVector(&'static str),
    #[error("negative synchronization error: {0} s")]
    NegativeTau(f64),
    #[error("invalid range: {0}")]
    InvalidRange(&'static str),
    #[error("validation error at {path}: {message}")]
    Validation { path: String, message: String },
    #[error("unknown {kind} '{name}'")]
    UnknownName { kind: &'static str, name: String },
    #[error("ambiguous {kind} '{name}'")]
    AmbiguousName { kind: &'static str, name: String },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

use thiserror::Error;

/// Errors raised by the numeric operations of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid CCPS index (q={q}, k={k}): {reason}")]
    InvalidId { q: usize, k: usize, reason: &'static str },

    #[error("unsupported derivative order {order} for q={q}: {reason}")]
    UnsupportedOrder { q: usize, order: u8, reason: &'static str },

    #[error("input of length {len} is shorter than kernel length {q}")]
    InputTooShort { len: usize, q: usize },

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("Gram matrix is numerically singular (condition estimate {condition:e})")]
    SingularGram { condition: f64 },

    #[error("linear system is singular at pivot column {column}")]
    SingularSystem { column: usize },

    #[error("circulant factorization D = B B^H failed for q={q}, k={k} (max deviation {deviation:e})")]
    FactorizationMismatch { q: usize, k: usize, deviation: f64 },

    #[error("{which} is not a member of the subspace (q={q}, k={k}); deviation {deviation:e}")]
    NotInSubspace {
        which: &'static str,
        q: usize,
        k: usize,
        deviation: f64,
    },

    #[error("Ramanujan sum for q={q} has non-integer sample {value} at n={n}")]
    NonIntegerRamanujan { q: usize, n: usize, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

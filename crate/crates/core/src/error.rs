use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("matrix is {rows}x{cols}, operation requires {requirement}")]
    Dimension {
        rows: usize,
        cols: usize,
        requirement: &'static str,
    },

    #[error("entry {value} at index {index} is not in Z_{k}")]
    EntryOutOfRange { index: usize, value: u64, k: u32 },

    #[error("entry buffer has length {got}, expected {expected}")]
    EntryCount { got: usize, expected: usize },

    #[error("invalid quadruple [{i},{j},{p},{q}] for sides n={n}, m={m}")]
    InvalidQuad {
        i: usize,
        j: usize,
        p: usize,
        q: usize,
        n: usize,
        m: usize,
    },

    #[error("profile ({a},{b}) is invalid: both sides must be at least 2")]
    InvalidProfile { a: usize, b: usize },

    #[error("profile set is empty")]
    EmptyProfileSet,

    #[error("profile ({a},{b}) does not fit sides n={n}, m={m}")]
    Infeasible {
        a: usize,
        b: usize,
        n: usize,
        m: usize,
    },

    #[error("side sizes n={n}, m={m} are too small: {requirement}")]
    Sides {
        n: usize,
        m: usize,
        requirement: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error(
        "profile ({a},{b}) is not guaranteed to be covered by fair-submatrix systems over Z_{k}"
    )]
    CoverageNotGuaranteed { k: u32, a: usize, b: usize },

    #[error("coverage check failed for profile ({a},{b}) after local search")]
    CoverageViolated { a: usize, b: usize },

    #[error("expected a binary matrix (k = 2), got k = {0}")]
    NotBinary(u32),

    #[error("triangle counting is capped at k <= {cap}, got k = {k}")]
    TriangleCap { k: u32, cap: u32 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("checkpoint {path}: {reason}")]
    Checkpoint { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

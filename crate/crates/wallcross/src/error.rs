//! Error types shared across the crate.

use thiserror::Error;

/// Every failure mode of the library.
///
/// Errors split into three groups, matching the CLI exit codes:
/// input validation (exit 1), non-generic linearization data (exit 2),
/// and internal assertion failures (exit 3).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // -- input validation -------------------------------------------------
    #[error("zero vector where a nonzero lattice vector is required")]
    ZeroVector,
    #[error("column {0} of the weight matrix is zero")]
    ZeroColumn(usize),
    #[error("weight matrix is not Calabi-Yau: row {row} sums to {sum}")]
    NotCalabiYau { row: usize, sum: i64 },
    #[error("weight matrix is rank deficient: all columns lie on one line")]
    RankDeficient,
    #[error("cone generators are parallel; cone must be strictly convex")]
    DegenerateCone,
    #[error("fan would have fewer than 3 wall directions")]
    DegenerateFan,
    #[error("index {index} out of range ({what})")]
    IndexOutOfRange { what: &'static str, index: usize },
    #[error("no integer point satisfies the constraints")]
    EmptyFeasibleRegion,
    #[error("invalid input: {0}")]
    InvalidInput(String),

    // -- non-generic linearizations ---------------------------------------
    #[error("non-generic linearization: {0}")]
    NonGenericLinearization(String),
    #[error("wall {0}: no flipped stratum pair found; crossing is not balanced")]
    NoFlippedStratum(usize),
    #[error("stratum is not the flipped stratum of the given wall")]
    NotWallStratum,

    // -- exact linear algebra ----------------------------------------------
    #[error("block Gram matrix is singular; adjoint projection unsolvable")]
    AdjointUnsolvable,

    // -- internal ----------------------------------------------------------
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl Error {
    /// CLI exit code for this error.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            ZeroVector | ZeroColumn(_) | NotCalabiYau { .. } | RankDeficient
            | DegenerateCone | DegenerateFan | IndexOutOfRange { .. }
            | EmptyFeasibleRegion | InvalidInput(_) | AdjointUnsolvable => 1,
            NonGenericLinearization(_) | NoFlippedStratum(_) | NotWallStratum => 2,
            Internal(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

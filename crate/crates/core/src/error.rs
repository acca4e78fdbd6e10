use crate::linalg::IntMatrix;

/// Errors surfaced by the library. Variants that correspond to violated
/// operation preconditions carry enough data to report a diagnosis.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid torus: {0}")]
    InvalidTorus(String),

    /// The row lattice is not saturated in the ambient lattice. The basis of
    /// its saturation is attached so callers can offer the fix.
    #[error("unsaturated lattice; saturate first")]
    Unsaturated { saturation: IntMatrix },

    #[error("row rank deficient")]
    RankDeficient,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("not a regular value (violating walls: {walls:?})")]
    NotRegular { walls: Vec<usize> },

    #[error("split trivial quaternionic factors first (zero weights at columns {0:?})")]
    ZeroWeights(Vec<usize>),

    #[error("sign vector is not a bounded chamber")]
    NotBoundedChamber,

    #[error("mode requires a parameter value")]
    MissingParameter,

    #[error("no wall crossed: both parameters lie in the same chamber")]
    SameChamber,

    #[error("chambers are not adjacent: signs differ across walls {0:?}")]
    NotAdjacent(Vec<usize>),

    #[error("parameter lies on wall(s) {0:?}")]
    OnWall(Vec<usize>),

    #[error("period map hypothesis violated: coordinate {0} generates a subtorus direction")]
    PeriodHypothesis(usize),

    #[error("figure requires d=2 or n=2")]
    FigureDimension,
}

pub type Result<T> = std::result::Result<T, Error>;

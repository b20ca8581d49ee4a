use thiserror::Error;

/// Errors raised by the polyomino, forest and series layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty cell list")]
    EmptyInput,
    #[error("duplicate cell ({0}, {1})")]
    Duplicate(i32, i32),
    #[error("cells are not edge-connected")]
    Disconnected,
    #[error("polyomino is not convex")]
    NotConvex,
    #[error("polyomino is not directed convex")]
    NotDirectedConvex,
    #[error("polyomino is not a parallelogram polyomino")]
    NotParallelogram,
    #[error("invalid cut: {0}")]
    InvalidCut(String),
    #[error("cell ({0}, {1}) is not in the polyomino")]
    CellOutside(i32, i32),
    #[error("target cell is not weakly north-east of the start cell")]
    NotComparable,
    #[error("bounce path is blocked before reaching its target")]
    Blocked,
    #[error("degree of convexity is zero")]
    DegreeZero,
    #[error("parallelogram polyomino is not flat")]
    NotFlat,
    #[error("region R is not a rectangle that fits the cut frame")]
    RegionNotRectangle,
    #[error("invalid triplet: {0}")]
    InvalidTriplet(String),
    #[error("not a Dyck word: {0}")]
    NotDyck(String),
    #[error("not a bilateral Dyck word: {0}")]
    NotBilateral(String),
    #[error("tree height {0} is below 2")]
    HeightTooSmall(usize),
    #[error("invalid tree encoding: {0}")]
    BadTree(String),
    #[error("division by a series without invertible constant term")]
    DivisionByNonUnit,
    #[error("square root of a series whose constant term is not 1")]
    SqrtOfNonUnit,
    #[error("composition with an inner series that has a nonzero constant term")]
    ComposeNonzeroConstant,
    #[error("unknown generating function name `{0}`")]
    UnknownName(String),
    #[error("bad parameter k for `{name}`: {reason}")]
    BadK { name: String, reason: String },
    #[error("series coefficient at degree {0} is not an integer")]
    NonIntegral(usize),
    #[error("site-perimeter substitution left a negative exponent at z^{0}")]
    NegativeExponentResidue(usize),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

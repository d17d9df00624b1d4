//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cycle order list must be nonempty")]
    EmptyOrders,
    #[error("cycle order {0} is less than 2")]
    OrderTooSmall(usize),
    #[error("group order {order} exceeds the cap of {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("multiplication table row {row} has length {len}, expected {order}")]
    TableNotSquare { row: usize, len: usize, order: usize },
    #[error("multiplication table entry ({row}, {col}) = {value} is out of range for order {order}")]
    TableEntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("multiplication table has no identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("associativity fails at triple ({a}, {b}, {c}): ({a}*{b})*{c} != {a}*({b}*{c})")]
    NonAssociative { a: usize, b: usize, c: usize },
    #[error("element {element} is out of range for a group of order {order}")]
    ElementOutOfRange { element: usize, order: usize },
    #[error("coordinate tuple {coords:?} does not match the group's cycle structure")]
    BadCoordinates { coords: Vec<usize> },
    #[error("element set must be nonempty")]
    EmptySet,
    #[error("the identity element must not belong to a connection set or piece")]
    IdentityInSet,
    #[error("element {element} is in the set but its inverse {inverse} is not")]
    InverseMissing { element: usize, inverse: usize },
    #[error("the set together with the identity is not a subgroup (not closed at {a}*{b})")]
    NotClosed { a: usize, b: usize },
    #[error("the given set is not a subgroup")]
    NotASubgroup,
    #[error("piece {index} is empty")]
    EmptyPiece { index: usize },
    #[error("piece {index} together with the identity is not a subgroup")]
    PieceNotSubgroup { index: usize },
    #[error("pieces {i} and {j} overlap, but the partition does not allow overlap")]
    PiecesOverlap { i: usize, j: usize },
    #[error("piece element {element} is not in the connection set")]
    PieceElementNotInConnection { element: usize },
    #[error("connection element {element} is not covered by any piece")]
    ElementNotCovered { element: usize },
    #[error("edge ({a}, {b}) is not covered by any tessellation")]
    EdgeNotCovered { a: usize, b: usize },
    #[error("matrix dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("expected {expected} angles for {expected} tessellations, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("tessellation cells are not all the same size")]
    NonUniformCells,
    #[error("angle denominator must be nonzero")]
    ZeroDenominator,
    #[error("angle value {0} is not finite")]
    NonFiniteAngle(f64),
    #[error("time T must be a positive integer")]
    InvalidTime,
    #[error("at least one piece must be targeted")]
    NoTargets,
    #[error("target index {index} is out of range for {count} pieces")]
    TargetOutOfRange { index: usize, count: usize },
    #[error("targeted piece {index} must be a single element of order 2")]
    TargetNotOrderTwoSingleton { index: usize },
    #[error("pieces {i} and {j} do not commute (their subgroups' set products differ)")]
    NonCommutingPieces { i: usize, j: usize },
    #[error("the partition is not a factorization: pieces share elements")]
    NotFactorization,
    #[error("piece {index} has subgroup order {gamma}; uniform mixing schedules require order at most 4")]
    MixingInfeasible { index: usize, gamma: usize },
    #[error("the connection set does not generate the group")]
    NotGenerating,
    #[error("comparison matrix is identically zero")]
    ZeroMatrix,
    #[error("eigendecomposition did not converge")]
    EigenFailure,
    #[error("connection set has {0} elements; partition enumeration is capped at 12")]
    EnumerationTooLarge(usize),
    #[error("csv parse error at line {line}: {message}")]
    CsvParse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

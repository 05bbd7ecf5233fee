//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by space construction, covering computations, and the
/// analysis operations built on top of them.
#[derive(Debug, Error)]
pub enum Error {
    /// A distance table is not symmetric within tolerance.
    #[error("distance table is not symmetric at ({0}, {1})")]
    NonSymmetric(usize, usize),
    /// A distance table contains a negative entry.
    #[error("negative distance entry at ({0}, {1})")]
    NegativeEntry(usize, usize),
    /// Two distinct points sit at distance zero.
    #[error("distinct points {0} and {1} are at distance zero")]
    ZeroOffDiagonal(usize, usize),
    /// An operation that needs a nonempty subset was given an empty one.
    #[error("subset must be nonempty")]
    EmptySubset,
    /// The two sets of a separation request share a point.
    #[error("sets overlap at point {0}")]
    OverlappingSets(usize),
    /// A covering computation was asked to handle more atoms than the
    /// configured subset-DP limit.
    #[error("target has {count} atoms, exceeding the limit of {limit}")]
    TooManyAtoms { count: usize, limit: usize },
    /// A content exponent was negative or otherwise out of range.
    #[error("invalid alpha: {0}")]
    InvalidAlpha(f64),
    /// A covering scale was zero, negative, or not a number.
    #[error("invalid delta: {0}")]
    InvalidDelta(f64),
    /// An atom is too large to fit in any block of diameter < delta.
    #[error("atom {atom} has diameter {diam} >= delta {delta}")]
    InadmissibleAtom { atom: usize, diam: f64, delta: f64 },
    /// A scale grid is empty, too short, non-positive, or not decreasing.
    #[error("degenerate scale grid: {0}")]
    DegenerateGrid(String),
    /// A point-cloud operation needs at least two points.
    #[error("need at least 2 points, got {0}")]
    TooFewPoints(usize),
    /// A word contains a symbol outside the alphabet.
    #[error("symbol {symbol} out of range for alphabet size {n}")]
    BadSymbol { symbol: u32, n: u32 },
    /// A cell list does not cover the whole sequence space.
    #[error("cell list does not cover the space (missing below prefix {0:?})")]
    NotACovering(String),
    /// A materialization would exceed the configured size limit.
    #[error("materialization of {cells} cells exceeds limit {limit}")]
    TooLarge { cells: usize, limit: usize },
    /// A snowflake exponent is out of range for the given space.
    #[error("invalid snowflake exponent {0} (t > 1 requires an ultrametric input)")]
    InvalidExponent(f64),
    /// A map collapses two distinct points, so no bilipschitz constant exists.
    #[error("map is not injective: points {0} and {1} collapse")]
    NotInjective(usize, usize),
    /// A Lipschitz profile carries no usable scales.
    #[error("degenerate profile: {0}")]
    DegenerateProfile(String),
    /// A path partition is invalid (wrong endpoints, not increasing, out of range).
    #[error("bad partition: {0}")]
    BadPartition(String),
    /// A split parameter is not one of the path's sample parameters.
    #[error("{0} is not a sample parameter of the path")]
    NotASample(f64),
    /// A path's points do not live in the map's domain.
    #[error("path points do not live in the map domain: {0}")]
    DomainMismatch(String),
    /// A path has more segments than the covering DP can handle.
    #[error("path has {count} segments, exceeding the limit of {limit}")]
    TooManySegments { count: usize, limit: usize },
    /// A covering block's image interval is wider than k times its diameter.
    #[error("block {block} has f-image width {width} > k*diam = {bound}")]
    LipschitzViolation {
        block: usize,
        width: f64,
        bound: f64,
    },
    /// A weight assignment contains a negative weight.
    #[error("negative weight {weight} at atom {atom}")]
    NegativeWeight { atom: usize, weight: f64 },
    /// Structurally malformed input (shape, indices, ranges).
    #[error("bad parameters: {0}")]
    BadParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;

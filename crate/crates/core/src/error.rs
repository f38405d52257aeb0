use core::fmt;

use crate::partitions::Partition;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of the numerical pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Dominance comparison between partitions of different weight.
    UnequalWeights { left: usize, right: usize },
    /// A sequence that is not a weakly decreasing list of positive integers.
    InvalidPartition,
    /// `(c)_κ = 0`: the lower parameter sits on a pole of the series.
    Pole { partition: Partition },
    /// Two coordinates are equal (or closer than the tie threshold).
    Tie { i: usize, j: usize },
    /// A coordinate is zero where the Pfaffian system needs `yᵢ ≠ 0`.
    ZeroCoordinate { i: usize },
    /// A scalar argument is outside its admissible range.
    OutOfRange { name: &'static str, value: f64 },
    /// Vector length does not match the dimension.
    DimensionMismatch { expected: usize, found: usize },
    /// The requested route does not exist for this dimension.
    UnsupportedDimension { m: usize },
    /// The integration produced NaN or infinity.
    NonFinite { x: f64 },
    /// A quantile bracket could not be grown below the configured limit.
    BracketFailed { p: f64, max_x: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnequalWeights { left, right } => {
                write!(f, "cannot compare partitions of weight {left} and {right}")
            }
            Error::InvalidPartition => {
                f.write_str("partition parts must be positive and weakly decreasing")
            }
            Error::Pole { partition } => {
                write!(f, "lower parameter hits a pole of (c)_κ at κ = {partition}")
            }
            Error::Tie { i, j } => write!(
                f,
                "coordinates {} and {} coincide; the Pfaffian system is singular there",
                i + 1,
                j + 1
            ),
            Error::ZeroCoordinate { i } => write!(f, "coordinate {} is zero", i + 1),
            Error::OutOfRange { name, value } => write!(f, "{name} = {value} is out of range"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "expected {expected} entries, found {found}")
            }
            Error::UnsupportedDimension { m } => {
                write!(f, "no diagonal ODE is available for dimension {m}")
            }
            Error::NonFinite { x } => write!(f, "non-finite value encountered at x = {x}"),
            Error::BracketFailed { p, max_x } => {
                write!(f, "could not bracket the {p} quantile below x = {max_x}")
            }
        }
    }
}

impl core::error::Error for Error {}

use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("value is not exactly representable: {0}")]
    Exactness(String),
    #[error("negative base raised to a fractional power: {0}")]
    Sign(String),
    #[error("fields do not close under the bracket: [{i}, {j}] leaves the span")]
    NotClosed { i: usize, j: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid scale factor: {0}")]
    InvalidScale(String),
    #[error("family mismatch: {0}")]
    FamilyMismatch(String),
    #[error("marking cubic vanishes identically")]
    DegenerateCubic,
    #[error("inconsistent marking data: {0}")]
    Inconsistent(String),
    #[error("degenerate denominator: 2 - 2d - 2d' + a + a' = 0")]
    DegenerateDenominator,
    #[error("initial data is not transverse (u0 = 0)")]
    NotTransverse,
    #[error("connection is not geodesically complete (gamma = {0})")]
    NotComplete(String),
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("invalid n: {0}")]
    InvalidN(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

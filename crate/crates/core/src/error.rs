use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial degree {degree} exceeds the configured bound {limit}")]
    DegreeGuard { degree: usize, limit: usize },
    #[error("shift offset {shift} exceeds the configured width {limit}")]
    ShiftGuard { shift: i64, limit: i64 },
    #[error("jet order {order} exceeds the hard cap {cap}")]
    OrderGuard { order: u32, cap: u32 },
    #[error("block tag mismatch: {0}")]
    TagMismatch(String),
    #[error("invalid splitting: {0}")]
    InvalidSplitting(String),
    #[error("invalid chart point: {0}")]
    InvalidChartPoint(String),
    #[error("window [{lo}, {hi}] too small; need at least [{required_lo}, {required_hi}]")]
    WindowTooSmall {
        lo: i64,
        hi: i64,
        required_lo: i64,
        required_hi: i64,
    },
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("representation could not be determined: {0}")]
    Determination(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Resource guards (degree, shift width, jet order) as opposed to usage errors.
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::DegreeGuard { .. } | Error::ShiftGuard { .. } | Error::OrderGuard { .. }
        )
    }
}

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(&'static str),
    #[error("no unscheduled iterations remain")]
    NoWork,
    #[error("PE index {pe} out of range for {p} PEs")]
    PeOutOfRange { pe: usize, p: usize },
    #[error("iteration range [{start}, {end}) touches unscheduled iterations")]
    Unscheduled { start: usize, end: usize },
    #[error("iteration range [{start}, {end}) is outside the loop of {n} iterations")]
    RangeOutOfBounds { start: usize, end: usize, n: usize },
    #[error("unknown technique `{0}`")]
    UnknownTechnique(alloc::string::String),
    #[error("workload length {got} does not match grid size {expected}")]
    GridMismatch { got: usize, expected: usize },
    #[error("cannot fail {count} of {p} workers; at most P-1 may fail")]
    TooManyFailures { count: usize, p: usize },
}

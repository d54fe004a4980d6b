use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-positive sound speed: w = {w}, z = {z}")]
    NonPositiveSoundSpeed { w: f64, z: f64 },
    #[error("singular denominator (|1 - 3Q| = {0:e})")]
    SingularDenominator(f64),
    #[error("no root: {0}")]
    NoRoot(String),
    #[error("point lies on the shock")]
    AtShock,
    #[error("branch ambiguity: numeric root drifted to the non-vanishing branch (y = {0})")]
    BranchAmbiguity(f64),
    #[error("asymptotic seed out of range: |jump/mean| = {0}")]
    SeedOutOfRange(f64),
    #[error("Newton iteration diverged after {iters} iterations (residual {residual:e})")]
    NewtonDiverged { iters: usize, residual: f64 },
    #[error("degenerate shock-speed denominator")]
    DegenerateDenominator,
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
    #[error("non-positive sample at index {0}")]
    NonPositiveSample(usize),
    #[error("insufficient ladder: {0}")]
    InsufficientLadder(String),
    #[error("step size underflow near t = {0}")]
    StepSizeUnderflow(f64),
    #[error("root not bracketed: {0}")]
    RootNotBracketed(String),
    #[error("labels crossed at t = {0}")]
    CrossingLabels(f64),
    #[error("no blowup in window (min eta_x = {0})")]
    NoBlowupInWindow(f64),
    #[error("inner iteration stalled: {0}")]
    InnerIterationStall(String),
    #[error("stopping time missing: {0}")]
    StoppingTimeMissing(String),
    #[error("too few nodes for one-sided extrapolation ({0})")]
    TooFewNodes(usize),
    #[error("outer iteration stalled: {0}")]
    OuterIterationStall(String),
    #[error("regular-curve corridor violated: {0}")]
    RegularityViolated(String),
    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use crate::calibration::FitReport;

/// Domain and validation errors for the whole crate.
///
/// Everything here is a *domain* failure: bad parameters, inputs outside an
/// operation's precondition, or an iteration budget running out. I/O never
/// happens in this crate, so callers can map any `Error` to a domain exit
/// path without inspecting it.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("seed 0 with increment 0 locks a multiplicative congruential generator at 0")]
    DegenerateSeed,

    #[error("invalid congruential parameters: {0}")]
    BadLcgParams(&'static str),

    #[error("{0} is not prime; the torus generator needs a prime whose square root is irrational")]
    NotPrime(u64),

    #[error("prime rank {0} is out of the supported range")]
    PrimeRankOutOfRange(usize),

    #[error("torus index {index} exceeds the precision bound {limit}; fractional parts would drift past 1e-12")]
    TorusIndexOverflow { index: u64, limit: u64 },

    #[error("mixing ratio alpha = {0} must be at least 1")]
    BadMixRatio(f64),

    #[error("mixed-torus capacity must be at least 1")]
    ZeroCapacity,

    #[error("mixed-torus address space alpha*capacity = {0} exceeds the torus precision bound")]
    CapacityOverflow(f64),

    #[error("{name} = {value} is outside its domain: {reason}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("sample too small: need at least {need}, got {got}")]
    SampleTooSmall { need: usize, got: usize },

    #[error("sample is constant; the statistic is undefined")]
    ConstantSample,

    #[error("expected category probability at index {0} is not positive")]
    BadCategoryProb(usize),

    #[error("category probabilities sum to {0}, expected 1")]
    ProbsDontSumToOne(f64),

    #[error("observed counts and probabilities have different lengths ({observed} vs {probs})")]
    CategoryLengthMismatch { observed: usize, probs: usize },

    #[error("cdf value {value} at sample point {x} is outside (0, 1); the statistic is undefined")]
    CdfOutOfRange { x: f64, value: f64 },

    #[error("horizon {horizon} is not an integer multiple of the step {delta}")]
    GridMismatch { horizon: f64, delta: f64 },

    #[error("no exact transition is available for {0}")]
    ExactStepUnavailable(&'static str),

    #[error("need at least {need} step sizes for a convergence fit, got {got}")]
    TooFewDeltas { need: usize, got: usize },

    #[error("step size {delta} is not an integer multiple of the finest step {finest}")]
    DeltasNotNested { delta: f64, finest: f64 },

    #[error("calibration curve needs at least {need} points, got {got}")]
    CurveTooShort { need: usize, got: usize },

    #[error("curve maturities must be positive, distinct and increasing (offence at row {0})")]
    BadCurvePoint(usize),

    #[error("all calibration parameters are fixed; nothing to optimize")]
    NothingFree,

    #[error("objective returned a non-finite value at {0:?}")]
    NonFiniteObjective(Vec<f64>),

    #[error("optimizer did not converge within {iterations} iterations; best objective {}", best.objective_value)]
    OptimFailed { iterations: u64, best: Box<FitReport> },

    #[error("Milstein auxiliary for a square-root diffusion has no closed-form pseudo-likelihood; use the Euler auxiliary")]
    UnsupportedAuxiliary,
}

pub type Result<T> = std::result::Result<T, Error>;

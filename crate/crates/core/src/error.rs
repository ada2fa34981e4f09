use alloc::string::String;

/// Errors raised by the solver, the quadratures and the reference oracles.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("x = {x} lies outside the model domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("derivative order {requested} exceeds the supported maximum {max}")]
    OrderTooHigh { requested: usize, max: usize },

    #[error("unknown coefficient model `{0}`")]
    UnknownModel(String),

    #[error("a(x) = {value} at x = {x} violates the certified floor {floor}")]
    FloorViolated { x: f64, value: f64, floor: f64 },

    #[error("phase derivative phi'(x) = {value} at x = {x} is below the positivity floor {floor}")]
    PhaseNotPositive { x: f64, value: f64, floor: f64 },

    #[error("exact phase requested but the model has no closed-form antiderivatives")]
    ExactPhaseUnavailable,

    #[error("phase requested at x = {0}, which is not a tabulation point")]
    NotTabulated(f64),

    #[error("quadrature Q1^({p},{p_tilde}) needs b_{needed}, only b_0..b_{max} are available")]
    InsufficientJetOrder { p: usize, p_tilde: usize, needed: usize, max: usize },

    #[error("invalid interval: xi = {xi}, eta = {eta}")]
    InvalidInterval { xi: f64, eta: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("adaptive quadrature reached {evaluations} panels without meeting tolerance {tol:e} (estimate {estimate:e})")]
    OracleBudget { tol: f64, estimate: f64, evaluations: usize },

    #[error("reference integrator needs {needed} steps, budget is {budget}")]
    StepBudget { needed: usize, budget: usize },

    #[error("argument {0} is outside the validated range of the special function")]
    ArgumentOutOfRange(f64),

    #[error("reference solution denominator vanishes")]
    SingularReference,

    #[error("frame mismatch: expected {expected}, found {found}")]
    FrameMismatch { expected: &'static str, found: &'static str },
}

pub type Result<T> = core::result::Result<T, Error>;

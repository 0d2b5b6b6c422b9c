use thiserror::Error;

/// Errors raised by the series engine, the special-function evaluators and
/// the identity runners.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by a series of higher valuation ({divisor}) than the dividend ({dividend})")]
    DivisionByZeroSeries { dividend: usize, divisor: usize },

    #[error("series has a vanishing constant term")]
    ZeroConstantTerm,

    #[error("square root of a series with odd valuation {0}")]
    OddValuation(usize),

    #[error("inner series of a composition must vanish at t = 0 (constant term {0:e})")]
    NonvanishingInner(f64),

    #[error("denominator parameter {0} is a non-positive integer that no numerator shields")]
    PoleInDenominatorParams(f64),

    #[error("hypergeometric series did not converge: {0}")]
    NoConvergence(String),

    #[error("gamma function has a pole at {0}")]
    PoleAtNonPositiveInteger(f64),

    #[error("Gegenbauer parameter {0} is not admissible")]
    InvalidLambda(f64),

    #[error("order {0} must not be a half-integer or integer >= 1/2 here")]
    InvalidMu(f64),

    #[error("order {0} is a positive integer; only the limiting form is defined")]
    OrderIsPositiveInteger(f64),

    #[error("argument out of domain: {0}")]
    ArgumentOutOfDomain(String),

    #[error("no closed form is implemented for degree {nu}, order {mu}")]
    NotClosedForm { nu: f64, mu: f64 },

    #[error("series retains a pole or fractional power: coefficient of t^{exponent} is {magnitude:e}")]
    UncancelledPole { exponent: f64, magnitude: f64 },

    #[error("power {p}/{q} of a series with leading exponent {shift} is not a Laurent monomial")]
    FractionalShift { shift: i64, p: i64, q: i64 },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("argument {0} outside [0, 1)")]
    OutOfRange(f64),

    #[error("transformation rule not applicable to {0}")]
    RuleNotApplicable(String),

    #[error("unknown identity id `{0}`")]
    UnknownIdentity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

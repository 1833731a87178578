use core::fmt;

/// Errors raised by the solver core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Cell width outside the open interval (0, 1).
    InvalidEpsilon(f64),
    /// The domain holds fewer cells than the truncated system needs.
    TooFewCells { m: usize, required: usize },
    /// A size or time argument was negative or not finite.
    InvalidArgument { name: &'static str, value: f64 },
    /// Two objects were built on different grids.
    GridMismatch,
    /// A vector argument had the wrong length.
    LengthMismatch { expected: usize, found: usize },
    /// Quadrature or kernel evaluation produced NaN or infinity.
    NonFinite { what: &'static str },
    /// Snapshot times are not strictly increasing or start before the state.
    InvalidSnapshotTimes,
    /// Integrator configuration out of range.
    InvalidConfig(&'static str),
    /// The adaptive step shrank below the representable resolution of `t`.
    StepSizeUnderflow { t: f64, h: f64 },
    /// The integrator hit its step budget before reaching the final time.
    MaxStepsExceeded { t: f64, steps: usize },
    /// A component went negative beyond the tolerance band under the reject policy.
    Negativity { t: f64, min: f64 },
    /// The requested test case has no closed-form solution.
    NoClosedForm,
    /// Too few usable rows to fit a convergence order.
    InsufficientRows { usable: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidEpsilon(eps) => write!(f, "epsilon must lie in (0, 1), got {eps}"),
            Error::TooFewCells { m, required } => {
                write!(f, "grid holds {m} cells, at least {required} required")
            }
            Error::InvalidArgument { name, value } => write!(f, "invalid {name}: {value}"),
            Error::GridMismatch => write!(f, "state and kernel are defined on different grids"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::NonFinite { what } => write!(f, "non-finite value in {what}"),
            Error::InvalidSnapshotTimes => {
                write!(f, "snapshot times must be strictly increasing and not precede the state time")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid integrator configuration: {msg}"),
            Error::StepSizeUnderflow { t, h } => write!(f, "step size underflow at t = {t} (h = {h:e})"),
            Error::MaxStepsExceeded { t, steps } => {
                write!(f, "maximum number of steps ({steps}) exceeded at t = {t}")
            }
            Error::Negativity { t, min } => {
                write!(f, "concentration dropped to {min:e} at t = {t}, beyond the tolerance band")
            }
            Error::NoClosedForm => write!(f, "no closed-form solution available for this case"),
            Error::InsufficientRows { usable } => {
                write!(f, "need at least 2 rows with positive finite error, got {usable}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

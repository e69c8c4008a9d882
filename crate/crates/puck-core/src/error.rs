use core::fmt;

/// Errors reported by the model, estimation, and analysis operations.
#[derive(Debug, Clone, PartialEq)]
pub enum PuckError {
    /// A numeric argument violated a precondition.
    InvalidArgument(&'static str),
    /// An input value that must be finite was NaN or infinite.
    NonFinite(&'static str),
    /// A tick index fell outside the series.
    IndexOutOfRange { index: usize, len: usize },
    /// The series has too few ticks for the requested operation.
    SeriesTooShort { needed: usize, got: usize },
    /// The grid contains no candidate models.
    EmptyGrid,
    /// The likelihood is unbounded (all residuals exactly zero, e.g. a
    /// constant-price window); no maximum-likelihood scale exists.
    DegenerateFit,
    /// Too few populated bins survived to reconstruct a potential.
    InsufficientData { needed: usize, got: usize },
    /// The potential has no barrier for the given coefficients.
    NoBarrier,
    /// An iterative numeric search failed to converge.
    Numerical(&'static str),
}

impl fmt::Display for PuckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PuckError::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
            PuckError::NonFinite(what) => write!(f, "non-finite value: {what}"),
            PuckError::IndexOutOfRange { index, len } => {
                write!(f, "tick index {index} out of range for series of length {len}")
            }
            PuckError::SeriesTooShort { needed, got } => {
                write!(f, "series too short: need at least {needed} ticks, got {got}")
            }
            PuckError::EmptyGrid => write!(f, "grid contains no candidate models"),
            PuckError::DegenerateFit => {
                write!(f, "degenerate fit: all residuals are zero, likelihood is unbounded")
            }
            PuckError::InsufficientData { needed, got } => {
                write!(f, "insufficient data: need {needed} populated bins, got {got}")
            }
            PuckError::NoBarrier => {
                write!(f, "no potential barrier: require gamma = 2, b_quad > 0 and b_nl < 0")
            }
            PuckError::Numerical(what) => write!(f, "numerical failure: {what}"),
        }
    }
}

impl core::error::Error for PuckError {}

pub type Result<T> = core::result::Result<T, PuckError>;

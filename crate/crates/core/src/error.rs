use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter value for which the model degenerates (λ = 0, κ = 0).
    Degenerate { parameter: &'static str },
    /// A parameter outside the range an operation accepts.
    InvalidParameter {
        parameter: &'static str,
        value: f64,
        reason: &'static str,
    },
    /// `lambda_crit` is only defined for even hierarchy indices.
    OddHierarchyIndex { k: u32 },
    /// The requested computation belongs to the other 7KdV case.
    RegimeMismatch {
        expected: &'static str,
        lambda: f64,
    },
    /// A scaled inner-recurrence term stopped being finite.
    Overflow { j: usize },
    /// The Hessenberg QR iteration did not converge.
    EigenvalueFailure { degree: usize },
    /// Bracket expansion failed to find a sign change of the predicate.
    BracketNotFound { parameter: &'static str },
    /// Two estimates that must be complex conjugates disagree.
    ConjugateMismatch { relative_difference: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Degenerate { parameter } => {
                write!(f, "{parameter} = 0 degenerates the model")
            }
            Error::InvalidParameter {
                parameter,
                value,
                reason,
            } => write!(f, "invalid {parameter} = {value}: {reason}"),
            Error::OddHierarchyIndex { k } => write!(
                f,
                "k = {k} is odd: imaginary roots exist for every lambda > 0, there is no finite critical value"
            ),
            Error::RegimeMismatch { expected, lambda } => {
                write!(f, "lambda = {lambda} is outside the {expected} regime")
            }
            Error::Overflow { j } => write!(f, "scaled inner term became non-finite at j = {j}"),
            Error::EigenvalueFailure { degree } => {
                write!(f, "companion eigenvalue iteration failed for degree {degree}")
            }
            Error::BracketNotFound { parameter } => {
                write!(f, "could not bracket the critical value of {parameter}")
            }
            Error::ConjugateMismatch {
                relative_difference,
            } => write!(
                f,
                "conjugate prefactor estimates differ by {relative_difference:e} (relative)"
            ),
        }
    }
}

impl core::error::Error for Error {}

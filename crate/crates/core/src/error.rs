use core::fmt;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Non-finite entries, mismatched dimensions, malformed parameters.
    InvalidInput(&'static str),
    /// A scalar function was applied outside its domain (e.g. `ln` of a
    /// non-positive eigenvalue).
    Domain { value: f64 },
    /// The parameter lies outside the family's open interval, or a
    /// difference stencil would leave it.
    OutOfDomain { theta: f64, lo: f64, hi: f64 },
    /// Smallest eigenvalue at or below the rank tolerance.
    SingularState { min_eigenvalue: f64 },
    /// Two eigenvalue clusters are too close to be told apart.
    DegenerateCrossing { lower: f64, upper: f64 },
    /// Fisher information too small for a Cramér-Rao ratio.
    DegenerateInformation { qfi: f64 },
    /// Truncated Fock space cannot represent the requested state.
    Truncation { defect: f64 },
    /// Explicit tensor construction would exceed the dimension cap.
    ResourceLimit { dim: usize, cap: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(what) => write!(f, "invalid input: {what}"),
            Error::Domain { value } => write!(f, "value {value:e} outside function domain"),
            Error::OutOfDomain { theta, lo, hi } => {
                write!(f, "theta = {theta} outside parameter interval ({lo}, {hi})")
            }
            Error::SingularState { min_eigenvalue } => {
                write!(f, "state is not full rank (smallest eigenvalue {min_eigenvalue:e})")
            }
            Error::DegenerateCrossing { lower, upper } => write!(
                f,
                "eigenvalues {lower:e} and {upper:e} are too close to separate into branches"
            ),
            Error::DegenerateInformation { qfi } => {
                write!(f, "Fisher information {qfi:e} is too small for a bound")
            }
            Error::Truncation { defect } => {
                write!(f, "Fock-space truncation defect {defect:e} exceeds tolerance")
            }
            Error::ResourceLimit { dim, cap } => {
                write!(f, "tensor dimension {dim} exceeds cap {cap}")
            }
        }
    }
}

impl core::error::Error for Error {}

use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside its admissible range (non-positive λ, r₁, m, ...).
    Parameter(&'static str),
    /// Resolvent requested for σ below the supported range.
    UnsupportedRange { sigma: f64, min: f64 },
    /// `det(I − K)` is below the threshold or the factorization broke down.
    SingularResolvent { sigma: f64, det: f64 },
    /// A truncation (interval length or tail span) looks too short.
    TruncationInsufficient { what: &'static str, ratio: f64 },
    /// The operation only exists for equal times.
    MultiTimeUnsupported,
    /// Two parameter objects that must be paired do not match.
    MismatchedParams(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::UnsupportedRange { sigma, min } => {
                write!(f, "sigma = {sigma} is below the supported minimum {min}")
            }
            Error::SingularResolvent { sigma, det } => {
                write!(
                    f,
                    "resolvent at sigma = {sigma} is numerically singular (det = {det:e})"
                )
            }
            Error::TruncationInsufficient { what, ratio } => {
                write!(f, "{what} truncation insufficient (indicator {ratio:e})")
            }
            Error::MultiTimeUnsupported => f.write_str("operation requires equal times"),
            Error::MismatchedParams(msg) => write!(f, "mismatched parameters: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

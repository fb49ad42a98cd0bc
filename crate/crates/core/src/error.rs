use core::fmt;

/// Every failure mode of the library. Variants carry just enough context to
/// print a useful message; callers match on the variant, not the text.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    InvalidLoop(&'static str),
    InvalidParams(&'static str),
    InvalidMarks(&'static str),
    GenerationFailed,
    SizeMismatch { expected: usize, found: usize },
    CapExceeded { edges: usize, cap: usize },
    UnsupportedQ(f64),
    InsufficientData { needed: usize, found: usize },
    ZeroVariance,
    OutOfDomain,
    BelowMinimalRadius { r: u32, r_sigma: u32 },
    InvalidIntervals,
    NotCentred,
    NotOnPath,
    OutOfRange(f64),
    NotInterior,
    InvalidContour,
    NoConvergence { iterations: usize, residual: f64 },
    InvalidQuad(&'static str),
    Unsupported(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidLoop(why) => write!(f, "invalid boundary loop: {why}"),
            Error::InvalidParams(why) => write!(f, "invalid parameters: {why}"),
            Error::InvalidMarks(why) => write!(f, "invalid marks: {why}"),
            Error::GenerationFailed => write!(f, "domain generation failed after bounded retries"),
            Error::SizeMismatch { expected, found } => {
                write!(f, "configuration has {found} bits, domain has {expected} edges")
            }
            Error::CapExceeded { edges, cap } => {
                write!(f, "enumeration needs {edges} edges, cap is {cap}")
            }
            Error::UnsupportedQ(q) => write!(f, "q = {q} not supported by this algorithm"),
            Error::InsufficientData { needed, found } => {
                write!(f, "need at least {needed} samples, got {found}")
            }
            Error::ZeroVariance => write!(f, "observable has zero variance"),
            Error::OutOfDomain => write!(f, "region not contained in the domain"),
            Error::BelowMinimalRadius { r, r_sigma } => {
                write!(f, "inner radius {r} below minimal radius {r_sigma}")
            }
            Error::InvalidIntervals => write!(f, "landing intervals overlap or are malformed"),
            Error::NotCentred => write!(f, "domain is not R-centred"),
            Error::NotOnPath => write!(f, "medial edge not on the exploration path"),
            Error::OutOfRange(x) => write!(f, "value {x} out of range"),
            Error::NotInterior => write!(f, "medial vertex is not interior"),
            Error::InvalidContour => write!(f, "malformed contour"),
            Error::NoConvergence { iterations, residual } => {
                write!(f, "no convergence after {iterations} iterations (residual {residual:e})")
            }
            Error::InvalidQuad(why) => write!(f, "invalid quad: {why}"),
            Error::Unsupported(why) => write!(f, "unsupported: {why}"),
        }
    }
}

impl core::error::Error for Error {}

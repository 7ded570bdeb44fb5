use thiserror::Error;

/// Which of the two length inequalities rules out a corner angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Infeasibility {
    /// `tan 2α ≥ 1`: the quarter curve would be longer than the two tangent
    /// segments from the switching point.
    UpperBound,
    /// `3 sin α − cos α ≤ cos α sin α − sin² α`: the quarter curve would be
    /// shorter than the distance between consecutive corners.
    LowerBound,
}

impl std::fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Infeasibility::UpperBound => write!(f, "alpha >= pi/8"),
            Infeasibility::LowerBound => write!(
                f,
                "lower bound: 3sin(alpha) - cos(alpha) <= cos(alpha)sin(alpha) - sin^2(alpha)"
            ),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite coordinate ({0}, {1})")]
    NonFinite(f64, f64),
    #[error("point ({0}, {1}) lies inside the body")]
    PointInsideBody(f64, f64),
    #[error("query point coincides with a point body")]
    DegenerateBody,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("string parameter {s} does not exceed the caustic perimeter {perimeter}")]
    StringTooShort { s: f64, perimeter: f64 },
    #[error("could not bracket a root: {0}")]
    RootBracketFailure(String),
    #[error("caustic sample ({0}, {1}) lies outside the table")]
    CausticNotInside(f64, f64),
    #[error("alpha = {0} outside the admissible range")]
    AlphaOutOfRange(f64),
    #[error("{0}")]
    InfeasibleAlpha(Infeasibility),
    #[error("displacement brackets [{lo}, {hi}] do not straddle 1")]
    MixingFailure { lo: f64, hi: f64 },
    #[error("quadrature resolutions disagree by {0:e}")]
    QuadratureNonConvergence(f64),
    #[error("|p'| = {value:e} at s = {s}")]
    DerivativeVanishes { s: f64, value: f64 },
    #[error("explicit table deviates from the generic string construction by {0:e}")]
    OracleMismatch(f64),
    #[error("insufficient resolution: {0}")]
    InsufficientResolution(String),
    #[error("grazing ray, theta = {0}")]
    GrazingRay(f64),
    #[error("ray from sigma = {0} does not meet the boundary")]
    NoIntersection(f64),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Stable variant name, used as the prefix of machine-readable error lines.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonFinite(..) => "NonFinite",
            Error::PointInsideBody(..) => "PointInsideBody",
            Error::DegenerateBody => "DegenerateBody",
            Error::InvalidCurve(_) => "InvalidCurve",
            Error::StringTooShort { .. } => "StringTooShort",
            Error::RootBracketFailure(_) => "RootBracketFailure",
            Error::CausticNotInside(..) => "CausticNotInside",
            Error::AlphaOutOfRange(_) => "AlphaOutOfRange",
            Error::InfeasibleAlpha(_) => "InfeasibleAlpha",
            Error::MixingFailure { .. } => "MixingFailure",
            Error::QuadratureNonConvergence(_) => "QuadratureNonConvergence",
            Error::DerivativeVanishes { .. } => "DerivativeVanishes",
            Error::OracleMismatch(_) => "OracleMismatch",
            Error::InsufficientResolution(_) => "InsufficientResolution",
            Error::GrazingRay(_) => "GrazingRay",
            Error::NoIntersection(_) => "NoIntersection",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse { .. } => "Parse",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

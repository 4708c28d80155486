use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("distribution has no atoms")]
    Empty,

    #[error("atom {index} is not finite")]
    NonFinite { index: usize },

    #[error("atom {index} is zero; the support must avoid the origin")]
    ZeroAtom { index: usize },

    #[error("atom {index} has invalid weight {weight}")]
    InvalidWeight { index: usize, weight: f64 },

    #[error("weights sum to {sum}, expected 1 within 1e-9")]
    WeightSum { sum: f64 },

    #[error("E[Z^-1] has modulus {modulus:e}, below the degeneracy threshold {eps:e}")]
    DegenerateMean { modulus: f64, eps: f64 },

    #[error("support point {index} is {value}, a harmonic mean needs positive support")]
    InvalidSupport { index: usize, value: f64 },

    #[error("point {modulus:e} away from the origin cannot be inverted")]
    NearPole { modulus: f64 },

    #[error("circline is degenerate (empty or a single point)")]
    DegenerateCircline,

    #[error("inverted circline is degenerate")]
    DegenerateImage,

    #[error("region contains the origin in its interior")]
    ContainsOrigin,

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("points coincide: {0}")]
    CoincidentPoints(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

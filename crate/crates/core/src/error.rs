use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid screen grid: {0}")]
    InvalidGrid(String),

    #[error("invalid quadrature settings: {0}")]
    InvalidQuadrature(String),

    #[error("coincident points: propagator distance is zero")]
    CoincidentPoints,

    #[error("inter-slit propagator requires two distinct slits")]
    SameSlit,

    #[error("quadrature did not converge: relative change {change:.3e} on node doubling exceeds {tol:.3e}")]
    NotConverged { change: f64, tol: f64 },

    #[error("non-finite value produced in {0}")]
    NonFinite(&'static str),

    #[error("profile length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("profiles are not sampled on a common grid")]
    GridMismatch,

    #[error("degenerate normalization: P_AB(0) = {0}")]
    DegenerateNorm(f64),

    #[error("detector efficiency {0} outside [0, 1]")]
    InvalidEfficiency(f64),

    #[error("detector overlap {name} = {value} outside [0, 1]")]
    InvalidOverlap { name: &'static str, value: f64 },

    #[error("inversion is singular at zero detector efficiency")]
    SingularInversion,

    #[error("unknown detector setup `{0}`")]
    UnknownSetup(String),

    #[error("averaging window [{y1}, {y2}] is empty or outside the grid")]
    InvalidWindow { y1: f64, y2: f64 },
}

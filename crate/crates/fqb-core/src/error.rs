//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by parameter validation and the simulation operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("site count must be at least 1, got {0}")]
    SiteCount(usize),

    #[error("site count {0} exceeds the state-vector cap of 30 sites")]
    TooManySites(usize),

    #[error("nearest-neighbor coupling needs at least 2 sites, got {0}")]
    NearestNeighborSites(usize),

    #[error("omega must be positive, got {0}")]
    NonPositiveOmega(f64),

    #[error("interval durations must be nonnegative, got tau0={0}, tau1={1}")]
    NegativeDuration(f64, f64),

    #[error("parameter {0} must be finite")]
    NonFiniteParam(&'static str),

    #[error("phase table has {got} entries, state dimension is {want}")]
    PhaseTableLength { want: usize, got: usize },

    #[error("amplitude buffer has {got} entries, expected {want}")]
    AmplitudeLength { want: usize, got: usize },

    #[error("state has {state} sites but operator was built for {operator}")]
    DimensionMismatch { state: usize, operator: usize },

    #[error("zero total period: charging power is undefined for n > 0")]
    ZeroPeriod,

    #[error("subsystem must contain between 1 and n_sites-1 sites, got {got} of {n_sites}")]
    BipartitionSize { got: usize, n_sites: usize },

    #[error("subsystem of {0} sites exceeds the dense reduced-matrix cap of {1}")]
    BipartitionTooLarge(usize, usize),

    #[error("subsystem site index {site} out of range for {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("duplicate subsystem site index {0}")]
    DuplicateSite(usize),

    #[error("series contains no records")]
    EmptySeries,

    #[error("dense oracle supports at most {cap} sites, got {got}")]
    DenseCap { cap: usize, got: usize },

    #[error("matrix contains non-finite entries")]
    NonFiniteMatrix,

    #[error("matrix dimensions do not match: {0} vs {1}")]
    MatrixDimension(usize, usize),

    #[error("sweep grid is empty")]
    EmptyGrid,

    #[error("sweep grid values must be strictly increasing (offending value {0})")]
    GridNotIncreasing(f64),

    #[error("sweep grid values must be nonnegative, got {0}")]
    NegativeGridValue(f64),

    #[error("sweep sizes must be at least 2, got {0}")]
    SweepSize(usize),

    #[error("landscape table supports at most 12 sites, got {0}")]
    LandscapeCap(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

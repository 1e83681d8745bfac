use thiserror::Error;

/// Errors raised by the numerical modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("geometry: invalid domain: {0}")]
    InvalidSpec(String),

    #[error("geometry: degenerate triangle {triangle} (signed area {area:e})")]
    DegenerateCell { triangle: usize, area: f64 },

    #[error("shells: a hole of positive radius is required")]
    HoleRequired,

    #[error("shells: argument {value} outside [{lower}, {upper}]")]
    OutOfRange { value: f64, lower: f64, upper: f64 },

    #[error("shells: corrector rate violates r_eps = o(eps^q): {0}")]
    RateViolation(String),

    #[error("discretize: mesh has no inner boundary to eliminate")]
    NothingToEliminate,

    #[error("eigensolve: interior block is not positive definite (pivot {pivot} = {value:e})")]
    SingularInterior { pivot: usize, value: f64 },

    #[error("eigensolve: matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("analysis: every triangle is below the zero tolerance")]
    AllNeutral,

    #[error("analysis: check not applicable: {0}")]
    NotApplicable(String),

    #[error("experiments: radius {radius} has only {layers} radial layers in the transition region")]
    ScheduleTooCoarse { radius: f64, layers: usize },

    #[error("experiments: enclosing radius {enclosing} does not exceed max boundary radius {max_radius}")]
    InvalidEnclosure { enclosing: f64, max_radius: f64 },

    #[error("experiments: invalid plan: {0}")]
    InvalidPlan(String),
}

pub type Result<T> = std::result::Result<T, Error>;

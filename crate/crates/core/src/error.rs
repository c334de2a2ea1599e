use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rotation axis is not unit length (norm {norm})")]
    NonUnitAxis { norm: f64 },

    #[error("matrix is not a proper rotation (‖RᵀR − I‖∞ = {orthogonality}, det = {det})")]
    NotARotation { orthogonality: f64, det: f64 },

    /// A node line (or the Euler nutation axis) is undefined at this state.
    #[error("chart singular: {projection} (ratio {ratio})")]
    ChartSingular { projection: &'static str, ratio: f64 },

    #[error("angular momentum is zero")]
    ZeroMomentum,

    #[error("invalid Andoyer state: {0}")]
    InvalidState(String),

    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("invalid inertia tensor: {0}")]
    InvalidInertia(String),

    #[error("inertia tensor is singular (condition number {condition:e})")]
    SingularInertia { condition: f64 },

    #[error("fixture generation failed: {0}")]
    Fixture(String),

    /// Finite differences at `h` and `h/2` disagree beyond the tolerance.
    #[error("finite-difference step unreliable in {check}: estimates at h and h/2 differ by {discrepancy:e}")]
    StepTooSmall { check: &'static str, discrepancy: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

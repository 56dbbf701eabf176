//! Error type shared by all geometry, measure, and dynamics operations.

/// Errors raised by configuration validation and geometric operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Two inputs that must agree (point count, dimension, radii) do not.
    #[error("mismatched {what}: {left} vs {right}")]
    Mismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },

    /// A ball index outside `0..N`.
    #[error("ball index {index} out of range for {count} balls")]
    IndexOutOfRange { index: usize, count: usize },

    /// Two centers coincide where a radical hyperplane is required.
    #[error("centers {i} and {j} coincide; radical hyperplane undefined")]
    CoincidentCenters { i: usize, j: usize },

    /// `closest_point_in_lens` was asked for a point of an empty intersection.
    #[error("balls {i} and {j} do not intersect")]
    EmptyLens { i: usize, j: usize },

    /// A motion constructor was given a pair that is not an expansion.
    #[error(
        "configuration is not an expansion: pair ({i},{j}) contracts from {before} to {after}"
    )]
    NotAnExpansion {
        i: usize,
        j: usize,
        before: f64,
        after: f64,
    },

    /// Monte Carlo estimators need at least one sample.
    #[error("sample count must be positive")]
    ZeroSamples,

    /// A finite-difference stencil left the valid parameter range.
    #[error("finite-difference stencil leaves valid range: {what}")]
    StencilOutOfRange { what: String },

    /// An operation was invoked outside its supported (dimension, order) set.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Construction-time validation failure.
    #[error("invalid {what}: {why}")]
    Invalid { what: &'static str, why: String },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

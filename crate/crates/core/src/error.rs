//! Error type shared across the crate.

/// Everything that can go wrong when constructing channels, states or
/// discrete spectra. Variants are grouped by nature: physics-domain
/// failures (the requested state does not exist) versus numeric
/// degeneracies (a transform or solver cannot proceed).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// kappa^2 - a1^2 + a2^2 <= 0: no real effective orbital parameter.
    #[error("channel does not bind: kappa^2 - a1^2 + a2^2 = {discriminant:.6e} <= 0")]
    NonBindingChannel { discriminant: f64 },

    /// Similarity transform is singular (c d = 0 or det S = 0).
    #[error("degenerate similarity transform: {reason}")]
    DegenerateTransform { reason: String },

    /// The energy quadratic has no root in the bound-state window.
    #[error("no bound state: {reason}")]
    NoBoundState { reason: String },

    /// Root finder exhausted its iteration budget.
    #[error("root finder did not converge within {budget} iterations")]
    NonConvergence { budget: usize },

    /// Radial potential requested at r <= 0.
    #[error("radial potential evaluated at r = {r:.6e} <= 0")]
    OriginSingularity { r: f64 },

    /// Shape-invariance remainder evaluated at lambda = 1, where the
    /// shifted denominator vanishes.
    #[error("remainder has a pole at lambda = 1")]
    PoleAtOne,

    /// Operator output would be singular at the origin.
    #[error("operator output has leading power {power:.6e} <= 0, irregular at the origin")]
    IrregularResult { power: f64 },

    /// E A1 + M A2 <= 0: the exponential tail does not decay.
    #[error("non-normalizable state: E*A1 + M*A2 = {q:.6e} <= 0")]
    UnboundState { q: f64 },

    /// Ladder recursion depth guard.
    #[error("ladder depth {n} exceeds the guard limit {limit}")]
    DepthLimit { n: u32, limit: u32 },

    /// k_plus = 0: the intertwining relation cannot be inverted.
    #[error("k_plus = 0: intertwining relation is not invertible")]
    DegenerateKPlus,

    /// L2 norm integral diverges at the origin.
    #[error("norm integral diverges: leading power {power:.6e} <= -1/2")]
    DivergentNorm { power: f64 },

    /// Argument outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Eigenvalue index at or beyond the matrix dimension.
    #[error("eigenvalue index {index} out of spectrum (dimension {dim})")]
    IndexOutOfSpectrum { index: usize, dim: usize },

    /// Target state does not fit inside the radial box.
    #[error(
        "grid too small: classical turning point {turning_point:.3} exceeds 0.6*r_max = {limit:.3}"
    )]
    GridTooSmall { turning_point: f64, limit: f64 },

    /// Defect function has no sign change over the scanned window.
    #[error("no sign change bracketed for the defect function")]
    NoRootBracketed,
}

/// True for errors that mean "the requested physics does not exist",
/// as opposed to a numeric degeneracy in the machinery.
impl Error {
    pub fn is_physics_domain(&self) -> bool {
        matches!(
            self,
            Error::NonBindingChannel { .. }
                | Error::NoBoundState { .. }
                | Error::OriginSingularity { .. }
                | Error::PoleAtOne
                | Error::IrregularResult { .. }
                | Error::UnboundState { .. }
                | Error::DepthLimit { .. }
                | Error::Domain(_)
                | Error::GridTooSmall { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

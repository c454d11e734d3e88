//! Error types shared across the crate.

use thiserror::Error;

/// One scenario-validation failure with a stable machine-readable code.
///
/// Validation collects every violation before reporting, so a bad scenario
/// file surfaces all of its problems in one pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Stable code, e.g. `"assumption-4"` or `"positivity"`.
    pub code: &'static str,
    /// Human-readable message naming the violated model assumption.
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}] {}", self.code, self.message)
    }
}

fn join_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(Violation::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Debug, Error)]
pub enum SimError {
    /// A distribution lacks the capability an estimator needs
    /// (e.g. a density derivative for the third-order recursion).
    #[error("capability: {0}")]
    Capability(String),

    /// A derivative beyond the declared smoothness order was requested.
    #[error("smoothness: {0}")]
    Smoothness(String),

    /// dF/dx vanished at the sampled point, so the pathwise derivative
    /// of the draw is undefined there.
    #[error("degenerate density: dF/dx vanishes at x = {at}")]
    DegenerateDensity { at: f64 },

    /// A finite-difference stencil point left the valid theta region.
    #[error("parameter region: {0}")]
    ParameterRegion(String),

    /// Two reports disagree on horizon or statistic kinds.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// The requested oracle does not cover this scenario.
    #[error("unsupported scenario: {0}")]
    UnsupportedScenario(String),

    /// Adaptive quadrature could not meet the requested tolerance.
    #[error("convergence: {0}")]
    Convergence(String),

    /// Theta sits too close to a parameter-region boundary to difference.
    #[error("boundary: {0}")]
    Boundary(String),

    /// Malformed scenario file.
    #[error("parse: {0}")]
    Parse(String),

    /// Scenario violates one or more model assumptions.
    #[error("validation failed:\n{}", join_violations(.0))]
    Validation(Vec<Violation>),
}

impl SimError {
    /// Stable machine-readable code for the error category.
    pub fn code(&self) -> &'static str {
        match self {
            SimError::Capability(_) => "capability",
            SimError::Smoothness(_) => "smoothness",
            SimError::DegenerateDensity { .. } => "degenerate-density",
            SimError::ParameterRegion(_) => "parameter-region",
            SimError::ShapeMismatch(_) => "shape-mismatch",
            SimError::UnsupportedScenario(_) => "unsupported-scenario",
            SimError::Convergence(_) => "convergence",
            SimError::Boundary(_) => "boundary",
            SimError::Parse(_) => "parse",
            SimError::Validation(_) => "validation",
        }
    }

    /// True when the error indicates a bad configuration rather than a
    /// runtime/numerical failure. The CLI maps this to exit code 2.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            SimError::Parse(_)
                | SimError::Validation(_)
                | SimError::UnsupportedScenario(_)
                | SimError::ParameterRegion(_)
                | SimError::Boundary(_)
                | SimError::Capability(_)
                | SimError::Smoothness(_)
        )
    }
}

use serde::{Deserialize, Serialize};

/// Numerical decision thresholds used throughout the crate.
///
/// `rank_tol` is a relative singular-value cutoff (rank and nullspace
/// decisions), `spec_tol` is the radius within which two eigenvalues are
/// considered equal, and `residual_tol` is the acceptance residual for
/// membership, closure and identity checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub rank_tol: f64,
    pub spec_tol: f64,
    pub residual_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            rank_tol: 1e-9,
            spec_tol: 1e-7,
            residual_tol: 1e-8,
        }
    }
}

impl TolerancePolicy {
    /// Policy with every threshold scaled by `factor`. Verification suites
    /// assert at 10x the construction tolerance to keep accumulated rounding
    /// from producing false failures.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            rank_tol: self.rank_tol * factor,
            spec_tol: self.spec_tol * factor,
            residual_tol: self.residual_tol * factor,
        }
    }

    /// Eigenvalue matching radius for a matrix of the given norm.
    pub fn spec_radius(&self, norm: f64) -> f64 {
        self.spec_tol * norm.max(1.0)
    }

    /// Membership/closure residual threshold for an object of the given norm.
    pub fn residual_at(&self, norm: f64) -> f64 {
        self.residual_tol * norm.max(1.0)
    }

    pub fn validate(&self) -> crate::Result<()> {
        if !(self.rank_tol > 0.0 && self.spec_tol > 0.0 && self.residual_tol > 0.0) {
            return Err(crate::Error::Precondition(
                "tolerances must be strictly positive".into(),
            ));
        }
        if self.rank_tol >= 1.0 {
            return Err(crate::Error::Precondition("rank_tol must be < 1".into()));
        }
        Ok(())
    }
}

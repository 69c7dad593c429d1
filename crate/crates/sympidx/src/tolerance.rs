use serde::{Deserialize, Serialize};

/// Numerical thresholds used by the linear-algebra and index engines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Bound on `‖MᵀJM − J‖∞`, relative to `max(1, ‖M‖∞²)`.
    pub tol_sym: f64,
    /// Residual (radians) below which an angle snaps to an exact multiple of π.
    pub tol_rat: f64,
    /// Singular values below `tol_rank · √max(1, σ_max)` count as zero.
    pub tol_rank: f64,
    /// Denominator bound for rational-angle detection.
    pub q_max: u32,
    /// Eigenvalues with `||λ| − 1|` below this lie on the unit circle.
    pub tol_unit: f64,
    /// Numeric angles closer than this to a small-denominator fraction, but not
    /// close enough to snap, are reported as undecided.
    pub tol_undecided: f64,
    /// Starting radius used to group numerically split eigenvalues of one
    /// Jordan block; groups whose centroid is not an eigenvalue are re-split.
    pub cluster_radius: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_sym: 1e-10,
            tol_rat: 1e-8,
            tol_rank: 1e-9,
            q_max: 64,
            tol_unit: 1e-6,
            tol_undecided: 1e-5,
            cluster_radius: 1e-1,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> crate::Result<()> {
        let positive = [
            ("tol_sym", self.tol_sym),
            ("tol_rat", self.tol_rat),
            ("tol_rank", self.tol_rank),
            ("tol_unit", self.tol_unit),
            ("tol_undecided", self.tol_undecided),
            ("cluster_radius", self.cluster_radius),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(crate::Error::Validation(alloc::format!(
                    "tolerance {name} must be positive and finite, got {v}"
                )));
            }
        }
        if self.q_max == 0 {
            return Err(crate::Error::Validation("q_max must be at least 1".into()));
        }
        Ok(())
    }
}

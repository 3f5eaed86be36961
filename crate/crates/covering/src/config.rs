//! Configurations, certificates, and budgets for homothet coverings.

use covfun_core::{GeomError, GeomResult, Point};
use serde::{Deserialize, Serialize};

/// Margin separating "inside a translate" from "witness outside all
/// translates"; gauges in the open band around the ratio force subdivision.
pub const TAU_COV: f64 = 1e-7;

/// A candidate covering: `m` translates of the `ratio`-scaled body, each
/// shifted by one of the `centers` (scaling taken about the body's
/// reference point).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverConfig {
    pub ratio: f64,
    pub centers: Vec<Point>,
}

impl CoverConfig {
    pub fn new(ratio: f64, centers: Vec<Point>) -> GeomResult<CoverConfig> {
        if !(ratio > 0.0 && ratio <= 1.0) {
            return Err(GeomError::BadParameter(format!(
                "covering ratio must lie in (0, 1], got {ratio}"
            )));
        }
        if centers.is_empty() {
            return Err(GeomError::BadParameter("covering needs at least one center".into()));
        }
        let dim = centers[0].dim();
        if centers.iter().any(|c| c.dim() != dim) {
            return Err(GeomError::DimensionMismatch { expected: dim, got: 0 });
        }
        Ok(CoverConfig { ratio, centers })
    }

    pub fn dim(&self) -> usize {
        self.centers[0].dim()
    }
}

/// Outcome of a covering verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Covered,
    Uncovered { witness: Point },
    Unknown { depth_reached: u32 },
}

impl Verdict {
    pub fn is_covered(&self) -> bool {
        matches!(self, Verdict::Covered)
    }
}

/// Verification record: the verdict plus the work done to reach it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverCertificate {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub cells_examined: u64,
    pub max_depth: u32,
    pub margin: f64,
}

/// Knobs for the subdivision verifier.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub max_depth: u32,
    pub margin: f64,
    pub cell_cap: u64,
    /// Boundary mesh resolution for smooth bodies: segment count in the
    /// plane, per-face grid size in space. `None` picks a default.
    pub mesh_resolution: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_depth: 40, margin: TAU_COV, cell_cap: 100_000_000, mesh_resolution: None }
    }
}

/// Resource limits for the placement search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_time: f64,
    pub max_iterations: usize,
    pub seed: u64,
    pub starts: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_time: 60.0, max_iterations: 200, seed: 0, starts: 16 }
    }
}

impl SearchBudget {
    pub fn validate(&self) -> GeomResult<()> {
        if self.max_time <= 0.0 || self.max_iterations == 0 || self.starts == 0 {
            return Err(GeomError::BadParameter("search budget fields must be positive".into()));
        }
        Ok(())
    }
}

/// A verified upper bound on the covering functional for one body and one
/// translate count.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchResult {
    pub r_upper: f64,
    pub config: CoverConfig,
    pub certificate: CoverCertificate,
    pub volume_floor: f64,
}

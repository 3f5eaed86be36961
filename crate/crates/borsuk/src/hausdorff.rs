//! Hausdorff distance between convex bodies via support-function gaps.

use covfun_core::{grids, minkowski, ConvexBody, GeomError, GeomResult};

/// Direction-grid size. The sampled maximum equals the true distance when a
/// maximizing direction lies on the grid, and underestimates otherwise.
pub const HAUSDORFF_GRID: usize = 1 << 14;

/// Largest support gap max_u |h(K1, u) - h(K2, u)| over the direction grid.
pub fn hausdorff_distance(k1: &ConvexBody, k2: &ConvexBody) -> GeomResult<f64> {
    if k1.dim() != k2.dim() {
        return Err(GeomError::DimensionMismatch { expected: k1.dim(), got: k2.dim() });
    }
    let mut best = 0.0_f64;
    for u in grids::directions(k1.dim(), HAUSDORFF_GRID) {
        let gap = (minkowski::support(k1, &u)? - minkowski::support(k2, &u)?).abs();
        best = best.max(gap);
    }
    Ok(best)
}

//! Constant-width bodies and their insphere/circumsphere bounds.

use covfun_core::{grids, metrics, minkowski, ConvexBody, GeomError, GeomResult};
use serde::Serialize;

/// Direction count used when verifying constant width by sampling.
pub const WIDTH_GRID: usize = 1 << 14;
/// Tolerance on sampled widths around 1.
pub const WIDTH_TOL: f64 = 1e-4;

/// Width-1 Reuleaux polygon built on a regular k-gon (k odd, 3 through 21).
pub fn reuleaux_polygon(k: usize) -> GeomResult<ConvexBody> {
    ConvexBody::reuleaux_polygon(k)
}

/// Circumradius-to-inradius bound (sqrt(2n^2+2n) + n) / (n + 2) for
/// width-1 bodies in dimension n.
pub fn mu_ratio(n: usize) -> f64 {
    let nf = n as f64;
    ((2.0 * nf * nf + 2.0 * nf).sqrt() + nf) / (nf + 2.0)
}

/// Outcome of [`constant_width_radii_check`]: the measured radii, the
/// dimension-n bracket they must fall in, and the ratio bound mu.
#[derive(Clone, Debug, Serialize)]
pub struct WidthRadiiReport {
    pub holds: bool,
    pub inradius: f64,
    pub circumradius: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub mu: f64,
}

/// For a body of constant width 1, checks the chain
/// 1 - sqrt(n/(2n+2)) <= r <= R <= sqrt(n/(2n+2)) with slack 1e-6.
///
/// Constant width is verified first by sampling [`WIDTH_GRID`] directions
/// within [`WIDTH_TOL`]; anything else is rejected.
pub fn constant_width_radii_check(body: &ConvexBody, n: usize) -> GeomResult<WidthRadiiReport> {
    if n < 2 {
        return Err(GeomError::BadParameter("the radii bounds need dimension at least 2".into()));
    }
    for u in grids::directions(body.dim(), WIDTH_GRID) {
        let w = minkowski::width(body, &u)?;
        if (w - 1.0).abs() > WIDTH_TOL {
            return Err(GeomError::VerificationFailed(format!(
                "body is not of constant width 1: sampled width {w:.6}"
            )));
        }
    }
    let radii = metrics::euclidean_radii(body)?;
    let nf = n as f64;
    let upper_bound = (nf / (2.0 * nf + 2.0)).sqrt();
    let lower_bound = 1.0 - upper_bound;
    let r = radii.inradius;
    let big_r = radii.circumradius;
    let holds =
        r - lower_bound >= -1e-6 && big_r - r >= -1e-6 && upper_bound - big_r >= -1e-6;
    Ok(WidthRadiiReport {
        holds,
        inradius: r,
        circumradius: big_r,
        lower_bound,
        upper_bound,
        mu: mu_ratio(n),
    })
}

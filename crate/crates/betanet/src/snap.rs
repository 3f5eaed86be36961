//! Snapping a normalized body onto the radial grids of a cap cover.
//!
//! For each cap direction the body keeps the outermost grid point it
//! contains; the hull of those points is an inner polytope whose distance to
//! the body is certified: an inner ball by construction, an outer factor by
//! measuring support ratios on a dense direction grid against the theorem's
//! residual bound.

use crate::caps::CapCover;
use crate::index::MaxDotIndex;
use crate::params::NetParams;
use covfun_core::body::ConvexBody;
use covfun_core::error::{GeomError, GeomResult};
use covfun_core::point::Point;
use covfun_core::{grids, minkowski, TAU_GEO};
use rayon::prelude::*;
use serde::Serialize;

/// Direction-grid resolution for the outer-factor measurement.
const SIGMA_GRID: usize = 100_000;

/// Vertex list of the snapped polytope.
#[derive(Clone, Debug, Serialize)]
pub struct SnappedPolytope {
    pub vertices: Vec<Point>,
}

/// The snapped polytope with its certified sandwich factors.
#[derive(Clone, Debug, Serialize)]
pub struct SnapResult {
    #[serde(rename = "P")]
    pub p: SnappedPolytope,
    /// Certified radius of the ball inside the polytope.
    pub inner_factor: f64,
    /// Largest measured support ratio minus one: the body sits inside
    /// `(1 + sigma)` times the polytope.
    #[serde(rename = "sigma")]
    pub outer_factor: f64,
    /// Distance bound between body and polytope on the log scale.
    pub bm_log_bound: f64,
    pub params: NetParams,
}

/// Snap `body` (normalized so the unit ball fits inside and the radius-`n`
/// ball around it) to the radial grids of `caps`, certifying the result.
pub fn snap_to_net(
    body: &ConvexBody,
    params: &NetParams,
    caps: &CapCover,
) -> GeomResult<SnapResult> {
    let dim = body.dim();
    if dim != params.n || dim != caps.n {
        return Err(GeomError::DimensionMismatch { expected: params.n, got: dim });
    }
    if (caps.theta - params.theta).abs() > 1e-12 * params.theta.max(1.0) {
        return Err(GeomError::BadParameter(format!(
            "cap cover was built for radius {} but the parameters ask for {}",
            caps.theta, params.theta
        )));
    }
    let nf = dim as f64;
    let mf = params.m as f64;
    let inner_radius = 1.0 - params.theta / nf;

    let k0 = origin_anchored(body)?;
    // touch the lazy facet cache once before fanning out
    let _ = minkowski::radial(&k0, &Point::basis(0, dim))?;

    let units: Vec<Point> = caps
        .points
        .iter()
        .map(|x| {
            x.normalize().ok_or_else(|| {
                GeomError::Degenerate("cap point at the origin cannot be normalized".into())
            })
        })
        .collect::<GeomResult<Vec<_>>>()?;

    // outermost radial grid point still inside the body, per cap
    let reach: Vec<f64> = units
        .par_iter()
        .map(|u| minkowski::radial(&k0, u))
        .collect::<GeomResult<Vec<_>>>()?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &r in &reach {
        lo = lo.min(r);
        hi = hi.max(r);
    }
    if !(lo >= 1.0 - 1e-9 && hi <= nf + 1e-6) {
        return Err(GeomError::VerificationFailed(format!(
            "body is not John-normalized: radial span [{lo}, {hi}] must sit in [1, {nf}]; \
             run john_normalize first"
        )));
    }

    let mut vertices = Vec::with_capacity(caps.points.len());
    let mut norms = Vec::with_capacity(caps.points.len());
    let mut min_norm = f64::INFINITY;
    for (i, x) in caps.points.iter().enumerate() {
        let steps = ((reach[i] - 1.0).max(0.0) * mf / (nf - 1.0) + 1e-12).floor().min(mf);
        let rho = 1.0 + steps * (nf - 1.0) / mf;
        if rho > reach[i] * (1.0 + 1e-9) + 1e-12 {
            return Err(GeomError::VerificationFailed(format!(
                "snapped vertex left the body along cap {i}: norm {rho} vs radial {}",
                reach[i]
            )));
        }
        vertices.push(x.scale(rho / nf));
        norms.push(rho);
        min_norm = min_norm.min(rho);
    }

    // a cap within spherical radius theta' of any direction holds a vertex of
    // norm at least min_norm, so the polytope contains this ball
    let inner_factor = min_norm * caps.theta_prime.cos();
    if inner_factor < inner_radius - TAU_GEO {
        return Err(GeomError::VerificationFailed(format!(
            "inner ball certificate {inner_factor} fell below {inner_radius}"
        )));
    }

    let index = if dim == 3 { Some(MaxDotIndex::new(&units, &norms)) } else { None };
    let flat: Vec<(f64, f64)> = if dim == 2 {
        units.iter().zip(&norms).map(|(u, w)| (w * u.x(), w * u.y())).collect()
    } else {
        Vec::new()
    };
    let dirs = grids::directions(dim, SIGMA_GRID);
    let sigma = dirs
        .par_iter()
        .map(|u| {
            let body_support = minkowski::support(body, u)?;
            let poly_support = match &index {
                Some(ix) => ix.max_dot(u).0,
                None => flat
                    .iter()
                    .map(|(x, y)| x * u.x() + y * u.y())
                    .fold(f64::NEG_INFINITY, f64::max),
            };
            if poly_support <= 0.0 {
                return Err(GeomError::numerical(
                    "snap",
                    format!("snapped polytope has nonpositive support along {u:?}"),
                ));
            }
            Ok(body_support / poly_support - 1.0)
        })
        .try_reduce(|| 0.0f64, |a, b| Ok(a.max(b)))?;

    if sigma > params.contraction + TAU_GEO {
        return Err(GeomError::VerificationFailed(format!(
            "outer factor {sigma} exceeds the certified contraction {}; \
             this indicates a bug, the bound is a theorem",
            params.contraction
        )));
    }

    Ok(SnapResult {
        p: SnappedPolytope { vertices },
        inner_factor,
        outer_factor: sigma,
        bm_log_bound: (1.0 + sigma).ln(),
        params: *params,
    })
}

/// View of the body whose gauge is anchored at the origin, using the exact
/// vertex representation when one is available.
fn origin_anchored(body: &ConvexBody) -> GeomResult<ConvexBody> {
    let zero = Point::zero(body.dim());
    let anchored = match body.polytope_vertices()? {
        Some(verts) if verts.len() > body.dim() => {
            ConvexBody::vpolytope(verts)?.with_reference(zero)
        }
        _ => body.clone().with_reference(zero),
    };
    anchored.map_err(|e| match e {
        GeomError::ReferenceNotInterior(_) => GeomError::VerificationFailed(
            "body is not John-normalized: the origin is not interior; run john_normalize first"
                .into(),
        ),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::cap_cover;
    use crate::params::net_params;
    use covfun_core::john::john_normalize;
    use covfun_core::point::Mat;
    use covfun_core::shapes;
    use rand::Rng;
    use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
    use std::f64::consts::PI;
    use std::sync::OnceLock;

    fn quick_net() -> &'static (NetParams, CapCover) {
        static NET: OnceLock<(NetParams, CapCover)> = OnceLock::new();
        NET.get_or_init(|| {
            let params = net_params(3, 2.0).unwrap();
            let caps = cap_cover(3, params.theta).unwrap();
            (params, caps)
        })
    }

    #[test]
    fn unit_ball_snaps_to_norm_one_vertices() {
        let (params, caps) = quick_net();
        let result = snap_to_net(&shapes::ball3(), params, caps).unwrap();
        assert_eq!(result.p.vertices.len(), caps.count());
        for v in &result.p.vertices {
            assert!((v.norm() - 1.0).abs() <= 1e-9);
        }
        assert!(result.outer_factor >= 0.0);
        assert!(result.outer_factor <= 0.05, "sigma {}", result.outer_factor);
        assert!(result.inner_factor >= 1.0 - params.theta / 3.0 - 1e-9);
        assert!((result.bm_log_bound - (1.0 + result.outer_factor).ln()).abs() <= 1e-15);
    }

    #[test]
    fn outer_ball_snaps_onto_the_cap_points() {
        let (params, caps) = quick_net();
        let stretch = Mat::from_rows(&[
            vec![3.0, 0.0, 0.0],
            vec![0.0, 3.0, 0.0],
            vec![0.0, 0.0, 3.0],
        ]);
        let triple =
            ConvexBody::affine_image(stretch, Point::zero(3), shapes::ball3()).unwrap();
        let result = snap_to_net(&triple, params, caps).unwrap();
        for (v, x) in result.p.vertices.iter().zip(&caps.points) {
            assert!(v.dist(x) <= 1e-9, "vertex {v:?} is not the cap point {x:?}");
        }
        assert!(result.outer_factor <= params.contraction + 1e-9);
    }

    #[test]
    fn result_serializes_with_the_contract_keys() {
        let (params, caps) = quick_net();
        let result = snap_to_net(&shapes::ball3(), params, caps).unwrap();
        let json = serde_json::to_value(&result).unwrap();
        assert!(json.get("P").unwrap().get("vertices").unwrap().is_array());
        assert!(json.get("sigma").unwrap().is_number());
        assert!(json.get("bm_log_bound").unwrap().is_number());
        assert_eq!(json.get("params").unwrap().get("m").unwrap().as_u64(), Some(params.m as u64));
    }

    fn random_john_polytope(seed: u64) -> ConvexBody {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let pts: Vec<Point> = (0..13)
                .map(|_| {
                    let z: f64 = rng.gen_range(-1.0..1.0);
                    let phi: f64 = rng.gen_range(0.0..2.0 * PI);
                    let r: f64 = rng.gen_range(0.7..1.5);
                    let s = (1.0 - z * z).sqrt();
                    Point::new3(r * s * phi.cos(), r * s * phi.sin(), r * z)
                })
                .collect();
            let Ok(body) = ConvexBody::vpolytope(pts) else { continue };
            if let Ok((_, normalized)) = john_normalize(&body) {
                return normalized;
            }
        }
    }

    #[test]
    fn random_polytope_certifies_the_half_gap_contract() {
        let params = net_params(3, 0.5).unwrap();
        let caps = cap_cover(3, params.theta).unwrap();
        let body = random_john_polytope(41);
        let result = snap_to_net(&body, &params, &caps).unwrap();
        assert!(result.outer_factor <= params.contraction + 1e-9);
        assert!(result.bm_log_bound <= 0.5);
        // spot-check vertex membership through an independent gauge call
        let zero = Point::zero(3);
        let verts = body.polytope_vertices().unwrap().unwrap();
        let anchored = ConvexBody::vpolytope(verts).unwrap().with_reference(zero).unwrap();
        for v in result.p.vertices.iter().step_by(5000) {
            assert!(minkowski::gauge(&anchored, v).unwrap() <= 1.0 + 1e-8);
        }
    }

    #[test]
    fn rejects_unnormalized_and_mismatched_input() {
        let (params, caps) = quick_net();
        // wide cube: contains the unit ball but pokes out of the outer ball
        let err = snap_to_net(&shapes::cube(3.0), params, caps).unwrap_err();
        assert!(err.to_string().contains("John"));
        // small cube: unit ball does not fit
        let err = snap_to_net(&shapes::cube(0.5), params, caps).unwrap_err();
        assert!(err.to_string().contains("John"));
        // planar body against solid parameters
        let err = snap_to_net(&shapes::square(1.0), params, caps).unwrap_err();
        assert!(matches!(err, GeomError::DimensionMismatch { .. }));
        // cover built at a different radius
        let other = cap_cover(3, 0.4).unwrap();
        let err = snap_to_net(&shapes::ball3(), params, &other).unwrap_err();
        assert!(matches!(err, GeomError::BadParameter(_)));
    }
}

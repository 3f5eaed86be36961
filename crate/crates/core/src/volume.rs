//! Volumes (areas in the plane) of the supported body kinds.

use crate::body::{BodyKind, ConvexBody, LpExponent};
use crate::convert;
use crate::error::{GeomError, GeomResult};
use crate::point::Point;

/// Volume of the body (area for dim 2).
pub fn volume(body: &ConvexBody) -> GeomResult<f64> {
    match body.kind() {
        BodyKind::VPolytope(data) => polytope_volume(&data.vertices, body.dim()),
        BodyKind::HPolytope(data) => {
            let verts = data.vertices()?;
            polytope_volume(&verts, body.dim())
        }
        BodyKind::LpBall { p, dim } => Ok(lp_ball_volume(*p, *dim)),
        BodyKind::Cone { base, apex } => {
            let base_area = volume(base)?;
            Ok(base_area * apex.z().abs() / 3.0)
        }
        BodyKind::AffineImage { matrix, inner, .. } => {
            Ok(matrix.det().abs() * volume(inner)?)
        }
        BodyKind::ReuleauxPolygon { k } => Ok(reuleaux_area(*k)),
    }
}

/// Exact polytope volume by triangulating from the vertex centroid.
fn polytope_volume(vertices: &[Point], dim: usize) -> GeomResult<f64> {
    if vertices.len() < dim + 1 {
        return Err(GeomError::Degenerate("too few vertices for a full-dimensional body".into()));
    }
    match dim {
        2 => {
            let hull = convert::polygon_ccw(vertices)?;
            let mut area = 0.0;
            for i in 0..hull.len() {
                let a = hull[i];
                let b = hull[(i + 1) % hull.len()];
                area += a.x() * b.y() - b.x() * a.y();
            }
            Ok(0.5 * area.abs())
        }
        3 => {
            let (_, tris) = convert::hull3d(vertices)?;
            let n = vertices.len() as f64;
            let c = vertices
                .iter()
                .fold(Point::zero(3), |acc, v| acc + *v)
                .scale(1.0 / n);
            let mut vol = 0.0;
            for t in &tris {
                let a = t.points[0] - c;
                let b = t.points[1] - c;
                let d = t.points[2] - c;
                vol += a.dot(&b.cross(&d)).abs();
            }
            Ok(vol / 6.0)
        }
        d => Err(GeomError::Unsupported(format!("volume in dimension {d}"))),
    }
}

/// Closed-form volume of the unit lp ball: 2^n Γ(1+1/p)^n / Γ(1+n/p).
pub fn lp_ball_volume(p: LpExponent, dim: usize) -> f64 {
    let n = dim as f64;
    match p {
        LpExponent::Infinity => 2f64.powi(dim as i32),
        LpExponent::Finite(p) => {
            let g1 = libm::tgamma(1.0 + 1.0 / p);
            let gn = libm::tgamma(1.0 + n / p);
            2f64.powi(dim as i32) * g1.powf(n) / gn
        }
    }
}

/// Area of the width-1 arc polygon on k vertices: inner k-gon plus k circular
/// segments of radius 1 and angle π/k.
pub fn reuleaux_area(k: usize) -> f64 {
    let kf = k as f64;
    let r = ConvexBody::reuleaux_circumradius(k);
    let polygon = 0.5 * kf * r * r * (2.0 * std::f64::consts::PI / kf).sin();
    let seg_angle = std::f64::consts::PI / kf;
    let segments = 0.5 * kf * (seg_angle - seg_angle.sin());
    polygon + segments
}

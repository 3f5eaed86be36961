//! Gauge (Minkowski functional) and support function evaluation.
//!
//! The gauge of `K` at `p` is taken relative to the stored reference point
//! `a`: the smallest `t >= 0` with `p - a` in `t (K - a)`. Scaling a body by
//! `r` downstream always means the homothety about its reference point, so
//! `gauge(K, p - x) <= r` tests membership of `p` in that homothet shifted
//! by `x`.

use crate::body::{BodyKind, ConvexBody, LpExponent};
use crate::error::{GeomError, GeomResult};
use crate::point::Point;

/// Gauge of the body at `p`, relative to the body's reference point.
pub fn gauge(body: &ConvexBody, p: &Point) -> GeomResult<f64> {
    if p.dim() != body.dim() {
        return Err(GeomError::DimensionMismatch { expected: body.dim(), got: p.dim() });
    }
    let a = body.reference_point();
    match body.kind() {
        BodyKind::VPolytope(data) => {
            let facets = data.facets()?;
            let mut best: f64 = 0.0;
            for f in facets.iter() {
                let den = f.offset - f.normal.dot(&a);
                if den <= 0.0 {
                    return Err(GeomError::ReferenceNotInterior(
                        "reference point violates a facet".into(),
                    ));
                }
                let num = f.normal.dot(p) - f.normal.dot(&a);
                if num > best * den {
                    best = num / den;
                }
            }
            Ok(best.max(0.0))
        }
        BodyKind::HPolytope(data) => {
            let mut best: f64 = 0.0;
            for (n, b) in data.normals.iter().zip(&data.offsets) {
                let den = b - n.dot(&a);
                if den <= 0.0 {
                    return Err(GeomError::ReferenceNotInterior(
                        "reference point violates a halfspace".into(),
                    ));
                }
                let num = n.dot(p) - n.dot(&a);
                if num > best * den {
                    best = num / den;
                }
            }
            Ok(best.max(0.0))
        }
        BodyKind::LpBall { p: exp, .. } => {
            if a.norm() <= 1e-14 {
                Ok(lp_norm(*exp, p))
            } else {
                gauge_via_membership(body, p)
            }
        }
        BodyKind::ReuleauxPolygon { k } => {
            let vertices = ConvexBody::reuleaux_vertices(*k);
            let u = *p - a;
            if u.norm() <= 1e-300 {
                return Ok(0.0);
            }
            let mut g: f64 = 0.0;
            for c in &vertices {
                let w = a - *c;
                let uw = u.dot(&w);
                let disc = uw * uw - u.norm_sq() * (w.norm_sq() - 1.0);
                // interior reference keeps |w| < 1, so the discriminant is positive
                let t = (-uw + disc.sqrt()) / u.norm_sq();
                g = g.max(1.0 / t);
            }
            Ok(g)
        }
        BodyKind::AffineImage { matrix, shift, inner } => {
            // the pull-back formula is valid only when the reference point is
            // the image of the inner reference; a re-anchored image needs the
            // generic path
            let natural = matrix.apply(&inner.reference_point()) + *shift;
            if natural.max_abs_diff(&a) > 1e-12 * (1.0 + natural.norm()) {
                return gauge_via_membership(body, p);
            }
            let inv = matrix
                .inverse()
                .ok_or_else(|| GeomError::Degenerate("affine matrix is singular".into()))?;
            let pre = inv.apply(&(*p - *shift));
            gauge(inner, &pre)
        }
        BodyKind::Cone { .. } => gauge_via_membership(body, p),
    }
}

/// Support function h(K, u) = max over K of <u, x>.
pub fn support(body: &ConvexBody, u: &Point) -> GeomResult<f64> {
    if u.dim() != body.dim() {
        return Err(GeomError::DimensionMismatch { expected: body.dim(), got: u.dim() });
    }
    match body.kind() {
        BodyKind::VPolytope(data) => Ok(data
            .vertices
            .iter()
            .map(|v| v.dot(u))
            .fold(f64::NEG_INFINITY, f64::max)),
        BodyKind::HPolytope(data) => {
            let verts = data.vertices()?;
            Ok(verts.iter().map(|v| v.dot(u)).fold(f64::NEG_INFINITY, f64::max))
        }
        BodyKind::LpBall { p, .. } => Ok(lp_norm(p.conjugate(), u)),
        BodyKind::Cone { base, apex } => {
            let base_support = support(base, &u.project_xy())?;
            Ok(base_support.max(apex.dot(u)))
        }
        BodyKind::AffineImage { matrix, shift, inner } => {
            let pulled = matrix.transpose().apply(u);
            Ok(support(inner, &pulled)? + shift.dot(u))
        }
        BodyKind::ReuleauxPolygon { k } => {
            let vertices = ConvexBody::reuleaux_vertices(*k);
            let k = *k;
            let un = u.norm();
            if un <= 1e-300 {
                return Ok(0.0);
            }
            let mut best = vertices.iter().map(|v| v.dot(u)).fold(f64::NEG_INFINITY, f64::max);
            let theta = u.y().atan2(u.x());
            for (j, c) in vertices.iter().enumerate() {
                // arc centered at vertex j spans between the two opposite vertices
                let e1 = vertices[(j + (k - 1) / 2) % k] - *c;
                let e2 = vertices[(j + (k + 1) / 2) % k] - *c;
                let a1 = e1.y().atan2(e1.x());
                let a2 = e2.y().atan2(e2.x());
                if angle_in_ccw_span(theta, a1, a2) {
                    best = best.max(c.dot(u) + un);
                }
            }
            Ok(best)
        }
    }
}

/// Width of the body in direction u (support both ways), for unit u.
pub fn width(body: &ConvexBody, u: &Point) -> GeomResult<f64> {
    Ok(support(body, u)? + support(body, &(-*u))?)
}

/// Membership test with tolerance: gauge(p) <= 1 + tol.
pub fn contains(body: &ConvexBody, p: &Point, tol: f64) -> GeomResult<bool> {
    Ok(gauge(body, p)? <= 1.0 + tol)
}

/// Boundary point of the body along direction `u` from the reference point.
pub fn boundary_point(body: &ConvexBody, u: &Point) -> GeomResult<Point> {
    let a = body.reference_point();
    let g = gauge(body, &(a + *u))?;
    if g <= 1e-300 {
        return Err(GeomError::Degenerate("direction has zero gauge".into()));
    }
    Ok(a + u.scale(1.0 / g))
}

/// Radial distance from the reference point to the boundary along `u`.
pub fn radial(body: &ConvexBody, u: &Point) -> GeomResult<f64> {
    let a = body.reference_point();
    let g = gauge(body, &(a + *u))?;
    if g <= 1e-300 {
        return Err(GeomError::Degenerate("direction has zero gauge".into()));
    }
    Ok(u.norm() / g)
}

pub fn lp_norm(p: LpExponent, x: &Point) -> f64 {
    match p {
        LpExponent::Infinity => x.coords().iter().fold(0.0, |m, c| m.max(c.abs())),
        LpExponent::Finite(p) if p == 1.0 => x.coords().iter().map(|c| c.abs()).sum(),
        LpExponent::Finite(p) if p == 2.0 => x.norm(),
        LpExponent::Finite(p) => {
            // factor out the largest component to dodge overflow for large p
            let mx = x.coords().iter().fold(0.0_f64, |m, c| m.max(c.abs()));
            if mx == 0.0 {
                return 0.0;
            }
            let s: f64 = x.coords().iter().map(|c| (c.abs() / mx).powf(p)).sum();
            mx * s.powf(1.0 / p)
        }
    }
}

/// Direct membership test, independent of the gauge and of the stored
/// reference point. `tol` is an absolute slack on the per-kind residual.
pub fn member_exact(body: &ConvexBody, p: &Point, tol: f64) -> GeomResult<bool> {
    match body.kind() {
        BodyKind::VPolytope(data) => {
            let facets = data.facets()?;
            Ok(facets.iter().all(|f| f.normal.dot(p) <= f.offset + tol))
        }
        BodyKind::HPolytope(data) => Ok(data
            .normals
            .iter()
            .zip(&data.offsets)
            .all(|(n, b)| n.dot(p) <= b + tol)),
        BodyKind::LpBall { p: exp, .. } => Ok(lp_norm(*exp, p) <= 1.0 + tol),
        BodyKind::ReuleauxPolygon { k } => {
            let centers = ConvexBody::reuleaux_vertices(*k);
            Ok(centers.iter().all(|c| p.dist(c) <= 1.0 + tol))
        }
        BodyKind::Cone { base, apex } => {
            let h = apex.z();
            let t = p.z() / h;
            if !(-tol..=1.0 + tol).contains(&t) {
                return Ok(false);
            }
            if t >= 1.0 - 1e-12 {
                return Ok(p.project_xy().dist(&apex.project_xy()) <= tol);
            }
            let q = (p.project_xy() - apex.project_xy().scale(t)).scale(1.0 / (1.0 - t));
            member_exact(base, &q, tol)
        }
        BodyKind::AffineImage { matrix, shift, inner } => {
            let inv = matrix
                .inverse()
                .ok_or_else(|| GeomError::Degenerate("affine matrix is singular".into()))?;
            member_exact(inner, &inv.apply(&(*p - *shift)), tol)
        }
    }
}

/// Gauge by bisection on the membership predicate; handles any body kind.
fn gauge_via_membership(body: &ConvexBody, p: &Point) -> GeomResult<f64> {
    let a = body.reference_point();
    let u = *p - a;
    if u.norm() <= 1e-300 {
        return Ok(0.0);
    }
    // find an upper bound on the gauge by doubling
    let probe = |lambda: f64| -> GeomResult<bool> {
        let q = a + u.scale(1.0 / lambda);
        member_exact(body, &q, 1e-12)
    };
    let mut hi = 1.0;
    let mut grow = 0;
    while !probe(hi)? {
        hi *= 2.0;
        grow += 1;
        if grow > 200 {
            return Err(GeomError::numerical("gauge", "no finite gauge found (unbounded direction?)"));
        }
    }
    let mut lo = hi / 2.0;
    if hi == 1.0 {
        // membership at 1: shrink for a lower bracket
        lo = 1e-12;
        while probe(lo)? && lo > 1e-300 {
            if lo <= 1e-290 {
                return Ok(0.0);
            }
            lo *= 0.5;
        }
        lo = lo.max(1e-300);
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if probe(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn angle_in_ccw_span(theta: f64, from: f64, to: f64) -> bool {
    let twopi = 2.0 * std::f64::consts::PI;
    let norm = |x: f64| ((x % twopi) + twopi) % twopi;
    let t = norm(theta - from);
    let span = norm(to - from);
    t <= span
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::ConvexBody;
    use crate::shapes;

    #[test]
    fn gauge_of_square_is_linf() {
        let sq = shapes::square(1.0);
        assert!((gauge(&sq, &Point::new2(0.5, -0.25)).unwrap() - 0.5).abs() < 1e-12);
        assert!((gauge(&sq, &Point::new2(1.0, 1.0)).unwrap() - 1.0).abs() < 1e-12);
        assert!((gauge(&sq, &Point::new2(3.0, 0.0)).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn lp_gauge_closed_forms() {
        let b1 = ConvexBody::lpball(LpExponent::Finite(1.0), 3).unwrap();
        let binf = ConvexBody::lpball(LpExponent::Infinity, 3).unwrap();
        let p = Point::new3(0.25, -0.5, 0.125);
        assert!((gauge(&b1, &p).unwrap() - 0.875).abs() < 1e-12);
        assert!((gauge(&binf, &p).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn support_of_lp_ball_is_dual_norm() {
        let b = ConvexBody::lpball(LpExponent::Finite(2.0), 3).unwrap();
        let u = Point::new3(3.0, 4.0, 0.0);
        assert!((support(&b, &u).unwrap() - 5.0).abs() < 1e-12);
        let b1 = ConvexBody::lpball(LpExponent::Finite(1.0), 2).unwrap();
        let u2 = Point::new2(3.0, -4.0);
        assert!((support(&b1, &u2).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn cone_membership_and_gauge() {
        let base = shapes::square(1.0);
        let cone = ConvexBody::cone(base, Point::new3(0.0, 0.0, 2.0)).unwrap();
        assert!(member_exact(&cone, &Point::new3(0.0, 0.0, 1.9), 1e-9).unwrap());
        assert!(member_exact(&cone, &Point::new3(0.9, 0.9, 0.05), 1e-9).unwrap());
        assert!(!member_exact(&cone, &Point::new3(0.9, 0.9, 1.0), 1e-9).unwrap());
        let g = gauge(&cone, &cone.reference_point()).unwrap();
        assert!(g < 1e-9, "gauge at reference should vanish, got {g}");
        // boundary point along +x from the reference has gauge 1
        let bp = boundary_point(&cone, &Point::new3(1.0, 0.0, 0.0)).unwrap();
        let g = gauge(&cone, &bp).unwrap();
        assert!((g - 1.0).abs() < 1e-9, "boundary gauge {g}");
    }

    #[test]
    fn reuleaux_triangle_has_width_one() {
        let r = ConvexBody::reuleaux_polygon(3).unwrap();
        for i in 0..64 {
            let a = i as f64 * std::f64::consts::PI / 32.0;
            let u = Point::new2(a.cos(), a.sin());
            let w = width(&r, &u).unwrap();
            assert!((w - 1.0).abs() < 1e-9, "width {w} at angle {a}");
        }
    }

    #[test]
    fn reuleaux_gauge_matches_boundary() {
        let r = ConvexBody::reuleaux_polygon(5).unwrap();
        for i in 0..40 {
            let a = i as f64 * std::f64::consts::PI / 20.0;
            let u = Point::new2(a.cos(), a.sin());
            let bp = boundary_point(&r, &u).unwrap();
            assert!((gauge(&r, &bp).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn affine_gauge_pulls_back() {
        let sq = shapes::square(1.0);
        let m = crate::point::Mat::from_rows(&[vec![2.0, 1.0], vec![0.0, 1.0]]);
        let shifted = ConvexBody::affine_image(m, Point::new2(3.0, -1.0), sq).unwrap();
        // image of (1, 1) is (3, 1) + shift = (6, 0)
        let g = gauge(&shifted, &Point::new2(6.0, 0.0)).unwrap();
        assert!((g - 1.0).abs() < 1e-12);
    }
}

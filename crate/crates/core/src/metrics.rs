//! Metric quantities: diameter, inradius/circumradius with centers.

use crate::body::{BodyKind, ConvexBody, LpExponent};
use crate::convert;
use crate::error::{GeomError, GeomResult};
use crate::grids;
use crate::lp;
use crate::minkowski;
use crate::point::Point;

/// Direction-grid sizes for smooth bodies (results report which was used).
pub const GRID_2D: usize = 1 << 14;
pub const GRID_3D: usize = 100_000;

#[derive(Clone, Debug)]
pub struct EuclideanRadii {
    pub inradius: f64,
    pub in_center: Point,
    pub circumradius: f64,
    pub circ_center: Point,
    /// Some(n) when a direction grid of n samples was used (smooth bodies).
    pub grid_resolution: Option<usize>,
}

/// Euclidean diameter of the body.
pub fn diameter(body: &ConvexBody) -> GeomResult<f64> {
    Ok(diameter_detailed(body)?.0)
}

/// Diameter plus the direction-grid resolution when one was needed.
pub fn diameter_detailed(body: &ConvexBody) -> GeomResult<(f64, Option<usize>)> {
    match body.kind() {
        BodyKind::LpBall { p, dim } => {
            let n = *dim as f64;
            let d = match p {
                LpExponent::Infinity => 2.0 * n.sqrt(),
                LpExponent::Finite(pv) if *pv <= 2.0 => 2.0,
                LpExponent::Finite(pv) => 2.0 * n.powf(0.5 - 1.0 / pv),
            };
            return Ok((d, None));
        }
        BodyKind::ReuleauxPolygon { .. } => return Ok((1.0, None)),
        _ => {}
    }
    if let Some(vertices) = body.polytope_vertices()? {
        let mut best: f64 = 0.0;
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                best = best.max(vertices[i].dist(&vertices[j]));
            }
        }
        return Ok((best, None));
    }
    // smooth fallback: the diameter of a convex body equals its maximal width
    let n = if body.dim() == 2 { GRID_2D } else { GRID_3D };
    let mut best: f64 = 0.0;
    for u in grids::directions(body.dim(), n) {
        best = best.max(minkowski::width(body, &u)?);
    }
    Ok((best, Some(n)))
}

/// Largest inscribed and smallest enclosing Euclidean balls.
pub fn euclidean_radii(body: &ConvexBody) -> GeomResult<EuclideanRadii> {
    match body.kind() {
        BodyKind::LpBall { p, dim } => {
            let n = *dim as f64;
            let zero = Point::zero(*dim);
            let (r, cr) = match p {
                LpExponent::Infinity => (1.0, n.sqrt()),
                LpExponent::Finite(pv) if *pv <= 2.0 => (n.powf(0.5 - 1.0 / pv), 1.0),
                LpExponent::Finite(pv) => (1.0, n.powf(0.5 - 1.0 / pv)),
            };
            return Ok(EuclideanRadii {
                inradius: r,
                in_center: zero,
                circumradius: cr,
                circ_center: zero,
                grid_resolution: None,
            });
        }
        BodyKind::ReuleauxPolygon { k } => {
            let cr = ConvexBody::reuleaux_circumradius(*k);
            let zero = Point::zero(2);
            return Ok(EuclideanRadii {
                inradius: 1.0 - cr,
                in_center: zero,
                circumradius: cr,
                circ_center: zero,
                grid_resolution: None,
            });
        }
        _ => {}
    }
    if let Some(vertices) = body.polytope_vertices()? {
        let (circ_center, circumradius) = min_enclosing_ball(&vertices, body.dim())?;
        let facets = convert::facets_of_vertices(&vertices)?;
        let (in_center, inradius) = chebyshev_center(&facets, body.dim(), &vertices)?;
        return Ok(EuclideanRadii {
            inradius,
            in_center,
            circumradius,
            circ_center,
            grid_resolution: None,
        });
    }
    // smooth fallback: boundary samples for the circumball, sampled
    // supporting halfspaces for the inball
    let dim = body.dim();
    let n = if dim == 2 { GRID_2D } else { GRID_3D };
    let dirs = grids::directions(dim, n);
    let mut boundary = Vec::with_capacity(dirs.len());
    for u in &dirs {
        boundary.push(minkowski::boundary_point(body, u)?);
    }
    let (circ_center, circumradius) = min_enclosing_ball(&boundary, dim)?;
    let mut facets = Vec::with_capacity(dirs.len());
    for u in &dirs {
        facets.push(crate::body::Facet { normal: *u, offset: minkowski::support(body, u)? });
    }
    let (in_center, inradius) = chebyshev_center(&facets, dim, &boundary)?;
    Ok(EuclideanRadii {
        inradius,
        in_center,
        circumradius,
        circ_center,
        grid_resolution: Some(n),
    })
}

/// Chebyshev center: the deepest point w.r.t. the facet constraints.
fn chebyshev_center(
    facets: &[crate::body::Facet],
    dim: usize,
    scale_hint: &[Point],
) -> GeomResult<(Point, f64)> {
    let bound = scale_hint.iter().map(|p| p.norm()).fold(1.0, f64::max) * 4.0;
    let mut a = Vec::with_capacity(facets.len());
    let mut b = Vec::with_capacity(facets.len());
    for f in facets {
        let mut row = [0.0; 4];
        for j in 0..dim {
            row[j] = f.normal.coords()[j];
        }
        row[dim] = 1.0; // + r on the inside of each constraint
        a.push(row);
        b.push(f.offset);
    }
    let mut c = [0.0; 4];
    c[dim] = 1.0;
    let x = lp::maximize(&a, &b, c, dim + 1, bound, 0x5eed)?;
    let center = Point::from_slice(&x[..dim]);
    Ok((center, x[dim]))
}

/// Smallest enclosing Euclidean ball (Welzl's move-to-front algorithm).
pub fn min_enclosing_ball(points: &[Point], dim: usize) -> GeomResult<(Point, f64)> {
    if points.is_empty() {
        return Err(GeomError::Degenerate("no points".into()));
    }
    // deterministic shuffle improves the expected running time
    let mut pts: Vec<Point> = points.to_vec();
    let n = pts.len();
    let mut state = 0x9e3779b97f4a7c15u64;
    for i in (1..n).rev() {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let j = (state >> 33) as usize % (i + 1);
        pts.swap(i, j);
    }
    let max_support = dim + 1;
    let mut support: Vec<Point> = Vec::with_capacity(max_support);
    let ball = welzl(&mut pts, n, &mut support, max_support, dim)?;
    Ok(ball)
}

fn welzl(
    pts: &mut [Point],
    n: usize,
    support: &mut Vec<Point>,
    max_support: usize,
    dim: usize,
) -> GeomResult<(Point, f64)> {
    let mut ball = ball_of_support(support, dim)?;
    if support.len() == max_support {
        return Ok(ball);
    }
    for i in 0..n {
        let p = pts[i];
        if p.dist(&ball.0) > ball.1 + 1e-10 {
            support.push(p);
            ball = welzl(pts, i, support, max_support, dim)?;
            support.pop();
            // move-to-front
            let q = pts[i];
            pts.copy_within(0..i, 1);
            pts[0] = q;
        }
    }
    Ok(ball)
}

fn ball_of_support(support: &[Point], dim: usize) -> GeomResult<(Point, f64)> {
    match support.len() {
        0 => Ok((Point::zero(dim), 0.0)),
        1 => Ok((support[0], 0.0)),
        2 => {
            let c = (support[0] + support[1]).scale(0.5);
            Ok((c, c.dist(&support[0])))
        }
        3 => circumcircle3(support[0], support[1], support[2], dim),
        4 => circumsphere4(support[0], support[1], support[2], support[3]),
        _ => Err(GeomError::numerical("min ball", "support set too large")),
    }
}

/// Circumcenter of three points (planar, or embedded in 3-D).
///
/// Solves (x-a)·u = |u|²/2, (x-a)·v = |v|²/2 for x = a + αu + βv.
fn circumcircle3(a: Point, b: Point, c: Point, _dim: usize) -> GeomResult<(Point, f64)> {
    let u = b - a;
    let v = c - a;
    let uu = u.norm_sq();
    let vv = v.norm_sq();
    let uv = u.dot(&v);
    let d = uu * vv - uv * uv;
    let scale = uu.max(vv).max(1e-300);
    if d < 1e-20 * scale * scale {
        // nearly collinear: fall back to the longest-edge midpoint ball
        return Ok(longest_edge_ball(&[a, b, c]));
    }
    let alpha = vv * (uu - uv) / (2.0 * d);
    let beta = uu * (vv - uv) / (2.0 * d);
    let center = a + u.scale(alpha) + v.scale(beta);
    Ok((center, center.dist(&a)))
}

fn longest_edge_ball(pts: &[Point]) -> (Point, f64) {
    let mut best = (pts[0], pts[0], 0.0);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = pts[i].dist(&pts[j]);
            if d > best.2 {
                best = (pts[i], pts[j], d);
            }
        }
    }
    let c = (best.0 + best.1).scale(0.5);
    (c, best.2 / 2.0)
}

fn circumsphere4(a: Point, b: Point, c: Point, d: Point) -> GeomResult<(Point, f64)> {
    // solve 2 (p_i - a) . x = |p_i|^2 - |a|^2 for the center x
    let rows = [b - a, c - a, d - a];
    let rhs = [
        0.5 * (b.norm_sq() - a.norm_sq()),
        0.5 * (c.norm_sq() - a.norm_sq()),
        0.5 * (d.norm_sq() - a.norm_sq()),
    ];
    let det = rows[0].dot(&rows[1].cross(&rows[2]));
    if det.abs() < 1e-18 {
        return Ok(longest_edge_ball(&[a, b, c, d]));
    }
    // Cramer's rule, one coordinate at a time
    let col = |k: usize| -> f64 {
        let m: Vec<Point> = rows
            .iter()
            .zip(&rhs)
            .map(|(r, &v)| {
                let mut cds = [r.x(), r.y(), r.z()];
                cds[k] = v;
                Point::new3(cds[0], cds[1], cds[2])
            })
            .collect();
        m[0].dot(&m[1].cross(&m[2])) / det
    };
    let center = Point::new3(col(0), col(1), col(2));
    Ok((center, center.dist(&a)))
}

//! Conversions between vertex and halfspace representations (dimensions 2 and 3).
//!
//! The hull algorithms target the modest sizes that flow through the public
//! conversion API (at most a few thousand points); the incremental 3-D hull
//! recomputes the horizon from scratch per insertion, which keeps it simple
//! and is fast enough at these sizes.

use crate::body::{ConvexBody, Facet};
use crate::error::{GeomError, GeomResult};
use crate::point::Point;

/// Which representation `convert` should produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    Vertices,
    Halfspaces,
}

/// Convert a polytopal body to the requested representation.
pub fn convert(body: &ConvexBody, target: Representation) -> GeomResult<ConvexBody> {
    let Some(vertices) = body.polytope_vertices()? else {
        return Err(GeomError::Unsupported(
            "representation conversion is only defined for polytopal bodies".into(),
        ));
    };
    match target {
        Representation::Vertices => {
            let mut hull = hull_vertices(&vertices)?;
            sort_points(&mut hull);
            ConvexBody::vpolytope(hull)?.with_reference(body.reference_point())
        }
        Representation::Halfspaces => {
            let facets = facets_of_vertices(&vertices)?;
            let normals: Vec<Point> = facets.iter().map(|f| f.normal).collect();
            let offsets: Vec<f64> = facets.iter().map(|f| f.offset).collect();
            ConvexBody::hpolytope(normals, offsets)?.with_reference(body.reference_point())
        }
    }
}

/// Extreme points of a point set, in no particular order beyond determinism.
pub fn hull_vertices(points: &[Point]) -> GeomResult<Vec<Point>> {
    match points.first().map(|p| p.dim()) {
        Some(2) => Ok(hull2d(points)),
        Some(3) => {
            let (verts, _) = hull3d(points)?;
            Ok(verts)
        }
        _ => Err(GeomError::InvalidBody("empty point set".into())),
    }
}

/// Convex polygon boundary in counterclockwise order.
pub fn polygon_ccw(points: &[Point]) -> GeomResult<Vec<Point>> {
    if points.is_empty() || points[0].dim() != 2 {
        return Err(GeomError::InvalidBody("need 2-D points".into()));
    }
    let hull = hull2d(points);
    if hull.len() < 3 {
        return Err(GeomError::Degenerate("polygon hull is flat".into()));
    }
    Ok(hull)
}

/// Outer facet description (unit normals) of the hull of a point set.
pub fn facets_of_vertices(points: &[Point]) -> GeomResult<Vec<Facet>> {
    match points.first().map(|p| p.dim()) {
        Some(2) => {
            let hull = polygon_ccw(points)?;
            let mut facets = Vec::with_capacity(hull.len());
            for i in 0..hull.len() {
                let a = hull[i];
                let b = hull[(i + 1) % hull.len()];
                let edge = b - a;
                let n = Point::new2(edge.y(), -edge.x())
                    .normalize()
                    .ok_or_else(|| GeomError::Degenerate("zero-length polygon edge".into()))?;
                facets.push(Facet { normal: n, offset: n.dot(&a) });
            }
            Ok(facets)
        }
        Some(3) => {
            let (_, tris) = hull3d(points)?;
            Ok(dedup_planes(tris))
        }
        _ => Err(GeomError::InvalidBody("empty point set".into())),
    }
}

/// Vertices of the bounded intersection of halfspaces `<n_i, x> <= b_i`.
pub fn vertices_of_halfspaces(normals: &[Point], offsets: &[f64]) -> GeomResult<Vec<Point>> {
    let dim = normals.first().map(|n| n.dim()).ok_or_else(|| {
        GeomError::InvalidBody("empty halfspace list".into())
    })?;
    let scale = offsets.iter().fold(1.0_f64, |m, b| m.max(b.abs()));
    let feas_tol = 1e-9 * scale.max(1.0);
    let mut candidates: Vec<Point> = Vec::new();
    let m = normals.len();
    if dim == 2 {
        for i in 0..m {
            for j in (i + 1)..m {
                let d = normals[i].cross2(&normals[j]);
                if d.abs() < 1e-12 {
                    continue;
                }
                let x = (offsets[i] * normals[j].y() - offsets[j] * normals[i].y()) / d;
                let y = (normals[i].x() * offsets[j] - normals[j].x() * offsets[i]) / d;
                candidates.push(Point::new2(x, y));
            }
        }
    } else {
        for i in 0..m {
            for j in (i + 1)..m {
                for k in (j + 1)..m {
                    if let Some(p) = solve3(normals[i], normals[j], normals[k], offsets[i], offsets[j], offsets[k]) {
                        candidates.push(p);
                    }
                }
            }
        }
    }
    let mut vertices: Vec<Point> = Vec::new();
    'cand: for c in candidates {
        if !c.is_finite() {
            continue;
        }
        for (n, b) in normals.iter().zip(offsets) {
            if n.dot(&c) > b + feas_tol {
                continue 'cand;
            }
        }
        if !vertices.iter().any(|v| v.dist(&c) <= 1e-7 * scale.max(1.0)) {
            vertices.push(c);
        }
    }
    if vertices.len() < dim + 1 {
        return Err(GeomError::Degenerate(format!(
            "halfspace intersection yielded {} vertices (unbounded or empty interior?)",
            vertices.len()
        )));
    }
    // Bounded iff the normals positively span, i.e. the origin is strictly
    // inside their convex hull; otherwise a recession direction exists.
    let spanning = facets_of_vertices(normals)
        .map(|fs| fs.iter().all(|f| f.offset > 1e-9))
        .unwrap_or(false);
    if !spanning {
        return Err(GeomError::Degenerate(
            "halfspace intersection is unbounded (normals do not positively span)".into(),
        ));
    }
    sort_points(&mut vertices);
    Ok(vertices)
}

fn solve3(n1: Point, n2: Point, n3: Point, b1: f64, b2: f64, b3: f64) -> Option<Point> {
    let det = n1.dot(&n2.cross(&n3));
    if det.abs() < 1e-12 {
        return None;
    }
    let x = n2.cross(&n3).scale(b1) + n3.cross(&n1).scale(b2) + n1.cross(&n2).scale(b3);
    Some(x.scale(1.0 / det))
}

fn sort_points(points: &mut [Point]) {
    points.sort_by(|a, b| {
        a.coords()
            .partial_cmp(b.coords())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
}

// ---------------------------------------------------------------------------
// 2-D hull: Andrew's monotone chain.
// ---------------------------------------------------------------------------

fn hull2d(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    sort_points(&mut pts);
    pts.dedup_by(|a, b| a.dist(b) < 1e-14);
    if pts.len() < 3 {
        return pts;
    }
    let scale = pts.iter().map(|p| p.norm()).fold(1.0, f64::max);
    let eps = 1e-12 * scale * scale;
    let build = |iter: &mut dyn Iterator<Item = &Point>| {
        let mut chain: Vec<Point> = Vec::new();
        for &p in iter {
            while chain.len() >= 2 {
                let a = chain[chain.len() - 2];
                let b = chain[chain.len() - 1];
                if (b - a).cross2(&(p - a)) <= eps {
                    chain.pop();
                } else {
                    break;
                }
            }
            chain.push(p);
        }
        chain
    };
    let lower = build(&mut pts.iter());
    let upper = build(&mut pts.iter().rev());
    let mut hull = lower;
    hull.pop();
    hull.extend(upper);
    hull.pop();
    hull
}

// ---------------------------------------------------------------------------
// 3-D hull: incremental insertion with per-step horizon extraction.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct Tri {
    idx: [usize; 3],
    normal: Point,
    offset: f64,
}

fn tri_from(points: &[Point], a: usize, b: usize, c: usize, interior: &Point) -> Option<Tri> {
    let n = (points[b] - points[a]).cross(&(points[c] - points[a]));
    let n = n.normalize()?;
    let offset = n.dot(&points[a]);
    if n.dot(interior) > offset {
        // flip to make the normal outward
        let n = -n;
        Some(Tri { idx: [a, c, b], normal: n, offset: n.dot(&points[a]) })
    } else {
        Some(Tri { idx: [a, b, c], normal: n, offset })
    }
}

pub(crate) fn hull3d(points: &[Point]) -> GeomResult<(Vec<Point>, Vec<Tri3>)> {
    let pts: Vec<Point> = points.to_vec();
    let n = pts.len();
    if n < 4 {
        return Err(GeomError::Degenerate("3-D hull needs at least 4 points".into()));
    }
    let scale = pts.iter().map(|p| p.norm()).fold(1.0, f64::max);
    let eps = 1e-10 * scale;

    // Seed tetrahedron from four affinely independent points.
    let i0 = 0;
    let i1 = (1..n)
        .max_by(|&a, &b| cmp_f64(pts[a].dist(&pts[i0]), pts[b].dist(&pts[i0])))
        .unwrap();
    if pts[i1].dist(&pts[i0]) < eps {
        return Err(GeomError::Degenerate("all points coincide".into()));
    }
    let d01 = pts[i1] - pts[i0];
    let i2 = (0..n)
        .max_by(|&a, &b| {
            cmp_f64(
                d01.cross(&(pts[a] - pts[i0])).norm(),
                d01.cross(&(pts[b] - pts[i0])).norm(),
            )
        })
        .unwrap();
    if d01.cross(&(pts[i2] - pts[i0])).norm() < eps * d01.norm() {
        return Err(GeomError::Degenerate("points are collinear".into()));
    }
    let plane_n = d01.cross(&(pts[i2] - pts[i0])).normalize().unwrap();
    let i3 = (0..n)
        .max_by(|&a, &b| {
            cmp_f64(
                (plane_n.dot(&(pts[a] - pts[i0]))).abs(),
                (plane_n.dot(&(pts[b] - pts[i0]))).abs(),
            )
        })
        .unwrap();
    if plane_n.dot(&(pts[i3] - pts[i0])).abs() < eps {
        return Err(GeomError::Degenerate("points are coplanar".into()));
    }

    let interior = (pts[i0] + pts[i1] + pts[i2] + pts[i3]).scale(0.25);
    let mut faces: Vec<Tri> = Vec::new();
    for [a, b, c] in [[i0, i1, i2], [i0, i1, i3], [i0, i2, i3], [i1, i2, i3]] {
        faces.push(
            tri_from(&pts, a, b, c, &interior)
                .ok_or_else(|| GeomError::Degenerate("degenerate seed face".into()))?,
        );
    }

    let mut inserted = [i0, i1, i2, i3].to_vec();
    for p in 0..n {
        if inserted.contains(&p) {
            continue;
        }
        let visible: Vec<usize> = (0..faces.len())
            .filter(|&f| faces[f].normal.dot(&pts[p]) > faces[f].offset + eps)
            .collect();
        if visible.is_empty() {
            continue;
        }
        // Horizon edges occur exactly once among the visible faces. BTreeMap
        // keeps the rebuild order deterministic across runs.
        let mut edge_count: std::collections::BTreeMap<(usize, usize), usize> =
            std::collections::BTreeMap::new();
        for &f in &visible {
            let [a, b, c] = faces[f].idx;
            for (u, v) in [(a, b), (b, c), (c, a)] {
                *edge_count.entry((u.min(v), u.max(v))).or_insert(0) += 1;
            }
        }
        let mut new_faces: Vec<Tri> = Vec::new();
        for (&(u, v), &count) in &edge_count {
            if count == 1 {
                if let Some(t) = tri_from(&pts, u, v, p, &interior) {
                    new_faces.push(t);
                }
            }
        }
        if new_faces.is_empty() {
            continue;
        }
        let visible_set: std::collections::BTreeSet<usize> = visible.into_iter().collect();
        let mut kept: Vec<Tri> = faces
            .iter()
            .enumerate()
            .filter(|(i, _)| !visible_set.contains(i))
            .map(|(_, t)| *t)
            .collect();
        kept.extend(new_faces);
        faces = kept;
        inserted.push(p);
    }

    // Collect hull vertices and verify that every input point is enclosed.
    let mut on_hull: Vec<bool> = vec![false; n];
    for t in &faces {
        for &i in &t.idx {
            on_hull[i] = true;
        }
    }
    let check_tol = 1e-7 * scale;
    for (i, p) in pts.iter().enumerate() {
        for t in &faces {
            if t.normal.dot(p) > t.offset + check_tol {
                return Err(GeomError::numerical(
                    "hull3d",
                    format!("point {i} escapes facet by {:.3e}", t.normal.dot(p) - t.offset),
                ));
            }
        }
    }
    let verts: Vec<Point> = (0..n).filter(|&i| on_hull[i]).map(|i| pts[i]).collect();
    let tris: Vec<Tri3> = faces
        .iter()
        .map(|t| Tri3 { points: [pts[t.idx[0]], pts[t.idx[1]], pts[t.idx[2]]], normal: t.normal, offset: t.offset })
        .collect();
    Ok((verts, tris))
}

/// An outward-oriented hull triangle.
#[derive(Clone, Copy, Debug)]
pub struct Tri3 {
    pub points: [Point; 3],
    pub normal: Point,
    pub offset: f64,
}

fn dedup_planes(tris: Vec<Tri3>) -> Vec<Facet> {
    let mut facets: Vec<Facet> = Vec::new();
    for t in tris {
        let dup = facets
            .iter()
            .any(|f| f.normal.dist(&t.normal) < 1e-9 && (f.offset - t.offset).abs() < 1e-9 * t.offset.abs().max(1.0));
        if !dup {
            facets.push(Facet { normal: t.normal, offset: t.offset });
        }
    }
    facets
}

fn cmp_f64(a: f64, b: f64) -> std::cmp::Ordering {
    a.partial_cmp(&b).unwrap_or(std::cmp::Ordering::Equal)
}

/// Hull triangles of a polytopal body (for fan triangulation and rendering).
pub fn hull_triangles(body: &ConvexBody) -> GeomResult<Vec<Tri3>> {
    let Some(vertices) = body.polytope_vertices()? else {
        return Err(GeomError::Unsupported("hull triangles need a polytopal body".into()));
    };
    match body.dim() {
        3 => {
            let (_, tris) = hull3d(&vertices)?;
            Ok(tris)
        }
        _ => Err(GeomError::Unsupported("hull_triangles is 3-D only".into())),
    }
}

//! Certified verification that a body is covered by homothetic translates.
//!
//! The body (or, for smooth bodies, a slightly inflated polytopal outer
//! approximation of it) is triangulated into simplices fanned out from the
//! reference point. A simplex whose vertices all lie in one common translate
//! is covered — convexity makes the vertex test exact in real arithmetic —
//! and anything else is bisected along its longest edge until it is covered,
//! yields an uncovered witness point inside the body, or the depth budget
//! runs out.

use crate::config::{CoverCertificate, CoverConfig, Verdict, VerifyOptions};
use covfun_core::convert;
use covfun_core::{grids, minkowski};
use covfun_core::{ConvexBody, GeomError, GeomResult, Point};
use std::collections::VecDeque;

#[derive(Clone, Copy)]
struct Cell {
    verts: [Point; 4],
    depth: u32,
}

/// Verify a covering with default margin and cell budget.
pub fn verify_cover(
    body: &ConvexBody,
    cfg: &CoverConfig,
    max_depth: u32,
) -> GeomResult<CoverCertificate> {
    verify_cover_with(body, cfg, &VerifyOptions { max_depth, ..VerifyOptions::default() })
}

/// Verify a covering with explicit margin, depth, and cell limits.
pub fn verify_cover_with(
    body: &ConvexBody,
    cfg: &CoverConfig,
    opts: &VerifyOptions,
) -> GeomResult<CoverCertificate> {
    if cfg.dim() != body.dim() {
        return Err(GeomError::DimensionMismatch { expected: body.dim(), got: cfg.dim() });
    }
    if !(cfg.ratio > 0.0 && cfg.ratio <= 1.0) || cfg.centers.is_empty() {
        return Err(GeomError::BadParameter("invalid covering configuration".into()));
    }
    let dim = body.dim();
    let nv = dim + 1;
    let r = cfg.ratio;
    let margin = opts.margin;
    let (initial, _delta) = covering_domain(body, opts.mesh_resolution)?;

    let mut queue: VecDeque<Cell> = initial.into();
    let mut cells_examined: u64 = 0;
    let mut deepest: u32 = 0;
    let mut exhausted = false;

    'cells: while let Some(cell) = queue.pop_front() {
        cells_examined += 1;
        deepest = deepest.max(cell.depth);
        if cells_examined > opts.cell_cap {
            return Ok(certificate(
                Verdict::Unknown { depth_reached: deepest },
                cells_examined,
                opts,
            ));
        }

        // covered by one common translate?
        'centers: for x in &cfg.centers {
            for v in &cell.verts[..nv] {
                if minkowski::gauge(body, &(*v - *x))? > r - margin {
                    continue 'centers;
                }
            }
            continue 'cells;
        }

        // a vertex beyond every translate that lies in the body is a witness
        for v in &cell.verts[..nv] {
            let mut best = f64::INFINITY;
            for x in &cfg.centers {
                best = best.min(minkowski::gauge(body, &(*v - *x))?);
            }
            if best >= r + margin && minkowski::gauge(body, v)? <= 1.0 + 1e-12 {
                return Ok(certificate(Verdict::Uncovered { witness: *v }, cells_examined, opts));
            }
        }

        if cell.depth >= opts.max_depth {
            exhausted = true;
            continue;
        }
        let (a, b) = split(&cell, queue.len(), nv);
        queue.push_back(a);
        queue.push_back(b);
    }

    let verdict = if exhausted {
        Verdict::Unknown { depth_reached: deepest }
    } else {
        Verdict::Covered
    };
    Ok(certificate(verdict, cells_examined, opts))
}

fn certificate(verdict: Verdict, cells_examined: u64, opts: &VerifyOptions) -> CoverCertificate {
    CoverCertificate { verdict, cells_examined, max_depth: opts.max_depth, margin: opts.margin }
}

fn split(cell: &Cell, _queue_len: usize, nv: usize) -> (Cell, Cell) {
    let mut best = (0usize, 1usize);
    let mut best_len = -1.0f64;
    for i in 0..nv {
        for j in i + 1..nv {
            let len = cell.verts[i].dist(&cell.verts[j]);
            if len > best_len {
                best_len = len;
                best = (i, j);
            }
        }
    }
    let (i, j) = best;
    let mid = (cell.verts[i] + cell.verts[j]).scale(0.5);
    let mut a = *cell;
    let mut b = *cell;
    a.verts[j] = mid;
    b.verts[i] = mid;
    a.depth = cell.depth + 1;
    b.depth = cell.depth + 1;
    (a, b)
}

/// Simplices whose union contains the body, plus the inflation factor used
/// for smooth bodies (zero for polytopes).
fn covering_domain(body: &ConvexBody, mesh_resolution: Option<usize>) -> GeomResult<(Vec<Cell>, f64)> {
    let a = body.reference_point();
    if body.polytope_vertices()?.is_some() {
        let cells = match body.dim() {
            2 => {
                let hull = convert::convert(body, convert::Representation::Vertices)?;
                let verts = hull.polytope_vertices()?.expect("vertex conversion yields vertices");
                let ring = convert::polygon_ccw(&verts)?;
                fan2(&a, &ring, 1.0)
            }
            _ => {
                let tris = convert::hull_triangles(body)?;
                tris.iter()
                    .map(|t| Cell {
                        verts: [a, t.points[0], t.points[1], t.points[2]],
                        depth: 0,
                    })
                    .collect()
            }
        };
        return Ok((cells, 0.0));
    }

    // smooth body: radial piecewise-linear surface through boundary points,
    // inflated per-facet so the scaled fan provably contains the body
    match body.dim() {
        2 => {
            let n = mesh_resolution.unwrap_or(1024);
            let mut w = Vec::with_capacity(n);
            for u in grids::circle(n) {
                w.push(minkowski::boundary_point(body, &u)? - a);
            }
            let mut delta = 0.0f64;
            for i in 0..n {
                let p = w[i];
                let q = w[(i + 1) % n];
                let e = q - p;
                let nf = Point::new2(e.y(), -e.x())
                    .normalize()
                    .ok_or_else(|| GeomError::Degenerate("degenerate boundary edge".into()))?;
                let b = nf.dot(&p).min(nf.dot(&q));
                if b <= 0.0 {
                    return Err(GeomError::ReferenceNotInterior(
                        "boundary mesh edge faces the reference point".into(),
                    ));
                }
                let h = minkowski::support(body, &nf)? - nf.dot(&a);
                delta = delta.max(h / b - 1.0);
            }
            let ring: Vec<Point> = w.iter().map(|p| a + p.scale(1.0 + delta)).collect();
            Ok((fan2_pts(&a, &ring), delta))
        }
        _ => {
            let g = mesh_resolution.unwrap_or(32);
            let mesh = grids::cube_sphere_mesh(g);
            let mut w = Vec::with_capacity(mesh.vertices.len());
            for u in &mesh.vertices {
                w.push(minkowski::boundary_point(body, u)? - a);
            }
            let mut delta = 0.0f64;
            for t in &mesh.triangles {
                let (p, q, s) = (w[t[0]], w[t[1]], w[t[2]]);
                let mut nf = (q - p)
                    .cross(&(s - p))
                    .normalize()
                    .ok_or_else(|| GeomError::Degenerate("degenerate boundary triangle".into()))?;
                if nf.dot(&p) < 0.0 {
                    nf = -nf;
                }
                let b = nf.dot(&p).min(nf.dot(&q)).min(nf.dot(&s));
                if b <= 0.0 {
                    return Err(GeomError::ReferenceNotInterior(
                        "boundary mesh facet faces the reference point".into(),
                    ));
                }
                let h = minkowski::support(body, &nf)? - nf.dot(&a);
                delta = delta.max(h / b - 1.0);
            }
            let scale = 1.0 + delta;
            let cells = mesh
                .triangles
                .iter()
                .map(|t| Cell {
                    verts: [
                        a,
                        a + w[t[0]].scale(scale),
                        a + w[t[1]].scale(scale),
                        a + w[t[2]].scale(scale),
                    ],
                    depth: 0,
                })
                .collect();
            Ok((cells, delta))
        }
    }
}

fn fan2(a: &Point, ring: &[Point], scale: f64) -> Vec<Cell> {
    (0..ring.len())
        .map(|i| {
            let p = *a + (ring[i] - *a).scale(scale);
            let q = *a + (ring[(i + 1) % ring.len()] - *a).scale(scale);
            Cell { verts: [*a, p, q, *a], depth: 0 }
        })
        .collect()
}

fn fan2_pts(a: &Point, ring: &[Point]) -> Vec<Cell> {
    fan2(a, ring, 1.0)
}

/// The inflation factor the smooth-body path would use, exposed so callers
/// can budget their ratio slack against it.
pub fn smooth_inflation(body: &ConvexBody, mesh_resolution: Option<usize>) -> GeomResult<f64> {
    if body.polytope_vertices()?.is_some() {
        return Ok(0.0);
    }
    covering_domain(body, mesh_resolution).map(|(_, d)| d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use covfun_core::shapes;

    fn quad_centers() -> Vec<Point> {
        vec![
            Point::new2(-0.5, -0.5),
            Point::new2(0.5, -0.5),
            Point::new2(0.5, 0.5),
            Point::new2(-0.5, 0.5),
        ]
    }

    #[test]
    fn square_quadrants_cover_at_half() {
        let cfg = CoverConfig::new(0.5 + 1e-6, quad_centers()).unwrap();
        let cert = verify_cover_with(
            &shapes::square(1.0),
            &cfg,
            &VerifyOptions { margin: 1e-8, ..VerifyOptions::default() },
        )
        .unwrap();
        assert!(cert.verdict.is_covered(), "{:?}", cert.verdict);
    }

    #[test]
    fn square_quadrants_fail_below_half() {
        let cfg = CoverConfig::new(0.49, quad_centers()).unwrap();
        let cert = verify_cover(&shapes::square(1.0), &cfg, 30).unwrap();
        match cert.verdict {
            Verdict::Uncovered { witness } => {
                assert!(witness.norm() < 1e-12, "witness should be the center, got {witness:?}");
            }
            other => panic!("expected an uncovered witness, got {other:?}"),
        }
    }

    #[test]
    fn octahedron_axis_centers_cover_at_two_thirds() {
        // oracle: for any boundary point p of the cross-polytope pick a
        // coordinate j with |p_j| >= 1/3; the translate shifted by
        // sign(p_j) e_j / 3 absorbs p at ratio exactly 2/3 because
        // sum_k |p_k| - |p_j| + (|p_j| - 1/3) = 1 - 1/3
        let mut centers = Vec::new();
        for i in 0..3 {
            centers.push(Point::basis(i, 3).scale(1.0 / 3.0));
            centers.push(Point::basis(i, 3).scale(-1.0 / 3.0));
        }
        let cfg = CoverConfig::new(2.0 / 3.0 + 1e-9, centers).unwrap();
        let cert = verify_cover_with(
            &shapes::octahedron(),
            &cfg,
            &VerifyOptions { max_depth: 120, margin: 1e-10, ..VerifyOptions::default() },
        )
        .unwrap();
        assert!(cert.verdict.is_covered(), "{:?}", cert.verdict);
    }

    #[test]
    fn disc_half_discs_cover_at_sqrt_half() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let centers = (0..4)
            .map(|k| {
                let t = std::f64::consts::FRAC_PI_4 + std::f64::consts::FRAC_PI_2 * k as f64;
                Point::new2(s * t.cos(), s * t.sin())
            })
            .collect();
        let cfg = CoverConfig::new(s + 1e-3, centers).unwrap();
        let cert = verify_cover(&shapes::disc(), &cfg, 40).unwrap();
        assert!(cert.verdict.is_covered(), "{:?}", cert.verdict);
    }

    #[test]
    fn disc_cover_below_optimum_is_refuted() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let centers: Vec<Point> = (0..4)
            .map(|k| {
                let t = std::f64::consts::FRAC_PI_2 * k as f64;
                Point::new2(s * t.cos(), s * t.sin())
            })
            .collect();
        let cfg = CoverConfig::new(0.6, centers).unwrap();
        let cert = verify_cover(&shapes::disc(), &cfg, 40).unwrap();
        match cert.verdict {
            Verdict::Uncovered { witness } => {
                let g = minkowski::gauge(&shapes::disc(), &witness).unwrap();
                assert!(g <= 1.0 + 1e-9, "witness must lie in the disc");
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn smooth_inflation_shrinks_with_resolution() {
        let coarse = smooth_inflation(&shapes::ball3(), Some(12)).unwrap();
        let fine = smooth_inflation(&shapes::ball3(), Some(48)).unwrap();
        assert!(fine < coarse / 8.0, "coarse {coarse}, fine {fine}");
        assert!(fine < 6e-4, "inflation {fine} too large");
        assert!(smooth_inflation(&shapes::cube(1.0), None).unwrap() == 0.0);
    }

    #[test]
    fn depth_exhaustion_reports_unknown() {
        // ratio exactly at the optimum: tight points sit in the dead band
        // between covered and witness, so subdivision never resolves
        let cfg = CoverConfig::new(0.5, quad_centers()).unwrap();
        let cert = verify_cover_with(
            &shapes::square(1.0),
            &cfg,
            &VerifyOptions { max_depth: 8, margin: 1e-9, ..VerifyOptions::default() },
        )
        .unwrap();
        assert!(matches!(cert.verdict, Verdict::Unknown { .. }), "{:?}", cert.verdict);
    }
}

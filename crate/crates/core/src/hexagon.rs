//! Inscribed affine-regular hexagons in planar convex bodies.
//!
//! An affine-regular hexagon with center c has vertices c ± e1, c ± e2,
//! c ± (e2 − e1). We look for e1, e2 and (for asymmetric bodies) the center
//! such that all six vertices land on the boundary.

use crate::body::ConvexBody;
use crate::error::{GeomError, GeomResult};
use crate::minkowski;
use crate::point::Point;

#[derive(Clone, Debug)]
pub struct InscribedHexagon {
    pub center: Point,
    /// Half-diagonals: vertex i sits at center + half_diagonals[i] and vertex
    /// i+3 at center − half_diagonals[i], so the central symmetry is exact in
    /// the stored data.
    pub half_diagonals: [Point; 3],
    /// In cyclic order, derived from center and half-diagonals.
    pub vertices: [Point; 6],
    /// max over vertices of |gauge − 1|.
    pub boundary_residual: f64,
}

impl InscribedHexagon {
    fn build(body: &ConvexBody, center: Point, e1: Point, e2: Point) -> GeomResult<InscribedHexagon> {
        let half_diagonals = [e1, e2, e2 - e1];
        let vertices = [
            center + e1,
            center + e2,
            center + (e2 - e1),
            center - e1,
            center - e2,
            center - (e2 - e1),
        ];
        let mut res: f64 = 0.0;
        for v in &vertices {
            res = res.max((minkowski::gauge(body, v)? - 1.0).abs());
        }
        Ok(InscribedHexagon { center, half_diagonals, vertices, boundary_residual: res })
    }

    /// Central-symmetry defect of the stored data: identically zero, since
    /// opposite vertices share one half-diagonal.
    pub fn symmetry_residual(&self) -> f64 {
        self.half_diagonals
            .iter()
            .map(|e| (*e - *e).norm())
            .fold(0.0, f64::max)
    }
}

/// Boundary point of the body seen from an arbitrary interior point `c`
/// along direction `u` (the body's own reference point may differ from c).
pub fn boundary_from(body: &ConvexBody, c: &Point, u: &Point) -> GeomResult<Point> {
    let un = u.norm();
    if un <= 1e-300 {
        return Err(GeomError::BadParameter("zero direction".into()));
    }
    let d = u.scale(1.0 / un);
    let g_at = |t: f64| -> GeomResult<f64> { minkowski::gauge(body, &(*c + d.scale(t))) };
    if g_at(0.0)? >= 1.0 - 1e-12 {
        return Err(GeomError::BadParameter("cast point is not interior".into()));
    }
    let mut hi = 1.0;
    let mut grow = 0;
    while g_at(hi)? < 1.0 {
        hi *= 2.0;
        grow += 1;
        if grow > 100 {
            return Err(GeomError::numerical("boundary cast", "ray never leaves the body"));
        }
    }
    let mut lo = 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if g_at(mid)? < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(*c + d.scale(0.5 * (lo + hi)))
}

/// Inscribe an affine-regular hexagon with all six vertices on the boundary.
pub fn inscribe_affine_hexagon(body: &ConvexBody) -> GeomResult<InscribedHexagon> {
    if body.dim() != 2 {
        return Err(GeomError::Unsupported("hexagon inscription is planar".into()));
    }
    if let Some(center) = body.symmetry_center() {
        return symmetric_path(body, center);
    }
    general_path(body)
}

/// Centrally symmetric case: fix the first half-diagonal's direction, then a
/// one-dimensional bisection places the second so the difference vertex
/// reaches the boundary.
fn symmetric_path(body: &ConvexBody, center: Point) -> GeomResult<InscribedHexagon> {
    let theta: f64 = 0.0;
    let e1 = boundary_from(body, &center, &Point::new2(theta.cos(), theta.sin()))? - center;
    let f = |psi: f64| -> GeomResult<f64> {
        let e2 = boundary_from(body, &center, &Point::new2(psi.cos(), psi.sin()))? - center;
        minkowski::gauge(body, &(center + (e2 - e1))).map(|g| g - 1.0)
    };
    // walking psi from theta to theta + pi takes the difference vertex from
    // the interior (g -> 0) to outside (g -> 2): a sign change is guaranteed
    let mut lo = theta + 1e-7;
    let mut hi = theta + std::f64::consts::PI - 1e-7;
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo > 0.0 || fhi < 0.0 {
        return Err(GeomError::numerical(
            "hexagon inscription",
            format!("no bracket: f(lo)={flo:.3e} f(hi)={fhi:.3e}"),
        ));
    }
    let mut psi = 0.5 * (lo + hi);
    for _ in 0..100 {
        psi = 0.5 * (lo + hi);
        let fm = f(psi)?;
        if (fm < 0.0) == (flo < 0.0) {
            lo = psi;
            flo = fm;
        } else {
            hi = psi;
        }
    }
    let e2 = boundary_from(body, &center, &Point::new2(psi.cos(), psi.sin()))? - center;
    InscribedHexagon::build(body, center, e1, e2)
}

/// General case: solve for (center, psi1, psi2) so that the three
/// "free" vertices also land on the boundary (the first two lie there by
/// construction). Damped Gauss–Newton from a spread of starts.
fn general_path(body: &ConvexBody) -> GeomResult<InscribedHexagon> {
    let a = body.reference_point();
    let mut best: Option<(f64, InscribedHexagon)> = None;
    let starts: Vec<(Point, f64, f64)> = {
        let mut s = Vec::new();
        for k in 0..8 {
            let psi1 = k as f64 * std::f64::consts::PI / 4.0;
            for dpsi in [std::f64::consts::PI / 3.0, std::f64::consts::PI / 2.0] {
                s.push((a, psi1, psi1 + dpsi));
            }
        }
        s
    };
    for (c0, psi1, psi2) in starts {
        if let Ok(hex) = gauss_newton(body, c0, psi1, psi2) {
            let score = hex.boundary_residual;
            if best.as_ref().map_or(true, |(b, _)| score < *b) {
                best = Some((score, hex));
            }
            if score < 1e-9 {
                break;
            }
        }
    }
    match best {
        Some((res, hex)) if res < 1e-7 => Ok(hex),
        Some((res, _)) => Err(GeomError::numerical(
            "hexagon inscription",
            format!("best boundary residual {res:.3e} exceeds 1e-7"),
        )),
        None => Err(GeomError::numerical("hexagon inscription", "all starts failed")),
    }
}

fn residuals(body: &ConvexBody, x: &[f64; 4]) -> GeomResult<([f64; 4], Point, Point, Point)> {
    let c = Point::new2(x[0], x[1]);
    if minkowski::gauge(body, &c)? >= 0.98 {
        return Err(GeomError::numerical("hexagon inscription", "center drifted to the boundary"));
    }
    let e1 = boundary_from(body, &c, &Point::new2(x[2].cos(), x[2].sin()))? - c;
    let e2 = boundary_from(body, &c, &Point::new2(x[3].cos(), x[3].sin()))? - c;
    let g = |p: Point| -> GeomResult<f64> { minkowski::gauge(body, &p) };
    let r = [
        g(c - e1)? - 1.0,
        g(c - e2)? - 1.0,
        g(c + (e2 - e1))? - 1.0,
        g(c - (e2 - e1))? - 1.0,
    ];
    Ok((r, c, e1, e2))
}

fn gauss_newton(
    body: &ConvexBody,
    c0: Point,
    psi1: f64,
    psi2: f64,
) -> GeomResult<InscribedHexagon> {
    let mut x = [c0.x(), c0.y(), psi1, psi2];
    let scale = crate::metrics::diameter(body)?;
    let mut r = residuals(body, &x)?;
    for _ in 0..60 {
        let norm0: f64 = r.0.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm0 < 1e-12 {
            break;
        }
        // finite-difference Jacobian
        let mut jac = [[0.0f64; 4]; 4];
        for j in 0..4 {
            let h = if j < 2 { 1e-7 * scale } else { 1e-7 };
            let mut xp = x;
            xp[j] += h;
            let rp = match residuals(body, &xp) {
                Ok(v) => v,
                Err(_) => {
                    let mut xm = x;
                    xm[j] -= h;
                    residuals(body, &xm)?
                }
            };
            for i in 0..4 {
                jac[i][j] = (rp.0[i] - r.0[i]) / h;
            }
        }
        let step = solve4(&jac, &r.0).ok_or_else(|| {
            GeomError::numerical("hexagon inscription", "singular Jacobian")
        })?;
        // damped line search on the residual norm
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..20 {
            let mut xn = x;
            for j in 0..4 {
                xn[j] -= t * step[j];
            }
            if let Ok(rn) = residuals(body, &xn) {
                let norm1: f64 = rn.0.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm1 < norm0 {
                    x = xn;
                    r = rn;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    InscribedHexagon::build(body, r.1, r.2, r.3)
}

fn solve4(a: &[[f64; 4]; 4], b: &[f64; 4]) -> Option<[f64; 4]> {
    let mut m = *a;
    let mut v = *b;
    let n = 4;
    let mut x = [0.0f64; 4];
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())?;
        if m[piv][col].abs() < 1e-14 {
            return None;
        }
        m.swap(col, piv);
        v.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for k in col..n {
                m[row][k] -= f * m[col][k];
            }
            v[row] -= f * v[col];
        }
    }
    for col in (0..n).rev() {
        let mut s = v[col];
        for k in col + 1..n {
            s -= m[col][k] * x[k];
        }
        x[col] = s / m[col][col];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    fn check_pattern(hex: &InscribedHexagon) {
        assert_eq!(hex.symmetry_residual(), 0.0);
        let scale = hex.vertices.iter().map(|v| v.norm()).fold(1.0, f64::max);
        for i in 0..3 {
            let d = hex.vertices[i] + hex.vertices[i + 3] - hex.center.scale(2.0);
            assert!(d.norm() < 1e-13 * scale, "opposite vertices must mirror: {}", d.norm());
        }
        let [e1, e2, e3] = hex.half_diagonals;
        assert!((e3 - (e2 - e1)).norm() < 1e-12, "affine-regular pattern");
    }

    #[test]
    fn disc_hexagon_is_regular() {
        let hex = inscribe_affine_hexagon(&shapes::disc()).unwrap();
        check_pattern(&hex);
        assert!(hex.boundary_residual < 1e-9);
        for i in 0..6 {
            let a = hex.vertices[i];
            let b = hex.vertices[(i + 1) % 6];
            assert!((a.dist(&b) - 1.0).abs() < 1e-7, "side {}", a.dist(&b));
        }
    }

    #[test]
    fn regular_hexagon_recovers_itself() {
        let body = shapes::regular_polygon(6, 1.0);
        let hex = inscribe_affine_hexagon(&body).unwrap();
        check_pattern(&hex);
        assert!(hex.boundary_residual < 1e-9);
        // all six produced vertices must be near body vertices
        let verts = body.polytope_vertices().unwrap().unwrap();
        for v in &hex.vertices {
            let d = verts.iter().map(|w| w.dist(v)).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-6, "vertex off by {d}");
        }
    }

    #[test]
    fn square_hexagon_on_boundary() {
        let hex = inscribe_affine_hexagon(&shapes::square(1.0)).unwrap();
        check_pattern(&hex);
        assert!(hex.boundary_residual < 1e-7, "residual {}", hex.boundary_residual);
    }

    #[test]
    fn triangle_hexagon_matches_side_thirds() {
        // the affine-regular hexagon inscribed in a triangle cuts each side
        // at its third points
        let t = shapes::triangle();
        let hex = inscribe_affine_hexagon(&t).unwrap();
        check_pattern(&hex);
        assert!(hex.boundary_residual < 1e-7, "residual {}", hex.boundary_residual);
        let tv = t.polytope_vertices().unwrap().unwrap();
        let mut expected = Vec::new();
        for i in 0..3 {
            let a = tv[i];
            let b = tv[(i + 1) % 3];
            expected.push(a + (b - a).scale(1.0 / 3.0));
            expected.push(a + (b - a).scale(2.0 / 3.0));
        }
        for v in &hex.vertices {
            let d = expected.iter().map(|w| w.dist(v)).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-5, "hexagon vertex misses the third points by {d}");
        }
        // center must be the centroid
        let centroid = (tv[0] + tv[1] + tv[2]).scale(1.0 / 3.0);
        assert!(hex.center.dist(&centroid) < 1e-5);
    }

    #[test]
    fn reuleaux_triangle_hexagon() {
        let r = ConvexBody::reuleaux_polygon(3).unwrap();
        let hex = inscribe_affine_hexagon(&r).unwrap();
        check_pattern(&hex);
        assert!(hex.boundary_residual < 1e-7, "residual {}", hex.boundary_residual);
    }
}

//! Löwner (minimum-volume enclosing) ellipsoids and the affine normalization
//! that sandwiches a body between the unit ball and n times the unit ball.

use crate::body::{BodyKind, ConvexBody, LpExponent, TAU_GEO};
use crate::error::{GeomError, GeomResult};
use crate::grids;
use crate::minkowski;
use crate::point::{Mat, Point};
use serde::{Deserialize, Serialize};

/// Ellipsoid {x : (x-c)ᵀ A (x-c) <= 1} with A symmetric positive-definite.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Ellipsoid {
    pub center: Point,
    pub shape: Mat,
}

impl Ellipsoid {
    pub fn ball(center: Point, radius: f64) -> Ellipsoid {
        let mut shape = Mat::identity(center.dim());
        for i in 0..center.dim() {
            shape.set(i, i, 1.0 / (radius * radius));
        }
        Ellipsoid { center, shape }
    }

    /// Support function: <u,c> + sqrt(uᵀ A⁻¹ u).
    pub fn support(&self, u: &Point) -> GeomResult<f64> {
        let inv = self
            .shape
            .inverse()
            .ok_or_else(|| GeomError::Degenerate("ellipsoid shape is singular".into()))?;
        let q = inv.apply(u).dot(u);
        Ok(self.center.dot(u) + q.max(0.0).sqrt())
    }

    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        let d = *p - self.center;
        self.shape.apply(&d).dot(&d) <= 1.0 + tol
    }

    /// Scale about the center by `t`.
    pub fn scaled(&self, t: f64) -> Ellipsoid {
        let dim = self.center.dim();
        let mut shape = self.shape;
        for i in 0..dim {
            for j in 0..dim {
                shape.set(i, j, self.shape.get(i, j) / (t * t));
            }
        }
        Ellipsoid { center: self.center, shape }
    }
}

/// Affine map y = M x + s together with its verification record.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AffineCert {
    pub matrix: Mat,
    pub shift: Point,
    pub verified_inner: bool,
    pub verified_outer: bool,
    pub sample_count: usize,
}

impl AffineCert {
    pub fn apply(&self, p: &Point) -> Point {
        self.matrix.apply(p) + self.shift
    }
}

/// Minimum-volume enclosing ellipsoid of a point set by iterative weight
/// updates on the lifted moment matrix, with away steps for the fast
/// tail convergence the tight-contact tests need.
pub fn mvee(points: &[Point], dim: usize, tol: f64, max_iter: usize) -> GeomResult<Ellipsoid> {
    let m = points.len();
    if m < dim + 1 {
        return Err(GeomError::Degenerate("too few points for an enclosing ellipsoid".into()));
    }
    let d1 = dim + 1; // lifted dimension
    let mut w = vec![1.0 / m as f64; m];
    // lifted points q_i = (x_i, 1)
    let q = |i: usize| -> [f64; 4] {
        let c = points[i].coords();
        let mut out = [0.0; 4];
        out[..dim].copy_from_slice(&c[..dim]);
        out[dim] = 1.0;
        out
    };
    let mut iter = 0;
    loop {
        // Λ = Σ w_i q_i q_iᵀ and its inverse
        let mut lam = [[0.0f64; 4]; 4];
        for i in 0..m {
            let qi = q(i);
            for r in 0..d1 {
                for c in 0..d1 {
                    lam[r][c] += w[i] * qi[r] * qi[c];
                }
            }
        }
        let inv = invert_small(&lam, d1)
            .ok_or_else(|| GeomError::numerical("enclosing ellipsoid", "degenerate moment matrix"))?;
        // leverage scores e_i = q_iᵀ Λ⁻¹ q_i
        let mut kappa_plus = f64::NEG_INFINITY;
        let mut kappa_minus = f64::INFINITY;
        let mut arg_plus = 0;
        let mut arg_minus = 0;
        for i in 0..m {
            let qi = q(i);
            let mut e = 0.0;
            for r in 0..d1 {
                let mut s = 0.0;
                for c in 0..d1 {
                    s += inv[r][c] * qi[c];
                }
                e += qi[r] * s;
            }
            if e > kappa_plus {
                kappa_plus = e;
                arg_plus = i;
            }
            if w[i] > 0.0 && e < kappa_minus {
                kappa_minus = e;
                arg_minus = i;
            }
        }
        let d1f = d1 as f64;
        let eps_plus = kappa_plus / d1f - 1.0;
        let eps_minus = 1.0 - kappa_minus / d1f;
        if eps_plus.max(eps_minus) < tol || iter >= max_iter {
            break;
        }
        if eps_plus >= eps_minus || kappa_minus <= 1.0 + 1e-12 {
            // pull weight toward the most-violating point
            let lambda = (kappa_plus - d1f) / (d1f * (kappa_plus - 1.0));
            for wi in w.iter_mut() {
                *wi *= 1.0 - lambda;
            }
            w[arg_plus] += lambda;
        } else {
            // push weight away from the least-needed support point
            let lambda_raw = (d1f - kappa_minus) / (d1f * (kappa_minus - 1.0));
            let lambda = lambda_raw.min(w[arg_minus] / (1.0 - w[arg_minus]));
            for wi in w.iter_mut() {
                *wi *= 1.0 + lambda;
            }
            w[arg_minus] -= lambda;
            if w[arg_minus] < 0.0 {
                w[arg_minus] = 0.0;
            }
        }
        iter += 1;
    }
    // center and second moment from the weights
    let mut center = Point::zero(dim);
    for i in 0..m {
        center = center + points[i].scale(w[i]);
    }
    let mut sigma = Mat::identity(dim);
    for r in 0..dim {
        for c in 0..dim {
            let mut s = 0.0;
            for i in 0..m {
                let dr = points[i].coords()[r] - center.coords()[r];
                let dc = points[i].coords()[c] - center.coords()[c];
                s += w[i] * dr * dc;
            }
            sigma.set(r, c, s);
        }
    }
    // the ellipsoid is (x-c)ᵀ Σ⁻¹ (x-c) <= dim
    let sig_inv = sigma
        .inverse()
        .ok_or_else(|| GeomError::numerical("enclosing ellipsoid", "flat point set"))?;
    let mut shape = Mat::identity(dim);
    for r in 0..dim {
        for c in 0..dim {
            shape.set(r, c, sig_inv.get(r, c) / dim as f64);
        }
    }
    Ok(Ellipsoid { center, shape })
}

/// Löwner ellipsoid of a body: closed form where symmetry pins it down,
/// vertex MVEE for polytopes, boundary-sample MVEE otherwise.
pub fn loewner(body: &ConvexBody) -> GeomResult<Ellipsoid> {
    match body.kind() {
        BodyKind::LpBall { p, dim } => {
            let n = *dim as f64;
            let radius = match p {
                LpExponent::Infinity => n.sqrt(),
                LpExponent::Finite(pv) if *pv <= 2.0 => 1.0,
                LpExponent::Finite(pv) => n.powf(0.5 - 1.0 / pv),
            };
            Ok(Ellipsoid::ball(Point::zero(*dim), radius))
        }
        BodyKind::ReuleauxPolygon { k } => {
            Ok(Ellipsoid::ball(Point::zero(2), ConvexBody::reuleaux_circumradius(*k)))
        }
        BodyKind::AffineImage { matrix, shift, inner } => {
            let e = loewner(inner)?;
            let inv = matrix
                .inverse()
                .ok_or_else(|| GeomError::Degenerate("affine matrix is singular".into()))?;
            let shape = inv.transpose().matmul(&e.shape).matmul(&inv);
            Ok(Ellipsoid { center: matrix.apply(&e.center) + *shift, shape })
        }
        _ => {
            if let Some(vertices) = body.polytope_vertices()? {
                mvee(&vertices, body.dim(), 1e-12, 200_000)
            } else {
                let n = if body.dim() == 2 { 1024 } else { 4096 };
                let mut boundary = Vec::with_capacity(n);
                for u in grids::directions(body.dim(), n) {
                    boundary.push(minkowski::boundary_point(body, &u)?);
                }
                mvee(&boundary, body.dim(), 1e-12, 200_000)
            }
        }
    }
}

/// Normalize the body so the unit ball sits inside it and it sits inside
/// n times the unit ball; both inclusions are checked before returning.
pub fn john_normalize(body: &ConvexBody) -> GeomResult<(AffineCert, ConvexBody)> {
    let n = body.dim() as f64;
    let e = loewner(body)?;
    let l = e
        .shape
        .cholesky()
        .ok_or_else(|| GeomError::numerical("normalization", "shape matrix not positive-definite"))?;
    // T(x) = n Lᵀ (x - c) maps the enclosing ellipsoid onto n·B and its
    // 1/n shrinking (inside the body by the enclosing-ellipsoid theorem)
    // onto B
    let mut matrix = l.transpose();
    for i in 0..body.dim() {
        for j in 0..body.dim() {
            matrix.set(i, j, matrix.get(i, j) * n);
        }
    }
    let mut shift = -matrix.apply(&e.center);
    let image = ConvexBody::affine_image(matrix, shift, body.clone())?;

    const GRID: usize = 10_000;
    let dirs = grids::directions(body.dim(), GRID);
    // tighten: shrink until the unit ball touches the image, so a round body
    // normalizes to the unit ball instead of n times it; the shrink factor is
    // a certified lower bound on the minimal support so the inclusion of the
    // unit ball survives the rescale
    let min_support = inner_radius_lower_bound(body, &image)?;
    if !(min_support.is_finite() && min_support >= 1.0 - 1e-9) {
        return Err(GeomError::numerical(
            "normalization",
            format!("inner radius bound {min_support} below 1"),
        ));
    }
    let tighten = 1.0 / min_support.max(1.0);
    for i in 0..body.dim() {
        for j in 0..body.dim() {
            matrix.set(i, j, matrix.get(i, j) * tighten);
        }
    }
    shift = shift.scale(tighten);
    let image = ConvexBody::affine_image(matrix, shift, body.clone())?;
    for u in &dirs {
        let s = minkowski::support(&image, u)?;
        if s < 1.0 - TAU_GEO {
            return Err(GeomError::VerificationFailed(format!(
                "inner inclusion fails along ({}): support {s}",
                fmt_dir(u)
            )));
        }
    }
    if let Some(vertices) = image.polytope_vertices()? {
        for v in &vertices {
            if v.norm() > n + TAU_GEO {
                return Err(GeomError::VerificationFailed(format!(
                    "outer inclusion fails at vertex ({}): norm {}",
                    fmt_dir(v),
                    v.norm()
                )));
            }
        }
    } else {
        for u in &dirs {
            let s = minkowski::support(&image, u)?;
            if s > n + 1e-5 {
                return Err(GeomError::VerificationFailed(format!(
                    "outer inclusion fails along ({}): support {s}",
                    fmt_dir(u)
                )));
            }
        }
    }
    let cert = AffineCert {
        matrix,
        shift,
        verified_inner: true,
        verified_outer: true,
        sample_count: GRID,
    };
    Ok((cert, image))
}

/// Largest `r` with `r·B ⊆ image`, never overestimated: exact facet
/// distances for polytopes, closed forms for the symmetric smooth kinds,
/// and a Lipschitz-discounted sample bound (clamped at the guaranteed 1)
/// for anything else.
fn inner_radius_lower_bound(body: &ConvexBody, image: &ConvexBody) -> GeomResult<f64> {
    let n = body.dim() as f64;
    if is_ellipsoid(body) {
        // the enclosing ellipsoid is the body itself, so the image is n·B
        return Ok(n);
    }
    if let Some(vertices) = image.polytope_vertices()? {
        let facets = crate::convert::facets_of_vertices(&vertices)?;
        let r = facets.iter().map(|f| f.offset).fold(f64::INFINITY, f64::min);
        if r <= 0.0 {
            return Err(GeomError::numerical("normalization", "origin left the image polytope"));
        }
        return Ok(r);
    }
    match body.kind() {
        BodyKind::LpBall { p, dim } => {
            // the normalizing map is a multiple of the identity, so the
            // support minimizer of the ball is preserved: an axis direction
            // for p >= 2, the main diagonal for p <= 2
            let u = match p {
                LpExponent::Finite(pv) if *pv < 2.0 => {
                    let mut u = Point::zero(*dim);
                    for i in 0..*dim {
                        u = u + Point::basis(i, *dim);
                    }
                    u.scale(1.0 / (*dim as f64).sqrt())
                }
                _ => Point::basis(0, *dim),
            };
            minkowski::support(image, &u)
        }
        BodyKind::ReuleauxPolygon { k } => {
            // incircle radius 1 - R about the center, scaled by the map 2/R
            let r = ConvexBody::reuleaux_circumradius(*k);
            Ok(2.0 * (1.0 - r) / r)
        }
        _ => {
            let count = if body.dim() == 2 { 4096 } else { 20_000 };
            let mut lo = f64::INFINITY;
            for u in grids::directions(body.dim(), count) {
                lo = lo.min(minkowski::support(image, &u)?);
            }
            // discount by an over-generous bound on the sampling gap times
            // the Lipschitz constant n of the support function, and never
            // drop below the inclusion the enclosing-ellipsoid theorem gives
            let gap = if body.dim() == 2 {
                2.0 * std::f64::consts::PI / count as f64
            } else {
                4.0 / (count as f64).sqrt()
            };
            Ok((lo - n * gap).max(1.0))
        }
    }
}

fn is_ellipsoid(body: &ConvexBody) -> bool {
    match body.kind() {
        BodyKind::LpBall { p, .. } => {
            matches!(p, LpExponent::Finite(pv) if (*pv - 2.0).abs() < 1e-12)
        }
        BodyKind::AffineImage { inner, .. } => is_ellipsoid(inner),
        _ => false,
    }
}

fn fmt_dir(u: &Point) -> String {
    u.coords()[..u.dim()]
        .iter()
        .map(|c| format!("{c:.6}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Gauss-Jordan inverse for the small lifted moment matrices.
fn invert_small(a: &[[f64; 4]; 4], n: usize) -> Option<[[f64; 4]; 4]> {
    let mut aug = [[0.0f64; 8]; 4];
    for i in 0..n {
        aug[i][..n].copy_from_slice(&a[i][..n]);
        aug[i][n + i] = 1.0;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| aug[i][col].abs().partial_cmp(&aug[j][col].abs()).unwrap())?;
        if aug[piv][col].abs() < 1e-300 {
            return None;
        }
        aug.swap(col, piv);
        let p = aug[col][col];
        for x in aug[col].iter_mut() {
            *x /= p;
        }
        for row in 0..n {
            if row != col {
                let f = aug[row][col];
                if f != 0.0 {
                    for k in 0..2 * n {
                        aug[row][k] -= f * aug[col][k];
                    }
                }
            }
        }
    }
    let mut out = [[0.0f64; 4]; 4];
    for i in 0..n {
        out[i][..n].copy_from_slice(&aug[i][n..2 * n]);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    #[test]
    fn mvee_of_square_is_disc() {
        let pts = vec![
            Point::new2(1.0, 1.0),
            Point::new2(-1.0, 1.0),
            Point::new2(1.0, -1.0),
            Point::new2(-1.0, -1.0),
        ];
        let e = mvee(&pts, 2, 1e-12, 10_000).unwrap();
        assert!(e.center.norm() < 1e-9);
        // shape should be I/2 (disc of radius sqrt 2)
        assert!((e.shape.get(0, 0) - 0.5).abs() < 1e-8, "{:?}", e.shape);
        assert!((e.shape.get(1, 1) - 0.5).abs() < 1e-8);
        assert!(e.shape.get(0, 1).abs() < 1e-8);
    }

    #[test]
    fn mvee_contains_all_points() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let pts: Vec<Point> = (0..50)
            .map(|_| Point::new3(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 4.0, rng.gen::<f64>()))
            .collect();
        let e = mvee(&pts, 3, 1e-10, 100_000).unwrap();
        for p in &pts {
            assert!(e.contains(p, 1e-7), "{p:?}");
        }
    }

    #[test]
    fn john_normalize_square() {
        let (cert, image) = john_normalize(&shapes::square(1.0)).unwrap();
        assert!(cert.verified_inner && cert.verified_outer);
        let verts = image.polytope_vertices().unwrap().unwrap();
        for v in &verts {
            assert!(v.norm() <= 2.0 + 1e-9);
        }
        // the image of the square should still contain the unit disc
        for u in grids::circle(256) {
            assert!(minkowski::support(&image, &u).unwrap() >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn john_normalize_tetrahedron() {
        let (cert, image) = john_normalize(&shapes::tetrahedron()).unwrap();
        assert!(cert.verified_inner && cert.verified_outer);
        let verts = image.polytope_vertices().unwrap().unwrap();
        for v in &verts {
            assert!(v.norm() <= 3.0 + 1e-6, "vertex norm {}", v.norm());
        }
    }

    #[test]
    fn john_normalize_shifted_ball() {
        let m = Mat::from_rows(&[vec![5.0, 0.0, 0.0], vec![0.0, 5.0, 0.0], vec![0.0, 0.0, 5.0]]);
        let body =
            ConvexBody::affine_image(m, Point::new3(7.0, -2.0, 1.0), shapes::ball3()).unwrap();
        let (_, image) = john_normalize(&body).unwrap();
        // image should be (close to) the unit ball itself
        for u in grids::fibonacci_sphere(500) {
            let s = minkowski::support(&image, &u).unwrap();
            assert!((s - 1.0).abs() < 1e-9, "{s}");
        }
    }

    #[test]
    fn loewner_of_lp_ball_closed_form() {
        let e = loewner(&shapes::lp_ball(4.0, 3)).unwrap();
        let r2 = 3f64.powf(0.25);
        assert!((1.0 / e.shape.get(0, 0).sqrt() - r2).abs() < 1e-9);
    }
}

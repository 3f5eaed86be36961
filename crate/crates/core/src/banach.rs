//! Upper bounds on the Banach–Mazur distance between two bodies: the log of
//! the best sandwich factor r with K1 ⊆ Φ(K2) ⊆ r·K1 + x' found by a seeded
//! multi-start search over linear maps.

use crate::body::{BodyKind, ConvexBody};
use crate::error::{GeomError, GeomResult};
use crate::grids;
use crate::john::{john_normalize, AffineCert};
use crate::minkowski;
use crate::opt;
use crate::point::{Mat, Point};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub struct BmBudget {
    pub seed: u64,
    pub starts: usize,
    pub outer_iters: usize,
    pub inner_iters: usize,
}

impl Default for BmBudget {
    fn default() -> Self {
        BmBudget { seed: 0, starts: 32, outer_iters: 150, inner_iters: 80 }
    }
}

#[derive(Clone, Debug)]
pub struct BmSandwich {
    /// log r for the verified sandwich (natural log).
    pub log_ratio: f64,
    pub ratio: f64,
    /// Φ acting on K2 in the original coordinates.
    pub map_matrix: Mat,
    pub map_shift: Point,
    /// x' with Φ(K2) ⊆ r·K1 + x'.
    pub outer_shift: Point,
    pub cert: AffineCert,
}

struct NormalizedBody {
    body: ConvexBody,
    /// Sample of the body: all vertices, or a boundary sample.
    samples: Vec<Point>,
    /// Denser sample used for the final verification pass.
    fine_samples: Vec<Point>,
    center: Option<Point>,
    anchor: Point,
}

fn prepare(body: &ConvexBody) -> GeomResult<(NormalizedBody, Mat, Point)> {
    let (cert, image) = john_normalize(body)?;
    let samples;
    let fine_samples;
    if let Some(vertices) = image.polytope_vertices()? {
        samples = vertices.clone();
        fine_samples = vertices;
    } else {
        let dim = image.dim();
        let coarse = if dim == 2 { 128 } else { 256 };
        let fine = 10_000;
        samples = grids::directions(dim, coarse)
            .iter()
            .map(|u| minkowski::boundary_point(&image, u))
            .collect::<GeomResult<Vec<_>>>()?;
        fine_samples = grids::directions(dim, fine)
            .iter()
            .map(|u| minkowski::boundary_point(&image, u))
            .collect::<GeomResult<Vec<_>>>()?;
    }
    let center = image.symmetry_center();
    let anchor = image.reference_point();
    Ok((NormalizedBody { body: image, samples, fine_samples, center, anchor }, cert.matrix, cert.shift))
}

/// Image of `c.body` under the linear map `t`, kept in affine-image form so
/// gauge evaluations stay cheap.
fn mapped(c: &NormalizedBody, t: &Mat) -> GeomResult<ConvexBody> {
    match c.body.kind() {
        BodyKind::AffineImage { matrix, shift, inner } => ConvexBody::affine_image(
            t.matmul(matrix),
            t.apply(shift),
            (**inner).clone(),
        ),
        _ => ConvexBody::affine_image(*t, Point::zero(c.body.dim()), c.body.clone()),
    }
}

/// Smallest λ with points ⊆ λ·(body about its anchor) + x for the best x;
/// returns (λ, x).
fn best_cover(
    body: &ConvexBody,
    points: &[Point],
    sym_shift: Option<Point>,
    inner_iters: usize,
) -> GeomResult<(f64, Point)> {
    let dim = body.dim();
    let phi = |x: &Point| -> GeomResult<f64> {
        let mut worst: f64 = 0.0;
        for p in points {
            worst = worst.max(minkowski::gauge(body, &(*p - *x))?);
        }
        Ok(worst)
    };
    if let Some(x) = sym_shift {
        return Ok((phi(&x)?, x));
    }
    let mut err: Option<GeomError> = None;
    let objective = |coords: &[f64]| -> f64 {
        let x = Point::from_slice(&coords[..dim]);
        match phi(&x) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                f64::INFINITY
            }
        }
    };
    let x0 = vec![0.0; dim];
    let step = vec![0.25; dim];
    let (xc, val) = opt::nelder_mead(objective, &x0, &step, inner_iters);
    if let Some(e) = err {
        return Err(e);
    }
    Ok((val, Point::from_slice(&xc[..dim])))
}

fn objective_for(
    t: &Mat,
    a: &NormalizedBody,
    c: &NormalizedBody,
    budget: &BmBudget,
    fine: bool,
) -> GeomResult<(f64, f64, Point, f64, Point)> {
    let det = t.det();
    if !det.is_finite() || det.abs() < 1e-6 {
        return Err(GeomError::numerical("bm search", "near-singular map"));
    }
    let tc = mapped(c, t)?;
    let a_pts = if fine { &a.fine_samples } else { &a.samples };
    let c_pts: Vec<Point> = (if fine { &c.fine_samples } else { &c.samples })
        .iter()
        .map(|p| t.apply(p))
        .collect();
    // symmetric bodies cover optimally with centers aligned
    let sym_lambda = match (a.center, tc.symmetry_center()) {
        (Some(sa), Some(sc)) => Some(sa - sc),
        _ => None,
    };
    let sym_nu = match (tc.symmetry_center(), a.center) {
        (Some(sc), Some(sa)) => Some(sc - sa),
        _ => None,
    };
    let (lambda, x) = best_cover(&tc, a_pts, sym_lambda, budget.inner_iters)?;
    let (nu, y) = best_cover(&a.body, &c_pts, sym_nu, budget.inner_iters)?;
    Ok((lambda * nu, lambda, x, nu, y))
}

fn rotation_starts(dim: usize, count: usize, seed: u64) -> Vec<Mat> {
    let mut out = vec![Mat::identity(dim)];
    if dim == 2 {
        for k in 1..count {
            out.push(Mat::rotation2(std::f64::consts::PI * k as f64 / count as f64));
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 1..count {
            let a = rng.gen::<f64>() * std::f64::consts::TAU;
            let b = (rng.gen::<f64>() * 2.0 - 1.0).acos();
            let g = rng.gen::<f64>() * std::f64::consts::TAU;
            out.push(Mat::rotation3(a, b, g));
        }
    }
    out
}

/// Align second-moment frames of the two samples; useful starts when the
/// bodies are rotated copies of each other.
fn alignment_starts(a: &NormalizedBody, c: &NormalizedBody) -> Vec<Mat> {
    let dim = a.body.dim();
    let frame = |pts: &[Point]| -> Option<Mat> {
        let mut m = Mat::identity(dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut s = 0.0;
                for p in pts {
                    s += p.coords()[i] * p.coords()[j];
                }
                m.set(i, j, s / pts.len() as f64);
            }
        }
        eigenvectors_sym(&m, dim)
    };
    let (Some(ea), Some(ec)) = (frame(&a.samples), frame(&c.samples)) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let signs: &[&[f64]] = if dim == 2 {
        &[&[1.0, 1.0], &[1.0, -1.0], &[-1.0, 1.0], &[-1.0, -1.0]]
    } else {
        &[
            &[1.0, 1.0, 1.0],
            &[1.0, 1.0, -1.0],
            &[1.0, -1.0, 1.0],
            &[-1.0, 1.0, 1.0],
            &[1.0, -1.0, -1.0],
            &[-1.0, 1.0, -1.0],
            &[-1.0, -1.0, 1.0],
            &[-1.0, -1.0, -1.0],
        ]
    };
    for s in signs {
        // T = E_a · diag(s) · E_cᵀ maps c's frame onto a's
        let mut d = Mat::identity(dim);
        for i in 0..dim {
            d.set(i, i, s[i]);
        }
        out.push(ea.matmul(&d).matmul(&ec.transpose()));
    }
    out
}

/// Eigenvector matrix of a symmetric matrix by Jacobi sweeps, columns
/// ordered by ascending eigenvalue so two congruent bodies get matching
/// frames.
fn eigenvectors_sym(m: &Mat, dim: usize) -> Option<Mat> {
    let mut a = *m;
    let mut v = Mat::identity(dim);
    for _ in 0..64 {
        // largest off-diagonal element
        let (mut p, mut q, mut mx) = (0, 1, 0.0f64);
        for i in 0..dim {
            for j in i + 1..dim {
                if a.get(i, j).abs() > mx {
                    mx = a.get(i, j).abs();
                    p = i;
                    q = j;
                }
            }
        }
        if mx < 1e-13 {
            break;
        }
        let app = a.get(p, p);
        let aqq = a.get(q, q);
        let apq = a.get(p, q);
        let theta = 0.5 * (aqq - app) / apq;
        let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
        let cth = 1.0 / (t * t + 1.0).sqrt();
        let sth = t * cth;
        // rotate rows/columns p, q
        let mut rot = Mat::identity(dim);
        rot.set(p, p, cth);
        rot.set(q, q, cth);
        rot.set(p, q, sth);
        rot.set(q, p, -sth);
        a = rot.transpose().matmul(&a).matmul(&rot);
        v = v.matmul(&rot);
    }
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| a.get(i, i).partial_cmp(&a.get(j, j)).unwrap_or(std::cmp::Ordering::Equal));
    let mut sorted = Mat::identity(dim);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..dim {
            sorted.set(row, new_col, v.get(row, old_col));
        }
    }
    Some(sorted)
}

/// Upper bound on the Banach–Mazur distance (natural log of the sandwich
/// ratio), with a concrete verified witness map.
pub fn bm_distance_upper(
    k1: &ConvexBody,
    k2: &ConvexBody,
    budget: &BmBudget,
) -> GeomResult<BmSandwich> {
    if k1.dim() != k2.dim() {
        return Err(GeomError::DimensionMismatch { expected: k1.dim(), got: k2.dim() });
    }
    let dim = k1.dim();
    let (a, m1, s1) = prepare(k1)?;
    let (c, m2, s2) = prepare(k2)?;

    let mut starts = rotation_starts(dim, budget.starts.max(1), budget.seed);
    starts.extend(alignment_starts(&a, &c));

    let mut best: Option<(f64, Mat)> = None;
    for t0 in &starts {
        // refine the map with a derivative-free descent on its entries
        let x0: Vec<f64> = (0..dim * dim).map(|k| t0.get(k / dim, k % dim)).collect();
        let objective = |coords: &[f64]| -> f64 {
            let mut t = Mat::identity(dim);
            for (k, &val) in coords.iter().enumerate() {
                t.set(k / dim, k % dim, val);
            }
            match objective_for(&t, &a, &c, budget, false) {
                Ok((f, ..)) => f,
                Err(_) => f64::INFINITY,
            }
        };
        let step = vec![0.08; dim * dim];
        let (xb, fb) = opt::nelder_mead(objective, &x0, &step, budget.outer_iters);
        if fb.is_finite() {
            let mut t = Mat::identity(dim);
            for (k, &val) in xb.iter().enumerate() {
                t.set(k / dim, k % dim, val);
            }
            if best.as_ref().map_or(true, |(b, _)| fb < *b) {
                best = Some((fb, t));
            }
        }
        if best.as_ref().is_some_and(|(b, _)| *b < 1.0 + 1e-12) {
            break;
        }
    }
    let (_, t) = best.ok_or_else(|| {
        GeomError::numerical("bm search", "no start produced a usable map")
    })?;

    // final pass on the fine samples: the reported r is verified on them
    let (_, lambda, x, nu, y) = objective_for(&t, &a, &c, budget, true)?;
    let r = lambda * nu;
    let tc = mapped(&c, &t)?;
    let c_t = tc.reference_point();

    // homothety about the anchor rewritten as plain scaling plus shift
    let x_tilde = c_t.scale(1.0 - lambda) + x;
    let y_tilde = a.anchor.scale(lambda * (1.0 - nu)) + y.scale(lambda) + x_tilde;

    let m1_inv = m1
        .inverse()
        .ok_or_else(|| GeomError::numerical("bm search", "singular normalization"))?;
    let lt = scale_mat(&t, lambda, dim);
    let map_matrix = m1_inv.matmul(&lt).matmul(&m2);
    let map_shift = m1_inv.apply(&(lt.apply(&s2) + x_tilde - s1));
    let outer_shift = m1_inv.apply(&(s1.scale(r - 1.0) + y_tilde));

    // independent re-verification in the original coordinates
    let phi_k2 = ConvexBody::affine_image(map_matrix, map_shift, k2.clone())?;
    let dirs = grids::directions(dim, 10_000);
    let tol = 1e-6;
    let mut verified_inner = true;
    let mut verified_outer = true;
    for u in &dirs {
        let h1 = minkowski::support(k1, u)?;
        let h2 = minkowski::support(&phi_k2, u)?;
        if h1 > h2 + tol * (1.0 + h1.abs()) {
            verified_inner = false;
        }
        if h2 > r * h1 + u.dot(&outer_shift) + tol * (1.0 + h2.abs()) {
            verified_outer = false;
        }
    }
    let cert = AffineCert {
        matrix: map_matrix,
        shift: map_shift,
        verified_inner,
        verified_outer,
        sample_count: dirs.len(),
    };
    Ok(BmSandwich {
        log_ratio: r.max(1.0).ln(),
        ratio: r,
        map_matrix,
        map_shift,
        outer_shift,
        cert,
    })
}

fn scale_mat(t: &Mat, s: f64, dim: usize) -> Mat {
    let mut out = *t;
    for i in 0..dim {
        for j in 0..dim {
            out.set(i, j, t.get(i, j) * s);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    fn small_budget() -> BmBudget {
        BmBudget { seed: 7, starts: 8, outer_iters: 80, inner_iters: 60 }
    }

    #[test]
    fn self_distance_is_zero() {
        let sq = shapes::square(1.0);
        let r = bm_distance_upper(&sq, &sq, &small_budget()).unwrap();
        assert!(r.log_ratio <= 1e-6, "{}", r.log_ratio);
        assert!(r.cert.verified_inner && r.cert.verified_outer);
    }

    #[test]
    fn disc_vs_square_is_log_sqrt2() {
        let d = bm_distance_upper(&shapes::disc(), &shapes::square(1.0), &small_budget()).unwrap();
        let expect = 2f64.sqrt().ln();
        assert!((d.log_ratio - expect).abs() < 0.01, "{} vs {}", d.log_ratio, expect);
        assert!(d.cert.verified_inner && d.cert.verified_outer);
    }

    #[test]
    fn affine_image_distance_is_tiny_2d() {
        let base = shapes::regular_polygon(7, 1.0);
        let m = Mat::from_rows(&[vec![1.4, 0.3], vec![-0.2, 0.8]]);
        let image = ConvexBody::affine_image(m, Point::new2(0.4, -0.7), base.clone()).unwrap();
        let d = bm_distance_upper(&base, &image, &small_budget()).unwrap();
        assert!(d.log_ratio <= 1e-4, "log ratio {}", d.log_ratio);
    }

    #[test]
    fn affine_image_distance_is_tiny_3d() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<Point> = (0..10)
            .map(|_| {
                Point::new3(
                    rng.gen::<f64>() * 2.0 - 1.0,
                    rng.gen::<f64>() * 1.4 - 0.7,
                    rng.gen::<f64>() * 2.6 - 1.3,
                )
            })
            .collect();
        let base = ConvexBody::vpolytope(pts).unwrap();
        let m = Mat::rotation3(0.4, 0.8, -0.3);
        let image = ConvexBody::affine_image(m, Point::new3(0.2, 0.1, -0.5), base.clone()).unwrap();
        let d = bm_distance_upper(&base, &image, &small_budget()).unwrap();
        assert!(d.log_ratio <= 1e-4, "log ratio {}", d.log_ratio);
    }
}

//! Property checks for the geometric primitives: gauge homogeneity,
//! cross-representation consistency, support subadditivity, conversion
//! roundtrips, and normalization postconditions.

use covfun_core::body::{ConvexBody, LpExponent};
use covfun_core::convert::{self, Representation};
use covfun_core::john;
use covfun_core::minkowski;
use covfun_core::point::Point;
use covfun_core::{grids, shapes};
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_polygon(seed: u64, n: usize) -> ConvexBody {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let pts: Vec<Point> = (0..n)
            .map(|_| Point::new2(rng.gen::<f64>() * 4.0 - 2.0, rng.gen::<f64>() * 4.0 - 2.0))
            .collect();
        if let Ok(b) = ConvexBody::vpolytope(pts) {
            return b;
        }
    }
}

fn random_polytope3(seed: u64, n: usize) -> ConvexBody {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let pts: Vec<Point> = (0..n)
            .map(|_| {
                Point::new3(
                    rng.gen::<f64>() * 4.0 - 2.0,
                    rng.gen::<f64>() * 4.0 - 2.0,
                    rng.gen::<f64>() * 4.0 - 2.0,
                )
            })
            .collect();
        if let Ok(b) = ConvexBody::vpolytope(pts) {
            return b;
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> Point {
    if dim == 2 {
        Point::new2(
            (rng.gen::<f64>() * 2.0 - 1.0) * scale,
            (rng.gen::<f64>() * 2.0 - 1.0) * scale,
        )
    } else {
        Point::new3(
            (rng.gen::<f64>() * 2.0 - 1.0) * scale,
            (rng.gen::<f64>() * 2.0 - 1.0) * scale,
            (rng.gen::<f64>() * 2.0 - 1.0) * scale,
        )
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gauge_is_positively_homogeneous(seed in 0u64..5000, n in 5usize..12) {
        let body = if seed % 2 == 0 { random_polygon(seed, n) } else { random_polytope3(seed, n) };
        let a = body.reference_point();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
        for _ in 0..100 {
            let p = random_point(&mut rng, body.dim(), 3.0);
            let g = minkowski::gauge(&body, &p).unwrap();
            for t in [0.0, 0.25, 1.0, 2.5, 10.0] {
                let q = a + (p - a).scale(t);
                let gt = minkowski::gauge(&body, &q).unwrap();
                prop_assert!((gt - t * g).abs() <= 1e-9 * (1.0 + t * g.abs()),
                    "t={t} g={g} gt={gt}");
            }
        }
    }

    #[test]
    fn gauge_agrees_across_representations(seed in 0u64..5000, n in 5usize..10) {
        let body = if seed % 2 == 0 { random_polygon(seed, n) } else { random_polytope3(seed, n) };
        let hrep = convert::convert(&body, Representation::Halfspaces).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1111);
        for _ in 0..100 {
            let p = random_point(&mut rng, body.dim(), 3.0);
            let gv = minkowski::gauge(&body, &p).unwrap();
            let gh = minkowski::gauge(&hrep, &p).unwrap();
            prop_assert!((gv - gh).abs() <= 1e-9 * (1.0 + gv.abs()), "v={gv} h={gh}");
            let inside_v = gv <= 1.0;
            let inside_h = minkowski::member_exact(&hrep, &p, 1e-9).unwrap();
            if (gv - 1.0).abs() > 1e-7 {
                prop_assert_eq!(inside_v, inside_h, "gauge {} vs membership", gv);
            }
        }
    }

    #[test]
    fn support_is_subadditive(seed in 0u64..5000) {
        let bodies = [
            random_polygon(seed, 8),
            random_polytope3(seed, 9),
            ConvexBody::lpball(LpExponent::Finite(1.0 + (seed % 60) as f64 / 10.0), 3).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7777);
        for body in &bodies {
            for _ in 0..60 {
                let u = random_point(&mut rng, body.dim(), 1.0);
                let v = random_point(&mut rng, body.dim(), 1.0);
                let hu = minkowski::support(body, &u).unwrap();
                let hv = minkowski::support(body, &v).unwrap();
                let huv = minkowski::support(body, &(u + v)).unwrap();
                prop_assert!(huv <= hu + hv + 1e-9, "{huv} > {hu} + {hv}");
            }
        }
    }

    #[test]
    fn convert_roundtrip_preserves_vertices(seed in 0u64..5000, n in 4usize..20) {
        let body = if seed % 2 == 0 { random_polygon(seed, n) } else { random_polytope3(seed, n) };
        let hull = convert::convert(&body, Representation::Vertices).unwrap();
        let h = convert::convert(&hull, Representation::Halfspaces).unwrap();
        let back = convert::convert(&h, Representation::Vertices).unwrap();
        let va = hull.polytope_vertices().unwrap().unwrap();
        let vb = back.polytope_vertices().unwrap().unwrap();
        prop_assert_eq!(va.len(), vb.len(), "vertex counts differ");
        for a in &va {
            let d = vb.iter().map(|b| a.dist(b)).fold(f64::INFINITY, f64::min);
            prop_assert!(d <= 1e-9, "vertex moved by {d}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn john_normalization_postcondition(seed in 0u64..1000, n in 5usize..10) {
        let body = if seed % 2 == 0 { random_polygon(seed, n) } else { random_polytope3(seed, n) };
        let (cert, image) = john::john_normalize(&body).unwrap();
        prop_assert!(cert.verified_inner && cert.verified_outer);
        let nd = body.dim() as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9999);
        for _ in 0..10_000 {
            let u = random_point(&mut rng, body.dim(), 1.0);
            let un = u.norm();
            if un < 1e-6 {
                continue;
            }
            let u = u.scale(1.0 / un);
            let s = minkowski::support(&image, &u).unwrap();
            prop_assert!(s >= 1.0 - 1e-9, "inner support {s}");
            prop_assert!(s <= nd + 1e-6, "outer support {s}");
        }
    }
}

#[test]
fn bm_distance_is_nonnegative_and_verified() {
    let budget = covfun_core::banach::BmBudget { seed: 3, starts: 6, outer_iters: 60, inner_iters: 50 };
    let pairs = [
        (shapes::square(1.0), shapes::triangle()),
        (shapes::disc(), shapes::regular_polygon(5, 1.0)),
    ];
    for (a, b) in &pairs {
        let d = covfun_core::banach::bm_distance_upper(a, b, &budget).unwrap();
        assert!(d.log_ratio >= 0.0);
        assert!(d.cert.verified_inner, "inner sandwich must re-verify");
        assert!(d.cert.verified_outer, "outer sandwich must re-verify");
    }
}

#[test]
fn hexagon_residuals_across_bodies() {
    let bodies = [
        shapes::disc(),
        shapes::square(1.0),
        shapes::triangle(),
        shapes::regular_polygon(9, 1.3),
        ConvexBody::reuleaux_polygon(5).unwrap(),
        ConvexBody::lpball(LpExponent::Finite(3.0), 2).unwrap(),
    ];
    for body in &bodies {
        let hex = covfun_core::hexagon::inscribe_affine_hexagon(body).unwrap();
        assert_eq!(hex.symmetry_residual(), 0.0);
        assert!(
            hex.boundary_residual < 1e-7,
            "boundary residual {} too large",
            hex.boundary_residual
        );
    }
}

#[test]
fn diameter_matches_support_width_on_grid() {
    let bodies = [shapes::triangle(), shapes::square(1.0), random_polygon(77, 9)];
    for body in &bodies {
        let d = covfun_core::metrics::diameter(body).unwrap();
        let grid_d = grids::circle(4096)
            .iter()
            .map(|u| minkowski::width(body, u).unwrap())
            .fold(0.0, f64::max);
        assert!(
            (d - grid_d).abs() < 1e-4 * (1.0 + d),
            "diameter {d} vs grid width {grid_d}"
        );
    }
}

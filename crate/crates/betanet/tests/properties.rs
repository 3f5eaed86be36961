use covfun_betanet::{cap_cover, f_bound, net_params, radial_grid, snap_to_net, CapCover, NetParams};
use covfun_core::body::ConvexBody;
use covfun_core::point::{Mat, Point};
use covfun_core::shapes;
use proptest::prelude::*;
use std::f64::consts::PI;
use std::sync::OnceLock;

fn unit3(z: f64, phi: f64) -> Point {
    let s = (1.0 - z * z).sqrt();
    Point::new3(s * phi.cos(), s * phi.sin(), z)
}

fn shared_net() -> &'static (NetParams, CapCover) {
    static NET: OnceLock<(NetParams, CapCover)> = OnceLock::new();
    NET.get_or_init(|| {
        let params = net_params(3, 2.0).unwrap();
        let caps = cap_cover(3, params.theta).unwrap();
        (params, caps)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn radial_grids_stay_on_their_ray(
        z in -0.999f64..0.999,
        phi in 0.0f64..(2.0 * PI),
        m in 1usize..40,
    ) {
        let anchor = unit3(z, phi).scale(3.0);
        let grid = radial_grid(&anchor, 3, m).unwrap();
        prop_assert_eq!(grid.len(), m + 1);
        let dir = anchor.scale(1.0 / 3.0);
        for (j, p) in grid.iter().enumerate() {
            let t = p.dot(&dir);
            prop_assert!(p.dist(&dir.scale(t)) <= 1e-9, "grid point {j} left the ray");
            prop_assert!(t >= 1.0 - 1e-9 && t <= 3.0 + 1e-9);
        }
        for w in grid.windows(2) {
            prop_assert!(w[1].norm() > w[0].norm());
        }
    }

    #[test]
    fn residual_sits_between_zero_and_its_envelope(
        theta in 1e-5f64..0.05,
        m in 500usize..50_000,
    ) {
        let fb = f_bound(3, m, theta).unwrap();
        prop_assert!(fb.value > 0.0);
        prop_assert!(fb.value < fb.envelope);
        let finer = f_bound(3, m * 2, theta).unwrap();
        prop_assert!(finer.value <= fb.value + 1e-15);
    }

    #[test]
    fn certified_parameters_contract_to_the_requested_gap(beta in 0.02f64..1.2) {
        let p = net_params(3, beta).unwrap();
        prop_assert!(p.contraction <= beta + 1e-12);
        prop_assert!((p.theta * 21.0 - beta).abs() <= 1e-12);
        let quotient = 21.0 / beta;
        prop_assert!(p.m as f64 <= quotient + 1e-6);
        prop_assert!(p.m as f64 >= quotient - 1.0 - 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn circle_covers_leave_no_uncovered_arc(theta in 0.05f64..3.8) {
        let cover = cap_cover(2, theta).unwrap();
        prop_assert!(PI / cover.count() as f64 <= cover.theta_prime + 1e-12);
        for p in &cover.points {
            prop_assert!((p.norm() - 2.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn scaled_balls_snap_to_the_nearest_grid_level_below(lambda in 1.0f64..2.999) {
        let (params, caps) = shared_net();
        let stretch = Mat::from_rows(&[
            vec![lambda, 0.0, 0.0],
            vec![0.0, lambda, 0.0],
            vec![0.0, 0.0, lambda],
        ]);
        let ball = ConvexBody::affine_image(stretch, Point::zero(3), shapes::ball3()).unwrap();
        let result = snap_to_net(&ball, params, caps).unwrap();
        let step = 2.0 / params.m as f64;
        for v in result.p.vertices.iter().step_by(97) {
            let rho = v.norm();
            let level = (rho - 1.0) / step;
            prop_assert!((level - level.round()).abs() <= 1e-6, "norm {rho} off the grid");
            prop_assert!(rho <= lambda + 1e-9);
            prop_assert!(lambda - rho < step + 1e-9);
        }
        prop_assert!(result.outer_factor <= params.contraction + 1e-9);
        prop_assert!(result.bm_log_bound <= params.beta);
    }
}

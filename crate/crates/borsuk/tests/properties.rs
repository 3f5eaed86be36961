use covfun_borsuk::{
    conflict_colorable, hausdorff_distance, phi_upper, reuleaux_polygon, PartitionResult,
    PointCloud,
};
use covfun_core::{ConvexBody, Point};
use covfun_covering::SearchBudget;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_cloud(rng: &mut ChaCha8Rng, n: usize) -> PointCloud {
    let points: Vec<Point> =
        (0..n).map(|_| Point::new2(rng.gen::<f64>(), rng.gen::<f64>())).collect();
    PointCloud::new(points).unwrap()
}

/// Exhaustive m-coloring in plain index order, independent of the library's
/// saturation-ordered search.
fn oracle_colorable(cloud: &PointCloud, r: f64, m: usize) -> bool {
    let pts = cloud.points();
    let n = pts.len();
    let t = r * cloud.diameter();
    let mut adj = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            if pts[i].dist(&pts[j]) > t {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }
    fn assign(v: usize, colors: &mut Vec<usize>, adj: &[Vec<bool>], m: usize) -> bool {
        let n = adj.len();
        if v == n {
            return true;
        }
        let used = colors[..v].iter().copied().max().unwrap_or(0);
        for c in 1..=m.min(used + 1) {
            if (0..v).all(|w| !adj[v][w] || colors[w] != c) {
                colors[v] = c;
                if assign(v + 1, colors, adj, m) {
                    return true;
                }
            }
        }
        colors[v] = 0;
        false
    }
    assign(0, &mut vec![0; n], &adj, m)
}

#[test]
fn colorability_matches_the_exhaustive_oracle_on_random_clouds() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0B5C);
    for case in 0..100 {
        let n = rng.gen_range(5..=20);
        let cloud = random_cloud(&mut rng, n);
        let r = rng.gen_range(0.2..0.95);
        let m = rng.gen_range(2..=4);
        let expected = oracle_colorable(&cloud, r, m);
        let (got, witness) = conflict_colorable(&cloud, r, m).unwrap();
        assert_eq!(got, expected, "case {case}: n={n} r={r:.3} m={m}");
        if let Some(witness) = witness {
            let t = r * cloud.diameter();
            let pts = cloud.points();
            for i in 0..pts.len() {
                assert!((1..=m).contains(&witness[i]));
                for j in i + 1..pts.len() {
                    if witness[i] == witness[j] {
                        assert!(pts[i].dist(&pts[j]) <= t + 1e-9);
                    }
                }
            }
        } else {
            assert!(!got);
        }
    }
}

#[test]
fn reuleaux_triangle_samples_split_into_three_short_parts() {
    let body = reuleaux_polygon(3).unwrap();
    let cloud = PointCloud::on_boundary(&body, 72).unwrap();
    let result = phi_upper(&cloud, 3, &SearchBudget::default()).unwrap();
    assert!(result.r_ratio <= 3f64.sqrt() / 2.0 + 0.01, "got {}", result.r_ratio);
    assert!(!result.exact);
    assert!(result.max_part_ratio(&cloud) <= result.r_ratio + 1e-9);
}

#[test]
fn partition_results_serialize_with_the_contract_keys() {
    let cloud = PointCloud::new(vec![Point::new2(0.0, 0.0), Point::new2(1.0, 0.0)]).unwrap();
    let result = phi_upper(&cloud, 2, &SearchBudget::default()).unwrap();
    let json = serde_json::to_value(&result).unwrap();
    assert_eq!(json["assignment"].as_array().unwrap().len(), 2);
    assert!(json["r_ratio"].is_number());
    assert!(json["exact"].is_boolean());
    let back: PartitionResult = serde_json::from_value(json).unwrap();
    assert_eq!(back.assignment, result.assignment);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_part_respects_the_reported_ratio(seed in 0u64..1 << 20, n in 4usize..22, m in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cloud = random_cloud(&mut rng, n);
        let result = phi_upper(&cloud, m, &SearchBudget::default()).unwrap();
        prop_assert_eq!(result.assignment.len(), cloud.len());
        prop_assert!(result.assignment.iter().all(|&c| c >= 1 && c <= m));
        prop_assert!(result.max_part_ratio(&cloud) <= result.r_ratio + 1e-9);
        prop_assert!(result.exact);
        if result.r_ratio > 0.0 {
            let d = cloud.diameter();
            let pts = cloud.points();
            let mut hit = false;
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    if (pts[i].dist(&pts[j]) / d - result.r_ratio).abs() <= 1e-9 {
                        hit = true;
                    }
                }
            }
            prop_assert!(hit, "ratio {} is not a pairwise-distance ratio", result.r_ratio);
        }
    }

    #[test]
    fn extra_parts_never_hurt(seed in 0u64..1 << 20, n in 4usize..16, m in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cloud = random_cloud(&mut rng, n);
        let budget = SearchBudget::default();
        let coarse = phi_upper(&cloud, m, &budget).unwrap();
        let fine = phi_upper(&cloud, m + 1, &budget).unwrap();
        prop_assert!(fine.r_ratio <= coarse.r_ratio + 1e-12);
    }

    #[test]
    fn colorability_is_monotone_in_the_ratio(
        seed in 0u64..1 << 20,
        n in 4usize..17,
        m in 2usize..4,
        a in 0.05f64..0.95,
        b in 0.05f64..0.95,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cloud = random_cloud(&mut rng, n);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (feasible_lo, _) = conflict_colorable(&cloud, lo, m).unwrap();
        let (feasible_hi, _) = conflict_colorable(&cloud, hi, m).unwrap();
        if feasible_lo {
            prop_assert!(feasible_hi);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn hausdorff_is_symmetric_and_triangular_on_random_polygons(seed in 0u64..1 << 20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut polygon = || {
            let pts: Vec<Point> = (0..7)
                .map(|_| Point::new2(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            ConvexBody::vpolytope(pts).unwrap()
        };
        let (a, b, c) = (polygon(), polygon(), polygon());
        let ab = hausdorff_distance(&a, &b).unwrap();
        prop_assert_eq!(ab, hausdorff_distance(&b, &a).unwrap());
        let bc = hausdorff_distance(&b, &c).unwrap();
        let ac = hausdorff_distance(&a, &c).unwrap();
        prop_assert!(ac <= ab + bc + 1e-6);
        prop_assert!(ab >= 0.0);
    }
}

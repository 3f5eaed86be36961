//! Closed-form covering configurations: eight translates at ratio 2/3 for
//! cones over planar bodies, and six or eight translates at ratio sqrt(2/3)
//! for the three-dimensional l_p balls, together with the scalar
//! inequalities that certify the l_p construction for p >= 2.

use crate::config::CoverConfig;
use covfun_core::body::BodyKind;
use covfun_core::hexagon::inscribe_affine_hexagon;
use covfun_core::{ConvexBody, GeomError, GeomResult, Point};

const RATIO_CONE: f64 = 2.0 / 3.0;

/// Eight-translate cover of a cone over a planar convex base at ratio 2/3.
///
/// One translate is the homothet anchored at the apex; the other seven tile
/// the lower frustum through an affine-regular hexagon inscribed in the
/// base: the central homothet plus one reflected homothet per hexagon edge.
pub fn cone_cover_thm1(cone: &ConvexBody) -> GeomResult<CoverConfig> {
    let BodyKind::Cone { base, apex } = cone.kind() else {
        return Err(GeomError::Unsupported(
            "eight-translate cone cover requires a cone body".into(),
        ));
    };
    let hex = inscribe_affine_hexagon(base)?;
    let o = hex.center;
    let a = cone.reference_point();

    // absolute translations of the scaled copy, in the base plane
    let mut translations: Vec<Point> = Vec::with_capacity(8);
    translations.push(o.scale(1.0 / 3.0).lift());
    for j in 0..6 {
        let m = (hex.vertices[j] + hex.vertices[(j + 1) % 6]).scale(0.5);
        translations.push((m.scale(2.0 / 3.0) - o.scale(1.0 / 3.0)).lift());
    }
    translations.push(apex.scale(1.0 / 3.0));

    // translation t of r*K corresponds to anchored center t - (1-r)*a
    let shift = a.scale(1.0 - RATIO_CONE);
    let centers = translations.into_iter().map(|t| t - shift).collect();
    CoverConfig::new(RATIO_CONE, centers)
}

/// Covering configuration for the unit l_p ball in three dimensions at
/// ratio sqrt(2/3): six axis translates for p <= 2, eight diagonal
/// translates for p >= 2 (`f64::INFINITY` selects the cube).
pub fn lpball_cover_thm2(p: f64) -> GeomResult<CoverConfig> {
    if !(p >= 1.0) {
        return Err(GeomError::BadParameter(format!("l_p exponent must be >= 1, got {p}")));
    }
    let ratio = (2.0f64 / 3.0).sqrt();
    let centers = if p < 2.0 {
        let s = (1.0f64 / 3.0).powf(1.0 / p);
        let mut v = Vec::with_capacity(6);
        for i in 0..3 {
            v.push(Point::basis(i, 3).scale(s));
            v.push(Point::basis(i, 3).scale(-s));
        }
        v
    } else {
        let s = 1.0 / 3.0;
        let mut v = Vec::with_capacity(8);
        for &x in &[-s, s] {
            for &y in &[-s, s] {
                for &z in &[-s, s] {
                    v.push(Point::new3(x, y, z));
                }
            }
        }
        v
    };
    CoverConfig::new(ratio, centers)
}

/// Left- and right-hand sides of the corner containment inequality
/// (2/3)^p + 2 (1/3)^p <= (2/3)^(p/2) for the eight-translate case.
pub fn thm2_case2_terms(p: f64) -> GeomResult<(f64, f64)> {
    if !(p >= 2.0) || p.is_infinite() {
        return Err(GeomError::BadParameter(format!(
            "corner terms need a finite exponent >= 2, got {p}"
        )));
    }
    let lhs = (2.0f64 / 3.0).powf(p) + 2.0 * (1.0f64 / 3.0).powf(p);
    let rhs = (2.0f64 / 3.0).powf(p / 2.0);
    Ok((lhs, rhs))
}

/// The two scalar inequalities that make the eight-translate configuration
/// a cover of the l_p ball at ratio sqrt(2/3), checked for p in [2, inf].
pub fn thm2_inequalities(p: f64) -> GeomResult<(bool, bool)> {
    if !(p >= 2.0) {
        return Err(GeomError::BadParameter(format!("exponent must be >= 2, got {p}")));
    }
    if p.is_infinite() {
        // both sides of each inequality decay geometrically, the left sides
        // like (2/3)^p and the right like (2/3)^(p/2), so the limits hold
        return Ok((true, true));
    }
    let (lhs1, rhs) = thm2_case2_terms(p)?;
    let lhs2 = 3.0 * ((1.0f64 / 3.0).powf(1.0 / p) - 1.0 / 3.0).powf(p);
    Ok((lhs1 <= rhs + 1e-12, lhs2 <= rhs + 1e-12))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::VerifyOptions;
    use crate::verify::verify_cover_with;
    use covfun_core::{minkowski, shapes};

    #[test]
    fn lp_cover_shapes_by_exponent() {
        let six = lpball_cover_thm2(1.5).unwrap();
        assert_eq!(six.centers.len(), 6);
        let eight = lpball_cover_thm2(2.0).unwrap();
        assert_eq!(eight.centers.len(), 8);
        let cube = lpball_cover_thm2(f64::INFINITY).unwrap();
        assert_eq!(cube.centers.len(), 8);
        assert!(lpball_cover_thm2(0.5).is_err());
        assert!((six.ratio - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn octahedron_cover_has_generous_slack() {
        // for p = 1 the claimed ratio sits well above the optimum 2/3, so
        // the verifier succeeds at shallow depth
        let body = shapes::lp_ball(1.0, 3);
        let base = lpball_cover_thm2(1.0).unwrap();
        let cfg = CoverConfig::new(base.ratio + 1e-4, base.centers).unwrap();
        let opts = VerifyOptions { max_depth: 30, ..VerifyOptions::default() };
        let cert = verify_cover_with(&body, &cfg, &opts).unwrap();
        assert!(cert.verdict.is_covered(), "verdict {:?}", cert.verdict);
    }

    #[test]
    fn cube_cover_verifies() {
        let body = shapes::lp_ball(f64::INFINITY, 3);
        let base = lpball_cover_thm2(f64::INFINITY).unwrap();
        let cfg = CoverConfig::new(base.ratio + 1e-3, base.centers).unwrap();
        let opts = VerifyOptions { max_depth: 44, ..VerifyOptions::default() };
        let cert = verify_cover_with(&body, &cfg, &opts).unwrap();
        assert!(cert.verdict.is_covered(), "verdict {:?}", cert.verdict);
    }

    #[test]
    fn cone_over_square_cover_verifies() {
        let cone =
            ConvexBody::cone(shapes::square(1.0), Point::new3(0.0, 0.0, 1.0)).unwrap();
        let base = cone_cover_thm1(&cone).unwrap();
        assert_eq!(base.centers.len(), 8);
        assert!((base.ratio - 2.0 / 3.0).abs() < 1e-15);
        let cfg = CoverConfig::new(base.ratio + 1e-3, base.centers).unwrap();
        let opts =
            VerifyOptions { max_depth: 48, margin: 1e-7, ..VerifyOptions::default() };
        let cert = verify_cover_with(&cone, &cfg, &opts).unwrap();
        assert!(cert.verdict.is_covered(), "verdict {:?}", cert.verdict);
    }

    #[test]
    fn cone_cover_rejects_other_bodies() {
        assert!(cone_cover_thm1(&shapes::cube(1.0)).is_err());
    }

    #[test]
    fn apex_translate_is_anchored_from_apex() {
        let cone =
            ConvexBody::cone(shapes::triangle(), Point::new3(0.2, -0.1, 1.5)).unwrap();
        let cfg = cone_cover_thm1(&cone).unwrap();
        let a = cone.reference_point();
        let expect = Point::new3(0.2, -0.1, 1.5).scale(1.0 / 3.0) - a.scale(1.0 / 3.0);
        assert!(cfg.centers[7].dist(&expect) < 1e-12);
        // the apex itself must lie in the apex-anchored translate
        let apex = Point::new3(0.2, -0.1, 1.5);
        let g = minkowski::gauge(&cone, &(apex - cfg.centers[7])).unwrap();
        assert!(g <= cfg.ratio + 1e-9, "gauge {g}");
    }

    #[test]
    fn case2_terms_balance_exactly_at_two() {
        let (lhs, rhs) = thm2_case2_terms(2.0).unwrap();
        assert!((lhs - rhs).abs() <= 1e-15, "lhs {lhs} rhs {rhs}");
    }

    #[test]
    fn inequalities_hold_on_grid() {
        for k in 0..=50 {
            let p = 2.0 + 62.0 * k as f64 / 50.0;
            let (a, b) = thm2_inequalities(p).unwrap();
            assert!(a && b, "failed at p = {p}");
        }
        assert_eq!(thm2_inequalities(f64::INFINITY).unwrap(), (true, true));
        assert!(thm2_inequalities(1.5).is_err());
    }
}

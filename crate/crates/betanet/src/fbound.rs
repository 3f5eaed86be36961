//! The radial approximation residual `f(n, m, theta)`.
//!
//! Snapping a body to the radial grids can pull each boundary ray inward; the
//! residual bounds how far, via the tangent-line geometry of the inner sphere
//! seen from a grid point and from its outward neighbor. The closed form is
//! evaluated term by term, with domain failures attributed to the term that
//! caused them.

use crate::caps::spherical_radius;
use covfun_core::error::{GeomError, GeomResult};
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

/// Value of the residual together with its first-order comparator
/// `2n*theta + (n-1)/m` and the simple envelope `3n(theta + 1/m)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FBound {
    pub value: f64,
    pub asymptotic: f64,
    pub envelope: f64,
}

/// Evaluate the residual for dimension `n`, radial grid resolution `m`, and
/// cap radius `theta`.
pub fn f_bound(n: usize, m: usize, theta: f64) -> GeomResult<FBound> {
    if n < 2 {
        return Err(GeomError::BadParameter(format!(
            "the residual needs dimension at least 2, got {n}"
        )));
    }
    if m == 0 {
        return Err(GeomError::BadParameter("radial resolution m must be at least 1".into()));
    }
    if !(theta.is_finite() && theta > 0.0 && theta < 1.0) {
        return Err(GeomError::BadParameter(format!(
            "cap radius must lie in (0, 1), got {theta}"
        )));
    }
    let nf = n as f64;
    let mf = m as f64;
    let tp = spherical_radius(nf, theta);
    let inner = 1.0 - theta / nf;

    let a1 = (nf - theta) / (nf * nf);
    if !(-1.0..=1.0).contains(&a1) {
        return Err(GeomError::numerical(
            "f_bound",
            format!("arccos((n - theta)/n^2) argument {a1} out of [-1, 1]"),
        ));
    }
    let lead_angle = a1.acos() + tp;
    if lead_angle >= FRAC_PI_2 - 1e-9 {
        return Err(GeomError::numerical(
            "f_bound",
            "tan(arccos((n - theta)/n^2) + theta') reaches its pole; parameters are outside the small-theta regime".to_string(),
        ));
    }

    let s1 = nf * nf - inner * inner;
    if s1 < 0.0 {
        return Err(GeomError::numerical(
            "f_bound",
            format!("sqrt(n^2 - (1 - theta/n)^2) argument {s1} negative"),
        ));
    }

    let reach = nf - (nf - 1.0) / mf;
    let s2 = reach * reach - inner * inner;
    if s2 < -1e-15 {
        return Err(GeomError::numerical(
            "f_bound",
            format!("sqrt((n - (n-1)/m)^2 - (1 - theta/n)^2) argument {s2} negative"),
        ));
    }

    let a2 = inner / reach;
    if !(-1.0..=1.0).contains(&a2) {
        return Err(GeomError::numerical(
            "f_bound",
            format!("arccos((1 - theta/n)/(n - (n-1)/m)) argument {a2} out of [-1, 1]"),
        ));
    }

    let value = inner * lead_angle.tan() - s1.sqrt()
        + (nf - 1.0) / mf
        + s2.max(0.0).sqrt()
        - inner * (a2.acos() - tp).tan();
    if !value.is_finite() {
        return Err(GeomError::numerical("f_bound", "residual evaluated to a non-finite value"));
    }
    Ok(FBound {
        value,
        asymptotic: 2.0 * nf * theta + (nf - 1.0) / mf,
        envelope: 3.0 * nf * (theta + 1.0 / mf),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_matches_first_order_behavior() {
        let fb = f_bound(3, 10_000, 0.001).unwrap();
        assert!((fb.asymptotic - 0.0062).abs() <= 1e-15);
        assert!(
            (fb.value - fb.asymptotic).abs() <= 0.2 * fb.asymptotic,
            "residual {} drifted from comparator {}",
            fb.value,
            fb.asymptotic
        );
    }

    #[test]
    fn residual_decreases_with_grid_refinement() {
        let coarse = f_bound(3, 1_000, 0.01).unwrap().value;
        let medium = f_bound(3, 10_000, 0.01).unwrap().value;
        let fine = f_bound(3, 100_000, 0.01).unwrap().value;
        assert!(coarse > medium && medium > fine, "{coarse} {medium} {fine}");
    }

    #[test]
    fn relative_residual_vanishes_at_fine_parameters() {
        let theta = 1e-4;
        let fb = f_bound(3, 100_000, theta).unwrap();
        assert!(fb.value / (1.0 - theta / 3.0) < 1e-3);
    }

    #[test]
    fn envelope_dominates_on_a_parameter_grid() {
        for &theta in &[1e-4, 3e-4, 1e-3, 3e-3, 1e-2] {
            for &m in &[1_000usize, 10_000, 100_000] {
                let fb = f_bound(3, m, theta).unwrap();
                assert!(fb.value > 0.0, "theta {theta} m {m}: residual {}", fb.value);
                assert!(
                    fb.value < fb.envelope,
                    "theta {theta} m {m}: residual {} vs envelope {}",
                    fb.value,
                    fb.envelope
                );
                let fb2 = f_bound(2, m, theta).unwrap();
                assert!(fb2.value > 0.0 && fb2.value < fb2.envelope);
            }
        }
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(matches!(f_bound(1, 10, 0.01), Err(GeomError::BadParameter(_))));
        assert!(matches!(f_bound(3, 0, 0.01), Err(GeomError::BadParameter(_))));
        assert!(matches!(f_bound(3, 10, 0.0), Err(GeomError::BadParameter(_))));
        assert!(matches!(f_bound(3, 10, 1.0), Err(GeomError::BadParameter(_))));
        assert!(matches!(f_bound(3, 10, f64::NAN), Err(GeomError::BadParameter(_))));
    }
}

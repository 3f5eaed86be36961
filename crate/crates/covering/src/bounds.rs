//! Classical covering-number bounds: the planar translative covering
//! constant, the general-dimension counting bound, and the metric gap that
//! a covering ratio buys under the log Banach–Mazur distance.

use covfun_core::{convert, ConvexBody, GeomError, GeomResult};

/// Smallest number of smaller homothets that cover a planar convex body:
/// four when the body is a parallelogram, three otherwise.
pub fn levi_c(body: &ConvexBody) -> GeomResult<u32> {
    if body.dim() != 2 {
        return Err(GeomError::DimensionMismatch { expected: 2, got: body.dim() });
    }
    let Some(verts) = body.polytope_vertices()? else {
        return Ok(3);
    };
    let hull = convert::polygon_ccw(&verts)?;
    if hull.len() == 4 {
        let scale = hull.iter().map(|v| v.norm()).fold(1.0, f64::max);
        let defect = (hull[0] + hull[2]) - (hull[1] + hull[3]);
        if defect.norm() <= 1e-9 * scale {
            return Ok(4);
        }
    }
    Ok(3)
}

/// Counting upper bound on the translative covering number in dimension
/// `n`: the binomial or power coefficient times n ln n + n ln ln n + 5n.
pub fn rogers_zong_bound(n: u32, symmetric: bool) -> GeomResult<u64> {
    if n < 2 {
        return Err(GeomError::BadParameter(format!("dimension must be at least 2, got {n}")));
    }
    if n > 60 {
        return Err(GeomError::BadParameter(format!("dimension {n} overflows the exact coefficient")));
    }
    let coeff = if symmetric { (1u128) << n } else { central_binomial(n) };
    let nf = f64::from(n);
    let growth = nf * nf.ln() + nf * nf.ln().ln() + 5.0 * nf;
    let value = (coeff as f64) * growth;
    if !value.is_finite() || value >= u64::MAX as f64 {
        return Err(GeomError::BadParameter(format!("bound overflows for dimension {n}")));
    }
    Ok(value.ceil() as u64)
}

/// C(2n, n) computed exactly.
fn central_binomial(n: u32) -> u128 {
    let mut acc: u128 = 1;
    for k in 1..=n as u128 {
        acc = acc * (n as u128 + k) / k;
    }
    acc
}

/// Radius of the log Banach-Mazur ball around a body within which every
/// neighbour inherits a covering ratio below 1 from the body's ratio `c_n`.
pub fn beta_for_gap(c_n: f64) -> GeomResult<f64> {
    if !(c_n > 0.0 && c_n < 1.0) {
        return Err(GeomError::BadParameter(format!(
            "covering ratio must lie strictly between 0 and 1, got {c_n}"
        )));
    }
    Ok((1.0 + (1.0 - c_n) / 2.0).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use covfun_core::shapes;

    #[test]
    fn parallelograms_need_four() {
        assert_eq!(levi_c(&shapes::square(1.0)).unwrap(), 4);
        assert_eq!(levi_c(&shapes::lp_ball(1.0, 2)).unwrap(), 4);
    }

    #[test]
    fn other_planar_bodies_need_three() {
        assert_eq!(levi_c(&shapes::triangle()).unwrap(), 3);
        assert_eq!(levi_c(&shapes::disc()).unwrap(), 3);
        assert_eq!(levi_c(&shapes::regular_polygon(6, 1.0)).unwrap(), 3);
        assert_eq!(levi_c(&ConvexBody::reuleaux_polygon(3).unwrap()).unwrap(), 3);
        assert!(levi_c(&shapes::cube(1.0)).is_err());
    }

    #[test]
    fn counting_bound_reference_values() {
        assert_eq!(rogers_zong_bound(3, false).unwrap(), 372);
        assert_eq!(rogers_zong_bound(3, true).unwrap(), 149);
        assert!(rogers_zong_bound(1, false).is_err());
    }

    #[test]
    fn counting_bound_grows_with_dimension() {
        for sym in [false, true] {
            let mut prev = 0;
            for n in 2..=12 {
                let b = rogers_zong_bound(n, sym).unwrap();
                assert!(b > prev);
                prev = b;
            }
        }
    }

    #[test]
    fn gap_radius_reference_values() {
        let b = beta_for_gap((2.0f64 / 3.0).sqrt()).unwrap();
        assert!((b - 0.087779).abs() < 1e-5, "got {b}");
        let half = beta_for_gap(0.5).unwrap();
        assert!((half - 1.25f64.ln()).abs() < 1e-15);
        assert!(beta_for_gap(0.0).is_err());
        assert!(beta_for_gap(1.0).is_err());
    }
}

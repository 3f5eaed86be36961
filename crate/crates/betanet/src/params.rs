//! Parameter selection for a target approximation gap and the resulting
//! net-cardinality bounds, kept in log space.

use crate::fbound::f_bound;
use covfun_core::error::{GeomError, GeomResult};
use serde::Serialize;

/// Cap radius and radial resolution certified for a target gap `beta`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct NetParams {
    pub n: usize,
    pub beta: f64,
    pub theta: f64,
    pub m: usize,
    /// Certified value of `f(n, m, theta) / (1 - theta/n)`, at most `beta`.
    pub contraction: f64,
}

/// Floor that forgives the last bit of binary rounding, so quotients that
/// are integers on paper (like 21/0.1) land on the integer.
fn eps_floor(x: f64) -> f64 {
    (x + 1e-9 * x.abs().max(1.0)).floor()
}

/// Choose cap radius `theta = beta/(7n)` and radial resolution
/// `m = floor(7n/beta)`, then certify the contraction inequality at those
/// values.
pub fn net_params(n: usize, beta: f64) -> GeomResult<NetParams> {
    if n < 2 {
        return Err(GeomError::BadParameter(format!(
            "net parameters need dimension at least 2, got {n}"
        )));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(GeomError::BadParameter(format!(
            "target gap must be positive and finite, got {beta}"
        )));
    }
    let nf = n as f64;
    let theta = beta / (7.0 * nf);
    let m = eps_floor(7.0 * nf / beta);
    if m < 1.0 {
        return Err(GeomError::BadParameter(format!(
            "target gap {beta} leaves no radial grid steps; it must be at most {}",
            7.0 * nf
        )));
    }
    let m = m as usize;
    let fb = f_bound(n, m, theta)?;
    let contraction = fb.value / (1.0 - theta / nf);
    if !(contraction > 0.0 && contraction <= beta + 1e-12) {
        return Err(GeomError::VerificationFailed(format!(
            "contraction {contraction} exceeds the target gap {beta}; choose a smaller beta"
        )));
    }
    Ok(NetParams { n, beta, theta, m, contraction })
}

/// Base-10 logarithm of the net-cardinality bound
/// `floor(7n/beta)^(c * 14^n * n^(2n+3) * beta^(-n))`, computed without ever
/// materializing the tower.
pub fn net_cardinality_log_bound(n: usize, beta: f64, c: f64) -> GeomResult<f64> {
    if n < 2 {
        return Err(GeomError::BadParameter(format!(
            "cardinality bounds need dimension at least 2, got {n}"
        )));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(GeomError::BadParameter(format!(
            "target gap must be positive and finite, got {beta}"
        )));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(GeomError::BadParameter(format!(
            "the counting constant must be positive and finite, got {c}"
        )));
    }
    let nf = n as f64;
    let m = eps_floor(7.0 * nf / beta);
    if m < 2.0 {
        return Err(GeomError::BadParameter(format!(
            "target gap {beta} leaves a trivial grid; the bound needs m >= 2"
        )));
    }
    let exponent = c * 14f64.powi(n as i32) * nf.powi(2 * n as i32 + 3) / beta.powi(n as i32);
    if !exponent.is_finite() {
        return Err(GeomError::numerical(
            "net cardinality",
            format!("exponent overflowed at n = {n}, beta = {beta}"),
        ));
    }
    Ok(exponent * m.log10())
}

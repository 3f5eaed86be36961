//! Derivative-free local minimization (Nelder–Mead) for the small searches
//! scattered through the crate: placement shifts, map parameters, scale
//! factors. Deterministic: no internal randomness.

/// Minimize `f` from `x0`, exploring with the given initial step per
/// coordinate. Returns the best point and value seen.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    step: &[f64],
    max_iter: usize,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    assert!(n >= 1 && step.len() == n);
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = f(x0);
    simplex.push((x0.to_vec(), v0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step[i];
        let v = f(&x);
        simplex.push((x, v));
    }
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if (worst - best).abs() < 1e-15 * (1.0 + best.abs()) {
            break;
        }
        // centroid of all but the worst
        let mut c = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for j in 0..n {
                c[j] += x[j] / n as f64;
            }
        }
        let xw = simplex[n].0.clone();
        let reflect: Vec<f64> = (0..n).map(|j| c[j] + alpha * (c[j] - xw[j])).collect();
        let vr = f(&reflect);
        if vr < simplex[0].1 {
            let expand: Vec<f64> = (0..n).map(|j| c[j] + gamma * (reflect[j] - c[j])).collect();
            let ve = f(&expand);
            simplex[n] = if ve < vr { (expand, ve) } else { (reflect, vr) };
        } else if vr < simplex[n - 1].1 {
            simplex[n] = (reflect, vr);
        } else {
            let contract: Vec<f64> = if vr < simplex[n].1 {
                (0..n).map(|j| c[j] + rho * (reflect[j] - c[j])).collect()
            } else {
                (0..n).map(|j| c[j] + rho * (xw[j] - c[j])).collect()
            };
            let vc = f(&contract);
            if vc < simplex[n].1.min(vr) {
                simplex[n] = (contract, vc);
            } else {
                // shrink toward the best vertex
                let x_best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    for j in 0..n {
                        entry.0[j] = x_best[j] + sigma * (entry.0[j] - x_best[j]);
                    }
                    entry.1 = f(&entry.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    simplex.swap_remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_shifted_quadratic() {
        let f = |x: &[f64]| (x[0] - 3.0).powi(2) + (x[1] + 1.5).powi(2) + 7.0;
        let (x, v) = nelder_mead(f, &[0.0, 0.0], &[1.0, 1.0], 500);
        assert!((x[0] - 3.0).abs() < 1e-6, "{x:?}");
        assert!((x[1] + 1.5).abs() < 1e-6, "{x:?}");
        assert!((v - 7.0).abs() < 1e-10);
    }

    #[test]
    fn minimizes_piecewise_max() {
        // chebyshev-like objective with a kink at the optimum
        let f = |x: &[f64]| (x[0] - 1.0).abs().max((x[0] + 1.0).abs());
        let (x, v) = nelder_mead(f, &[0.7], &[0.5], 300);
        assert!(x[0].abs() < 1e-6, "{x:?}");
        assert!((v - 1.0).abs() < 1e-6);
    }
}

//! Small dense linear programs (at most 4 variables) by Seidel's randomized
//! incremental method. Used for Chebyshev centers and containment checks;
//! problem sizes here are a handful of variables over a few hundred
//! constraints, where this method is simple and fast.

use crate::error::{GeomError, GeomResult};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MAX_VARS: usize = 4;

/// maximize c·x subject to a_i·x <= b_i and |x_j| <= bound.
///
/// Returns the optimizer. Errors if the system is infeasible.
pub fn maximize(
    a: &[[f64; MAX_VARS]],
    b: &[f64],
    c: [f64; MAX_VARS],
    dim: usize,
    bound: f64,
    seed: u64,
) -> GeomResult<[f64; MAX_VARS]> {
    assert!(dim >= 1 && dim <= MAX_VARS);
    assert_eq!(a.len(), b.len());
    let mut order: Vec<usize> = (0..a.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let cons: Vec<([f64; MAX_VARS], f64)> = order.iter().map(|&i| (a[i], b[i])).collect();
    solve(&cons, c, dim, bound)
        .ok_or_else(|| GeomError::numerical("linear program", "infeasible system"))
}

fn solve(
    cons: &[([f64; MAX_VARS], f64)],
    c: [f64; MAX_VARS],
    dim: usize,
    bound: f64,
) -> Option<[f64; MAX_VARS]> {
    if dim == 1 {
        let mut lo = -bound;
        let mut hi = bound;
        for (a, b) in cons {
            let coef = a[0];
            if coef.abs() < 1e-300 {
                if *b < -1e-9 {
                    return None;
                }
                continue;
            }
            let v = b / coef;
            if coef > 0.0 {
                hi = hi.min(v);
            } else {
                lo = lo.max(v);
            }
        }
        if lo > hi + 1e-12 {
            return None;
        }
        let x = if c[0] >= 0.0 { hi } else { lo };
        let mut out = [0.0; MAX_VARS];
        out[0] = x;
        return Some(out);
    }

    let mut x = [0.0; MAX_VARS];
    for j in 0..dim {
        x[j] = if c[j] >= 0.0 { bound } else { -bound };
    }
    for (i, (ai, bi)) in cons.iter().enumerate() {
        let lhs: f64 = (0..dim).map(|j| ai[j] * x[j]).sum();
        if lhs <= bi + 1e-9 {
            continue;
        }
        // optimum moved; it now lies on this constraint's hyperplane
        let (piv, &piv_coef) = ai[..dim]
            .iter()
            .enumerate()
            .max_by(|p, q| p.1.abs().partial_cmp(&q.1.abs()).unwrap())?;
        if piv_coef.abs() < 1e-12 {
            return None;
        }
        // substitute x[piv] = (bi - sum_{j != piv} ai[j] x[j]) / piv_coef
        let reduce = |v: &[f64; MAX_VARS], rhs: f64| -> ([f64; MAX_VARS], f64) {
            let mut w = [0.0; MAX_VARS];
            let mut k = 0;
            for j in 0..dim {
                if j == piv {
                    continue;
                }
                w[k] = v[j] - v[piv] * ai[j] / piv_coef;
                k += 1;
            }
            (w, rhs - v[piv] * bi / piv_coef)
        };
        let mut sub_cons = Vec::with_capacity(i);
        for (aj, bj) in &cons[..i] {
            let (w, rhs) = reduce(aj, *bj);
            sub_cons.push((w, rhs));
        }
        // box bounds on the eliminated variable become explicit constraints
        for sign in [1.0, -1.0] {
            let mut unit = [0.0; MAX_VARS];
            unit[piv] = sign;
            let (w, rhs) = reduce(&unit, bound);
            sub_cons.push((w, rhs));
        }
        let (c_red, _) = reduce(&c, 0.0);
        let y = solve(&sub_cons, c_red, dim - 1, bound)?;
        // lift back
        let mut xs = [0.0; MAX_VARS];
        let mut k = 0;
        for j in 0..dim {
            if j == piv {
                continue;
            }
            xs[j] = y[k];
            k += 1;
        }
        let rest: f64 = (0..dim).filter(|&j| j != piv).map(|j| ai[j] * xs[j]).sum();
        xs[piv] = (bi - rest) / piv_coef;
        x = xs;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_center_of_square() {
        // max r s.t. +-x + r <= 1, +-y + r <= 1
        let a = vec![
            [1.0, 0.0, 1.0, 0.0],
            [-1.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 1.0, 0.0],
            [0.0, -1.0, 1.0, 0.0],
        ];
        let b = vec![1.0, 1.0, 1.0, 1.0];
        let x = maximize(&a, &b, [0.0, 0.0, 1.0, 0.0], 3, 10.0, 7).unwrap();
        assert!(x[0].abs() < 1e-9 && x[1].abs() < 1e-9, "{x:?}");
        assert!((x[2] - 1.0).abs() < 1e-9, "{x:?}");
    }

    #[test]
    fn infeasible_system_errors() {
        let a = vec![[1.0, 0.0, 0.0, 0.0], [-1.0, 0.0, 0.0, 0.0]];
        let b = vec![-2.0, -2.0]; // x <= -2 and x >= 2
        assert!(maximize(&a, &b, [1.0, 0.0, 0.0, 0.0], 1, 10.0, 3).is_err());
    }

    #[test]
    fn simple_2d_vertex_optimum() {
        // max x + y s.t. x + y <= 1, x <= 0.75
        let a = vec![[1.0, 1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]];
        let b = vec![1.0, 0.75];
        let x = maximize(&a, &b, [1.0, 1.0, 0.0, 0.0], 2, 10.0, 1).unwrap();
        assert!((x[0] + x[1] - 1.0).abs() < 1e-9, "{x:?}");
    }
}

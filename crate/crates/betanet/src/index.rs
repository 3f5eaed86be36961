//! Branch-and-bound maximum-dot-product queries over a fixed set of weighted
//! directions on the sphere.
//!
//! Points are bucketed into latitude bands subdivided in longitude. Each cell
//! stores its angular circumradius and the largest weight inside, giving the
//! upper bound `w_max * cos(max(0, angle(u, center) - radius))` per cell, so a
//! query scans only the cells that can still beat the best score found so far.

use covfun_core::point::Point;
use std::f64::consts::PI;

pub(crate) struct MaxDotIndex {
    // cell geometry, struct-of-arrays
    ccx: Vec<f64>,
    ccy: Vec<f64>,
    ccz: Vec<f64>,
    cos_r: Vec<f64>,
    sin_r: Vec<f64>,
    cmax: Vec<f64>,
    // members grouped cell by cell
    start: Vec<u32>,
    px: Vec<f64>,
    py: Vec<f64>,
    pz: Vec<f64>,
    pw: Vec<f64>,
    home: Vec<u32>,
    // banding
    rows: usize,
    row_cols: Vec<usize>,
    row_start: Vec<usize>,
}

impl MaxDotIndex {
    /// Index unit directions `dirs` with per-point weights; queries maximize
    /// `w_i * dot(dirs[i], u)` over all i.
    pub(crate) fn new(dirs: &[Point], weights: &[f64]) -> MaxDotIndex {
        assert_eq!(dirs.len(), weights.len());
        let n = dirs.len().max(1);
        let cells_target = (n / 96).clamp(64, 16_384) as f64;
        let rows = ((cells_target * PI / 4.0).sqrt().ceil() as usize).max(2);
        let band = PI / rows as f64;
        let mut row_cols = Vec::with_capacity(rows);
        let mut row_start = Vec::with_capacity(rows + 1);
        row_start.push(0usize);
        for r in 0..rows {
            let mid = (r as f64 + 0.5) * band;
            let cols = ((2.0 * PI * mid.sin() / band).ceil() as usize).max(1);
            row_cols.push(cols);
            row_start.push(row_start[r] + cols);
        }
        let cells = row_start[rows];

        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); cells];
        for (i, d) in dirs.iter().enumerate() {
            buckets[cell_of(d, rows, band, &row_cols, &row_start)].push(i as u32);
        }

        let mut ccx = vec![0.0; cells];
        let mut ccy = vec![0.0; cells];
        let mut ccz = vec![0.0; cells];
        let mut cos_r = vec![1.0; cells];
        let mut sin_r = vec![0.0; cells];
        let mut cmax: Vec<f64> = vec![0.0; cells];
        let mut start = Vec::with_capacity(cells + 1);
        let mut px = Vec::with_capacity(n);
        let mut py = Vec::with_capacity(n);
        let mut pz = Vec::with_capacity(n);
        let mut pw = Vec::with_capacity(n);
        let mut home = Vec::with_capacity(n);
        start.push(0u32);
        for (c, members) in buckets.iter().enumerate() {
            let row = row_of_cell(c, &row_start);
            let col = c - row_start[row];
            let theta = (row as f64 + 0.5) * band;
            let phi = (col as f64 + 0.5) * 2.0 * PI / row_cols[row] as f64 - PI;
            let center =
                Point::new3(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
            ccx[c] = center.x();
            ccy[c] = center.y();
            ccz[c] = center.z();
            let mut min_dot: f64 = 1.0;
            for &i in members {
                let d = dirs[i as usize];
                min_dot = min_dot.min(center.dot(&d).clamp(-1.0, 1.0));
                cmax[c] = cmax[c].max(weights[i as usize]);
                px.push(d.x());
                py.push(d.y());
                pz.push(d.z());
                pw.push(weights[i as usize]);
                home.push(i);
            }
            // widen a hair so the stored radius certainly dominates rounding
            let r = min_dot.acos().min(PI) + 1e-12;
            cos_r[c] = r.cos();
            sin_r[c] = r.sin();
            start.push(px.len() as u32);
        }

        MaxDotIndex {
            ccx,
            ccy,
            ccz,
            cos_r,
            sin_r,
            cmax,
            start,
            px,
            py,
            pz,
            pw,
            home,
            rows,
            row_cols,
            row_start,
        }
    }

    /// Exact maximum of `w_i * dot(dirs[i], u)` with the achieving index.
    pub(crate) fn max_dot(&self, u: &Point) -> (f64, usize) {
        let (ux, uy, uz) = (u.x(), u.y(), u.z());
        let mut best = f64::NEG_INFINITY;
        let mut arg = 0usize;
        let band = PI / self.rows as f64;
        let own = cell_of(u, self.rows, band, &self.row_cols, &self.row_start);
        self.scan_cell(own, ux, uy, uz, &mut best, &mut arg);
        for c in 0..self.cmax.len() {
            if c == own || self.cmax[c] <= best {
                continue;
            }
            let d = (ux * self.ccx[c] + uy * self.ccy[c] + uz * self.ccz[c]).clamp(-1.0, 1.0);
            let ub = if d >= self.cos_r[c] {
                self.cmax[c]
            } else {
                // cos(angle(u, center) - radius), expanded to avoid acos
                self.cmax[c] * (d * self.cos_r[c] + (1.0 - d * d).sqrt() * self.sin_r[c])
            };
            if ub > best {
                self.scan_cell(c, ux, uy, uz, &mut best, &mut arg);
            }
        }
        (best, arg)
    }

    fn scan_cell(&self, c: usize, ux: f64, uy: f64, uz: f64, best: &mut f64, arg: &mut usize) {
        let lo = self.start[c] as usize;
        let hi = self.start[c + 1] as usize;
        for i in lo..hi {
            let s = self.pw[i] * (ux * self.px[i] + uy * self.py[i] + uz * self.pz[i]);
            if s > *best {
                *best = s;
                *arg = self.home[i] as usize;
            }
        }
    }
}

fn cell_of(
    u: &Point,
    rows: usize,
    band: f64,
    row_cols: &[usize],
    row_start: &[usize],
) -> usize {
    let theta = u.z().clamp(-1.0, 1.0).acos();
    let row = ((theta / band) as usize).min(rows - 1);
    let phi = u.y().atan2(u.x()) + PI;
    let cols = row_cols[row];
    let col = ((phi / (2.0 * PI) * cols as f64) as usize).min(cols - 1);
    row_start[row] + col
}

fn row_of_cell(c: usize, row_start: &[usize]) -> usize {
    // the row whose half-open range [row_start[r], row_start[r+1]) holds c
    match row_start.binary_search(&(c + 1)) {
        Ok(r) => r - 1,
        Err(r) => r - 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use covfun_core::grids;
    use rand::Rng;
    use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

    fn random_unit(rng: &mut ChaCha8Rng) -> Point {
        let z: f64 = rng.gen_range(-1.0..1.0);
        let phi: f64 = rng.gen_range(0.0..2.0 * PI);
        let s = (1.0 - z * z).sqrt();
        Point::new3(s * phi.cos(), s * phi.sin(), z)
    }

    #[test]
    fn agrees_with_brute_force_on_weighted_directions() {
        let dirs = grids::fibonacci_sphere(5000);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let weights: Vec<f64> = (0..dirs.len()).map(|_| rng.gen_range(1.0..3.0)).collect();
        let index = MaxDotIndex::new(&dirs, &weights);
        for _ in 0..500 {
            let u = random_unit(&mut rng);
            let (fast, _) = index.max_dot(&u);
            let brute = dirs
                .iter()
                .zip(&weights)
                .map(|(d, w)| w * d.dot(&u))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(
                (fast - brute).abs() <= 1e-12 * brute.abs().max(1.0),
                "index max {fast} vs brute {brute}"
            );
        }
    }

    #[test]
    fn nearest_direction_queries_use_unit_weights() {
        let dirs = grids::fibonacci_sphere(2000);
        let weights = vec![1.0; dirs.len()];
        let index = MaxDotIndex::new(&dirs, &weights);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let u = random_unit(&mut rng);
            let (best, arg) = index.max_dot(&u);
            let brute = dirs
                .iter()
                .map(|d| d.dot(&u))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((best - brute).abs() <= 1e-12);
            assert!((dirs[arg].dot(&u) - brute).abs() <= 1e-12);
        }
    }
}

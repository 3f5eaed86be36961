//! Upper-bound search for the covering functional: structured seed
//! configurations, minimax placement descent, and certified acceptance of
//! every reported ratio through the subdivision verifier.

use crate::config::{
    CoverCertificate, CoverConfig, SearchBudget, SearchResult, Verdict, VerifyOptions,
};
use crate::verify::verify_cover_with;
use covfun_core::body::{BodyKind, LpExponent};
use covfun_core::{grids, metrics, minkowski};
use covfun_core::{ConvexBody, GeomError, GeomResult, Point};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Dividing the volume among `m` homothets forces ratio at least
/// (1/m)^(1/dim).
pub fn volume_lower_bound(body: &ConvexBody, m: usize) -> GeomResult<f64> {
    if m == 0 {
        return Err(GeomError::BadParameter("translate count must be positive".into()));
    }
    Ok((1.0 / m as f64).powf(1.0 / body.dim() as f64))
}

/// Verified upper bound on the covering functional for `m` translates.
///
/// Internally builds the whole chain 1..=m with identical per-level work, so
/// results for consecutive `m` are monotone across separate calls.
pub fn gamma_upper(body: &ConvexBody, m: usize, budget: &SearchBudget) -> GeomResult<SearchResult> {
    let mut chain = gamma_chain(body, m, budget)?;
    Ok(chain.pop().expect("chain is nonempty"))
}

/// The monotone chain of verified upper bounds for 1..=m translates; each
/// level is seeded with the previous level's configuration plus a duplicated
/// center, so the sequence never increases.
pub fn gamma_chain(
    body: &ConvexBody,
    m: usize,
    budget: &SearchBudget,
) -> GeomResult<Vec<SearchResult>> {
    if m == 0 {
        return Err(GeomError::BadParameter("translate count must be positive".into()));
    }
    budget.validate()?;
    let samples = build_samples(body)?;
    let mut results: Vec<SearchResult> = Vec::with_capacity(m);
    for level in 1..=m {
        let floor = volume_lower_bound(body, level)?;
        let mut best = search_level(body, level, budget, &samples, results.last())?;
        if let Some(prev) = results.last() {
            if prev.r_upper < best.r_upper {
                // a duplicated center leaves the union of translates
                // unchanged, so the previous certificate carries over
                let mut centers = prev.config.centers.clone();
                centers.push(centers[0]);
                best = SearchResult {
                    r_upper: prev.r_upper,
                    config: CoverConfig { ratio: prev.config.ratio, centers },
                    certificate: prev.certificate.clone(),
                    volume_floor: floor,
                };
            }
        }
        results.push(best);
    }
    Ok(results)
}

/// The identity cover: one translate at full ratio. Containment is
/// definitional (K inside 1·K), so no subdivision is run.
fn trivial_result(body: &ConvexBody, m: usize, floor: f64) -> SearchResult {
    let centers = vec![Point::zero(body.dim()); m.max(1)];
    SearchResult {
        r_upper: 1.0,
        config: CoverConfig { ratio: 1.0, centers },
        certificate: CoverCertificate {
            verdict: Verdict::Covered,
            cells_examined: 0,
            max_depth: 0,
            margin: 0.0,
        },
        volume_floor: floor,
    }
}

fn search_level(
    body: &ConvexBody,
    m: usize,
    budget: &SearchBudget,
    samples: &[Point],
    prev: Option<&SearchResult>,
) -> GeomResult<SearchResult> {
    let floor = volume_lower_bound(body, m)?;
    if m == 1 {
        return Ok(trivial_result(body, 1, floor));
    }

    let mut pool = seed_center_sets(body, m, budget)?;
    if let Some(p) = prev {
        let mut centers = p.config.centers.clone();
        centers.push(centers[0]);
        pool.push(centers);
    }

    // cheap triage on a sparse subsample, then full descent on the leaders
    let sparse: Vec<Point> = samples.iter().step_by(3).copied().collect();
    let mut ranked: Vec<(f64, usize)> = Vec::with_capacity(pool.len());
    for (idx, centers) in pool.iter().enumerate() {
        ranked.push((objective(body, &sparse, centers)?, idx));
    }
    ranked.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));

    let keep = ranked.len().min(8);
    let mut best_obj = f64::INFINITY;
    let mut best_centers: Option<Vec<Point>> = None;
    for &(_, idx) in ranked.iter().take(keep) {
        let (obj, centers) = descend(body, samples, &pool[idx], budget.max_iterations)?;
        if obj < best_obj - 1e-12
            || (obj < best_obj + 1e-12
                && best_centers.as_ref().map_or(true, |b| lex_less(&centers, b)))
        {
            best_obj = obj;
            best_centers = Some(centers);
        }
    }
    let Some(centers) = best_centers else {
        return Ok(trivial_result(body, m, floor));
    };

    // escalate the ratio pad until the verifier accepts
    let smooth = body.polytope_vertices()?.is_none();
    let pads: &[(f64, f64, u32)] = &[
        (1e-6, 1e-8, 52),
        (1e-4, 1e-7, 48),
        (1e-3, 1e-7, 44),
        (5e-3, 1e-7, 40),
        (2e-2, 1e-7, 36),
        (6e-2, 1e-7, 34),
    ];
    for &(pad, margin, depth) in pads {
        let r = best_obj + pad;
        if !(r > 0.0) || r + margin >= 1.0 {
            continue;
        }
        let mesh = mesh_for(body.dim(), smooth, pad);
        let opts = VerifyOptions {
            max_depth: depth,
            margin,
            cell_cap: 20_000_000,
            mesh_resolution: mesh,
        };
        let cfg = CoverConfig::new(r, centers.clone())?;
        let cert = verify_cover_with(body, &cfg, &opts)?;
        if cert.verdict.is_covered() {
            return Ok(SearchResult { r_upper: r, config: cfg, certificate: cert, volume_floor: floor });
        }
    }
    Ok(trivial_result(body, m, floor))
}

fn mesh_for(dim: usize, smooth: bool, pad: f64) -> Option<usize> {
    if !smooth {
        return None;
    }
    if dim == 2 {
        Some(if pad < 1e-4 { 8192 } else { 1024 })
    } else {
        Some(if pad < 1e-3 { 128 } else { 32 })
    }
}

fn lex_less(a: &[Point], b: &[Point]) -> bool {
    for (p, q) in a.iter().zip(b) {
        for k in 0..p.dim() {
            let (x, y) = (p.coords()[k], q.coords()[k]);
            if x < y {
                return true;
            }
            if x > y {
                return false;
            }
        }
    }
    a.len() < b.len()
}

/// Boundary ring, interior shells, polytope corners, and the anchor itself.
fn build_samples(body: &ConvexBody) -> GeomResult<Vec<Point>> {
    let a = body.reference_point();
    let dirs = if body.dim() == 2 { grids::circle(512) } else { grids::fibonacci_sphere(1024) };
    let mut pts = Vec::with_capacity(dirs.len() + dirs.len() / 2 + 16);
    for u in &dirs {
        pts.push(minkowski::boundary_point(body, u)?);
    }
    for (i, u) in dirs.iter().enumerate() {
        if i % 4 == 0 {
            let b = minkowski::boundary_point(body, u)?;
            pts.push(a + (b - a).scale(0.72));
        }
        if i % 8 == 0 {
            let b = minkowski::boundary_point(body, u)?;
            pts.push(a + (b - a).scale(0.4));
        }
    }
    if let Some(verts) = body.polytope_vertices()? {
        pts.extend(verts);
    }
    pts.push(a);
    Ok(pts)
}

/// max over samples of min over centers of the anchored gauge.
fn objective(body: &ConvexBody, samples: &[Point], centers: &[Point]) -> GeomResult<f64> {
    let mut worst = 0.0f64;
    for p in samples {
        let mut mn = f64::INFINITY;
        for x in centers {
            mn = mn.min(minkowski::gauge(body, &(*p - *x))?);
            if mn <= worst {
                break;
            }
        }
        worst = worst.max(mn);
    }
    Ok(worst)
}

/// Minimax descent: push the translate responsible for the worst sample
/// toward it with step halving, with periodic whole-configuration sweeps.
fn descend(
    body: &ConvexBody,
    samples: &[Point],
    centers0: &[Point],
    max_iters: usize,
) -> GeomResult<(f64, Vec<Point>)> {
    let a = body.reference_point();
    let m = centers0.len();
    let mut centers = centers0.to_vec();
    // gauge cache: one row per center
    let mut g: Vec<Vec<f64>> = Vec::with_capacity(m);
    for x in &centers {
        g.push(gauge_row(body, samples, x)?);
    }
    let row_min = |g: &[Vec<f64>], s: usize| -> (f64, usize) {
        let mut mn = f64::INFINITY;
        let mut arg = 0;
        for (i, row) in g.iter().enumerate() {
            if row[s] < mn {
                mn = row[s];
                arg = i;
            }
        }
        (mn, arg)
    };
    let full_obj = |g: &[Vec<f64>]| -> (f64, usize) {
        let mut worst = -1.0;
        let mut arg = 0;
        for s in 0..samples.len() {
            let (mn, _) = row_min(g, s);
            if mn > worst {
                worst = mn;
                arg = s;
            }
        }
        (worst, arg)
    };

    let (mut obj, mut worst_s) = full_obj(&g);
    let mut stall = 0usize;
    for iter in 0..max_iters {
        if stall >= 12 {
            break;
        }
        let mut improved = false;
        if iter % 8 == 7 {
            // sweep: move every center toward the farthest sample it serves
            for i in 0..m {
                let mut far = None;
                let mut far_g = -1.0;
                for s in 0..samples.len() {
                    let (mn, arg) = row_min(&g, s);
                    if arg == i && mn > far_g {
                        far_g = mn;
                        far = Some(s);
                    }
                }
                let Some(s) = far else { continue };
                let d = samples[s] - (a + centers[i]);
                let mut alpha = 0.25;
                for _ in 0..4 {
                    let cand = centers[i] + d.scale(alpha);
                    let row = gauge_row(body, samples, &cand)?;
                    let old = std::mem::replace(&mut g[i], row);
                    let (nobj, ns) = full_obj(&g);
                    if nobj < obj - 1e-12 {
                        centers[i] = cand;
                        obj = nobj;
                        worst_s = ns;
                        improved = true;
                        break;
                    }
                    g[i] = old;
                    alpha *= 0.5;
                }
            }
        } else {
            let (_, resp) = row_min(&g, worst_s);
            let d = samples[worst_s] - (a + centers[resp]);
            let mut alpha = 0.5;
            for _ in 0..6 {
                let cand = centers[resp] + d.scale(alpha);
                let row = gauge_row(body, samples, &cand)?;
                let old = std::mem::replace(&mut g[resp], row);
                let (nobj, ns) = full_obj(&g);
                if nobj < obj - 1e-12 {
                    centers[resp] = cand;
                    obj = nobj;
                    worst_s = ns;
                    improved = true;
                    break;
                }
                g[resp] = old;
                alpha *= 0.5;
            }
        }
        if improved {
            stall = 0;
        } else {
            stall += 1;
        }
    }
    Ok((obj, centers))
}

fn gauge_row(body: &ConvexBody, samples: &[Point], x: &Point) -> GeomResult<Vec<f64>> {
    samples.iter().map(|p| minkowski::gauge(body, &(*p - *x))).collect()
}

/// Candidate center sets: corner homothets, rings, sphere codes, cap-covering
/// refinements for round bodies, and seeded random placements.
fn seed_center_sets(body: &ConvexBody, m: usize, budget: &SearchBudget) -> GeomResult<Vec<Vec<Point>>> {
    let a = body.reference_point();
    let dim = body.dim();
    let mut sets: Vec<Vec<Point>> = Vec::new();

    let bp = |u: &Point| minkowski::boundary_point(body, u);

    if let Some(verts) = body.polytope_vertices()? {
        if verts.len() <= m {
            for rho in [0.5, dim as f64 / (dim as f64 + 1.0), 2.0 / 3.0, 9.0 / 13.0, 4.0 / 7.0] {
                let mut set: Vec<Point> =
                    verts.iter().map(|v| (*v - a).scale(1.0 - rho)).collect();
                while set.len() < m {
                    set.push(Point::zero(dim));
                }
                sets.push(set);
            }
        }
    }

    if dim == 2 {
        for phase in [0.0, std::f64::consts::PI / m as f64] {
            for s in [0.45, 0.6, 0.75] {
                let mut ring = Vec::with_capacity(m);
                for k in 0..m {
                    let t = phase + 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                    let u = Point::new2(t.cos(), t.sin());
                    ring.push((bp(&u)? - a).scale(s));
                }
                sets.push(ring);
            }
        }
        if m >= 4 {
            for s in [0.55, 0.7, 0.87] {
                let mut set = vec![Point::zero(2)];
                for k in 0..m - 1 {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / (m - 1) as f64;
                    let u = Point::new2(t.cos(), t.sin());
                    set.push((bp(&u)? - a).scale(s));
                }
                sets.push(set);
            }
        }
    } else {
        for dirs in sphere_codes(m) {
            for s in [0.5, 0.65, 0.8] {
                let mut set = Vec::with_capacity(m);
                for u in &dirs {
                    set.push((bp(u)? - a).scale(s));
                }
                sets.push(set);
            }
        }
    }

    if is_round(body) {
        for (cos_psi, dirs) in cap_cover_candidates(body, m, budget.seed)? {
            sets.push(dirs.iter().map(|u| u.scale(cos_psi)).collect());
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ (m as u64).wrapping_mul(0x9e37));
    for _ in 0..budget.starts {
        let mut set = Vec::with_capacity(m);
        for _ in 0..m {
            let u = random_dir(&mut rng, dim);
            let s = 0.35 + 0.45 * rng.gen::<f64>();
            set.push((bp(&u)? - a).scale(s));
        }
        sets.push(set);
    }
    Ok(sets)
}

fn is_round(body: &ConvexBody) -> bool {
    matches!(body.kind(), BodyKind::LpBall { p: LpExponent::Finite(pv), .. } if (*pv - 2.0).abs() < 1e-12)
}

fn random_dir(rng: &mut ChaCha8Rng, dim: usize) -> Point {
    loop {
        let p = if dim == 2 {
            Point::new2(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
        } else {
            Point::new3(
                rng.gen::<f64>() * 2.0 - 1.0,
                rng.gen::<f64>() * 2.0 - 1.0,
                rng.gen::<f64>() * 2.0 - 1.0,
            )
        };
        let n = p.norm();
        if n > 1e-3 && n <= 1.0 {
            return p.scale(1.0 / n);
        }
    }
}

fn ring3(z: f64, k: usize, phase: f64) -> Vec<Point> {
    let rho = (1.0 - z * z).max(0.0).sqrt();
    (0..k)
        .map(|j| {
            let t = phase + 2.0 * std::f64::consts::PI * j as f64 / k as f64;
            Point::new3(rho * t.cos(), rho * t.sin(), z)
        })
        .collect()
}

/// Classic direction sets for small sphere coverings.
fn sphere_codes(m: usize) -> Vec<Vec<Point>> {
    let e3 = Point::new3(0.0, 0.0, 1.0);
    let mut out = Vec::new();
    match m {
        2 => out.push(vec![e3, -e3]),
        3 => out.push(ring3(0.0, 3, 0.0)),
        4 => {
            let s = 1.0 / 3f64.sqrt();
            out.push(vec![
                Point::new3(s, s, s),
                Point::new3(s, -s, -s),
                Point::new3(-s, s, -s),
                Point::new3(-s, -s, s),
            ]);
            let mut v = vec![e3];
            v.extend(ring3(-1.0 / 3.0, 3, 0.0));
            out.push(v);
        }
        5 => {
            let mut v = vec![e3, -e3];
            v.extend(ring3(0.0, 3, 0.0));
            out.push(v);
            let mut w = vec![e3];
            w.extend(ring3(-0.2, 4, 0.0));
            out.push(w);
        }
        6 => {
            out.push(vec![
                Point::new3(1.0, 0.0, 0.0),
                Point::new3(-1.0, 0.0, 0.0),
                Point::new3(0.0, 1.0, 0.0),
                Point::new3(0.0, -1.0, 0.0),
                e3,
                -e3,
            ]);
            let mut v = vec![e3, -e3];
            v.extend(ring3(0.0, 4, 0.0));
            out.push(v);
        }
        7 => {
            let mut v = vec![e3];
            v.extend(ring3(0.25, 3, 0.0));
            v.extend(ring3(-0.72, 3, std::f64::consts::PI / 3.0));
            out.push(v);
            let mut w = vec![e3, -e3];
            w.extend(ring3(0.0, 5, 0.0));
            out.push(w);
        }
        8 => {
            let s = 1.0 / 3f64.sqrt();
            let mut cube = Vec::new();
            for &x in &[-s, s] {
                for &y in &[-s, s] {
                    for &z in &[-s, s] {
                        cube.push(Point::new3(x, y, z));
                    }
                }
            }
            out.push(cube);
            let mut anti = ring3(0.5, 4, 0.0);
            anti.extend(ring3(-0.5, 4, std::f64::consts::FRAC_PI_4));
            out.push(anti);
        }
        _ => {}
    }
    out
}

/// Cap-covering refinement for Euclidean balls: place directions to maximize
/// the worst dot product against a dense grid, by reassignment and minimal
/// enclosing spherical caps.
fn cap_cover_candidates(
    body: &ConvexBody,
    m: usize,
    seed: u64,
) -> GeomResult<Vec<(f64, Vec<Point>)>> {
    let dim = body.dim();
    let grid = if dim == 2 { grids::circle(2048) } else { grids::fibonacci_sphere(4096) };
    let mut starts = if dim == 3 { sphere_codes(m) } else { Vec::new() };
    if dim == 2 && m >= 2 {
        starts.push(
            (0..m)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                    Point::new2(t.cos(), t.sin())
                })
                .collect(),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xcafe);
    for _ in 0..4 {
        starts.push((0..m).map(|_| random_dir(&mut rng, dim)).collect());
    }

    let mut out = Vec::new();
    for mut dirs in starts {
        if dirs.len() != m {
            continue;
        }
        let mut best_cos = covering_cos(&grid, &dirs);
        for _ in 0..60 {
            // reassign and recenter each cluster at its smallest enclosing cap
            let mut clusters: Vec<Vec<Point>> = vec![Vec::new(); m];
            for u in &grid {
                let mut arg = 0;
                let mut bd = f64::NEG_INFINITY;
                for (i, d) in dirs.iter().enumerate() {
                    let t = u.dot(d);
                    if t > bd {
                        bd = t;
                        arg = i;
                    }
                }
                clusters[arg].push(*u);
            }
            let mut moved = false;
            for (i, cl) in clusters.iter().enumerate() {
                if cl.len() < 2 {
                    continue;
                }
                let (c, _) = metrics::min_enclosing_ball(cl, dim)?;
                if let Some(nd) = c.normalize() {
                    if nd.dist(&dirs[i]) > 1e-12 {
                        dirs[i] = nd;
                        moved = true;
                    }
                }
            }
            let cos_now = covering_cos(&grid, &dirs);
            if cos_now > best_cos {
                best_cos = cos_now;
            }
            if !moved {
                break;
            }
        }
        let cos_final = covering_cos(&grid, &dirs);
        if cos_final > 0.0 {
            out.push((cos_final, dirs));
        }
    }
    out.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    out.truncate(3);
    Ok(out)
}

fn covering_cos(grid: &[Point], dirs: &[Point]) -> f64 {
    let mut worst = f64::INFINITY;
    for u in grid {
        let mut best = f64::NEG_INFINITY;
        for d in dirs {
            best = best.max(u.dot(d));
        }
        worst = worst.min(best);
    }
    worst
}

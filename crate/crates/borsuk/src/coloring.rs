//! Conflict graphs at a distance threshold and their m-colorings.
//!
//! A part assignment keeps every part's diameter at or below a threshold
//! exactly when the graph joining point pairs farther than the threshold is
//! m-colorable. Small graphs (at most 25 non-isolated vertices) are decided
//! exhaustively; larger ones get a saturation-greedy search with seeded
//! restarts, whose failures are inconclusive rather than proofs.

use crate::cloud::PointCloud;
use covfun_core::{GeomError, GeomResult};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Largest non-isolated vertex count decided by exhaustive backtracking.
pub(crate) const EXACT_CUTOFF: usize = 25;
const RESTARTS: usize = 1000;
const RESTART_CHUNK: usize = 64;

pub(crate) enum ColorOutcome {
    /// Full-length assignment with labels 1..=m; always a certificate.
    Feasible(Vec<usize>),
    /// Proven impossible (exhaustive search, or a clique larger than m).
    Infeasible,
    /// The heuristic found nothing; treated as infeasible by callers.
    Unknown,
}

pub(crate) struct Decision {
    pub outcome: ColorOutcome,
    /// True when the non-isolated part of the graph was small enough for the
    /// exhaustive decision procedure.
    pub exhaustive: bool,
}

/// Adjacency over the non-isolated vertices only, as bitset rows.
struct ActiveGraph {
    /// Original cloud index of each active vertex.
    members: Vec<usize>,
    words: usize,
    rows: Vec<u64>,
    degree: Vec<usize>,
}

impl ActiveGraph {
    fn neighbors(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    fn has_edge(&self, v: usize, w: usize) -> bool {
        self.neighbors(v)[w / 64] >> (w % 64) & 1 == 1
    }
}

fn build_active(cloud: &PointCloud, threshold: f64) -> ActiveGraph {
    let pts = cloud.points();
    let n = pts.len();
    // pairs at exactly the threshold distance must land on the "compatible"
    // side even after the ratio -> threshold round trip
    let slack = threshold + 1e-12 * threshold.max(1.0);
    let mut edges = Vec::new();
    let mut incident = vec![false; n];
    for i in 0..n {
        for j in i + 1..n {
            if pts[i].dist(&pts[j]) > slack {
                edges.push((i, j));
                incident[i] = true;
                incident[j] = true;
            }
        }
    }
    let members: Vec<usize> = (0..n).filter(|&i| incident[i]).collect();
    let mut index_of = vec![usize::MAX; n];
    for (k, &i) in members.iter().enumerate() {
        index_of[i] = k;
    }
    let a = members.len();
    let words = a.div_ceil(64).max(1);
    let mut rows = vec![0u64; a * words];
    let mut degree = vec![0usize; a];
    for (i, j) in edges {
        let (v, w) = (index_of[i], index_of[j]);
        rows[v * words + w / 64] |= 1 << (w % 64);
        rows[w * words + v / 64] |= 1 << (v % 64);
        degree[v] += 1;
        degree[w] += 1;
    }
    ActiveGraph { members, words, rows, degree }
}

/// Decides m-colorability of the conflict graph at an absolute distance
/// threshold. `seed` only influences the heuristic restarts.
pub(crate) fn decide(cloud: &PointCloud, threshold: f64, m: usize, seed: u64) -> Decision {
    let graph = build_active(cloud, threshold);
    let a = graph.members.len();
    if m == 0 {
        return Decision { outcome: ColorOutcome::Infeasible, exhaustive: true };
    }
    if a <= m {
        let mut assignment = vec![1usize; cloud.len()];
        for (k, &i) in graph.members.iter().enumerate() {
            assignment[i] = k + 1;
        }
        return Decision { outcome: ColorOutcome::Feasible(assignment), exhaustive: true };
    }
    if a <= EXACT_CUTOFF {
        let outcome = match exact_color(&graph, m) {
            Some(colors) => ColorOutcome::Feasible(expand(cloud.len(), &graph, &colors)),
            None => ColorOutcome::Infeasible,
        };
        return Decision { outcome, exhaustive: true };
    }
    if greedy_clique_exceeds(&graph, m) {
        return Decision { outcome: ColorOutcome::Infeasible, exhaustive: false };
    }
    // m >= a was handled above, so m < a <= 64 * words; masks use u128
    let cap = m.min(128);
    let mut chunk_start = 0;
    while chunk_start < RESTARTS {
        let chunk_end = (chunk_start + RESTART_CHUNK).min(RESTARTS);
        let hit = (chunk_start..chunk_end)
            .into_par_iter()
            .filter_map(|i| dsatur_once(&graph, cap, i, seed).map(|c| (i, c)))
            .min_by_key(|(i, _)| *i);
        if let Some((_, colors)) = hit {
            return Decision {
                outcome: ColorOutcome::Feasible(expand(cloud.len(), &graph, &colors)),
                exhaustive: false,
            };
        }
        chunk_start = chunk_end;
    }
    Decision { outcome: ColorOutcome::Unknown, exhaustive: false }
}

fn expand(n: usize, graph: &ActiveGraph, colors: &[usize]) -> Vec<usize> {
    let mut assignment = vec![1usize; n];
    for (k, &i) in graph.members.iter().enumerate() {
        assignment[i] = colors[k] + 1;
    }
    assignment
}

/// Exhaustive m-coloring by most-saturated-first backtracking with color
/// symmetry breaking. Vertex count is at most EXACT_CUTOFF, so adjacency and
/// color sets fit in single words.
fn exact_color(graph: &ActiveGraph, m: usize) -> Option<Vec<usize>> {
    let a = graph.members.len();
    let mut adj = vec![0u32; a];
    for v in 0..a {
        for w in 0..a {
            if v != w && graph.has_edge(v, w) {
                adj[v] |= 1 << w;
            }
        }
    }
    let mut colors = vec![usize::MAX; a];
    let mut blocked = vec![0u32; a]; // colors already present among neighbors
    let m = m.min(a); // more colors than vertices never help
    fn rec(
        adj: &[u32],
        degree: &[usize],
        m: usize,
        colors: &mut [usize],
        blocked: &mut [u32],
        done: usize,
        used: usize,
    ) -> bool {
        let a = adj.len();
        if done == a {
            return true;
        }
        let mut pick = usize::MAX;
        let mut best = (0u32, 0usize);
        for v in 0..a {
            if colors[v] != usize::MAX {
                continue;
            }
            let key = (blocked[v].count_ones(), degree[v]);
            if pick == usize::MAX || key > best {
                pick = v;
                best = key;
            }
        }
        let limit = m.min(used + 1);
        let mut avail = !blocked[pick] & ((1u32 << limit) - 1);
        while avail != 0 {
            let c = avail.trailing_zeros() as usize;
            avail &= avail - 1;
            colors[pick] = c;
            let bit = 1u32 << c;
            let mut touched = 0u32;
            let mut nb = adj[pick];
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                if colors[w] == usize::MAX && blocked[w] & bit == 0 {
                    blocked[w] |= bit;
                    touched |= 1 << w;
                }
            }
            if rec(adj, degree, m, colors, blocked, done + 1, used.max(c + 1)) {
                return true;
            }
            let mut tb = touched;
            while tb != 0 {
                let w = tb.trailing_zeros() as usize;
                tb &= tb - 1;
                blocked[w] &= !bit;
            }
            colors[pick] = usize::MAX;
        }
        false
    }
    if rec(&adj, &graph.degree, m, &mut colors, &mut blocked, 0, 0) {
        Some(colors)
    } else {
        None
    }
}

/// One saturation-greedy coloring pass. Restart 0 breaks ties canonically;
/// later restarts randomize tie-breaking from a split seed.
fn dsatur_once(graph: &ActiveGraph, m: usize, restart: usize, seed: u64) -> Option<Vec<usize>> {
    let a = graph.members.len();
    let mut rng = (restart > 0).then(|| {
        ChaCha8Rng::seed_from_u64(seed ^ (restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    });
    let mut colors = vec![usize::MAX; a];
    let mut sat = vec![0u128; a];
    for _ in 0..a {
        let mut pick = usize::MAX;
        let mut best = (0u32, 0usize);
        let mut ties = 0usize;
        for v in 0..a {
            if colors[v] != usize::MAX {
                continue;
            }
            let key = (sat[v].count_ones(), graph.degree[v]);
            if pick == usize::MAX || key > best {
                pick = v;
                best = key;
                ties = 1;
            } else if key == best {
                if let Some(rng) = rng.as_mut() {
                    ties += 1;
                    if rng.gen_range(0..ties) == 0 {
                        pick = v;
                    }
                }
            }
        }
        let free = !sat[pick];
        let c = free.trailing_zeros() as usize;
        if c >= m {
            return None;
        }
        colors[pick] = c;
        for word in 0..graph.words {
            let mut bits = graph.neighbors(pick)[word];
            while bits != 0 {
                let w = word * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if colors[w] == usize::MAX {
                    sat[w] |= 1 << c;
                }
            }
        }
    }
    Some(colors)
}

/// Looks for a clique of more than m vertices by greedy growth from the
/// highest-degree seeds; finding one proves the graph is not m-colorable.
fn greedy_clique_exceeds(graph: &ActiveGraph, m: usize) -> bool {
    let a = graph.members.len();
    let mut order: Vec<usize> = (0..a).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(graph.degree[v]));
    for &start in order.iter().take(16) {
        let mut candidates = graph.neighbors(start).to_vec();
        let mut size = 1usize;
        loop {
            let mut pick = usize::MAX;
            let mut best = 0usize;
            for word in 0..graph.words {
                let mut bits = candidates[word];
                while bits != 0 {
                    let v = word * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    if pick == usize::MAX || graph.degree[v] > best {
                        pick = v;
                        best = graph.degree[v];
                    }
                }
            }
            if pick == usize::MAX {
                break;
            }
            size += 1;
            if size > m {
                return true;
            }
            for word in 0..graph.words {
                candidates[word] &= graph.neighbors(pick)[word];
            }
        }
    }
    false
}

/// Whether the points split into m parts whose diameters stay within `r`
/// times the cloud diameter, with a witness assignment when they do.
///
/// The answer is exhaustive up to 25 non-isolated conflict vertices. Beyond
/// that, `true` still carries a valid witness but `false` may only mean the
/// heuristic search failed.
pub fn conflict_colorable(
    x: &PointCloud,
    r: f64,
    m: usize,
) -> GeomResult<(bool, Option<Vec<usize>>)> {
    if !r.is_finite() || r < 0.0 {
        return Err(GeomError::BadParameter("threshold ratio must be finite and nonnegative".into()));
    }
    let decision = decide(x, r * x.diameter(), m, 0);
    match decision.outcome {
        ColorOutcome::Feasible(coloring) => Ok((true, Some(coloring))),
        _ => Ok((false, None)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use covfun_core::Point;
    use std::f64::consts::PI;

    fn unit_square() -> PointCloud {
        PointCloud::new(vec![
            Point::new2(0.0, 0.0),
            Point::new2(1.0, 0.0),
            Point::new2(1.0, 1.0),
            Point::new2(0.0, 1.0),
        ])
        .unwrap()
    }

    fn assert_valid(cloud: &PointCloud, r: f64, m: usize, coloring: &[usize]) {
        let pts = cloud.points();
        let t = r * cloud.diameter();
        assert_eq!(coloring.len(), pts.len());
        for (i, &c) in coloring.iter().enumerate() {
            assert!(c >= 1 && c <= m);
            for j in i + 1..pts.len() {
                if coloring[j] == c {
                    assert!(pts[i].dist(&pts[j]) <= t + 1e-9);
                }
            }
        }
    }

    #[test]
    fn square_diagonals_alone_split_two_ways() {
        let cloud = unit_square();
        let (ok, coloring) = conflict_colorable(&cloud, 0.99, 2).unwrap();
        assert!(ok);
        let coloring = coloring.unwrap();
        assert_valid(&cloud, 0.99, 2, &coloring);
        assert_ne!(coloring[0], coloring[2]);
        assert_ne!(coloring[1], coloring[3]);
    }

    #[test]
    fn below_the_side_ratio_the_square_is_a_clique() {
        let cloud = unit_square();
        let (ok, coloring) = conflict_colorable(&cloud, 0.7, 3).unwrap();
        assert!(!ok);
        assert!(coloring.is_none());
        let (ok4, _) = conflict_colorable(&cloud, 0.7, 4).unwrap();
        assert!(ok4);
    }

    #[test]
    fn singletons_need_as_many_parts_as_distinct_points() {
        let cloud = PointCloud::new(vec![
            Point::new2(0.0, 0.0),
            Point::new2(1.0, 0.0),
            Point::new2(0.5, 3f64.sqrt() / 2.0),
        ])
        .unwrap();
        let (two, _) = conflict_colorable(&cloud, 0.0, 2).unwrap();
        assert!(!two);
        let (three, coloring) = conflict_colorable(&cloud, 0.0, 3).unwrap();
        assert!(three);
        let coloring = coloring.unwrap();
        assert_eq!(coloring.iter().collect::<std::collections::HashSet<_>>().len(), 3);
    }

    #[test]
    fn exact_threshold_pairs_do_not_conflict() {
        // at r equal to the side/diagonal ratio the side pairs are allowed
        let cloud = unit_square();
        let r = 1.0 / 2f64.sqrt();
        let (ok, coloring) = conflict_colorable(&cloud, r, 2).unwrap();
        assert!(ok);
        assert_valid(&cloud, r, 2, &coloring.unwrap());
    }

    #[test]
    fn heuristic_scale_still_returns_verifiable_witnesses() {
        let points: Vec<Point> = (0..60)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / 60.0;
                Point::new2(a.cos(), a.sin())
            })
            .collect();
        let cloud = PointCloud::new(points).unwrap();
        let (ok, coloring) = conflict_colorable(&cloud, 0.9, 3).unwrap();
        assert!(ok);
        assert_valid(&cloud, 0.9, 3, &coloring.unwrap());
    }

    #[test]
    fn zero_parts_and_bad_ratios_are_rejected() {
        let cloud = unit_square();
        let (ok, _) = conflict_colorable(&cloud, 0.5, 0).unwrap();
        assert!(!ok);
        assert!(conflict_colorable(&cloud, -0.1, 2).is_err());
        assert!(conflict_colorable(&cloud, f64::NAN, 2).is_err());
    }
}

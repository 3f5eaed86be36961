//! Smallest diameter ratio at which a cloud splits into m parts.

use crate::cloud::{PartitionResult, PointCloud};
use crate::coloring::{decide, ColorOutcome};
use covfun_core::{GeomError, GeomResult};
use covfun_covering::SearchBudget;

/// Minimizes r such that the points fall into m parts of diameter at most
/// r times the cloud diameter.
///
/// The objective only changes at pairwise-distance ratios, so the search
/// bisects that finite candidate set; feasibility at each level is an
/// m-coloring of the conflict graph. The budget's seed drives the heuristic
/// coloring restarts on large graphs; everything else about the search is
/// deterministic, so time limits are not consulted. When any level was
/// decided heuristically the result is flagged `exact: false` and `r_ratio`
/// is an upper bound.
pub fn phi_upper(x: &PointCloud, m: usize, budget: &SearchBudget) -> GeomResult<PartitionResult> {
    if m == 0 {
        return Err(GeomError::BadParameter("need at least one part".into()));
    }
    let d = x.diameter();
    if d <= 0.0 {
        // every point coincides; one part of diameter zero
        return Ok(PartitionResult { assignment: vec![1; x.len()], r_ratio: 0.0, exact: true });
    }
    let candidates = ratio_candidates(x, d);
    let mut lo = 0usize;
    let mut hi = candidates.len() - 1;
    let mut best: Option<Vec<usize>> = None;
    let mut all_exhaustive = true;
    while lo < hi {
        let mid = (lo + hi) / 2;
        let dec = decide(x, candidates[mid] * d, m, budget.seed);
        all_exhaustive &= dec.exhaustive;
        match dec.outcome {
            ColorOutcome::Feasible(coloring) => {
                best = Some(coloring);
                hi = mid;
            }
            _ => lo = mid + 1,
        }
    }
    if best.is_none() {
        let dec = decide(x, candidates[hi] * d, m, budget.seed);
        all_exhaustive &= dec.exhaustive;
        if let ColorOutcome::Feasible(coloring) = dec.outcome {
            best = Some(coloring);
        }
    }
    let assignment = best.ok_or_else(|| {
        // the full-diameter ratio has an empty conflict graph; reaching this
        // line would be a defect, not a property of the input
        GeomError::VerificationFailed("no feasible partition found at ratio 1".into())
    })?;
    let result = PartitionResult { assignment, r_ratio: candidates[hi], exact: all_exhaustive };
    if result.max_part_ratio(x) > result.r_ratio + 1e-9 {
        return Err(GeomError::VerificationFailed(
            "a part exceeds the reported diameter ratio".into(),
        ));
    }
    Ok(result)
}

/// Sorted distinct pairwise-distance ratios, with 0 in front and near-equal
/// values merged upward so each group is represented by its largest member.
fn ratio_candidates(x: &PointCloud, d: f64) -> Vec<f64> {
    let pts = x.points();
    let mut ratios = Vec::with_capacity(pts.len() * (pts.len() - 1) / 2);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            ratios.push(pts[i].dist(&pts[j]) / d);
        }
    }
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut candidates = vec![0.0];
    let mut group: Option<f64> = None;
    for r in ratios {
        if r <= 1e-11 {
            continue; // coincident points belong to the 0 candidate
        }
        match group {
            Some(g) if r - g <= 1e-11 => group = Some(r),
            Some(g) => {
                candidates.push(g);
                group = Some(r);
            }
            None => group = Some(r),
        }
    }
    if let Some(g) = group {
        candidates.push(g);
    }
    candidates
}

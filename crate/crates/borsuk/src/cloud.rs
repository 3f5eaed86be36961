//! Finite point clouds and diameter partitions.

use covfun_core::{grids, minkowski, ConvexBody, GeomError, GeomResult, Point};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

/// A finite set of at least two points sharing one dimension.
///
/// Serializes as `{"points": [[x, y, ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(try_from = "RawCloud")]
pub struct PointCloud {
    points: Vec<Point>,
    dim: usize,
}

#[derive(Deserialize)]
struct RawCloud {
    points: Vec<Point>,
}

impl TryFrom<RawCloud> for PointCloud {
    type Error = GeomError;

    fn try_from(raw: RawCloud) -> GeomResult<Self> {
        PointCloud::new(raw.points)
    }
}

impl Serialize for PointCloud {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("PointCloud", 1)?;
        st.serialize_field("points", &self.points)?;
        st.end()
    }
}

impl PointCloud {
    pub fn new(points: Vec<Point>) -> GeomResult<Self> {
        if points.len() < 2 {
            return Err(GeomError::BadParameter("a point cloud needs at least two points".into()));
        }
        let dim = points[0].dim();
        for p in &points {
            if p.dim() != dim {
                return Err(GeomError::DimensionMismatch { expected: dim, got: p.dim() });
            }
            if !p.coords().iter().all(|c| c.is_finite()) {
                return Err(GeomError::BadParameter("point cloud contains a non-finite coordinate".into()));
            }
        }
        Ok(PointCloud { points, dim })
    }

    /// Samples `count` boundary points of a convex body, one per grid direction.
    pub fn on_boundary(body: &ConvexBody, count: usize) -> GeomResult<Self> {
        if count < 2 {
            return Err(GeomError::BadParameter("need at least two boundary samples".into()));
        }
        let points = grids::directions(body.dim(), count)
            .iter()
            .map(|u| minkowski::boundary_point(body, u))
            .collect::<GeomResult<Vec<_>>>()?;
        PointCloud::new(points)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0_f64;
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                best = best.max(self.points[i].dist(&self.points[j]));
            }
        }
        best
    }
}

/// An m-part diameter partition: part labels run 1..=m, and every part has
/// diameter at most `r_ratio` times the cloud diameter.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartitionResult {
    pub assignment: Vec<usize>,
    pub r_ratio: f64,
    /// True when every colorability decision along the search was exhaustive;
    /// false when a heuristic was involved, making `r_ratio` an upper bound.
    pub exact: bool,
}

impl PartitionResult {
    /// Largest part diameter divided by the cloud diameter, recomputed from
    /// scratch (0 when every part is a singleton or the cloud is degenerate).
    pub fn max_part_ratio(&self, cloud: &PointCloud) -> f64 {
        let d = cloud.diameter();
        if d <= 0.0 {
            return 0.0;
        }
        let pts = cloud.points();
        let mut worst = 0.0_f64;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if self.assignment[i] == self.assignment[j] {
                    worst = worst.max(pts[i].dist(&pts[j]));
                }
            }
        }
        worst / d
    }
}

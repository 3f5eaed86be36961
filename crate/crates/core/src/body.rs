//! Convex body representations.
//!
//! A [`ConvexBody`] is one of six kinds (V-polytope, H-polytope, lp ball,
//! cone over a planar base, affine image, Reuleaux polygon) together with a
//! stored reference point that is strictly interior. The reference point
//! anchors gauge evaluation and homothety scaling everywhere downstream.
//!
//! Dual representations (facets of a V-polytope, vertices of an H-polytope)
//! are computed on first use and cached; constructing a body with many
//! vertices stays cheap until somebody actually needs the other form.

use crate::convert;
use crate::error::{GeomError, GeomResult};
use crate::point::{Mat, Point};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::sync::{Arc, OnceLock};

/// Tolerance for exact-equality style geometric predicates.
pub const TAU_GEO: f64 = 1e-9;

/// Tolerance for boundary residuals of iterative constructions.
pub const TAU_BOUNDARY: f64 = 1e-7;

/// The exponent of an lp ball: a finite p >= 1 or infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LpExponent {
    Finite(f64),
    Infinity,
}

impl LpExponent {
    pub fn new(p: f64) -> GeomResult<Self> {
        if p.is_infinite() && p > 0.0 {
            Ok(LpExponent::Infinity)
        } else if p.is_finite() && p >= 1.0 {
            Ok(LpExponent::Finite(p))
        } else {
            Err(GeomError::BadParameter(format!("lp exponent must be in [1, inf], got {p}")))
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            LpExponent::Finite(p) => *p,
            LpExponent::Infinity => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, LpExponent::Infinity)
    }

    /// Holder conjugate exponent q with 1/p + 1/q = 1.
    pub fn conjugate(&self) -> LpExponent {
        match self {
            LpExponent::Infinity => LpExponent::Finite(1.0),
            LpExponent::Finite(p) if *p == 1.0 => LpExponent::Infinity,
            LpExponent::Finite(p) => LpExponent::Finite(p / (p - 1.0)),
        }
    }
}

impl Serialize for LpExponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            LpExponent::Finite(p) => serializer.serialize_f64(*p),
            LpExponent::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for LpExponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(p) => LpExponent::new(p).map_err(D::Error::custom),
            Raw::Text(s) if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") => {
                Ok(LpExponent::Infinity)
            }
            Raw::Text(s) => Err(D::Error::custom(format!("unrecognized lp exponent {s:?}"))),
        }
    }
}

/// One halfspace constraint `<normal, x> <= offset` with a unit normal.
#[derive(Clone, Copy, Debug)]
pub struct Facet {
    pub normal: Point,
    pub offset: f64,
}

/// Vertex data with lazily computed facets.
#[derive(Debug)]
pub struct VPolyData {
    pub vertices: Vec<Point>,
    facets: OnceLock<Arc<Vec<Facet>>>,
}

impl Clone for VPolyData {
    fn clone(&self) -> Self {
        let facets = OnceLock::new();
        if let Some(f) = self.facets.get() {
            let _ = facets.set(Arc::clone(f));
        }
        VPolyData { vertices: self.vertices.clone(), facets }
    }
}

impl VPolyData {
    fn new(vertices: Vec<Point>) -> Self {
        VPolyData { vertices, facets: OnceLock::new() }
    }

    pub fn facets(&self) -> GeomResult<Arc<Vec<Facet>>> {
        if let Some(f) = self.facets.get() {
            return Ok(Arc::clone(f));
        }
        let computed = Arc::new(convert::facets_of_vertices(&self.vertices)?);
        Ok(Arc::clone(self.facets.get_or_init(|| computed)))
    }
}

/// Halfspace data with lazily computed vertices.
#[derive(Debug)]
pub struct HPolyData {
    pub normals: Vec<Point>,
    pub offsets: Vec<f64>,
    vertices: OnceLock<Arc<Vec<Point>>>,
}

impl Clone for HPolyData {
    fn clone(&self) -> Self {
        let vertices = OnceLock::new();
        if let Some(v) = self.vertices.get() {
            let _ = vertices.set(Arc::clone(v));
        }
        HPolyData { normals: self.normals.clone(), offsets: self.offsets.clone(), vertices }
    }
}

impl HPolyData {
    pub fn vertices(&self) -> GeomResult<Arc<Vec<Point>>> {
        if let Some(v) = self.vertices.get() {
            return Ok(Arc::clone(v));
        }
        let computed = Arc::new(convert::vertices_of_halfspaces(&self.normals, &self.offsets)?);
        Ok(Arc::clone(self.vertices.get_or_init(|| computed)))
    }
}

/// The kind-specific payload of a convex body.
#[derive(Clone, Debug)]
pub enum BodyKind {
    VPolytope(VPolyData),
    HPolytope(HPolyData),
    LpBall { p: LpExponent, dim: usize },
    Cone { base: Box<ConvexBody>, apex: Point },
    AffineImage { matrix: Mat, shift: Point, inner: Box<ConvexBody> },
    /// Reuleaux polygon of constant width 1 built on a regular k-gon (k odd).
    ReuleauxPolygon { k: usize },
}

/// A bounded convex body in R^2 or R^3 with a strictly interior reference point.
#[derive(Clone, Debug)]
pub struct ConvexBody {
    kind: BodyKind,
    reference_point: Point,
    dim: usize,
}

impl ConvexBody {
    pub fn kind(&self) -> &BodyKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn reference_point(&self) -> Point {
        self.reference_point
    }

    /// Replace the reference point. The caller promises it is strictly interior;
    /// this is checked with a gauge evaluation against the old reference.
    pub fn with_reference(mut self, reference: Point) -> GeomResult<ConvexBody> {
        if reference.dim() != self.dim {
            return Err(GeomError::DimensionMismatch { expected: self.dim, got: reference.dim() });
        }
        let g = crate::minkowski::gauge(&self, &reference)?;
        if g >= 1.0 - TAU_GEO {
            return Err(GeomError::ReferenceNotInterior(format!(
                "gauge of candidate reference is {g}, needs to be < 1"
            )));
        }
        self.reference_point = reference;
        Ok(self)
    }

    pub fn vpolytope(vertices: Vec<Point>) -> GeomResult<ConvexBody> {
        if vertices.is_empty() {
            return Err(GeomError::InvalidBody("polytope needs vertices".into()));
        }
        let dim = vertices[0].dim();
        if vertices.iter().any(|v| v.dim() != dim || !v.is_finite()) {
            return Err(GeomError::InvalidBody("vertices must share a dimension and be finite".into()));
        }
        if vertices.len() < dim + 1 {
            return Err(GeomError::InvalidBody(format!(
                "{} vertices cannot span dimension {}",
                vertices.len(),
                dim
            )));
        }
        if !spans_full_dimension(&vertices, dim) {
            return Err(GeomError::Degenerate("vertex set is not full-dimensional".into()));
        }
        let centroid = vertex_average(&vertices);
        Ok(ConvexBody { kind: BodyKind::VPolytope(VPolyData::new(vertices)), reference_point: centroid, dim })
    }

    pub fn hpolytope(normals: Vec<Point>, offsets: Vec<f64>) -> GeomResult<ConvexBody> {
        if normals.len() != offsets.len() {
            return Err(GeomError::InvalidBody("normals and offsets must pair up".into()));
        }
        if normals.is_empty() {
            return Err(GeomError::InvalidBody("halfspace list is empty".into()));
        }
        let dim = normals[0].dim();
        if normals.iter().any(|n| n.dim() != dim || !n.is_finite()) || offsets.iter().any(|b| !b.is_finite()) {
            return Err(GeomError::InvalidBody("halfspaces must share a dimension and be finite".into()));
        }
        // Normalize each constraint to a unit normal.
        let mut ns = Vec::with_capacity(normals.len());
        let mut bs = Vec::with_capacity(offsets.len());
        for (n, b) in normals.iter().zip(&offsets) {
            let len = n.norm();
            if len <= TAU_GEO {
                return Err(GeomError::Degenerate("zero normal in halfspace list".into()));
            }
            ns.push(n.scale(1.0 / len));
            bs.push(b / len);
        }
        let data = HPolyData { normals: ns, offsets: bs, vertices: OnceLock::new() };
        // Enumerating vertices validates boundedness and a nonempty interior.
        let verts = data.vertices()?;
        if verts.len() < dim + 1 || !spans_full_dimension(&verts, dim) {
            return Err(GeomError::Degenerate("halfspace intersection has empty interior".into()));
        }
        let reference = vertex_average(&verts);
        let slack = data
            .normals
            .iter()
            .zip(&data.offsets)
            .map(|(n, b)| b - n.dot(&reference))
            .fold(f64::INFINITY, f64::min);
        if slack <= TAU_GEO {
            return Err(GeomError::ReferenceNotInterior(format!("minimum constraint slack {slack}")));
        }
        Ok(ConvexBody { kind: BodyKind::HPolytope(data), reference_point: reference, dim })
    }

    /// Unit lp ball, centered and referenced at the origin.
    pub fn lpball(p: LpExponent, dim: usize) -> GeomResult<ConvexBody> {
        if dim != 2 && dim != 3 {
            return Err(GeomError::BadParameter(format!("dimension must be 2 or 3, got {dim}")));
        }
        Ok(ConvexBody { kind: BodyKind::LpBall { p, dim }, reference_point: Point::zero(dim), dim })
    }

    /// Cone over a planar base sitting in the z = 0 plane, with an apex off the plane.
    pub fn cone(base: ConvexBody, apex: Point) -> GeomResult<ConvexBody> {
        if base.dim() != 2 {
            return Err(GeomError::DimensionMismatch { expected: 2, got: base.dim() });
        }
        if apex.dim() != 3 {
            return Err(GeomError::DimensionMismatch { expected: 3, got: apex.dim() });
        }
        if apex.z().abs() <= TAU_GEO {
            return Err(GeomError::Degenerate("cone apex lies in the base plane".into()));
        }
        let base_ref = base.reference_point().lift();
        let reference = base_ref + (apex - base_ref).scale(0.25);
        Ok(ConvexBody { kind: BodyKind::Cone { base: Box::new(base), apex }, reference_point: reference, dim: 3 })
    }

    /// Image of `inner` under `x -> matrix * x + shift` (matrix nonsingular).
    pub fn affine_image(matrix: Mat, shift: Point, inner: ConvexBody) -> GeomResult<ConvexBody> {
        let dim = inner.dim();
        if matrix.dim() != dim || shift.dim() != dim {
            return Err(GeomError::DimensionMismatch { expected: dim, got: matrix.dim() });
        }
        if matrix.inverse().is_none() {
            return Err(GeomError::Degenerate("affine matrix is singular".into()));
        }
        let reference = matrix.apply(&inner.reference_point()) + shift;
        Ok(ConvexBody {
            kind: BodyKind::AffineImage { matrix, shift, inner: Box::new(inner) },
            reference_point: reference,
            dim,
        })
    }

    /// Reuleaux polygon of constant width 1 on a regular k-gon, k odd, 3 <= k <= 21.
    pub fn reuleaux_polygon(k: usize) -> GeomResult<ConvexBody> {
        if k < 3 || k > 21 || k % 2 == 0 {
            return Err(GeomError::BadParameter(format!("k must be odd and in [3, 21], got {k}")));
        }
        Ok(ConvexBody { kind: BodyKind::ReuleauxPolygon { k }, reference_point: Point::zero(2), dim: 2 })
    }

    /// Circumradius of the regular k-gon carrying a width-1 Reuleaux polygon.
    pub fn reuleaux_circumradius(k: usize) -> f64 {
        1.0 / (2.0 * (std::f64::consts::PI / (2.0 * k as f64)).cos())
    }

    /// Vertices of the underlying regular k-gon of a width-1 Reuleaux polygon.
    pub fn reuleaux_vertices(k: usize) -> Vec<Point> {
        let r = Self::reuleaux_circumradius(k);
        (0..k)
            .map(|j| {
                let a = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
                Point::new2(r * a.cos(), r * a.sin())
            })
            .collect()
    }

    /// True when the body is a polytope in every layer (no curved boundary).
    pub fn is_polytopal(&self) -> bool {
        match &self.kind {
            BodyKind::VPolytope(_) | BodyKind::HPolytope(_) => true,
            BodyKind::LpBall { p, .. } => matches!(p, LpExponent::Infinity) || p.value() == 1.0,
            BodyKind::Cone { base, .. } => base.is_polytopal(),
            BodyKind::AffineImage { inner, .. } => inner.is_polytopal(),
            BodyKind::ReuleauxPolygon { .. } => false,
        }
    }

    /// Vertex set for polytopal bodies, `None` for curved ones.
    pub fn polytope_vertices(&self) -> GeomResult<Option<Vec<Point>>> {
        match &self.kind {
            BodyKind::VPolytope(data) => Ok(Some(data.vertices.clone())),
            BodyKind::HPolytope(data) => Ok(Some(data.vertices()?.as_ref().clone())),
            BodyKind::LpBall { p, dim } => match p {
                LpExponent::Infinity => Ok(Some(cube_vertices(*dim))),
                LpExponent::Finite(q) if *q == 1.0 => Ok(Some(cross_polytope_vertices(*dim))),
                _ => Ok(None),
            },
            BodyKind::Cone { base, apex } => {
                let Some(base_verts) = base.polytope_vertices()? else {
                    return Ok(None);
                };
                let mut verts: Vec<Point> = base_verts.iter().map(Point::lift).collect();
                verts.push(*apex);
                Ok(Some(verts))
            }
            BodyKind::AffineImage { matrix, shift, inner } => {
                let Some(inner_verts) = inner.polytope_vertices()? else {
                    return Ok(None);
                };
                Ok(Some(inner_verts.iter().map(|v| matrix.apply(v) + *shift).collect()))
            }
            BodyKind::ReuleauxPolygon { .. } => Ok(None),
        }
    }

    /// Symmetry center if the body is centrally symmetric (structurally detected).
    pub fn symmetry_center(&self) -> Option<Point> {
        match &self.kind {
            BodyKind::LpBall { dim, .. } => Some(Point::zero(*dim)),
            BodyKind::VPolytope(data) => {
                let c = vertex_average(&data.vertices);
                let hull = convert::hull_vertices(&data.vertices).ok()?;
                let scale = hull.iter().map(|v| (*v - c).norm()).fold(0.0, f64::max).max(1.0);
                for v in &hull {
                    let mirrored = c.scale(2.0) - *v;
                    let near = hull.iter().any(|w| w.dist(&mirrored) <= 1e-7 * scale);
                    if !near {
                        return None;
                    }
                }
                Some(c)
            }
            BodyKind::HPolytope(data) => {
                let verts = data.vertices().ok()?;
                ConvexBody::vpolytope(verts.as_ref().clone()).ok()?.symmetry_center()
            }
            BodyKind::AffineImage { matrix, shift, inner } => {
                inner.symmetry_center().map(|c| matrix.apply(&c) + *shift)
            }
            BodyKind::Cone { .. } => None,
            BodyKind::ReuleauxPolygon { .. } => None,
        }
    }
}

fn vertex_average(vertices: &[Point]) -> Point {
    let dim = vertices[0].dim();
    let mut acc = Point::zero(dim);
    for v in vertices {
        acc = acc + *v;
    }
    acc.scale(1.0 / vertices.len() as f64)
}

fn spans_full_dimension(points: &[Point], dim: usize) -> bool {
    // Gram-Schmidt over edge vectors from the first point.
    let base = points[0];
    let mut basis: Vec<Point> = Vec::new();
    let scale = points.iter().map(|p| (*p - base).norm()).fold(0.0, f64::max).max(1e-30);
    for p in &points[1..] {
        let mut v = *p - base;
        for b in &basis {
            v = v - b.scale(v.dot(b));
        }
        if v.norm() > 1e-9 * scale {
            basis.push(v.normalize().unwrap());
            if basis.len() == dim {
                return true;
            }
        }
    }
    false
}

pub(crate) fn cube_vertices(dim: usize) -> Vec<Point> {
    if dim == 2 {
        vec![
            Point::new2(-1.0, -1.0),
            Point::new2(1.0, -1.0),
            Point::new2(1.0, 1.0),
            Point::new2(-1.0, 1.0),
        ]
    } else {
        let mut v = Vec::with_capacity(8);
        for sx in [-1.0, 1.0] {
            for sy in [-1.0, 1.0] {
                for sz in [-1.0, 1.0] {
                    v.push(Point::new3(sx, sy, sz));
                }
            }
        }
        v
    }
}

pub(crate) fn cross_polytope_vertices(dim: usize) -> Vec<Point> {
    let mut v = Vec::with_capacity(2 * dim);
    for i in 0..dim {
        for s in [1.0, -1.0] {
            let mut c = [0.0; 3];
            c[i] = s;
            v.push(Point::from_slice(&c[..dim]));
        }
    }
    v
}

// ---------------------------------------------------------------------------
// JSON schema
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum BodySchema {
    Vpolytope {
        vertices: Vec<Point>,
    },
    Hpolytope {
        normals: Vec<Point>,
        offsets: Vec<f64>,
    },
    Lpball {
        p: LpExponent,
        dim: usize,
    },
    Cone {
        base: Box<BodySchema>,
        apex: Point,
    },
    Affine {
        matrix: Mat,
        shift: Point,
        inner: Box<BodySchema>,
    },
    Reuleaux {
        k: usize,
    },
}

impl BodySchema {
    fn into_body(self) -> GeomResult<ConvexBody> {
        match self {
            BodySchema::Vpolytope { vertices } => ConvexBody::vpolytope(vertices),
            BodySchema::Hpolytope { normals, offsets } => ConvexBody::hpolytope(normals, offsets),
            BodySchema::Lpball { p, dim } => ConvexBody::lpball(p, dim),
            BodySchema::Cone { base, apex } => ConvexBody::cone(base.into_body()?, apex),
            BodySchema::Affine { matrix, shift, inner } => {
                ConvexBody::affine_image(matrix, shift, inner.into_body()?)
            }
            BodySchema::Reuleaux { k } => ConvexBody::reuleaux_polygon(k),
        }
    }

    fn from_body(body: &ConvexBody) -> BodySchema {
        match body.kind() {
            BodyKind::VPolytope(data) => BodySchema::Vpolytope { vertices: data.vertices.clone() },
            BodyKind::HPolytope(data) => BodySchema::Hpolytope {
                normals: data.normals.clone(),
                offsets: data.offsets.clone(),
            },
            BodyKind::LpBall { p, dim } => BodySchema::Lpball { p: *p, dim: *dim },
            BodyKind::Cone { base, apex } => {
                BodySchema::Cone { base: Box::new(BodySchema::from_body(base)), apex: *apex }
            }
            BodyKind::AffineImage { matrix, shift, inner } => BodySchema::Affine {
                matrix: *matrix,
                shift: *shift,
                inner: Box::new(BodySchema::from_body(inner)),
            },
            BodyKind::ReuleauxPolygon { k } => BodySchema::Reuleaux { k: *k },
        }
    }
}

impl Serialize for ConvexBody {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        BodySchema::from_body(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ConvexBody {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let schema = BodySchema::deserialize(deserializer)?;
        schema.into_body().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    #[test]
    fn vpolytope_rejects_flat_vertex_sets() {
        let verts = vec![
            Point::new3(0.0, 0.0, 0.0),
            Point::new3(1.0, 0.0, 0.0),
            Point::new3(0.0, 1.0, 0.0),
            Point::new3(1.0, 1.0, 0.0),
        ];
        assert!(ConvexBody::vpolytope(verts).is_err());
    }

    #[test]
    fn cone_requires_apex_off_plane() {
        let base = shapes::regular_polygon(6, 1.0);
        let apex = Point::new3(0.2, 0.0, 0.0);
        assert!(ConvexBody::cone(base, apex).is_err());
    }

    #[test]
    fn json_roundtrip_preserves_kinds() {
        let bodies = vec![
            shapes::square(1.0),
            ConvexBody::lpball(LpExponent::Finite(2.0), 3).unwrap(),
            ConvexBody::lpball(LpExponent::Infinity, 3).unwrap(),
            ConvexBody::reuleaux_polygon(5).unwrap(),
            ConvexBody::cone(shapes::square(1.0), Point::new3(0.0, 0.0, 1.5)).unwrap(),
        ];
        for body in bodies {
            let text = serde_json::to_string(&body).unwrap();
            let back: ConvexBody = serde_json::from_str(&text).unwrap();
            assert_eq!(
                std::mem::discriminant(body.kind()),
                std::mem::discriminant(back.kind())
            );
            assert!(body.reference_point().dist(&back.reference_point()) < 1e-12);
        }
    }

    #[test]
    fn lpball_json_accepts_inf_string() {
        let body: ConvexBody = serde_json::from_str(r#"{"type":"lpball","p":"inf","dim":2}"#).unwrap();
        match body.kind() {
            BodyKind::LpBall { p, dim } => {
                assert!(p.is_infinite());
                assert_eq!(*dim, 2);
            }
            _ => panic!("expected lp ball"),
        }
    }

    #[test]
    fn symmetry_center_detection() {
        assert!(shapes::square(2.0).symmetry_center().is_some());
        assert!(shapes::regular_polygon(7, 1.0).symmetry_center().is_none());
        let tri = shapes::triangle();
        assert!(tri.symmetry_center().is_none());
        let ball = ConvexBody::lpball(LpExponent::Finite(2.0), 2).unwrap();
        assert_eq!(ball.symmetry_center().unwrap(), Point::zero(2));
    }
}

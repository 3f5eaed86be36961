//! Convex-body primitives in dimensions 2 and 3: body representations,
//! gauge/support evaluation, hulls and representation conversion, volumes,
//! metric quantities, sphere grids, ellipsoid normalization, and the
//! Banach–Mazur distance estimate.

pub mod banach;
pub mod body;
pub mod convert;
pub mod error;
pub mod grids;
pub mod hexagon;
pub mod john;
pub mod lp;
pub mod metrics;
pub mod minkowski;
pub mod opt;
pub mod point;
pub mod shapes;
pub mod volume;

pub use body::{BodyKind, ConvexBody, Facet, LpExponent, TAU_BOUNDARY, TAU_GEO};
pub use error::{GeomError, GeomResult};
pub use point::{Mat, Point};

//! Partitioning point sets into pieces of smaller diameter, and checks for
//! constant-width planar bodies.
//!
//! The partition number of a cloud is found by [`phi_upper`]: bisection over
//! the pairwise-distance ratios, deciding each level through m-colorability
//! of the conflict graph ([`conflict_colorable`]). Constant-width test bodies
//! come from [`reuleaux_polygon`]; [`constant_width_radii_check`] validates
//! their insphere/circumsphere bracket, and [`hausdorff_distance`] measures
//! body proximity by support gaps.

mod cloud;
mod coloring;
mod hausdorff;
mod phi;
mod width;

pub use cloud::{PartitionResult, PointCloud};
pub use coloring::conflict_colorable;
pub use hausdorff::{hausdorff_distance, HAUSDORFF_GRID};
pub use phi::phi_upper;
pub use width::{
    constant_width_radii_check, mu_ratio, reuleaux_polygon, WidthRadiiReport, WIDTH_GRID,
    WIDTH_TOL,
};

//! Discretization of the space of convex bodies: spherical cap covers,
//! radial grids, snapping a body to a finite net, and net cardinality
//! bounds.
//!
//! The pieces compose in one direction: [`cap_cover`] fixes directions on
//! the outer sphere, [`radial_grid`] hangs evenly spaced points on each
//! direction, [`net_params`] certifies a cap radius and grid resolution for
//! a target gap via [`f_bound`], and [`snap_to_net`] replaces a normalized
//! body by the hull of the outermost grid points it contains, measuring how
//! little was lost. [`net_cardinality_log_bound`] counts, on the log scale,
//! how many such polytopes exist at all.

mod caps;
mod fbound;
mod index;
mod params;
mod snap;

pub use caps::{cap_cover, radial_grid, CapCover};
pub use fbound::{f_bound, FBound};
pub use params::{net_cardinality_log_bound, net_params, NetParams};
pub use snap::{snap_to_net, SnapResult, SnappedPolytope};

//! Covering functionals: certified verification of homothet covers and
//! search for good covers of convex bodies in dimensions 2 and 3.

pub mod arcs;
pub mod bounds;
pub mod config;
pub mod search;
pub mod theorems;
pub mod verify;

pub use config::{
    CoverCertificate, CoverConfig, SearchBudget, SearchResult, Verdict, VerifyOptions, TAU_COV,
};
pub use search::{gamma_chain, gamma_upper, volume_lower_bound};
pub use verify::{smooth_inflation, verify_cover, verify_cover_with};

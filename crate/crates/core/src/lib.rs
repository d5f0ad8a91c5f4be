//! Minimizing geodesics on closed convex triangulated surfaces, together with
//! executable checks of the constructions used to bound their total curvature:
//! developments, horizon crossings, tongues, s-pairs, drifting frames and the
//! global bound pipeline.
//!
//! The crate is organised bottom-up:
//!
//! * [`mesh`]: convex meshes, generators, validation, discrete curvature, I/O.
//! * [`curve`]: space polylines: total curvature, ε-straightness, diameter, winding.
//! * [`geodesic`]: exact polyhedral shortest paths with certificates.
//! * [`development`]: planar developments about a point or in a direction.
//! * [`horizon`]: dark/bright sides, horizons, crossings, drift frames, plane sections.
//! * [`spairs`]: s-pair matching, depth, index partitions and depth bounds.
//! * [`lab`]: named verification procedures, reports and the randomized sweep.

pub mod curve;
pub mod development;
pub mod error;
pub mod geodesic;
pub mod horizon;
pub mod lab;
pub mod mesh;
pub mod spairs;
pub mod svg;
pub mod tolerance;

pub use error::{GeoError, Result};
pub use tolerance::ToleranceProfile;

/// Points and vectors in space.
pub type Vec3 = nalgebra::Vector3<f64>;
/// Points and vectors in a development plane.
pub type Vec2 = nalgebra::Vector2<f64>;

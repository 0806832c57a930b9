//! Simulation engine and verification harness for a planar pursuit game:
//! several pursuers with per-coordinate energy budgets chase one evader on a
//! closed convex region neither side may leave. The pursuers follow a
//! constructive sequential strategy — align with the region's diametral
//! axis, chase the evader's first coordinate at constant speed, then mirror
//! its horizontal control while driving vertically — whose capture guarantee
//! this crate also certifies empirically over randomized scenarios and an
//! adversary battery.
//!
//! All numerics are generic over the scalar type (`f32` or `f64`) via
//! [`scalar::Real`]; `f64` aliases are exported at the crate root and are
//! what the CLI and the harness use.

pub mod config;
pub mod engine;
pub mod error;
pub mod evader;
pub mod geometry;
pub mod harness;
pub mod ledger;
pub mod rng;
pub mod scalar;
pub mod scenario;
pub mod strategy;
pub mod trace;
pub mod vec2;

pub use error::{Error, Result};
pub use scalar::Real;

/// Default-precision point/vector.
pub type Point = vec2::Vec2<f64>;
/// Default-precision region.
pub type Region = geometry::ConvexRegion<f64>;
/// Default-precision frame.
pub type WorldFrame = geometry::Frame<f64>;

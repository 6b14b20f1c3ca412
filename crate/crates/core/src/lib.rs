//! Reshaping intersecting planar obstacles into disjoint strictly starshaped
//! obstacles, with a reactive planner to drive a point robot through them.

pub mod admker;
pub mod bench;
pub mod error;
pub mod geom;
pub mod planner;
pub mod render;
pub mod run;
pub mod scenario;
pub mod starshape;
pub mod starworld;

pub use error::{Error, Result};

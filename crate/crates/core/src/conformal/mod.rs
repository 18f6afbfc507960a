//! Boundary tracing, the exterior map and the numerical interior Riemann map
//! of a proper lemniscate.

mod curve;
mod linalg;
mod szego;
mod trace;

pub use curve::JordanCurveSamples;
pub use linalg::{gmres, GmresReport};
pub use szego::{interior_riemann, invert_interior, InteriorMap};
pub use trace::{exterior_angle, exterior_angle_on, trace_lemniscate};

//! Curves carrying the measures: intervals, circles, ellipses, lemniscates.

mod polynomial;
mod roots;
mod support;
pub mod tracer;

pub use polynomial::ComplexPolynomial;
pub use roots::{critical_points, preimages, roots};
pub use support::{wrap_angle, ArcParametrization, ArcShape, Smoothness, SupportSpec};
pub use tracer::{partition_arcs, project_to_lemniscate, trace_lemniscate, LemniscateComponent};

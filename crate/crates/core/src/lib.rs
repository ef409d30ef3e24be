//! Christoffel functions of measures with jump weights on intervals, circles,
//! ellipses and lemniscates, together with the equilibrium-density tools
//! needed to predict the limit of `n lambda_n` at a jump.

pub mod asymptotics;
pub mod christoffel;
pub mod error;
pub mod gauss;
pub mod geometry;
pub mod measure;
pub mod measure_file;
pub mod potential;
pub mod quadrature;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};

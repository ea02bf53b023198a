//! Discontinuous Galerkin solver for the two-dimensional Euler equations on
//! unstructured triangle meshes, with an entropy-rate correction built from
//! HLL entropy-inequality predictors and positive conservative filters.

pub mod boundary;
pub mod cases;
pub mod config;
pub mod driver;
pub mod error;
pub mod euler;
pub mod expm;
pub mod field;
pub mod filter;
pub mod mesh;
pub mod output;
pub mod predictor;
pub mod quadrature;
pub mod reference;
pub mod solver;
pub mod time;

pub use error::{Error, Result};

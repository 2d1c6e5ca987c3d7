//! Bayesian state assignment for a qutrit from absolute-frequency
//! counts of a three-outcome measurement.
//!
//! The library evaluates the posterior-mean integrals over the
//! eight-dimensional Bloch body with scrambled quasi-Monte Carlo
//! quadrature, exploits the body's level-permutation symmetries, and
//! assembles assigned statistical operators with replicate-based error
//! bars.

pub mod assignment;
pub mod bloch_geometry;
pub mod cli;
pub mod error;
pub mod posterior;
pub mod priors;
pub mod qmc;
pub mod su_basis;
pub mod symmetry;
pub mod table_data;

pub use error::{Error, Result};

//! Exact polymatroid cones, Fourier-Motzkin projection and entropic inequalities
//! for marginal scenarios.

pub mod analytic;
pub mod io;
pub mod cones;
pub mod entropy;
pub mod error;
pub mod polyhedra;
pub mod sets;

pub use error::{Error, Result};
pub use sets::{Scenario, SubsetIndex};

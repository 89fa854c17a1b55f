//! Steady-state Gaussian quantum correlations of a double-cavity molecular
//! optomechanical system.
//!
//! The pipeline is: physical or effective parameters ([`model`]) → drift and
//! diffusion matrices, stability and the Lyapunov covariance ([`lindyn`]) →
//! bipartite entanglement, steering and discord ([`measures`]) → parameter
//! grids and figure presets ([`sweep`]) → configuration and file output
//! ([`cli`]).

pub mod cli;
pub mod error;
pub mod lindyn;
pub mod measures;
pub mod model;
pub mod sweep;

pub use error::{Error, Result};

//! Exact incidence counting, Cauchy–Riemann and foliation diagnostics for
//! complex curves in real hypersurfaces, and polynomial partitioning.

pub mod algebra;
pub mod configurations;
pub mod cr;
pub mod error;
pub mod foliation;
pub mod incidence;
pub mod partition;
pub mod seed;

pub use error::{AlgebraError, Error, Result};

//! Exact arithmetic kernel over ℚ and ℚ(i), from sparse polynomials up to
//! elimination and real root isolation.

pub mod field;
pub mod matrix;
pub mod poly;
pub mod resultant;
pub mod roots;

pub use field::{Field, GaussianRational, Rational};
pub use matrix::{jacobian_rank, ExactMatrix};
pub use poly::{Monomial, MultiPoly, COMPLEX_VARS, PLANE_VARS, REAL4_VARS};
pub use resultant::resultant;
pub use roots::{isolate_all_real_roots, isolate_real_roots, roots_with_samples, sample_points_between_roots, RootInterval};

pub type QPoly = MultiPoly<Rational>;
pub type CPoly = MultiPoly<GaussianRational>;

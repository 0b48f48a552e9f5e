//! Exact rational linear programming and polyhedral enumeration.
//!
//! Everything in this crate works over arbitrary-precision rationals; there is
//! no floating point anywhere. The kernel offers:
//!
//! * [`solve`]: a dense two-phase simplex method with Bland's rule,
//! * [`extreme_rays`]: the double description method for homogeneous cones,
//!   including explicit handling of the lineality space,
//! * [`enumerate_vertices`]: vertices of a bounded polytope,
//! * [`project_cone`]: Fourier-Motzkin elimination with redundancy removal.
//!
//! The enumeration routines are guarded by desk-scale [`Limits`] that can be
//! tightened per thread with [`with_limits`].

mod error;
mod fourier_motzkin;
mod guard;
pub mod linalg;
mod polyhedron;
pub mod rational;
mod simplex;

pub use error::LpError;
pub use fourier_motzkin::project_cone;
pub use guard::{current_limits, reset_stats, stats, with_limits, Limits, Stats};
pub use polyhedron::{enumerate_vertices, extreme_rays, in_conic_hull, ConeRays, HRep};
pub use rational::Rational;
pub use simplex::{solve, Constraint, LinearProgram, LpOutcome, Relation, VarBound};

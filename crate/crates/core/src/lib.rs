//! Validated numerics for certifying that a one-parameter family of planar
//! maps has a quadratic homoclinic tangency that unfolds generically.
//!
//! The proof pipeline works on the projectivized map `(x, y, t, a)`, where `t`
//! is the angle of a tangent direction. A tangency of the stable and unstable
//! curves becomes a transversal heteroclinic connection of the projectivized
//! map, which is certified with covering relations, cone conditions and
//! bounds on the parameterized invariant manifolds.

pub mod autodiff;
pub mod cli;
pub mod cones;
pub mod covering;
pub mod error;
pub mod henon;
pub mod hset;
pub mod interval;
pub mod manifold;
pub mod projective;
pub mod stage;
pub mod toy;

pub use error::{Error, Result};
pub use interval::{Interval, IntervalMatrix, IntervalVector};

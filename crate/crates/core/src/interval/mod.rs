//! Outward-rounded interval arithmetic on scalars, vectors and matrices.

mod elementary;
mod matrix;
mod rounding;
mod scalar;
mod vector;

pub use matrix::{inverse_enclosure, IntervalMatrix};
pub use scalar::Interval;
pub use vector::IntervalVector;

//! Lattice points in ellipsoids, shortest and closest vectors.

mod enumerate;
mod lll;

pub use enumerate::{enumerate_ellipsoid, shortest_vectors, EllipsoidQuery, Enumerator, LatticePoint};
pub use enumerate::closest_vectors;
pub use lll::lll_gram;

//! Voronoi reduction theory for positive definite quadratic forms restricted
//! to a linear subspace of symmetric matrices.
//!
//! The crate computes Delone subdivisions of `Z^d` under a rational form,
//! secondary cones of those subdivisions inside a subspace `T`, flips
//! between neighbouring cones, and the enumeration of all inequivalent
//! generic cones. On top of that sit certified covering-density bounds
//! (determinant maximization with exact rational certificates) and the
//! trace-form machinery for totally real number fields.
//!
//! All combinatorial decisions use exact rational arithmetic.

pub mod catalog;
pub mod covopt;
pub mod delone;
pub mod enumerate;
pub mod error;
pub mod latenum;
pub mod numberfield;
pub mod polycone;
pub mod qcore;
pub mod secondary;
pub mod symmetry;

pub use error::{Error, Result};
pub use qcore::{QForm, Rat, SubspaceT, SymMat, Unimodular};

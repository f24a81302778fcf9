//! Exact rational linear algebra on symmetric matrices.

pub mod io;
pub mod linalg;
pub mod qform;
pub mod rat;
pub mod subspace;
pub mod symmat;

pub use qform::{transform, QForm, Unimodular};
pub use rat::Rat;
pub use subspace::SubspaceT;
pub use symmat::{Definiteness, SymMat};

/// `⟨A, B⟩ = trace(AB)`.
pub fn inner(a: &SymMat, b: &SymMat) -> crate::Result<Rat> {
    a.inner(b)
}

pub fn definiteness(a: &SymMat) -> Definiteness {
    a.definiteness()
}

pub fn rational_normalize(a: &SymMat) -> crate::Result<SymMat> {
    a.rational_normalize()
}

pub fn project_t(a: &SymMat, t: &SubspaceT) -> crate::Result<SymMat> {
    t.project(a)
}

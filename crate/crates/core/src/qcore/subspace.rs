use num_traits::{One, Zero};

use super::linalg::{self, Matrix};
use super::rat::{normalize_ray, Rat};
use super::symmat::SymMat;
use crate::error::{Error, Result};

/// A linear subspace T of symmetric d×d matrices with a fixed basis.
/// Coordinates `x` correspond to the form `Σ x_k A_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceT {
    d: usize,
    basis: Vec<SymMat>,
    gram: Matrix,
    gram_inv: Matrix,
}

impl SubspaceT {
    pub fn new(basis: Vec<SymMat>) -> Result<Self> {
        let Some(first) = basis.first() else {
            return Err(Error::DependentBasis);
        };
        let d = first.dim();
        for b in &basis {
            if b.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: b.dim() });
            }
        }
        let gram: Matrix = basis.iter().map(|a| basis.iter().map(|b| a.inner_unchecked(b)).collect()).collect();
        let gram_inv = linalg::inverse(&gram).ok_or(Error::DependentBasis)?;
        Ok(SubspaceT { d, basis, gram, gram_inv })
    }

    /// All of S^d, coordinates = lower-triangle entries in row-major order.
    pub fn full(d: usize) -> Self {
        let mut basis = Vec::new();
        for i in 0..d {
            for j in 0..=i {
                let mut m = SymMat::zeros(d);
                m.set(i, j, Rat::one());
                basis.push(m);
            }
        }
        SubspaceT::new(basis).expect("unit matrices are independent")
    }

    /// Span of the given matrices after discarding dependent ones.
    pub fn spanned_by(mats: &[SymMat]) -> Result<Self> {
        let mut kept: Vec<SymMat> = Vec::new();
        let mut rows: Matrix = Vec::new();
        for m in mats {
            rows.push(m.lower().to_vec());
            if linalg::rank(&rows) == rows.len() {
                kept.push(m.clone());
            } else {
                rows.pop();
            }
        }
        SubspaceT::new(kept)
    }

    pub fn ambient_dim(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SymMat] {
        &self.basis
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// `Σ x_k A_k`.
    pub fn form(&self, x: &[Rat]) -> SymMat {
        let mut m = SymMat::zeros(self.d);
        for (xk, a) in x.iter().zip(&self.basis) {
            if !xk.is_zero() {
                m.add_scaled(xk, a);
            }
        }
        m
    }

    /// `(⟨N, A_k⟩)_k`: the functional `x ↦ ⟨N, Σ x_k A_k⟩` in T-coordinates.
    pub fn functional(&self, n: &SymMat) -> Vec<Rat> {
        self.basis.iter().map(|a| n.inner_unchecked(a)).collect()
    }

    /// Coordinates of the orthogonal projection of `a` onto T.
    pub fn project_coords(&self, a: &SymMat) -> Vec<Rat> {
        linalg::mat_vec(&self.gram_inv, &self.functional(a))
    }

    /// Orthogonal projection under the trace inner product.
    pub fn project(&self, a: &SymMat) -> Result<SymMat> {
        if a.dim() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: a.dim() });
        }
        Ok(self.form(&self.project_coords(a)))
    }

    /// Coordinates of `a`, failing if `a ∉ T`.
    pub fn coords(&self, a: &SymMat) -> Result<Vec<Rat>> {
        if a.dim() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: a.dim() });
        }
        let x = self.project_coords(a);
        if &self.form(&x) != a {
            return Err(Error::NotInSubspace);
        }
        Ok(x)
    }

    pub fn contains(&self, a: &SymMat) -> bool {
        self.coords(a).is_ok()
    }

    /// Form represented by the dual functional `f`: the `N ∈ T` with
    /// `⟨N, Σ x_k A_k⟩ = f·x`, normalized to a primitive integral matrix.
    pub fn functional_form(&self, f: &[Rat]) -> Result<SymMat> {
        let y = linalg::mat_vec(&self.gram_inv, f);
        self.form(&y).rational_normalize()
    }

    /// Same span, possibly different basis.
    pub fn same_span(&self, other: &SubspaceT) -> bool {
        self.d == other.d && self.dim() == other.dim() && other.basis.iter().all(|b| self.contains(b))
    }

    /// Copy of this subspace with each basis matrix rational-normalized.
    pub fn normalized(&self) -> SubspaceT {
        let basis = self
            .basis
            .iter()
            .map(|b| {
                let v = normalize_ray(b.lower()).expect("basis matrices are nonzero");
                SymMat::from_lower(self.d, v).expect("same size")
            })
            .collect();
        SubspaceT::new(basis).expect("rescaling keeps independence")
    }
}

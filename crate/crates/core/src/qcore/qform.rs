use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use super::linalg;
use super::rat::{int, Rat};
use super::symmat::{Definiteness, SymMat};
use crate::error::{Error, Result};

/// A quadratic form together with its lazily computed definiteness.
#[derive(Clone, Debug)]
pub struct QForm {
    matrix: SymMat,
    definiteness: OnceLock<Definiteness>,
}

impl PartialEq for QForm {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Eq for QForm {}

impl From<SymMat> for QForm {
    fn from(matrix: SymMat) -> Self {
        QForm::new(matrix)
    }
}

impl QForm {
    pub fn new(matrix: SymMat) -> Self {
        QForm { matrix, definiteness: OnceLock::new() }
    }

    /// Wraps `matrix` and fails unless it is positive definite.
    pub fn positive_definite(matrix: SymMat) -> Result<Self> {
        let q = QForm::new(matrix);
        if !q.is_pd() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(q)
    }

    pub fn matrix(&self) -> &SymMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> SymMat {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn definiteness(&self) -> &Definiteness {
        self.definiteness.get_or_init(|| self.matrix.definiteness())
    }

    pub fn is_pd(&self) -> bool {
        self.definiteness().is_pd()
    }

    pub fn det(&self) -> Rat {
        self.matrix.det()
    }

    pub fn scale(&self, s: &Rat) -> QForm {
        QForm::new(self.matrix.scale(s))
    }
}

/// Integer matrix with determinant ±1, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Unimodular {
    dim: usize,
    entries: Vec<i64>,
}

impl Unimodular {
    pub fn new(dim: usize, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: entries.len() });
        }
        let m: Vec<Vec<Rat>> = entries.chunks(dim).map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        let d = linalg::det(&m);
        if d.abs() != Rat::one() {
            return Err(Error::NotUnimodular);
        }
        Ok(Unimodular { dim, entries })
    }

    /// Columns given as vectors (the images of the unit vectors).
    pub fn from_columns(cols: &[Vec<i64>]) -> Result<Self> {
        let dim = cols.len();
        let mut entries = vec![0; dim * dim];
        for (j, c) in cols.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: c.len() });
            }
            for i in 0..dim {
                entries[i * dim + j] = c[i];
            }
        }
        Unimodular::new(dim, entries)
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        Unimodular { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.dim + j]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, other: &Unimodular) -> Unimodular {
        let d = self.dim;
        let mut entries = vec![0; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a != 0 {
                    for j in 0..d {
                        entries[i * d + j] += a * other.entries[k * d + j];
                    }
                }
            }
        }
        Unimodular { dim: d, entries }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    pub fn apply_rat(&self, v: &[Rat]) -> Vec<Rat> {
        (0..self.dim)
            .map(|i| (0..self.dim).fold(Rat::zero(), |acc, j| if self.get(i, j) == 0 { acc } else { acc + int(self.get(i, j)) * &v[j] }))
            .collect()
    }

    pub fn transpose(&self) -> Unimodular {
        let d = self.dim;
        let mut entries = vec![0; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[j * d + i] = self.entries[i * d + j];
            }
        }
        Unimodular { dim: d, entries }
    }

    pub fn inverse(&self) -> Unimodular {
        let m: Vec<Vec<Rat>> = self.entries.chunks(self.dim).map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        let inv = linalg::inverse(&m).expect("unimodular matrices are invertible");
        let entries = inv
            .iter()
            .flatten()
            .map(|x| {
                debug_assert!(x.is_integer());
                super::rat::floor_i64(x)
            })
            .collect();
        Unimodular { dim: self.dim, entries }
    }

    pub fn is_identity(&self) -> bool {
        *self == Unimodular::identity(self.dim)
    }

    pub fn negate(&self) -> Unimodular {
        Unimodular { dim: self.dim, entries: self.entries.iter().map(|x| -x).collect() }
    }
}

/// `Uᵗ Q U`.
pub fn transform(q: &QForm, u: &Unimodular) -> Result<QForm> {
    if q.dim() != u.dim() {
        return Err(Error::DimensionMismatch { expected: q.dim(), found: u.dim() });
    }
    let m = q.matrix().congruence(u.entries());
    let out = QForm::new(m);
    if let Some(d) = q.definiteness.get() {
        // Definiteness is a congruence invariant; kernels move by U⁻¹.
        let moved = match d {
            Definiteness::PositiveSemidefinite { kernel } => {
                let inv = u.inverse();
                Definiteness::PositiveSemidefinite { kernel: kernel.iter().map(|v| inv.apply_rat(v)).collect() }
            }
            other => other.clone(),
        };
        let _ = out.definiteness.set(moved);
    }
    Ok(out)
}

impl SymMat {
    /// `Uᵗ A U` with dimension check.
    pub fn transform(&self, u: &Unimodular) -> Result<SymMat> {
        if self.dim() != u.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: u.dim() });
        }
        Ok(self.congruence(u.entries()))
    }
}

/// True if every entry is zero or positive; used by a few invariants.
pub fn all_nonnegative(v: &[Rat]) -> bool {
    v.iter().all(|x| !x.is_negative())
}

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linalg::{self, Matrix};
use super::rat::{big, int, Rat};
use crate::error::{Error, Result};

/// Symmetric rational matrix, lower triangle stored row by row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymMat {
    dim: usize,
    lower: Vec<Rat>,
}

#[inline]
fn idx(i: usize, j: usize) -> usize {
    let (i, j) = if i >= j { (i, j) } else { (j, i) };
    i * (i + 1) / 2 + j
}

/// Outcome of the exact definiteness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Definiteness {
    PositiveDefinite,
    /// Positive semidefinite and singular, with a rational kernel basis.
    PositiveSemidefinite { kernel: Vec<Vec<Rat>> },
    Indefinite,
}

impl Definiteness {
    pub fn is_pd(&self) -> bool {
        matches!(self, Definiteness::PositiveDefinite)
    }

    pub fn is_psd(&self) -> bool {
        !matches!(self, Definiteness::Indefinite)
    }
}

impl SymMat {
    pub fn zeros(dim: usize) -> Self {
        SymMat { dim, lower: vec![Rat::zero(); dim * (dim + 1) / 2] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn diag(entries: &[Rat]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, x) in entries.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    /// From the packed lower triangle (row-major: a00, a10, a11, a20, ...).
    pub fn from_lower(dim: usize, lower: Vec<Rat>) -> Result<Self> {
        if lower.len() != dim * (dim + 1) / 2 {
            return Err(Error::DimensionMismatch { expected: dim * (dim + 1) / 2, found: lower.len() });
        }
        Ok(SymMat { dim, lower })
    }

    /// From full rows; only the lower triangle is read, symmetry is checked.
    pub fn from_rows(rows: &[Vec<Rat>]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            for j in 0..=i {
                if rows[j][i] != row[j] {
                    return Err(Error::Parse("matrix is not symmetric".into()));
                }
                m.set(i, j, row[j].clone());
            }
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        Self::from_rows(&r).expect("integer matrix literal must be square and symmetric")
    }

    /// `v vᵗ`.
    pub fn outer(v: &[Rat]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..=i {
                m.set(i, j, &v[i] * &v[j]);
            }
        }
        m
    }

    pub fn outer_i64(v: &[i64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..=i {
                m.set(i, j, int(v[i] * v[j]));
            }
        }
        m
    }

    /// `(u vᵗ + v uᵗ) / 2`, the symmetric part of `u vᵗ`.
    pub fn sym_outer_i64(u: &[i64], v: &[i64]) -> Self {
        let dim = u.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..=i {
                m.set(i, j, Rat::new(BigInt::from(u[i] * v[j] + v[i] * u[j]), BigInt::from(2)));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lower(&self) -> &[Rat] {
        &self.lower
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.lower[idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rat) {
        self.lower[idx(i, j)] = x;
    }

    pub fn rows(&self) -> Matrix {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j).clone()).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.lower.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.lower.iter().all(|x| x.is_integer())
    }

    fn check_dim(&self, other: &SymMat) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    /// `⟨A, B⟩ = trace(AB)`; off-diagonal entries count twice.
    pub fn inner(&self, other: &SymMat) -> Result<Rat> {
        self.check_dim(other)?;
        Ok(self.inner_unchecked(other))
    }

    pub(crate) fn inner_unchecked(&self, other: &SymMat) -> Rat {
        let mut diag = Rat::zero();
        let mut off = Rat::zero();
        for i in 0..self.dim {
            for j in 0..i {
                off += self.get(i, j) * other.get(i, j);
            }
            diag += self.get(i, i) * other.get(i, i);
        }
        diag + off * int(2)
    }

    /// `Q[v] = vᵗ Q v` for a rational vector.
    pub fn quad(&self, v: &[Rat]) -> Rat {
        self.bilinear(v, v)
    }

    pub fn bilinear(&self, u: &[Rat], v: &[Rat]) -> Rat {
        let mut s = Rat::zero();
        for i in 0..self.dim {
            if u[i].is_zero() {
                continue;
            }
            let mut row = Rat::zero();
            for j in 0..self.dim {
                if !v[j].is_zero() {
                    row += self.get(i, j) * &v[j];
                }
            }
            s += &u[i] * row;
        }
        s
    }

    pub fn quad_i64(&self, v: &[i64]) -> Rat {
        self.bilinear_i64(v, v)
    }

    pub fn bilinear_i64(&self, u: &[i64], v: &[i64]) -> Rat {
        let mut s = Rat::zero();
        for i in 0..self.dim {
            if u[i] == 0 {
                continue;
            }
            for j in 0..self.dim {
                if v[j] != 0 {
                    s += self.get(i, j) * int(u[i] * v[j]);
                }
            }
        }
        s
    }

    /// `Q v`.
    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        (0..self.dim)
            .map(|i| (0..self.dim).fold(Rat::zero(), |acc, j| acc + self.get(i, j) * &v[j]))
            .collect()
    }

    pub fn scale(&self, s: &Rat) -> SymMat {
        SymMat { dim: self.dim, lower: self.lower.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, other: &SymMat) -> Result<SymMat> {
        self.check_dim(other)?;
        Ok(SymMat { dim: self.dim, lower: self.lower.iter().zip(&other.lower).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &SymMat) -> Result<SymMat> {
        self.check_dim(other)?;
        Ok(SymMat { dim: self.dim, lower: self.lower.iter().zip(&other.lower).map(|(a, b)| a - b).collect() })
    }

    /// In-place `self += s * other`.
    pub fn add_scaled(&mut self, s: &Rat, other: &SymMat) {
        for (a, b) in self.lower.iter_mut().zip(&other.lower) {
            *a += s * b;
        }
    }

    pub fn trace(&self) -> Rat {
        (0..self.dim).fold(Rat::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn det(&self) -> Rat {
        linalg::det(&self.rows())
    }

    /// `Uᵗ A U` for an integer matrix `U` given row-major.
    pub fn congruence(&self, u: &[i64]) -> SymMat {
        let d = self.dim;
        // (A U)_{kj}
        let au: Vec<Vec<Rat>> = (0..d)
            .map(|k| {
                (0..d)
                    .map(|j| (0..d).fold(Rat::zero(), |acc, l| if u[l * d + j] == 0 { acc } else { acc + self.get(k, l) * int(u[l * d + j]) }))
                    .collect()
            })
            .collect();
        let mut out = SymMat::zeros(d);
        for i in 0..d {
            for j in 0..=i {
                let mut s = Rat::zero();
                for k in 0..d {
                    if u[k * d + i] != 0 {
                        s += int(u[k * d + i]) * &au[k][j];
                    }
                }
                out.set(i, j, s);
            }
        }
        out
    }

    /// `Mᵗ A M` for a rational matrix (rows).
    pub fn congruence_rat(&self, m: &[Vec<Rat>]) -> SymMat {
        let d = self.dim;
        let e = m[0].len();
        let am: Vec<Vec<Rat>> = (0..d)
            .map(|k| (0..e).map(|j| (0..d).fold(Rat::zero(), |acc, l| acc + self.get(k, l) * &m[l][j])).collect())
            .collect();
        let mut out = SymMat::zeros(e);
        for i in 0..e {
            for j in 0..=i {
                let s = (0..d).fold(Rat::zero(), |acc, k| acc + &m[k][i] * &am[k][j]);
                out.set(i, j, s);
            }
        }
        out
    }

    /// Exact classification through LDLᵗ with symmetric (diagonal) pivoting.
    pub fn definiteness(&self) -> Definiteness {
        match self.pivoted_ldl_sign() {
            LdlSign::Pd => Definiteness::PositiveDefinite,
            LdlSign::Indefinite => Definiteness::Indefinite,
            LdlSign::Psd => Definiteness::PositiveSemidefinite { kernel: linalg::kernel(&self.rows(), self.dim) },
        }
    }

    pub fn is_positive_definite(&self) -> bool {
        matches!(self.pivoted_ldl_sign(), LdlSign::Pd)
    }

    pub fn is_psd(&self) -> bool {
        !matches!(self.pivoted_ldl_sign(), LdlSign::Indefinite)
    }

    fn pivoted_ldl_sign(&self) -> LdlSign {
        let n = self.dim;
        let mut a = self.rows();
        let mut active: Vec<usize> = (0..n).collect();
        let mut singular = false;
        while !active.is_empty() {
            // Largest positive diagonal pivot keeps entries small-ish; any positive one is exact.
            let mut best: Option<usize> = None;
            for (pos, &i) in active.iter().enumerate() {
                if a[i][i].is_negative() {
                    return LdlSign::Indefinite;
                }
                if a[i][i].is_positive() && best.is_none_or(|b| a[i][i] > a[active[b]][active[b]]) {
                    best = Some(pos);
                }
            }
            let Some(pos) = best else {
                // Remaining diagonal is zero: PSD only if the whole block vanishes.
                for &i in &active {
                    for &j in &active {
                        if !a[i][j].is_zero() {
                            return LdlSign::Indefinite;
                        }
                    }
                }
                singular = true;
                break;
            };
            let p = active.remove(pos);
            let piv = a[p][p].clone();
            for &i in &active {
                if a[i][p].is_zero() {
                    continue;
                }
                let f = &a[i][p] / &piv;
                for &j in &active {
                    let t = &f * &a[p][j];
                    a[i][j] -= t;
                }
            }
        }
        if singular {
            LdlSign::Psd
        } else {
            LdlSign::Pd
        }
    }

    /// `Q = Rᵗ diag(D) R` with `R` unit upper triangular; requires PD.
    pub fn ldl_upper(&self) -> Result<(Matrix, Vec<Rat>)> {
        let n = self.dim;
        let mut a = self.rows();
        let mut r = vec![vec![Rat::zero(); n]; n];
        let mut d = Vec::with_capacity(n);
        for k in 0..n {
            if !a[k][k].is_positive() {
                return Err(Error::NotPositiveDefinite);
            }
            let piv = a[k][k].clone();
            r[k][k] = Rat::one();
            for j in k + 1..n {
                r[k][j] = &a[k][j] / &piv;
            }
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &piv;
                for j in k + 1..n {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
            d.push(piv);
        }
        Ok((r, d))
    }

    /// The positive multiple of `self` that is integral with entry gcd one.
    pub fn rational_normalize(&self) -> Result<SymMat> {
        let p = super::rat::primitive(&self.lower).ok_or(Error::ZeroMatrix)?;
        Ok(SymMat { dim: self.dim, lower: p.iter().map(big).collect() })
    }

    /// Content scaling factor used by [`rational_normalize`]: `self * factor`
    /// is the normalized matrix.
    pub fn normalization_factor(&self) -> Result<Rat> {
        let mut l = BigInt::one();
        for x in &self.lower {
            l = l.lcm(x.denom());
        }
        let mut g = BigInt::zero();
        for x in &self.lower {
            g = g.gcd(&(x * big(&l)).to_integer());
        }
        if g.is_zero() {
            return Err(Error::ZeroMatrix);
        }
        Ok(Rat::new(l, g))
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| super::rat::to_f64(self.get(i, j))).collect())
            .collect()
    }
}

enum LdlSign {
    Pd,
    Psd,
    Indefinite,
}

impl fmt::Debug for SymMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", super::rat::fmt_rat(self.get(i, j)))?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::super::rat::rat;
    use super::*;

    #[test]
    fn inner_products() {
        let i2 = SymMat::identity(2);
        assert_eq!(i2.inner(&i2).unwrap(), int(2));
        let a2 = SymMat::from_i64(&[&[2, 1], &[1, 2]]);
        let swap = SymMat::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(a2.inner(&swap).unwrap(), int(2));
        let vvt = SymMat::outer_i64(&[1, 1]);
        assert_eq!(a2.inner(&vvt).unwrap(), int(6));
        assert_eq!(a2.quad_i64(&[1, 1]), int(6));
        assert!(a2.inner(&SymMat::identity(3)).is_err());
    }

    #[test]
    fn definiteness_cases() {
        assert!(SymMat::identity(2).definiteness().is_pd());
        match SymMat::from_i64(&[&[1, 1], &[1, 1]]).definiteness() {
            Definiteness::PositiveSemidefinite { kernel } => {
                assert_eq!(kernel.len(), 1);
                assert_eq!(kernel[0][0], -kernel[0][1].clone());
            }
            other => panic!("expected PSD, got {other:?}"),
        }
        assert_eq!(SymMat::from_i64(&[&[1, 2], &[2, 1]]).definiteness(), Definiteness::Indefinite);
        assert_eq!(SymMat::from_i64(&[&[0, 1], &[1, 0]]).definiteness(), Definiteness::Indefinite);
        assert!(SymMat::zeros(2).definiteness().is_psd());
    }

    #[test]
    fn normalization() {
        let a = SymMat::diag(&[rat(1, 2), rat(3, 2)]);
        assert_eq!(a.rational_normalize().unwrap(), SymMat::from_i64(&[&[1, 0], &[0, 3]]));
        let b = SymMat::from_i64(&[&[2, 0], &[0, 4]]);
        assert_eq!(b.rational_normalize().unwrap(), SymMat::from_i64(&[&[1, 0], &[0, 2]]));
        let n = b.rational_normalize().unwrap();
        assert_eq!(n.rational_normalize().unwrap(), n);
        assert_eq!(SymMat::zeros(2).rational_normalize(), Err(Error::ZeroMatrix));
        assert_eq!(b.scale(&b.normalization_factor().unwrap()), n);
    }

    #[test]
    fn congruence_by_shear() {
        let q = SymMat::identity(2).congruence(&[1, 1, 0, 1]);
        assert_eq!(q, SymMat::from_i64(&[&[1, 1], &[1, 2]]));
    }

    #[test]
    fn ldl_factors_reconstruct() {
        let q = SymMat::from_i64(&[&[4, 2, 1], &[2, 5, 3], &[1, 3, 6]]);
        let (r, d) = q.ldl_upper().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let s = (0..3).fold(Rat::zero(), |acc, k| acc + &r[k][i] * &d[k] * &r[k][j]);
                assert_eq!(&s, q.get(i, j));
            }
        }
    }
}

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qcore::linalg;
use crate::qcore::rat::{int, sign, Rat};
use crate::qcore::SymMat;

/// `N_{V,w} = w wᵗ − Σ α_v v vᵗ` where `w = Σ α_v v` is the affine
/// dependency of `w` on the simplex `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NForm {
    pub matrix: SymMat,
    pub simplex: Vec<Vec<i64>>,
    pub w: Vec<i64>,
    pub alpha: Vec<Rat>,
}

/// Affine coordinates of `w` with respect to the `d+1` points of `v`.
pub fn affine_coordinates(v: &[Vec<i64>], w: &[i64]) -> Result<Vec<Rat>> {
    let d = w.len();
    if v.len() != d + 1 || v.iter().any(|p| p.len() != d) {
        return Err(Error::DimensionMismatch { expected: d + 1, found: v.len() });
    }
    // Columns (v_i, 1); solve for α with Σ α_i (v_i, 1) = (w, 1).
    let mut a = vec![vec![Rat::zero(); d + 1]; d + 1];
    for (j, p) in v.iter().enumerate() {
        for i in 0..d {
            a[i][j] = int(p[i]);
        }
        a[d][j] = Rat::one();
    }
    let mut b: Vec<Rat> = w.iter().map(|&x| int(x)).collect();
    b.push(Rat::one());
    linalg::solve(&a, &b).ok_or(Error::AffinelyDependent)
}

pub fn nform(v: &[Vec<i64>], w: &[i64]) -> Result<NForm> {
    let alpha = affine_coordinates(v, w)?;
    let mut m = SymMat::outer_i64(w);
    for (a, p) in alpha.iter().zip(v) {
        if !a.is_zero() {
            m.add_scaled(&-a.clone(), &SymMat::outer_i64(p));
        }
    }
    Ok(NForm { matrix: m, simplex: v.to_vec(), w: w.to_vec(), alpha })
}

/// Sign of `⟨Q, N_{V,w}⟩`: +1 outside the circumsphere of `V`, 0 on it,
/// −1 inside.
pub fn sphere_test(q: &SymMat, v: &[Vec<i64>], w: &[i64]) -> Result<i8> {
    let n = nform(v, w)?;
    Ok(sign(&q.inner(&n.matrix)?))
}

/// Center `c` and squared radius of the unique `Q`-sphere through `V`.
pub fn circumsphere(q: &SymMat, v: &[Vec<i64>]) -> Result<(Vec<Rat>, Rat)> {
    let d = q.dim();
    if v.len() != d + 1 || v.iter().any(|p| p.len() != d) {
        return Err(Error::DimensionMismatch { expected: d + 1, found: v.len() });
    }
    // 2 (v_i − v_0)ᵗ Q c = Q[v_i] − Q[v_0]
    let v0 = &v[0];
    let q0 = q.quad_i64(v0);
    let mut a = Vec::with_capacity(d);
    let mut b = Vec::with_capacity(d);
    for p in &v[1..] {
        let diff: Vec<Rat> = p.iter().zip(v0).map(|(x, y)| int(x - y)).collect();
        a.push(q.mul_vec(&diff).into_iter().map(|x| x * int(2)).collect::<Vec<_>>());
        b.push(q.quad_i64(p) - &q0);
    }
    let c = linalg::solve(&a, &b).ok_or(Error::AffinelyDependent)?;
    let r: Vec<Rat> = v0.iter().zip(&c).map(|(x, y)| int(*x) - y).collect();
    let r2 = q.quad(&r);
    Ok((c, r2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::rat::rat;

    fn pts(p: &[&[i64]]) -> Vec<Vec<i64>> {
        p.iter().map(|x| x.to_vec()).collect()
    }

    #[test]
    fn nform_examples() {
        let v = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        let n = nform(&v, &[1, 1]).unwrap();
        assert_eq!(n.alpha, vec![int(-1), int(1), int(1)]);
        assert_eq!(n.matrix, SymMat::from_i64(&[&[0, 1], &[1, 0]]));
        let n1 = nform(&pts(&[&[0], &[1]]), &[2]).unwrap();
        assert_eq!(n1.matrix, SymMat::from_i64(&[&[2]]));
        let shifted = nform(&pts(&[&[1, 0], &[2, 0], &[1, 1]]), &[2, 1]).unwrap();
        assert_eq!(shifted.matrix, n.matrix);
    }

    #[test]
    fn sphere_test_examples() {
        let v = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(sphere_test(&SymMat::identity(2), &v, &[1, 1]).unwrap(), 0);
        assert_eq!(sphere_test(&SymMat::from_i64(&[&[2, 1], &[1, 2]]), &v, &[1, 1]).unwrap(), 1);
        assert_eq!(sphere_test(&SymMat::from_i64(&[&[2, -1], &[-1, 2]]), &v, &[1, 1]).unwrap(), -1);
    }

    #[test]
    fn circumsphere_examples() {
        let v = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(circumsphere(&SymMat::identity(2), &v).unwrap(), (vec![rat(1, 2), rat(1, 2)], rat(1, 2)));
        assert_eq!(
            circumsphere(&SymMat::from_i64(&[&[2, 1], &[1, 2]]), &v).unwrap(),
            (vec![rat(1, 3), rat(1, 3)], rat(2, 3))
        );
        let bad = pts(&[&[0, 0], &[1, 0], &[2, 0]]);
        assert_eq!(circumsphere(&SymMat::identity(2), &bad), Err(Error::AffinelyDependent));
        assert_eq!(nform(&bad, &[1, 1]).unwrap_err(), Error::AffinelyDependent);
    }
}

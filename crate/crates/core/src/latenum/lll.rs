//! Exact LLL reduction of a Gram matrix. Used as preprocessing only.

use num_traits::{One, Zero};

use crate::qcore::rat::{int, rat, round_i64, Rat};
use crate::qcore::SymMat;

/// Returns `(u, g)` where `u` holds the reduced basis as columns (row-major
/// d×d integer matrix) and `g = uᵗ Q u`.
pub fn lll_gram(q: &SymMat) -> (Vec<i64>, SymMat) {
    let d = q.dim();
    let mut basis: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
    let mut g: Vec<Vec<Rat>> = q.rows();
    let delta = rat(3, 4);
    let mut k = 1;
    let mut guard = 0usize;
    while k < d {
        guard += 1;
        if guard > 100_000 {
            break;
        }
        for j in (0..k).rev() {
            let (mu, _) = gso(&g);
            let r = round_i64(&mu[k][j]);
            if r != 0 {
                reduce(&mut basis, &mut g, k, j, r);
            }
        }
        let (mu, bstar) = gso(&g);
        let lhs = bstar[k].clone() + &mu[k][k - 1] * &mu[k][k - 1] * &bstar[k - 1];
        if lhs >= &delta * &bstar[k - 1] {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            k = (k - 1).max(1);
        }
    }
    let mut u = vec![0i64; d * d];
    for (j, b) in basis.iter().enumerate() {
        for i in 0..d {
            u[i * d + j] = b[i];
        }
    }
    let mut out = SymMat::zeros(d);
    for i in 0..d {
        for j in 0..=i {
            out.set(i, j, g[i][j].clone());
        }
    }
    (u, out)
}

fn reduce(basis: &mut [Vec<i64>], g: &mut [Vec<Rat>], k: usize, j: usize, r: i64) {
    let d = g.len();
    let rr = int(r);
    let gkj = g[k][j].clone();
    let gjj = g[j][j].clone();
    for i in 0..d {
        if i != k {
            let t = &rr * &g[j][i];
            g[k][i] -= t;
            g[i][k] = g[k][i].clone();
        }
    }
    g[k][k] = &g[k][k] - int(2) * &rr * gkj + &rr * &rr * gjj;
    let bj = basis[j].clone();
    for (x, y) in basis[k].iter_mut().zip(bj) {
        *x -= r * y;
    }
}

/// Gram–Schmidt coefficients `mu[i][j]` and squared lengths from a Gram matrix.
fn gso(g: &[Vec<Rat>]) -> (Vec<Vec<Rat>>, Vec<Rat>) {
    let d = g.len();
    let mut mu = vec![vec![Rat::zero(); d]; d];
    let mut b = vec![Rat::zero(); d];
    for i in 0..d {
        for j in 0..i {
            let mut s = g[i][j].clone();
            for l in 0..j {
                s -= &mu[j][l] * &mu[i][l] * &b[l];
            }
            mu[i][j] = if b[j].is_zero() { Rat::zero() } else { s / &b[j] };
        }
        mu[i][i] = Rat::one();
        let mut s = g[i][i].clone();
        for l in 0..i {
            s -= &mu[i][l] * &mu[i][l] * &b[l];
        }
        b[i] = s;
    }
    (mu, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::Unimodular;

    #[test]
    fn reduces_skewed_form() {
        let q = SymMat::identity(2).congruence(&[1, 7, 0, 1]);
        let (u, g) = lll_gram(&q);
        assert!(Unimodular::new(2, u.clone()).is_ok());
        assert_eq!(q.congruence(&u), g);
        assert_eq!(g.get(0, 0), &int(1));
        assert_eq!(g.get(1, 1), &int(1));
    }

    #[test]
    fn three_dim_reduction_preserves_det() {
        let q = SymMat::from_i64(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]]).congruence(&[1, 3, -2, 0, 1, 5, 0, 0, 1]);
        let (u, g) = lll_gram(&q);
        assert_eq!(q.congruence(&u), g);
        assert_eq!(g.det(), q.det());
        assert!((0..3).all(|i| g.get(i, i) <= &int(2)));
    }
}

//! Dense exact linear algebra over the rationals. Matrices are row vectors.

use num_traits::{One, Zero};

use super::rat::Rat;

pub type Matrix = Vec<Vec<Rat>>;

/// Reduced row echelon form. Returns the reduced matrix and pivot columns.
pub fn rref(m: &[Vec<Rat>]) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Rat::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(m: &[Vec<Rat>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    // Fraction-free elimination is cheaper than a full rref for rank only.
    let mut a: Matrix = m.to_vec();
    let rows = a.len();
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for j in c..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Basis of `{x : m x = 0}` for a matrix with `cols` columns.
pub fn kernel(m: &[Vec<Rat>], cols: usize) -> Matrix {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Unique solution of a square system, `None` if singular.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !aug[i][c].is_zero())?;
        aug.swap(c, p);
        let inv = Rat::one() / &aug[c][c];
        for x in aug[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in c..=n {
                    let t = &f * &aug[c][j];
                    aug[i][j] -= t;
                }
            }
        }
    }
    Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

pub fn det(a: &[Vec<Rat>]) -> Rat {
    let n = a.len();
    let mut m: Matrix = a.to_vec();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[c][c];
                for j in c..n {
                    let t = &f * &m[c][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    d
}

pub fn inverse(a: &[Vec<Rat>]) -> Option<Matrix> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[j] = Rat::one();
        cols.push(solve(a, &e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

pub fn mat_vec(a: &[Vec<Rat>], x: &[Rat]) -> Vec<Rat> {
    a.iter().map(|row| super::rat::dot(row, x)).collect()
}

/// Greedy lexicographic choice of an affinely independent subset of size
/// `k` from integer points; returns indices into `points`.
pub fn affinely_independent_subset(points: &[Vec<i64>], k: usize) -> Option<Vec<usize>> {
    if points.is_empty() || k == 0 {
        return None;
    }
    let base = &points[0];
    let mut chosen = vec![0];
    let mut dirs: Matrix = Vec::new();
    for (i, p) in points.iter().enumerate().skip(1) {
        if chosen.len() == k {
            break;
        }
        let d: Vec<Rat> = p.iter().zip(base).map(|(a, b)| super::rat::int(a - b)).collect();
        dirs.push(d);
        if rank(&dirs) == dirs.len() {
            chosen.push(i);
        } else {
            dirs.pop();
        }
    }
    (chosen.len() == k).then_some(chosen)
}

/// Affine dimension of a set of integer points (-1 for the empty set).
pub fn affine_dim(points: &[Vec<i64>]) -> isize {
    if points.is_empty() {
        return -1;
    }
    let base = &points[0];
    let dirs: Matrix = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| super::rat::int(a - b)).collect())
        .collect();
    rank(&dirs) as isize
}

#[cfg(test)]
mod tests {
    use super::super::rat::{int, rat};
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 1);
        for row in &a {
            assert!(super::super::rat::dot(row, &k[0]).is_zero());
        }
    }

    #[test]
    fn solve_and_det() {
        let a = m(&[&[2, 1], &[1, 3]]);
        assert_eq!(det(&a), int(5));
        let x = solve(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
        assert!(solve(&m(&[&[1, 2], &[2, 4]]), &[int(1), int(1)]).is_none());
        let inv = inverse(&a).unwrap();
        assert_eq!(inv[0][0], rat(3, 5));
    }

    #[test]
    fn affine_subsets() {
        let pts = vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![0, 1]];
        assert_eq!(affinely_independent_subset(&pts, 3), Some(vec![0, 1, 3]));
        assert_eq!(affine_dim(&pts[..3]), 1);
    }
}

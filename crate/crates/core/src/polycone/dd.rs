//! Double description method over the rationals.

use num_traits::{Signed, Zero};

use crate::qcore::linalg::{self, Matrix};
use crate::qcore::rat::{dot, normalize_ray, Rat};

#[derive(Clone, Debug, Default)]
pub struct Generators {
    pub lineality: Vec<Vec<Rat>>,
    pub rays: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn set(&mut self, i: usize) {
        let w = i / 64;
        if w >= self.0.len() {
            self.0.resize(w + 1, 0);
        }
        self.0[w] |= 1 << (i % 64);
    }

    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(o.0.iter().chain(std::iter::repeat(&0))).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn contains(&self, o: &Bits) -> bool {
        o.0.iter().enumerate().all(|(i, w)| w & !self.0.get(i).copied().unwrap_or(0) == 0)
    }
}

struct Ray {
    v: Vec<Rat>,
    zeros: Bits,
}

/// Generators of `{x ∈ R^k : E x = 0, A x ≥ 0}`.
pub fn h_to_v(k: usize, eqs: &[Vec<Rat>], ineqs: &[Vec<Rat>]) -> Generators {
    let l_basis: Matrix = if eqs.is_empty() { identity(k) } else { linalg::kernel(eqs, k) };
    let m = l_basis.len();
    if m == 0 {
        return Generators::default();
    }
    // Inequalities in coordinates of the subspace ker E.
    let a1: Matrix = ineqs.iter().map(|a| l_basis.iter().map(|b| dot(a, b)).collect()).collect();
    let lin1 = if a1.is_empty() { identity(m) } else { linalg::kernel(&a1, m) };
    let lineality: Vec<Vec<Rat>> = lin1.iter().map(|y| combine(&l_basis, y, k)).collect();
    let (w_basis, _) = linalg::rref(&a1);
    let p = w_basis.len();
    if p == 0 {
        return finish(lineality, Vec::new());
    }
    let a2: Matrix = a1.iter().map(|a| w_basis.iter().map(|w| dot(a, w)).collect()).collect();
    let rays_y = pointed_dd(&a2, p);
    let rays = rays_y
        .into_iter()
        .map(|y| {
            let z = combine(&w_basis, &y, m);
            combine(&l_basis, &z, k)
        })
        .collect();
    finish(lineality, rays)
}

/// Generators of the dual description: the cone `{a : a·r ≥ 0, a·l = 0}`.
pub fn v_to_h(k: usize, lineality: &[Vec<Rat>], rays: &[Vec<Rat>]) -> Generators {
    h_to_v(k, lineality, rays)
}

fn identity(k: usize) -> Matrix {
    (0..k)
        .map(|i| (0..k).map(|j| if i == j { Rat::from_integer(1.into()) } else { Rat::zero() }).collect())
        .collect()
}

/// `Σ y_j basis_j` in R^k.
fn combine(basis: &[Vec<Rat>], y: &[Rat], k: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); k];
    for (b, c) in basis.iter().zip(y) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b) {
            *o += c * x;
        }
    }
    out
}

/// Rays reduced modulo the lineality space (orthogonal projection), then
/// made primitive and deduplicated; lineality basis is row-reduced.
fn finish(lineality: Vec<Vec<Rat>>, rays: Vec<Vec<Rat>>) -> Generators {
    let (lin, _) = if lineality.is_empty() { (Vec::new(), Vec::new()) } else { linalg::rref(&lineality) };
    let lin: Vec<Vec<Rat>> = lin.iter().filter_map(|v| normalize_ray(v)).collect();
    let mut out: Vec<Vec<Rat>> = Vec::new();
    for r in rays {
        let r = project_off(&r, &lin);
        if let Some(n) = normalize_ray(&r) {
            if !out.contains(&n) {
                out.push(n);
            }
        }
    }
    out.sort();
    Generators { lineality: lin, rays: out }
}

/// Orthogonal projection of `v` onto the complement of `span(basis)`.
pub fn project_off(v: &[Rat], basis: &[Vec<Rat>]) -> Vec<Rat> {
    if basis.is_empty() {
        return v.to_vec();
    }
    let g: Matrix = basis.iter().map(|a| basis.iter().map(|b| dot(a, b)).collect()).collect();
    let rhs: Vec<Rat> = basis.iter().map(|a| dot(a, v)).collect();
    let c = linalg::solve(&g, &rhs).expect("basis is independent");
    let mut out = v.to_vec();
    for (b, ci) in basis.iter().zip(&c) {
        for (o, x) in out.iter_mut().zip(b) {
            *o -= ci * x;
        }
    }
    out
}

/// Extreme rays of the pointed cone `{y ∈ R^p : A y ≥ 0}`, `A` of rank `p`.
fn pointed_dd(a: &[Vec<Rat>], p: usize) -> Vec<Vec<Rat>> {
    let n = a.len();
    // Initial simplicial cone from the lexicographically first independent rows.
    let mut basis_rows: Vec<usize> = Vec::new();
    let mut rows: Matrix = Vec::new();
    for (i, r) in a.iter().enumerate() {
        rows.push(r.clone());
        if linalg::rank(&rows) == rows.len() {
            basis_rows.push(i);
            if basis_rows.len() == p {
                break;
            }
        } else {
            rows.pop();
        }
    }
    let inv = linalg::inverse(&rows).expect("rows chosen independent");
    let mut rays: Vec<Ray> = (0..p)
        .map(|j| {
            let v: Vec<Rat> = (0..p).map(|i| inv[i][j].clone()).collect();
            let mut zeros = Bits::new(n);
            for (jj, &row) in basis_rows.iter().enumerate() {
                if jj != j {
                    zeros.set(row);
                }
            }
            Ray { v: normalize_ray(&v).expect("nonzero"), zeros }
        })
        .collect();
    for (i, row) in a.iter().enumerate() {
        if basis_rows.contains(&i) {
            continue;
        }
        let vals: Vec<Rat> = rays.iter().map(|r| dot(row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].is_negative()).collect();
        if neg.is_empty() {
            for (j, r) in rays.iter_mut().enumerate() {
                if vals[j].is_zero() {
                    r.zeros.set(i);
                }
            }
            continue;
        }
        let mut new_rays: Vec<Ray> = Vec::new();
        for &ip in &pos {
            for &ineg in &neg {
                let common = rays[ip].zeros.and(&rays[ineg].zeros);
                if common.count() + 2 < p {
                    continue;
                }
                let adjacent = (0..rays.len()).all(|t| t == ip || t == ineg || !rays[t].zeros.contains(&common));
                if !adjacent {
                    continue;
                }
                let vp = &vals[ip];
                let vn = -vals[ineg].clone();
                let v: Vec<Rat> = rays[ip].v.iter().zip(&rays[ineg].v).map(|(x, y)| &vn * x + vp * y).collect();
                let mut zeros = common;
                zeros.set(i);
                if let Some(v) = normalize_ray(&v) {
                    new_rays.push(Ray { v, zeros });
                }
            }
        }
        let mut kept: Vec<Ray> = Vec::new();
        for (j, mut r) in rays.into_iter().enumerate() {
            if vals[j].is_negative() {
                continue;
            }
            if vals[j].is_zero() {
                r.zeros.set(i);
            }
            kept.push(r);
        }
        kept.extend(new_rays);
        rays = kept;
    }
    rays.into_iter().map(|r| r.v).collect()
}

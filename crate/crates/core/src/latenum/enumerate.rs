use num_traits::{Signed, Zero};

use super::lll::lll_gram;
use crate::error::{Error, Result};
use crate::qcore::rat::{int, round_i64, to_f64, Rat};
use crate::qcore::{QForm, SymMat, Unimodular};

/// Lattice points `v` with `Q[v − c] ≤ r²` (or `< r²` when `strict`).
#[derive(Clone, Debug)]
pub struct EllipsoidQuery {
    pub form: QForm,
    pub center: Vec<Rat>,
    pub radius_sq: Rat,
    pub strict: bool,
}

/// A lattice point together with its exact value `Q[v − c]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePoint {
    pub v: Vec<i64>,
    pub value: Rat,
}

pub fn enumerate_ellipsoid(q: &EllipsoidQuery) -> Result<Vec<LatticePoint>> {
    if q.center.len() != q.form.dim() {
        return Err(Error::DimensionMismatch { expected: q.form.dim(), found: q.center.len() });
    }
    let e = Enumerator::new(q.form.matrix())?;
    Ok(e.points(&q.center, &q.radius_sq, q.strict))
}

/// Reusable enumeration state for one form: LLL transform plus the
/// `Rᵗ D R` factorization of the reduced Gram matrix.
#[derive(Clone, Debug)]
pub struct Enumerator {
    form: SymMat,
    u: Unimodular,
    u_inv: Unimodular,
    reduced: SymMat,
    r: Vec<Vec<Rat>>,
    diag: Vec<Rat>,
}

struct Search<'a> {
    e: &'a Enumerator,
    c: Vec<Rat>,
    bound: Rat,
    strict: bool,
    cur: Vec<i64>,
    out: Vec<LatticePoint>,
}

impl Enumerator {
    pub fn new(form: &SymMat) -> Result<Self> {
        if form.dim() == 0 {
            return Err(Error::ZeroDimensional);
        }
        if !form.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        let (u, reduced) = lll_gram(form);
        let u = Unimodular::new(form.dim(), u)?;
        let (r, diag) = reduced.ldl_upper()?;
        Ok(Enumerator { form: form.clone(), u_inv: u.inverse(), u, reduced, r, diag })
    }

    pub fn form(&self) -> &SymMat {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    /// Reduced Gram matrix and its basis transform.
    pub fn reduced(&self) -> (&SymMat, &Unimodular) {
        (&self.reduced, &self.u)
    }

    /// Exact list of lattice points in the ellipsoid, lexicographically sorted.
    pub fn points(&self, center: &[Rat], radius_sq: &Rat, strict: bool) -> Vec<LatticePoint> {
        let d = self.dim();
        if radius_sq.is_negative() || (strict && radius_sq.is_zero()) {
            return Vec::new();
        }
        let c = self.u_inv.apply_rat(center);
        let mut s = Search { e: self, c, bound: radius_sq.clone(), strict, cur: vec![0; d], out: Vec::new() };
        s.recurse(d, Rat::zero());
        let mut pts: Vec<LatticePoint> = s
            .out
            .into_iter()
            .map(|p| LatticePoint { v: self.u.apply(&p.v), value: p.value })
            .collect();
        pts.sort_by(|a, b| a.v.cmp(&b.v));
        pts
    }

    /// Center of level `k`: `c_k − Σ_{j>k} R_kj (v_j − c_j)`.
    fn level_center(&self, k: usize, cur: &[i64], c: &[Rat]) -> Rat {
        let mut t = c[k].clone();
        for j in k + 1..self.dim() {
            if !self.r[k][j].is_zero() {
                t -= &self.r[k][j] * (int(cur[j]) - &c[j]);
            }
        }
        t
    }

    /// Shortest nonzero vectors: the minimum and every vector attaining it.
    pub fn shortest(&self) -> (Rat, Vec<Vec<i64>>) {
        let d = self.dim();
        let bound = (0..d).map(|i| self.reduced.get(i, i).clone()).min().expect("d >= 1");
        let zero = vec![Rat::zero(); d];
        let pts: Vec<LatticePoint> = self.points(&zero, &bound, false).into_iter().filter(|p| !p.value.is_zero()).collect();
        let min = pts.iter().map(|p| p.value.clone()).min().expect("basis vectors lie in the ellipsoid");
        let vecs = pts.into_iter().filter(|p| p.value == min).map(|p| p.v).collect();
        (min, vecs)
    }

    /// All lattice points closest to `target`, with the squared distance.
    pub fn closest(&self, target: &[Rat]) -> (Rat, Vec<Vec<i64>>) {
        let babai = self.babai(target);
        let bound = self.form.quad(&diff(&babai, target));
        let pts = self.points(target, &bound, false);
        let min = pts.iter().map(|p| p.value.clone()).min().expect("the Babai point is in range");
        let vecs = pts.into_iter().filter(|p| p.value == min).map(|p| p.v).collect();
        (min, vecs)
    }

    /// Nearest-plane rounding in the reduced basis.
    fn babai(&self, target: &[Rat]) -> Vec<i64> {
        let d = self.dim();
        let c = self.u_inv.apply_rat(target);
        let mut cur = vec![0i64; d];
        for k in (0..d).rev() {
            let t = self.level_center(k, &cur, &c);
            cur[k] = round_i64(&t);
        }
        self.u.apply(&cur)
    }

    /// Upper bound on the squared covering radius, `¼ Σ D_k`.
    pub fn covering_radius_bound(&self) -> Rat {
        self.diag.iter().fold(Rat::zero(), |a, b| a + b) / int(4)
    }
}

fn diff(v: &[i64], c: &[Rat]) -> Vec<Rat> {
    v.iter().zip(c).map(|(a, b)| int(*a) - b).collect()
}

impl Search<'_> {
    fn recurse(&mut self, level: usize, used: Rat) {
        if level == 0 {
            if self.strict && used >= self.bound {
                return;
            }
            self.out.push(LatticePoint { v: self.cur.clone(), value: used });
            return;
        }
        let k = level - 1;
        let dk = &self.e.diag[k];
        let budget = &self.bound - &used;
        let t = self.e.level_center(k, &self.cur, &self.c);
        let sat = |v: i64| -> bool {
            let x = int(v) - &t;
            dk * &x * &x <= budget
        };
        let m = round_i64(&t);
        if !sat(m) {
            return;
        }
        let w = to_f64(&(&budget / dk)).max(0.0).sqrt();
        let tf = to_f64(&t);
        let mut lo = m.min(floor_f(tf - w) + 1);
        while !sat(lo) {
            lo += 1;
        }
        while sat(lo - 1) {
            lo -= 1;
        }
        let mut hi = m.max(ceil_f(tf + w) - 1);
        while !sat(hi) {
            hi -= 1;
        }
        while sat(hi + 1) {
            hi += 1;
        }
        for v in lo..=hi {
            let x = int(v) - &t;
            let add = dk * &x * &x;
            self.cur[k] = v;
            self.recurse(k, &used + add);
        }
        self.cur[k] = 0;
    }
}

fn floor_f(x: f64) -> i64 {
    if x.is_finite() {
        x.floor() as i64
    } else {
        0
    }
}

fn ceil_f(x: f64) -> i64 {
    if x.is_finite() {
        x.ceil() as i64
    } else {
        0
    }
}

/// `Q[v]` minimum over nonzero lattice vectors and all minimal vectors.
pub fn shortest_vectors(q: &QForm) -> Result<(Rat, Vec<Vec<i64>>)> {
    Ok(Enumerator::new(q.matrix())?.shortest())
}

/// Closest lattice vectors to a rational target.
pub fn closest_vectors(q: &SymMat, target: &[Rat]) -> Result<(Rat, Vec<Vec<i64>>)> {
    Ok(Enumerator::new(q)?.closest(target))
}

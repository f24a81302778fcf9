//! Automorphism groups and isometries of positive definite forms, invariant
//! forms of finite groups, and equivalence of secondary cones.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::latenum::{lll_gram, shortest_vectors, Enumerator};
use crate::qcore::linalg;
use crate::qcore::rat::{normalize_ray, Rat};
use crate::qcore::{QForm, SubspaceT, SymMat, Unimodular};
use crate::secondary::SecondaryCone;

/// A finite matrix group given by generators and, when known, all elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixGroup {
    pub dim: usize,
    pub generators: Vec<Unimodular>,
    pub elements: Option<Vec<Unimodular>>,
}

impl MatrixGroup {
    pub fn from_generators(dim: usize, generators: Vec<Unimodular>) -> Self {
        MatrixGroup { dim, generators, elements: None }
    }

    /// Group with every element listed; generators chosen greedily.
    pub fn from_elements(dim: usize, mut elements: Vec<Unimodular>) -> Self {
        elements.sort();
        let mut generators: Vec<Unimodular> = Vec::new();
        let mut sub: HashSet<Unimodular> = HashSet::from([Unimodular::identity(dim)]);
        for e in &elements {
            if !sub.contains(e) {
                generators.push(e.clone());
                sub = closure(dim, &generators);
            }
        }
        MatrixGroup { dim, generators, elements: Some(elements) }
    }

    pub fn order(&self) -> Option<usize> {
        self.elements.as_ref().map(Vec::len)
    }

    /// All elements, generating the closure if needed.
    pub fn all_elements(&self) -> Vec<Unimodular> {
        match &self.elements {
            Some(e) => e.clone(),
            None => {
                let mut v: Vec<Unimodular> = closure(self.dim, &self.generators).into_iter().collect();
                v.sort();
                v
            }
        }
    }
}

fn closure(dim: usize, gens: &[Unimodular]) -> HashSet<Unimodular> {
    let id = Unimodular::identity(dim);
    let mut seen: HashSet<Unimodular> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

/// Both forms scaled by the common denominator into `i128` Gram matrices.
fn integral_pair(a: &SymMat, b: &SymMat) -> Option<(Vec<Vec<i128>>, Vec<Vec<i128>>)> {
    let mut l = BigInt::one();
    for x in a.lower().iter().chain(b.lower()) {
        l = l.lcm(x.denom());
    }
    let conv = |m: &SymMat| -> Option<Vec<Vec<i128>>> {
        m.rows().iter().map(|r| r.iter().map(|x| (x.numer() * (&l / x.denom())).to_i128()).collect()).collect()
    };
    Some((conv(a)?, conv(b)?))
}

struct Search {
    vecs: Vec<Vec<i64>>,
    gv: Vec<Vec<i128>>,
    target: Vec<Vec<i128>>,
    cands: Vec<Vec<usize>>,
    chosen: Vec<usize>,
    find_all: bool,
    out: Vec<Vec<Vec<i64>>>,
}

impl Search {
    fn dot(&self, i: usize, j: usize) -> i128 {
        self.gv[i].iter().zip(&self.vecs[j]).map(|(a, &b)| a * i128::from(b)).sum()
    }

    fn run(&mut self, j: usize) -> bool {
        let d = self.target.len();
        if j == d {
            self.out.push(self.chosen.iter().map(|&i| self.vecs[i].clone()).collect());
            return !self.find_all;
        }
        for k in 0..self.cands[j].len() {
            let c = self.cands[j][k];
            if (0..j).all(|i| self.dot(self.chosen[i], c) == self.target[i][j]) {
                self.chosen.push(c);
                let stop = self.run(j + 1);
                self.chosen.pop();
                if stop {
                    return true;
                }
            }
        }
        false
    }
}

/// All (or the first) `B` with `Bᵗ R1 B = R2`, both already reduced.
fn search_reduced(r1: &SymMat, r2: &SymMat, find_all: bool) -> Result<Vec<Unimodular>> {
    let d = r1.dim();
    if r1.det() != r2.det() {
        return Ok(Vec::new());
    }
    let (g1, g2) = integral_pair(r1, r2).ok_or_else(|| Error::Limit("form entries exceed 128-bit range".into()))?;
    let max_norm = r2.rows().iter().enumerate().map(|(i, r)| r[i].clone()).max().expect("d > 0");
    let e = Enumerator::new(r1)?;
    let vecs: Vec<Vec<i64>> = e.points(&vec![Rat::zero(); d], &max_norm, false).into_iter().map(|p| p.v).filter(|v| v.iter().any(|&x| x != 0)).collect();
    let gv: Vec<Vec<i128>> = vecs.iter().map(|v| (0..d).map(|i| (0..d).map(|j| g1[i][j] * i128::from(v[j])).sum()).collect()).collect();
    let norms: Vec<i128> = (0..vecs.len()).map(|i| gv[i].iter().zip(&vecs[i]).map(|(a, &b)| a * i128::from(b)).sum()).collect();
    let cands: Vec<Vec<usize>> = (0..d).map(|j| (0..vecs.len()).filter(|&i| norms[i] == g2[j][j]).collect()).collect();
    let mut s = Search { vecs, gv, target: g2, cands, chosen: Vec::new(), find_all, out: Vec::new() };
    s.run(0);
    s.out.into_iter().map(|cols| Unimodular::from_columns(&cols)).collect()
}

fn reduce(q: &SymMat) -> (Unimodular, SymMat) {
    let (u, g) = lll_gram(q);
    (Unimodular::new(q.dim(), u).expect("LLL transforms are unimodular"), g)
}

/// Full automorphism group `{U : Uᵗ Q U = Q}`.
pub fn automorphism_group(q: &QForm) -> Result<MatrixGroup> {
    if !q.is_pd() {
        return Err(Error::NotPositiveDefinite);
    }
    let (v, r) = reduce(q.matrix());
    let vi = v.inverse();
    let elements: Vec<Unimodular> = search_reduced(&r, &r, true)?.iter().map(|b| v.mul(b).mul(&vi)).collect();
    debug_assert!(elements.iter().all(|u| q.matrix().congruence(u.entries()) == *q.matrix()));
    Ok(MatrixGroup::from_elements(q.dim(), elements))
}

/// Some `A` with `Aᵗ Q1 A = Q2`, verified before returning.
pub fn isometry(q1: &QForm, q2: &QForm) -> Result<Option<Unimodular>> {
    if q1.dim() != q2.dim() {
        return Ok(None);
    }
    if !q1.is_pd() || !q2.is_pd() {
        return Err(Error::NotPositiveDefinite);
    }
    if q1.det() != q2.det() {
        return Ok(None);
    }
    let (v1, r1) = reduce(q1.matrix());
    let (v2, r2) = reduce(q2.matrix());
    let found = search_reduced(&r1, &r2, false)?;
    let Some(b) = found.first() else {
        return Ok(None);
    };
    let a = v1.mul(b).mul(&v2.inverse());
    if q1.matrix().congruence(a.entries()) != *q2.matrix() {
        return Err(Error::Solver("isometry search produced an invalid witness".into()));
    }
    Ok(Some(a))
}

/// `{Q : gᵗ Q g = Q for every generator g}`.
pub fn invariant_space(g: &MatrixGroup) -> Result<SubspaceT> {
    let d = g.dim;
    let full = SubspaceT::full(d);
    let n = full.dim();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for u in &g.generators {
        let images: Vec<SymMat> = full.basis().iter().map(|e| e.congruence(u.entries()).sub(e).expect("same size")).collect();
        for p in 0..n {
            rows.push(images.iter().map(|m| m.lower()[p].clone()).collect());
        }
    }
    let ker = if rows.is_empty() { (0..n).map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect() } else { linalg::kernel(&rows, n) };
    let basis = ker
        .into_iter()
        .map(|x| SymMat::from_lower(d, normalize_ray(&x).expect("kernel vectors are nonzero")))
        .collect::<Result<Vec<_>>>()?;
    if basis.is_empty() {
        return Err(Error::DependentBasis);
    }
    SubspaceT::new(basis)
}

/// Sum of the rational-normalized rays.
pub fn characteristic_form(rays: &[SymMat]) -> Result<QForm> {
    let first = rays.first().ok_or(Error::EmptyCone)?;
    let mut m = SymMat::zeros(first.dim());
    for r in rays {
        m = m.add(&r.rational_normalize()?)?;
    }
    Ok(QForm::new(m))
}

/// Extreme rays of the cone as normalized forms in S^d.
pub fn cone_rays(sc: &SecondaryCone) -> Result<Vec<SymMat>> {
    let mut rays = sc.cone.rays.iter().map(|r| sc.t.form(r).rational_normalize()).collect::<Result<Vec<_>>>()?;
    rays.sort_by(|a, b| a.lower().cmp(b.lower()));
    Ok(rays)
}

/// Cheap invariants that must agree on equivalent cones.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConeInvariants {
    pub rigidity: usize,
    pub rays: usize,
    pub facets: usize,
    pub det: Rat,
    pub min: Rat,
    pub kissing: usize,
}

impl ConeInvariants {
    pub fn of(sc: &SecondaryCone) -> Result<ConeInvariants> {
        let q = characteristic_form(&cone_rays(sc)?)?;
        let (min, kissing) = if q.is_pd() {
            let (m, v) = shortest_vectors(&q)?;
            (m, v.len())
        } else {
            (Rat::zero(), 0)
        };
        Ok(ConeInvariants {
            rigidity: sc.rigidity_index,
            rays: sc.cone.rays.len(),
            facets: sc.cone.inequalities.len(),
            det: q.det(),
            min,
            kissing,
        })
    }
}

/// Whether `uᵗ A u ∈ T` for every basis element `A`.
pub fn preserves_subspace(u: &Unimodular, t: &SubspaceT) -> bool {
    t.basis().iter().all(|a| t.contains(&a.congruence(u.entries())))
}

/// A `g ∈ GL_d(Z)` with `gᵗ T g = T` taking the first cone onto the second.
pub fn t_equivalent(sc1: &SecondaryCone, sc2: &SecondaryCone) -> Result<Option<Unimodular>> {
    if !sc1.t.same_span(&sc2.t) {
        return Err(Error::SubspaceMismatch);
    }
    if ConeInvariants::of(sc1)? != ConeInvariants::of(sc2)? {
        return Ok(None);
    }
    t_equivalent_unchecked(sc1, sc2)
}

/// The search of [`t_equivalent`] without the invariant pre-check.
pub(crate) fn t_equivalent_unchecked(sc1: &SecondaryCone, sc2: &SecondaryCone) -> Result<Option<Unimodular>> {
    let rays1 = cone_rays(sc1)?;
    let rays2: BTreeSet<Vec<Rat>> = cone_rays(sc2)?.into_iter().map(|r| r.lower().to_vec()).collect();
    if rays1.len() != rays2.len() {
        return Ok(None);
    }
    let q1 = characteristic_form(&rays1)?;
    let q2 = characteristic_form(&cone_rays(sc2)?)?;
    if !q1.is_pd() || !q2.is_pd() {
        return Err(Error::NotPositiveDefinite);
    }
    let Some(a) = isometry(&q1, &q2)? else {
        return Ok(None);
    };
    let aut = automorphism_group(&q1)?.all_elements();
    let t = &sc1.t;
    let hit = aut.par_iter().find_first(|b| {
        let c = b.mul(&a);
        preserves_subspace(&c, t)
            && rays1.iter().all(|r| {
                r.congruence(c.entries()).rational_normalize().is_ok_and(|m| rays2.contains(m.lower()))
            })
    });
    Ok(hit.map(|b| b.mul(&a)))
}

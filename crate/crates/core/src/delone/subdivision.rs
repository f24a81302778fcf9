use std::collections::HashMap;

use num_traits::{Signed, Zero};

use super::hull::{polytope_facets, HullFacet};
use crate::error::{Error, Result};
use crate::latenum::{lll_gram, Enumerator};
use crate::qcore::linalg;
use crate::qcore::rat::{int, Rat};
use crate::qcore::{QForm, Unimodular};

/// A Delone polytope: all lattice points on an empty ellipsoid sphere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelonePolytope {
    /// Sorted lexicographically.
    pub vertices: Vec<Vec<i64>>,
    pub center: Vec<Rat>,
    pub radius_sq: Rat,
}

impl DelonePolytope {
    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn is_simplex(&self) -> bool {
        self.vertices.len() == self.dim() + 1
    }

    pub fn translate(&self, t: &[i64]) -> DelonePolytope {
        DelonePolytope {
            vertices: self.vertices.iter().map(|v| add(v, t)).collect(),
            center: self.center.iter().zip(t).map(|(c, x)| c + int(*x)).collect(),
            radius_sq: self.radius_sq.clone(),
        }
    }

    /// Lexicographically first affinely independent subset of `d+1` vertices.
    pub fn spanning_simplex(&self) -> Vec<Vec<i64>> {
        let idx = linalg::affinely_independent_subset(&self.vertices, self.dim() + 1)
            .expect("Delone polytopes are full-dimensional");
        idx.into_iter().map(|i| self.vertices[i].clone()).collect()
    }
}

/// A facet class: its translation-normalized vertices and the two cells on
/// either side, each given as `(cell index, translation)` such that the
/// translated cell contains the facet vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetRecord {
    pub vertices: Vec<Vec<i64>>,
    pub cells: [(usize, Vec<i64>); 2],
}

/// Sorted list of translation-normalized cells; equal keys mean equal
/// subdivisions.
pub type SubdivisionKey = Vec<Vec<Vec<i64>>>;

/// Delone subdivision of `Z^d` for a positive definite form, one
/// representative per translation class of cells.
#[derive(Clone, Debug)]
pub struct DeloneSubdivision {
    form: QForm,
    cells: Vec<DelonePolytope>,
    facets: Vec<FacetRecord>,
}

pub(crate) fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Translate so that the lexicographically smallest point is the origin.
/// Returns the sorted normalized set and the translation removed.
pub fn normalize_points(points: &[Vec<i64>]) -> (Vec<Vec<i64>>, Vec<i64>) {
    let mut p = points.to_vec();
    p.sort();
    let t = p[0].clone();
    (p.iter().map(|v| sub(v, &t)).collect(), t)
}

impl DeloneSubdivision {
    pub fn form(&self) -> &QForm {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn cells(&self) -> &[DelonePolytope] {
        &self.cells
    }

    pub fn facets(&self) -> &[FacetRecord] {
        &self.facets
    }

    pub fn is_triangulation(&self) -> bool {
        self.cells.iter().all(DelonePolytope::is_simplex)
    }

    pub fn key(&self) -> SubdivisionKey {
        let mut k: SubdivisionKey = self.cells.iter().map(|c| c.vertices.clone()).collect();
        k.sort();
        k
    }

    /// All cells containing the origin as a vertex.
    pub fn star(&self) -> Vec<DelonePolytope> {
        let mut out = Vec::new();
        for c in &self.cells {
            for v in &c.vertices {
                let neg: Vec<i64> = v.iter().map(|x| -x).collect();
                out.push(c.translate(&neg));
            }
        }
        out
    }

    /// Squared covering radius: the largest squared circumradius.
    pub fn inhomogeneous_minimum(&self) -> Rat {
        self.cells.iter().map(|c| c.radius_sq.clone()).max().expect("at least one cell")
    }

    /// Cell `index` moved by `t`.
    pub fn positioned(&self, index: usize, t: &[i64]) -> DelonePolytope {
        self.cells[index].translate(t)
    }
}

/// Computes the Delone subdivision by facet traversal from an initial cell,
/// working in an LLL-reduced basis and mapping the result back.
pub fn delone_subdivision(q: &QForm) -> Result<DeloneSubdivision> {
    if q.dim() == 0 {
        return Err(Error::ZeroDimensional);
    }
    if !q.is_pd() {
        return Err(Error::NotPositiveDefinite);
    }
    let (u, g) = lll_gram(q.matrix());
    let u = Unimodular::new(q.dim(), u)?;
    if u.is_identity() {
        return traverse(q);
    }
    Ok(traverse(&QForm::new(g))?.mapped(&u, q))
}

impl DeloneSubdivision {
    /// The subdivision of `Q` from that of `UᵗQU`: cells are mapped by `U`
    /// and renormalized, facet translations adjusted to match.
    fn mapped(&self, u: &Unimodular, q: &QForm) -> DeloneSubdivision {
        let mut shifts = Vec::with_capacity(self.cells.len());
        let cells = self
            .cells
            .iter()
            .map(|c| {
                let verts: Vec<Vec<i64>> = c.vertices.iter().map(|v| u.apply(v)).collect();
                let (vertices, n) = normalize_points(&verts);
                let center = u.apply_rat(&c.center).iter().zip(&n).map(|(x, y)| x - int(*y)).collect();
                shifts.push(n);
                DelonePolytope { vertices, center, radius_sq: c.radius_sq.clone() }
            })
            .collect();
        let facets = self
            .facets
            .iter()
            .map(|f| {
                let verts: Vec<Vec<i64>> = f.vertices.iter().map(|v| u.apply(v)).collect();
                let (vertices, m) = normalize_points(&verts);
                let side = |(j, t): &(usize, Vec<i64>)| (*j, sub(&add(&shifts[*j], &u.apply(t)), &m));
                FacetRecord { cells: [side(&f.cells[0]), side(&f.cells[1])], vertices }
            })
            .collect();
        DeloneSubdivision { form: q.clone(), cells, facets }
    }
}

fn traverse(q: &QForm) -> Result<DeloneSubdivision> {
    let e = Enumerator::new(q.matrix())?;
    let first = initial_cell(&e)?;
    let mut cells: Vec<DelonePolytope> = Vec::new();
    let mut cell_index: HashMap<Vec<Vec<i64>>, usize> = HashMap::new();
    let mut facets: Vec<FacetRecord> = Vec::new();
    let mut facet_index: HashMap<Vec<Vec<i64>>, usize> = HashMap::new();
    let (norm, t) = normalize_points(&first.vertices);
    let neg_t: Vec<i64> = t.iter().map(|x| -x).collect();
    cell_index.insert(norm, 0);
    cells.push(first.translate(&neg_t));
    let mut i = 0;
    while i < cells.len() {
        let cell = cells[i].clone();
        for hf in polytope_facets(&cell.vertices)? {
            let fverts: Vec<Vec<i64>> = hf.on.iter().map(|&j| cell.vertices[j].clone()).collect();
            let (fnorm, s) = normalize_points(&fverts);
            let neg_s: Vec<i64> = s.iter().map(|x| -x).collect();
            if let Some(&fi) = facet_index.get(&fnorm) {
                if !facets[fi].cells.contains(&(i, neg_s.clone())) {
                    return Err(Error::InconsistentSubdivision(format!("facet {fnorm:?} has more than two cells")));
                }
                continue;
            }
            let nb = neighbor(&e, &cell, &hf, &fverts)?;
            let (nnorm, nt) = normalize_points(&nb.vertices);
            let j = match cell_index.get(&nnorm) {
                Some(&j) => j,
                None => {
                    let j = cells.len();
                    let neg_nt: Vec<i64> = nt.iter().map(|x| -x).collect();
                    let rep = nb.translate(&neg_nt);
                    certify_empty(&e, &rep)?;
                    cell_index.insert(nnorm, j);
                    cells.push(rep);
                    j
                }
            };
            facet_index.insert(fnorm.clone(), facets.len());
            facets.push(FacetRecord { vertices: fnorm, cells: [(i, neg_s.clone()), (j, sub(&nt, &s))] });
        }
        if i == 0 {
            certify_empty(&e, &cells[0])?;
        }
        i += 1;
    }
    Ok(DeloneSubdivision { form: q.clone(), cells, facets })
}

/// Every lattice point in the closed ball lies on the sphere and is a vertex.
fn certify_empty(e: &Enumerator, cell: &DelonePolytope) -> Result<()> {
    let pts = e.points(&cell.center, &cell.radius_sq, false);
    let ok = pts.len() == cell.vertices.len()
        && pts.iter().zip(&cell.vertices).all(|(p, v)| &p.v == v && p.value == cell.radius_sq);
    if ok {
        Ok(())
    } else {
        Err(Error::InconsistentSubdivision(format!("sphere around {:?} is not empty", cell.vertices)))
    }
}

/// Start at the origin with a sphere of radius zero and grow it inside the
/// Q-orthogonal complement of the current touching set until it spans.
fn initial_cell(e: &Enumerator) -> Result<DelonePolytope> {
    let q = e.form();
    let d = q.dim();
    let mut s: Vec<Vec<i64>> = vec![vec![0; d]];
    let mut c = vec![Rat::zero(); d];
    let mut r2 = Rat::zero();
    while linalg::affine_dim(&s) < d as isize {
        let rows: Vec<Vec<Rat>> = s[1..]
            .iter()
            .map(|p| q.mul_vec(&p.iter().zip(&s[0]).map(|(a, b)| int(a - b)).collect::<Vec<_>>()))
            .collect();
        let u = linalg::kernel(&rows, d).into_iter().next().ok_or(Error::AffinelyDependent)?;
        let (nc, nr2, hits) = walk(e, &c, &s[0], &u)?;
        c = nc;
        r2 = nr2;
        for h in hits {
            if !s.contains(&h) {
                s.push(h);
            }
        }
    }
    let pts = e.points(&c, &r2, false);
    if pts.iter().any(|p| p.value != r2) {
        return Err(Error::InconsistentSubdivision("initial sphere is not empty".into()));
    }
    Ok(DelonePolytope { vertices: pts.into_iter().map(|p| p.v).collect(), center: c, radius_sq: r2 })
}

/// The cell across facet `hf` of `cell`.
fn neighbor(e: &Enumerator, cell: &DelonePolytope, hf: &HullFacet, fverts: &[Vec<i64>]) -> Result<DelonePolytope> {
    let q = e.form();
    // u = −Q⁻¹ a points away from the cell.
    let neg_a: Vec<Rat> = hf.normal.iter().map(|x| -x.clone()).collect();
    let u = linalg::solve(&q.rows(), &neg_a).ok_or(Error::NotPositiveDefinite)?;
    let (c, r2, hits) = walk(e, &cell.center, &fverts[0], &u)?;
    let mut vertices: Vec<Vec<i64>> = fverts.to_vec();
    vertices.extend(hits);
    vertices.sort();
    vertices.dedup();
    Ok(DelonePolytope { vertices, center: c, radius_sq: r2 })
}

/// Move the center along `u` (which keeps every current touching point
/// equidistant) until new lattice points reach the sphere. Returns the new
/// center, squared radius and the newly touching points.
fn walk(e: &Enumerator, c: &[Rat], s0: &[i64], u: &[Rat]) -> Result<(Vec<Rat>, Rat, Vec<Vec<i64>>)> {
    let q = e.form();
    let d = q.dim();
    let qu = q.mul_vec(u);
    let g = |x: &[i64]| -> Rat { x.iter().zip(s0).zip(&qu).fold(Rat::zero(), |acc, ((a, b), w)| acc + int(a - b) * w) };
    let dist = |x: &[i64], ctr: &[Rat]| -> Rat {
        let v: Vec<Rat> = x.iter().zip(ctr).map(|(a, b)| int(*a) - b).collect();
        q.quad(&v)
    };
    let r2 = dist(s0, c);
    let t_of = |x: &[i64]| -> Option<Rat> {
        let gx = g(x);
        gx.is_positive().then(|| (dist(x, c) - &r2) / (gx * int(2)))
    };
    // Seed candidates: unit steps off s0 and rounded points along the ray.
    let mut best: Option<Rat> = None;
    let mut consider = |x: Vec<i64>| {
        if let Some(t) = t_of(&x) {
            if best.as_ref().is_none_or(|b| &t < b) {
                best = Some(t);
            }
        }
    };
    for i in 0..d {
        if !qu[i].is_zero() {
            let mut x = s0.to_vec();
            x[i] += if qu[i].is_positive() { 1 } else { -1 };
            consider(x);
        }
    }
    for k in [1i64, 2, 4, 8] {
        let target: Vec<Rat> = c.iter().zip(u).map(|(ci, ui)| ci + ui * int(k)).collect();
        let x: Vec<i64> = target.iter().map(crate::qcore::rat::round_i64).collect();
        consider(x);
    }
    let t_star = best.ok_or_else(|| Error::InconsistentSubdivision("no lattice point ahead of the moving sphere".into()))?;
    let c_star: Vec<Rat> = c.iter().zip(u).map(|(ci, ui)| ci + ui * &t_star).collect();
    let r_star = dist(s0, &c_star);
    let mut tmin: Option<Rat> = None;
    let mut hits: Vec<Vec<i64>> = Vec::new();
    for p in e.points(&c_star, &r_star, false) {
        if let Some(t) = t_of(&p.v) {
            match tmin.as_ref().map(|m| t.cmp(m)) {
                None | Some(std::cmp::Ordering::Less) => {
                    tmin = Some(t);
                    hits = vec![p.v];
                }
                Some(std::cmp::Ordering::Equal) => hits.push(p.v),
                Some(std::cmp::Ordering::Greater) => {}
            }
        }
    }
    let tmin = tmin.ok_or_else(|| Error::InconsistentSubdivision("seed point vanished from its own sphere".into()))?;
    if tmin.is_negative() {
        return Err(Error::InconsistentSubdivision("starting sphere was not empty".into()));
    }
    let nc: Vec<Rat> = c.iter().zip(u).map(|(ci, ui)| ci + ui * &tmin).collect();
    let nr2 = dist(s0, &nc);
    Ok((nc, nr2, hits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::rat::rat;
    use crate::qcore::SymMat;

    fn del(rows: &[&[i64]]) -> DeloneSubdivision {
        delone_subdivision(&QForm::new(SymMat::from_i64(rows))).unwrap()
    }

    #[test]
    fn square_lattice() {
        let s = del(&[&[1, 0], &[0, 1]]);
        assert_eq!(s.key(), vec![vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]]);
        assert!(!s.is_triangulation());
        assert_eq!(s.inhomogeneous_minimum(), rat(1, 2));
        assert_eq!(s.facets().len(), 2);
    }

    #[test]
    fn hexagonal_lattice() {
        let s = del(&[&[2, 1], &[1, 2]]);
        assert_eq!(
            s.key(),
            vec![vec![vec![0, 0], vec![0, 1], vec![1, 0]], vec![vec![0, 0], vec![1, -1], vec![1, 0]]]
        );
        assert!(s.is_triangulation());
        assert_eq!(s.inhomogeneous_minimum(), rat(2, 3));
        assert_eq!(s.facets().len(), 3);
        assert_eq!(s.star().len(), 6);
    }

    #[test]
    fn cube() {
        let s = del(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(s.cells().len(), 1);
        assert_eq!(s.cells()[0].vertices.len(), 8);
        assert_eq!(s.inhomogeneous_minimum(), rat(3, 4));
    }

    fn facets_consistent(s: &DeloneSubdivision) {
        for f in s.facets() {
            for (j, t) in &f.cells {
                let c = s.positioned(*j, t);
                assert!(f.vertices.iter().all(|v| c.vertices.contains(v)), "{f:?}");
            }
        }
        for c in s.cells() {
            assert_eq!(s.form().matrix().quad(&c.vertices[0].iter().zip(&c.center).map(|(a, b)| int(*a) - b).collect::<Vec<_>>()), c.radius_sq);
        }
    }

    #[test]
    fn skewed_basis_maps_back() {
        let hex = del(&[&[2, 1], &[1, 2]]);
        let u = Unimodular::new(2, vec![5, 7, 2, 3]).unwrap();
        let skew = delone_subdivision(&crate::qcore::transform(hex.form(), &u).unwrap()).unwrap();
        facets_consistent(&skew);
        assert_eq!(skew.cells().len(), 2);
        assert_eq!(skew.inhomogeneous_minimum(), rat(2, 3));
        let mut back: Vec<Vec<Vec<i64>>> = skew.cells().iter().map(|c| normalize_points(&c.vertices.iter().map(|v| u.apply(v)).collect::<Vec<_>>()).0).collect();
        back.sort();
        assert_eq!(back, hex.key());
    }

    #[test]
    fn trace_form_quartic() {
        let s = del(&[&[4, 1, 7, 7], &[1, 7, 7, 23], &[7, 7, 23, 36], &[7, 23, 36, 91]]);
        facets_consistent(&s);
    }

    #[test]
    fn rejects_semidefinite() {
        let q = QForm::new(SymMat::from_i64(&[&[1, 1], &[1, 1]]));
        assert_eq!(delone_subdivision(&q).unwrap_err(), Error::NotPositiveDefinite);
    }
}

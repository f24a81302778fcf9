//! Secondary cones of Delone subdivisions inside a subspace `T`, dead-end
//! detection and flips across cone facets.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::delone::hull::{lattice_points_in_hull, lifted_cells};
use crate::delone::{delone_subdivision, nform, normalize_points, DeloneSubdivision, SubdivisionKey};
use crate::error::{Error, Result};
use crate::polycone::{LinFun, PolyCone};
use crate::qcore::linalg;
use crate::qcore::rat::{int, rat, Rat};
use crate::qcore::{QForm, SubspaceT, SymMat};

/// A facet of a secondary cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFacet {
    /// Primitive inward functional in T-coordinates.
    pub functional: Vec<Rat>,
    /// The normalized form `N_F ∈ T` representing the functional.
    pub normal: SymMat,
    /// Indices of the Delone facet classes whose N-form projects onto it.
    pub delone_facets: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SecondaryCone {
    pub subdivision: DeloneSubdivision,
    pub t: SubspaceT,
    /// Cone in T-coordinates, both descriptions present.
    pub cone: PolyCone,
    pub rigidity_index: usize,
    /// Aligned with `cone.inequalities`.
    pub facet_records: Vec<ConeFacet>,
}

/// Vertex set `V_C` of a repartitioning polytope and its two triangulations
/// (cells as vertex lists) induced by lifting with a witness form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepartitioningPolytope {
    pub vertices: Vec<Vec<i64>>,
    pub lower: Vec<Vec<Vec<i64>>>,
    pub upper: Vec<Vec<Vec<i64>>>,
}

/// N-form of a Delone facet class: lex-first affinely independent `V ⊆ F`,
/// lex-first vertex `w` of the first cell off `F`, lex-first vertex `w′` of
/// the second cell off `F`.
pub fn facet_nform(d: &DeloneSubdivision, facet: usize) -> Result<SymMat> {
    let rec = &d.facets()[facet];
    let [(a, ta), (b, tb)] = &rec.cells;
    let ca = d.positioned(*a, ta);
    let cb = d.positioned(*b, tb);
    let idx = linalg::affinely_independent_subset(&rec.vertices, d.dim())
        .ok_or_else(|| Error::InconsistentSubdivision("facet is not full-dimensional".into()))?;
    let mut v: Vec<Vec<i64>> = idx.into_iter().map(|i| rec.vertices[i].clone()).collect();
    let off = |c: &crate::delone::DelonePolytope| c.vertices.iter().find(|x| !rec.vertices.contains(x)).cloned();
    let w = off(&ca).ok_or_else(|| Error::InconsistentSubdivision("cell equals its facet".into()))?;
    let w2 = off(&cb).ok_or_else(|| Error::InconsistentSubdivision("cell equals its facet".into()))?;
    v.push(w);
    Ok(nform(&v, &w2)?.matrix)
}

/// N-forms of the equalities of a non-simplicial cell.
fn cell_nforms(d: &DeloneSubdivision, cell: usize) -> Result<Vec<SymMat>> {
    let c = &d.cells()[cell];
    let v = c.spanning_simplex();
    c.vertices.iter().filter(|w| !v.contains(w)).map(|w| Ok(nform(&v, w)?.matrix)).collect()
}

pub fn secondary_cone(d: &DeloneSubdivision, t: &SubspaceT) -> Result<SecondaryCone> {
    if t.dim() == 0 {
        return Err(Error::ZeroDimensional);
    }
    if t.ambient_dim() != d.dim() {
        return Err(Error::DimensionMismatch { expected: d.dim(), found: t.ambient_dim() });
    }
    if d.cells().is_empty() {
        return Err(Error::EmptyCone);
    }
    let k = t.dim();
    let mut eqs: Vec<LinFun> = Vec::new();
    for i in 0..d.cells().len() {
        for n in cell_nforms(d, i)? {
            let f = LinFun::new(t.functional(&n));
            if !f.is_zero() && !eqs.contains(&f) {
                eqs.push(f);
            }
        }
    }
    let mut ineqs: Vec<LinFun> = Vec::new();
    let mut raw: Vec<Vec<Rat>> = Vec::new();
    for i in 0..d.facets().len() {
        let f = t.functional(&facet_nform(d, i)?);
        raw.push(f.clone());
        if f.iter().all(Zero::is_zero) {
            continue;
        }
        ineqs.push(LinFun::tagged(f, format!("facet {i}")));
    }
    let cone = PolyCone::from_h(k, eqs, ineqs).dual_description()?;
    let rigidity_index = cone.dim();
    let facet_records = cone
        .inequalities
        .iter()
        .map(|f| {
            let delone_facets =
                (0..raw.len()).filter(|&i| cone.canonical_functional(&raw[i]).as_ref() == Some(&f.coeffs)).collect();
            Ok(ConeFacet { functional: f.coeffs.clone(), normal: t.functional_form(&f.coeffs)?, delone_facets })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SecondaryCone { subdivision: d.clone(), t: t.clone(), cone, rigidity_index, facet_records })
}

impl SecondaryCone {
    /// Whether `dim Δ_T(D) = dim T`.
    pub fn is_generic(&self) -> bool {
        self.rigidity_index == self.t.dim()
    }

    /// Sum of the extreme rays (T-coordinates).
    pub fn interior_point(&self) -> Result<Vec<Rat>> {
        self.cone.relative_interior_point()
    }

    /// Sum of the rays on facet `i` (T-coordinates).
    pub fn facet_point(&self, i: usize) -> Result<Vec<Rat>> {
        let f = self.cone.inequalities.get(i).ok_or(Error::IndexOutOfRange { index: i, len: self.cone.inequalities.len() })?;
        let mut x = vec![Rat::zero(); self.t.dim()];
        for r in self.cone.rays.iter().filter(|r| f.eval(r).is_zero()) {
            for (a, b) in x.iter_mut().zip(r) {
                *a += b;
            }
        }
        Ok(x)
    }

    pub fn contains_form(&self, q: &SymMat) -> bool {
        self.t.coords(q).is_ok_and(|x| self.cone.contains_relint(&x))
    }
}

/// A facet is a dead-end when it contains no positive definite form.
pub fn is_dead_end(sc: &SecondaryCone, facet: usize) -> Result<bool> {
    let x = sc.facet_point(facet)?;
    Ok(!sc.t.form(&x).is_positive_definite())
}

/// Repartitioning polytopes for the flip across `facet`, lifted by `witness`.
pub fn repartitioning_polytopes(sc: &SecondaryCone, facet: usize, witness: &QForm) -> Result<Vec<RepartitioningPolytope>> {
    if is_dead_end(sc, facet)? {
        return Err(Error::DeadEnd(facet));
    }
    if !sc.contains_form(witness.matrix()) {
        return Err(Error::WitnessNotInterior);
    }
    let qf = sc.t.form(&sc.facet_point(facet)?);
    let coarse = delone_subdivision(&QForm::new(qf))?;
    let key: BTreeSet<Vec<Vec<i64>>> = sc.subdivision.key().into_iter().collect();
    let w = witness.matrix();
    let mut out = Vec::new();
    for cell in coarse.cells() {
        if key.contains(&cell.vertices) {
            continue;
        }
        let vc = &cell.vertices;
        if &lattice_points_in_hull(vc)? != vc {
            return Err(Error::Repartitioning(format!("{vc:?} contains extra lattice points")));
        }
        let heights: Vec<Rat> = vc.iter().map(|v| w.quad_i64(v)).collect();
        let lc = lifted_cells(vc, &heights);
        let pick = |cells: &[Vec<usize>]| -> Vec<Vec<Vec<i64>>> {
            cells.iter().map(|c| c.iter().map(|&i| vc[i].clone()).collect()).collect()
        };
        let rp = RepartitioningPolytope { vertices: vc.clone(), lower: pick(&lc.lower), upper: pick(&lc.upper) };
        for c in &rp.lower {
            if !key.contains(&normalize_points(c).0) {
                return Err(Error::Repartitioning(format!("lower cell {c:?} is not a cell of the subdivision")));
            }
        }
        if rp.lower == rp.upper {
            return Err(Error::Repartitioning(format!("{vc:?} has an affine lifting")));
        }
        out.push(rp);
    }
    if out.is_empty() {
        return Err(Error::Repartitioning("facet form merges no cells".into()));
    }
    Ok(out)
}

/// Replaces lower by upper cells in every repartitioning polytope.
pub fn flipped_key(d: &DeloneSubdivision, polys: &[RepartitioningPolytope]) -> SubdivisionKey {
    let mut cells: BTreeSet<Vec<Vec<i64>>> = d.key().into_iter().collect();
    for p in polys {
        for c in &p.lower {
            cells.remove(&normalize_points(c).0);
        }
    }
    for p in polys {
        for c in &p.upper {
            cells.insert(normalize_points(c).0);
        }
    }
    cells.into_iter().collect()
}

/// Flip across `facet`. The result is recomputed at a form just beyond the
/// facet and checked against the locally flipped cell list.
pub fn flip(sc: &SecondaryCone, facet: usize, witness: &QForm) -> Result<DeloneSubdivision> {
    let polys = repartitioning_polytopes(sc, facet, witness)?;
    let target = flipped_key(&sc.subdivision, &polys);
    let xf = sc.facet_point(facet)?;
    let xw = sc.t.coords(witness.matrix())?;
    let mut eps = rat(1, 2);
    for _ in 0..64 {
        let x: Vec<Rat> = xf.iter().zip(&xw).map(|(f, w)| f + &eps * (f - w)).collect();
        let q = sc.t.form(&x);
        if q.is_positive_definite() {
            let f = &sc.facet_records[facet].functional;
            debug_assert!(crate::qcore::rat::dot(f, &x).is_negative());
            let dnew = delone_subdivision(&QForm::new(q))?;
            if dnew.key() == target {
                return Ok(dnew);
            }
        }
        eps /= int(2);
    }
    Err(Error::Repartitioning("no form beyond the facet realizes the flipped subdivision".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::rat::int_vec;

    fn q(rows: &[&[i64]]) -> QForm {
        QForm::new(SymMat::from_i64(rows))
    }

    fn sc(rows: &[&[i64]], t: &SubspaceT) -> SecondaryCone {
        secondary_cone(&delone_subdivision(&q(rows)).unwrap(), t).unwrap()
    }

    fn sorted(mut v: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
        v.sort();
        v
    }

    #[test]
    fn diagonal_triangulation_cone() {
        let c = sc(&[&[2, 1], &[1, 2]], &SubspaceT::full(2));
        assert!(c.cone.equalities.is_empty());
        assert_eq!(c.rigidity_index, 3);
        // Coordinates (q11, q12, q22): q12 > 0, q22 − q12 > 0, q11 − q12 > 0.
        let got = sorted(c.cone.inequalities.iter().map(|f| f.coeffs.clone()).collect());
        assert_eq!(got, sorted(vec![int_vec(&[0, 1, 0]), int_vec(&[0, -1, 1]), int_vec(&[1, -1, 0])]));
        assert!(c.facet_records.iter().all(|f| f.delone_facets.len() == 1));
    }

    #[test]
    fn square_cone() {
        let c = sc(&[&[1, 0], &[0, 1]], &SubspaceT::full(2));
        assert_eq!(c.cone.equalities.len(), 1);
        assert_eq!(c.rigidity_index, 2);
        assert!(!c.is_generic());
        let diag = SubspaceT::new(vec![SymMat::from_i64(&[&[1, 0], &[0, 0]]), SymMat::from_i64(&[&[0, 0], &[0, 1]])]).unwrap();
        let c = sc(&[&[1, 0], &[0, 1]], &diag);
        assert!(c.is_generic());
        assert_eq!(sorted(c.cone.rays.clone()), sorted(vec![int_vec(&[0, 1]), int_vec(&[1, 0])]));
        assert!(is_dead_end(&c, 0).unwrap());
        assert!(is_dead_end(&c, 1).unwrap());
    }

    #[test]
    fn flip_diagonal() {
        let c = sc(&[&[2, 1], &[1, 2]], &SubspaceT::full(2));
        let i = c.cone.inequalities.iter().position(|f| f.coeffs == int_vec(&[0, 1, 0])).unwrap();
        assert!(!is_dead_end(&c, i).unwrap());
        let w = q(&[&[2, 1], &[1, 2]]);
        let polys = repartitioning_polytopes(&c, i, &w).unwrap();
        assert_eq!(polys.len(), 1);
        assert_eq!(polys[0].vertices, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let d2 = flip(&c, i, &w).unwrap();
        assert_eq!(
            d2.key(),
            vec![vec![vec![0, 0], vec![0, 1], vec![1, 1]], vec![vec![0, 0], vec![1, 0], vec![1, 1]]]
        );
        // Flipping back across the same wall restores the original.
        let c2 = secondary_cone(&d2, &SubspaceT::full(2)).unwrap();
        let j = c2.cone.inequalities.iter().position(|f| f.coeffs == int_vec(&[0, -1, 0])).unwrap();
        let w2 = QForm::new(c2.t.form(&c2.interior_point().unwrap()));
        let back = flip(&c2, j, &w2).unwrap();
        assert_eq!(back.key(), c.subdivision.key());
    }

    #[test]
    fn flip_is_unimodular_image() {
        let c = sc(&[&[2, 1], &[1, 2]], &SubspaceT::full(2));
        let i = c.cone.inequalities.iter().position(|f| f.coeffs == int_vec(&[1, -1, 0])).unwrap();
        let d2 = flip(&c, i, &q(&[&[2, 1], &[1, 2]])).unwrap();
        let u = crate::qcore::Unimodular::new(2, vec![1, 1, 0, 1]).unwrap();
        let moved = crate::qcore::transform(c.subdivision.form(), &u).unwrap();
        let image = delone_subdivision(&moved).unwrap();
        let alt = crate::qcore::transform(c.subdivision.form(), &u.inverse()).unwrap();
        let image2 = delone_subdivision(&alt).unwrap();
        assert!(d2.key() == image.key() || d2.key() == image2.key());
    }

    #[test]
    fn witness_must_be_interior() {
        let c = sc(&[&[2, 1], &[1, 2]], &SubspaceT::full(2));
        assert_eq!(repartitioning_polytopes(&c, 0, &q(&[&[1, 0], &[0, 1]])), Err(Error::WitnessNotInterior));
    }
}

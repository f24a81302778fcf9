//! Rational polyhedral cones with both halfspace and ray descriptions.

pub mod dd;
pub mod io;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::qcore::linalg;
use crate::qcore::rat::{dot, normalize_ray, Rat};

pub use dd::project_off;

/// A linear functional in cone coordinates, optionally tagged with where it
/// came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinFun {
    pub coeffs: Vec<Rat>,
    pub tag: Option<String>,
}

impl LinFun {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        LinFun { coeffs, tag: None }
    }

    pub fn tagged(coeffs: Vec<Rat>, tag: impl Into<String>) -> Self {
        LinFun { coeffs, tag: Some(tag.into()) }
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        dot(&self.coeffs, x)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// A facet together with the indices of the rays lying on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub fun: LinFun,
    pub incident: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyCone {
    ambient: usize,
    pub equalities: Vec<LinFun>,
    pub inequalities: Vec<LinFun>,
    pub rays: Vec<Vec<Rat>>,
    pub lineality: Vec<Vec<Rat>>,
    h_irredundant: bool,
    v_complete: bool,
}

impl PolyCone {
    /// `{x : e·x = 0 for e in eqs, a·x ≥ 0 for a in ineqs}`.
    pub fn from_h(ambient: usize, equalities: Vec<LinFun>, inequalities: Vec<LinFun>) -> Self {
        PolyCone { ambient, equalities, inequalities, rays: Vec::new(), lineality: Vec::new(), h_irredundant: false, v_complete: false }
    }

    /// Cone generated by `rays` plus the linear span of `lineality`.
    pub fn from_v(ambient: usize, rays: Vec<Vec<Rat>>, lineality: Vec<Vec<Rat>>) -> Self {
        PolyCone { ambient, equalities: Vec::new(), inequalities: Vec::new(), rays, lineality, h_irredundant: false, v_complete: true }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_complete(&self) -> bool {
        self.h_irredundant && self.v_complete
    }

    /// Dimension of the linear span of the cone.
    pub fn dim(&self) -> usize {
        let mut gens = self.rays.clone();
        gens.extend(self.lineality.iter().cloned());
        linalg::rank(&gens)
    }

    /// Both descriptions, irredundant, via the double description method.
    pub fn dual_description(&self) -> Result<PolyCone> {
        if self.ambient == 0 {
            return Err(Error::ZeroDimensional);
        }
        if self.is_complete() {
            return Ok(self.clone());
        }
        let k = self.ambient;
        let gens = if self.v_complete {
            // Clean possibly redundant generators by a round trip.
            let h = dd::v_to_h(k, &self.lineality, &self.rays);
            dd::h_to_v(k, &h.lineality, &h.rays)
        } else {
            let eqs: Vec<Vec<Rat>> = self.equalities.iter().map(|f| f.coeffs.clone()).collect();
            let ineqs: Vec<Vec<Rat>> = self.inequalities.iter().map(|f| f.coeffs.clone()).collect();
            dd::h_to_v(k, &eqs, &ineqs)
        };
        let h = dd::v_to_h(k, &gens.lineality, &gens.rays);
        let tag_of = |coeffs: &Vec<Rat>| -> Option<String> {
            // Keep provenance when a facet coincides with an input inequality.
            self.inequalities.iter().find_map(|f| {
                let c = project_off(&f.coeffs, &h.lineality);
                (normalize_ray(&c).as_ref() == Some(coeffs)).then(|| f.tag.clone()).flatten()
            })
        };
        let inequalities = h.rays.iter().map(|a| LinFun { coeffs: a.clone(), tag: tag_of(a) }).collect();
        let equalities = h.lineality.iter().map(|e| LinFun::new(e.clone())).collect();
        Ok(PolyCone { ambient: k, equalities, inequalities, rays: gens.rays, lineality: gens.lineality, h_irredundant: true, v_complete: true })
    }

    /// Irredundant facets with their incident rays.
    pub fn facets(&self) -> Result<Vec<Facet>> {
        let c = self.dual_description()?;
        Ok(c.inequalities
            .iter()
            .map(|f| Facet { fun: f.clone(), incident: (0..c.rays.len()).filter(|&i| f.eval(&c.rays[i]).is_zero()).collect() })
            .collect())
    }

    /// Sum of the normalized extreme rays.
    pub fn relative_interior_point(&self) -> Result<Vec<Rat>> {
        let c = self.dual_description()?;
        if c.rays.is_empty() && c.lineality.is_empty() {
            return Err(Error::EmptyCone);
        }
        let mut x = vec![Rat::zero(); self.ambient];
        for r in &c.rays {
            for (a, b) in x.iter_mut().zip(r) {
                *a += b;
            }
        }
        Ok(x)
    }

    /// Closed-cone membership; needs the halfspace description.
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.equalities.iter().all(|f| f.eval(x).is_zero()) && self.inequalities.iter().all(|f| !f.eval(x).is_negative())
    }

    /// Relative-interior membership (strict on every inequality).
    pub fn contains_relint(&self, x: &[Rat]) -> bool {
        self.equalities.iter().all(|f| f.eval(x).is_zero()) && self.inequalities.iter().all(|f| f.eval(x).is_positive())
    }

    /// Canonical form of a functional modulo the equalities: projected off
    /// their span and made primitive.
    pub fn canonical_functional(&self, f: &[Rat]) -> Option<Vec<Rat>> {
        let eqs: Vec<Vec<Rat>> = self.equalities.iter().map(|e| e.coeffs.clone()).collect();
        let basis = if eqs.is_empty() { eqs } else { linalg::rref(&eqs).0 };
        normalize_ray(&project_off(f, &basis))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::rat::int_vec;

    fn lf(v: &[i64]) -> LinFun {
        LinFun::new(int_vec(v))
    }

    #[test]
    fn quadrant_descriptions() {
        let c = PolyCone::from_h(2, vec![], vec![lf(&[1, 0]), lf(&[0, 1])]).dual_description().unwrap();
        assert_eq!(c.rays, vec![int_vec(&[0, 1]), int_vec(&[1, 0])]);
        assert_eq!(c.facets().unwrap().len(), 2);
        assert_eq!(c.relative_interior_point().unwrap(), int_vec(&[1, 1]));
        assert!(c.contains_relint(&int_vec(&[1, 1])));
    }

    #[test]
    fn single_ray() {
        let c = PolyCone::from_v(2, vec![int_vec(&[2, 4])], vec![]).dual_description().unwrap();
        assert_eq!(c.rays, vec![int_vec(&[1, 2])]);
        assert_eq!(c.equalities.len(), 1);
        assert_eq!(c.inequalities.len(), 1);
        assert_eq!(c.relative_interior_point().unwrap(), int_vec(&[1, 2]));
        assert_eq!(c.dim(), 1);
    }

    #[test]
    fn zero_ambient_rejected() {
        assert_eq!(PolyCone::from_h(0, vec![], vec![]).dual_description(), Err(Error::ZeroDimensional));
        let origin = PolyCone::from_h(1, vec![lf(&[1])], vec![]);
        assert_eq!(origin.relative_interior_point(), Err(Error::EmptyCone));
    }
}

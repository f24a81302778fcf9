//! Convex hull facets of small lattice point sets and lower/upper cells of
//! lifted configurations, both through the homogenized cone.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::polycone::dd;
use crate::qcore::linalg;
use crate::qcore::rat::{big, dot, int, Rat};

/// Facet `{x : normal·x + offset = 0}` of a full-dimensional polytope with
/// `normal·x + offset ≥ 0` on the polytope; `on` lists the points on it.
#[derive(Clone, Debug)]
pub struct HullFacet {
    pub normal: Vec<Rat>,
    pub offset: Rat,
    pub on: Vec<usize>,
}

impl HullFacet {
    pub fn eval(&self, x: &[i64]) -> Rat {
        self.normal.iter().zip(x).fold(self.offset.clone(), |acc, (a, b)| acc + a * int(*b))
    }
}

pub fn polytope_facets(points: &[Vec<i64>]) -> Result<Vec<HullFacet>> {
    let d = points.first().map_or(0, Vec::len);
    let rays: Vec<Vec<Rat>> = points
        .iter()
        .map(|p| {
            let mut r: Vec<Rat> = p.iter().map(|&x| int(x)).collect();
            r.push(int(1));
            r
        })
        .collect();
    let h = dd::v_to_h(d + 1, &[], &rays);
    if !h.lineality.is_empty() {
        return Err(Error::AffinelyDependent);
    }
    Ok(h.rays
        .into_iter()
        .map(|f| {
            let on = (0..rays.len()).filter(|&i| dot(&f, &rays[i]).is_zero()).collect();
            let offset = f[d].clone();
            let mut normal = f;
            normal.truncate(d);
            HullFacet { normal, offset, on }
        })
        .collect())
}

/// All integer points of `conv(points)`, sorted.
pub fn lattice_points_in_hull(points: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let facets = polytope_facets(points)?;
    let d = points[0].len();
    let lo: Vec<i64> = (0..d).map(|i| points.iter().map(|p| p[i]).min().expect("nonempty")).collect();
    let hi: Vec<i64> = (0..d).map(|i| points.iter().map(|p| p[i]).max().expect("nonempty")).collect();
    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        if facets.iter().all(|f| !f.eval(&x).is_negative()) {
            out.push(x.clone());
        }
        let mut i = 0;
        while i < d {
            if x[i] < hi[i] {
                x[i] += 1;
                break;
            }
            x[i] = lo[i];
            i += 1;
        }
        if i == d {
            break;
        }
    }
    out.sort();
    Ok(out)
}

/// Lower and upper cells of `conv{(p, h(p))}` projected back, as index sets.
/// If the lifting is affine on the points both are the single full cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedCells {
    pub lower: Vec<Vec<usize>>,
    pub upper: Vec<Vec<usize>>,
}

pub fn lifted_cells(points: &[Vec<i64>], heights: &[Rat]) -> LiftedCells {
    let d = points.first().map_or(0, Vec::len);
    let rays: Vec<Vec<Rat>> = points
        .iter()
        .zip(heights)
        .map(|(p, h)| {
            let mut r: Vec<Rat> = p.iter().map(|&x| int(x)).collect();
            r.push(h.clone());
            r.push(int(1));
            r
        })
        .collect();
    let h = dd::v_to_h(d + 2, &[], &rays);
    let all: Vec<usize> = (0..points.len()).collect();
    if h.lineality.iter().any(|e| !e[d].is_zero()) {
        return LiftedCells { lower: vec![all.clone()], upper: vec![all] };
    }
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for f in &h.rays {
        let on: Vec<usize> = (0..rays.len()).filter(|&i| dot(f, &rays[i]).is_zero()).collect();
        if f[d].is_positive() {
            lower.push(on);
        } else if f[d].is_negative() {
            upper.push(on);
        }
    }
    lower.sort();
    upper.sort();
    LiftedCells { lower, upper }
}

/// A triangulation of the point set (placing order, realized by a steep lifting).
pub fn triangulate(points: &[Vec<i64>]) -> Result<Vec<Vec<usize>>> {
    let base = BigInt::from(1000);
    let heights: Vec<Rat> = (0..points.len()).map(|i| big(&num_traits::pow(base.clone(), i))).collect();
    let cells = lifted_cells(points, &heights).lower;
    let d = points.first().map_or(0, Vec::len);
    if cells.iter().any(|c| c.len() != d + 1) {
        return Err(Error::InconsistentSubdivision("placing lifting was not generic".into()));
    }
    Ok(cells)
}

/// `|det(p_1 − p_0, …, p_d − p_0)|`, i.e. `d!` times the simplex volume.
pub fn simplex_normalized_volume(s: &[Vec<i64>]) -> Rat {
    let m: Vec<Vec<Rat>> = s[1..].iter().map(|p| p.iter().zip(&s[0]).map(|(a, b)| int(a - b)).collect()).collect();
    linalg::det(&m).abs()
}

/// `d!` times the Euclidean volume of `conv(points)`.
pub fn normalized_volume(points: &[Vec<i64>]) -> Result<Rat> {
    let tri = triangulate(points)?;
    Ok(tri.iter().fold(Rat::zero(), |acc, c| {
        let s: Vec<Vec<i64>> = c.iter().map(|&i| points[i].clone()).collect();
        acc + simplex_normalized_volume(&s)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(p: &[&[i64]]) -> Vec<Vec<i64>> {
        p.iter().map(|x| x.to_vec()).collect()
    }

    #[test]
    fn square_facets_and_volume() {
        let sq = pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        let f = polytope_facets(&sq).unwrap();
        assert_eq!(f.len(), 4);
        assert!(f.iter().all(|x| x.on.len() == 2));
        assert_eq!(normalized_volume(&sq).unwrap(), int(2));
        assert!(polytope_facets(&pts(&[&[0, 0], &[1, 1], &[2, 2]])).is_err());
    }

    #[test]
    fn square_lifted_by_a2_form() {
        // Heights from Q = [[2,1],[1,2]]: lower hull cuts along (1,0)-(0,1).
        let sq = pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        let h: Vec<Rat> = [0, 2, 2, 6].iter().map(|&x| int(x)).collect();
        let c = lifted_cells(&sq, &h);
        assert_eq!(c.lower, vec![vec![0, 1, 2], vec![1, 2, 3]]);
        assert_eq!(c.upper, vec![vec![0, 1, 3], vec![0, 2, 3]]);
        let flat: Vec<Rat> = [0, 1, 1, 2].iter().map(|&x| int(x)).collect();
        assert_eq!(lifted_cells(&sq, &flat).lower, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn cube_volume() {
        let mut cube = Vec::new();
        for i in 0..8i64 {
            cube.push(vec![i & 1, (i >> 1) & 1, (i >> 2) & 1]);
        }
        assert_eq!(normalized_volume(&cube).unwrap(), int(6));
        assert_eq!(polytope_facets(&cube).unwrap().len(), 6);
        assert_eq!(lattice_points_in_hull(&cube).unwrap().len(), 8);
        let tri = pts(&[&[0, 0], &[2, 0], &[0, 2]]);
        assert_eq!(lattice_points_in_hull(&tri).unwrap().len(), 6);
    }
}

//! Delone subdivisions of `Z^d` under a positive definite form.

pub mod hull;
pub mod io;
mod nform;
mod subdivision;

use num_traits::ToPrimitive;

use crate::error::Result;
use crate::qcore::rat::{to_f64, Rat};
use crate::qcore::QForm;

pub use nform::{affine_coordinates, circumsphere, nform, sphere_test, NForm};
pub use subdivision::{delone_subdivision, normalize_points, DelonePolytope, DeloneSubdivision, FacetRecord, SubdivisionKey};

/// Largest squared circumradius over the Delone cells.
pub fn inhomogeneous_minimum(q: &QForm) -> Result<Rat> {
    Ok(delone_subdivision(q)?.inhomogeneous_minimum())
}

/// Volume of the Euclidean unit ball in dimension `d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    let pi = std::f64::consts::PI;
    let mut k = if d % 2 == 0 { 1.0 } else { 2.0 };
    let mut n = if d % 2 == 0 { 0 } else { 1 };
    while n < d {
        n += 2;
        k *= 2.0 * pi / n.to_f64().expect("small");
    }
    k
}

/// `Θ` from the exact ratio `μ^d / det`.
pub fn theta_from_ratio(ratio: &Rat, d: usize) -> f64 {
    to_f64(ratio).sqrt() * unit_ball_volume(d)
}

/// Exact `μ(Q)^d / det Q` and the covering density `Θ(Q)`.
pub fn covering_density(q: &QForm) -> Result<(Rat, f64)> {
    let mu = inhomogeneous_minimum(q)?;
    let d = q.dim();
    let ratio = num_traits::pow(mu, d) / q.det();
    let theta = theta_from_ratio(&ratio, d);
    Ok((ratio, theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::rat::rat;
    use crate::qcore::SymMat;

    #[test]
    fn ball_volumes() {
        let pi = std::f64::consts::PI;
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-15);
        assert!((unit_ball_volume(2) - pi).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * pi / 3.0).abs() < 1e-14);
        assert!((unit_ball_volume(4) - pi * pi / 2.0).abs() < 1e-14);
    }

    #[test]
    fn densities() {
        let (r, t) = covering_density(&QForm::new(SymMat::identity(2))).unwrap();
        assert_eq!(r, rat(1, 4));
        assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        let (r, t) = covering_density(&QForm::new(SymMat::from_i64(&[&[2, 1], &[1, 2]]))).unwrap();
        assert_eq!(r, rat(4, 27));
        assert!((t - 1.209199).abs() < 1e-6);
    }
}

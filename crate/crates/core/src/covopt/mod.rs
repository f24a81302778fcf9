//! Covering optimization over a secondary cone: determinant maximization
//! under circumradius constraints, with exact rational bound certificates.

pub mod cert;
mod solver;

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::delone::{circumsphere, delone_subdivision, normalize_points, theta_from_ratio};
use crate::enumerate::EnumerationReport;
use crate::error::{Error, Result};
use crate::latenum::shortest_vectors;
use crate::qcore::rat::{approx_f64, exp_lower, from_f64, int, rat, to_f64, Rat};
use crate::qcore::{QForm, SubspaceT, SymMat};
use crate::secondary::SecondaryCone;
use crate::symmetry::automorphism_group;

pub use solver::{solve, AffineMat, FloatProblem, SolverOptions, SolverResult};

/// Bordered matrix `[[4, Q[v_i]], [Q[v_i], v_iᵗ Q v_j]]` of the simplex
/// translated so that its first vertex is the origin. It is PSD iff the
/// circumradius of the simplex under `Q` is at most 1.
pub fn br_matrix(q: &SymMat, simplex: &[Vec<i64>]) -> Result<SymMat> {
    let d = q.dim();
    if simplex.len() != d + 1 {
        return Err(Error::DimensionMismatch { expected: d + 1, found: simplex.len() });
    }
    if crate::qcore::linalg::affine_dim(simplex) != d as isize {
        return Err(Error::AffinelyDependent);
    }
    let v: Vec<Vec<i64>> = simplex[1..].iter().map(|p| p.iter().zip(&simplex[0]).map(|(a, b)| a - b).collect()).collect();
    let mut m = SymMat::zeros(d + 1);
    m.set(0, 0, int(4));
    for i in 0..d {
        m.set(i + 1, 0, q.quad_i64(&v[i]));
        for j in 0..=i {
            m.set(i + 1, j + 1, q.bilinear_i64(&v[i], &v[j]));
        }
    }
    Ok(m)
}

/// `min −log det Σ x_k A_k` subject to `BR_L ⪰ 0` for each simplex and
/// `ℓ_j(x) ≥ 0` for each cone inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxDetProblem {
    pub t: SubspaceT,
    pub simplices: Vec<Vec<Vec<i64>>>,
    pub linear: Vec<Vec<Rat>>,
}

/// Exact dual point: `W ≻ 0`, `Z_L ⪰ 0`, `z_j ≥ 0` with
/// `⟨A_k, W⟩ + Σ ⟨F_{L,k}, Z_L⟩ + Σ ℓ_{jk} z_j = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualData {
    pub w: SymMat,
    pub z_blocks: Vec<SymMat>,
    pub z_lin: Vec<Rat>,
}

impl MaxDetProblem {
    pub fn dim(&self) -> usize {
        self.t.ambient_dim()
    }

    /// One spanning simplex per class of cells under the automorphisms of
    /// an interior form that fix every form of `T`.
    pub fn from_cone(sc: &SecondaryCone) -> Result<Self> {
        if !sc.is_generic() {
            return Err(Error::NotGeneric { rigidity: sc.rigidity_index, dim: sc.t.dim() });
        }
        let t = &sc.t;
        let sample = QForm::new(t.form(&sc.interior_point()?));
        let fixers: Vec<_> = automorphism_group(&sample)?
            .all_elements()
            .into_iter()
            .filter(|u| t.basis().iter().all(|a| a.congruence(u.entries()) == *a))
            .collect();
        let mut seen: Vec<Vec<Vec<i64>>> = Vec::new();
        let mut simplices = Vec::new();
        for cell in sc.subdivision.cells() {
            let key = fixers
                .iter()
                .map(|u| normalize_points(&cell.vertices.iter().map(|v| u.apply(v)).collect::<Vec<_>>()).0)
                .min()
                .expect("identity fixes T");
            if !seen.contains(&key) {
                seen.push(key);
                simplices.push(cell.spanning_simplex());
            }
        }
        let linear = sc.cone.inequalities.iter().map(|f| f.coeffs.clone()).collect();
        Ok(MaxDetProblem { t: t.clone(), simplices, linear })
    }

    fn corner(&self) -> SymMat {
        let mut c = SymMat::zeros(self.dim() + 1);
        c.set(0, 0, int(4));
        c
    }

    /// `F_{L,k}`: the linear part of `BR_L` for basis element `A_k`.
    pub fn block_coeffs(&self, l: usize) -> Result<Vec<SymMat>> {
        let c = self.corner();
        self.t.basis().iter().map(|a| br_matrix(a, &self.simplices[l])?.sub(&c)).collect()
    }

    pub fn to_float(&self) -> Result<FloatProblem> {
        let fm = |m: &SymMat| {
            let rows = m.to_f64_rows();
            DMatrix::from_fn(m.dim(), m.dim(), |i, j| rows[i][j])
        };
        let g = AffineMat { constant: DMatrix::zeros(self.dim(), self.dim()), coeffs: self.t.basis().iter().map(fm).collect() };
        let corner = fm(&self.corner());
        let blocks = (0..self.simplices.len())
            .map(|l| Ok(AffineMat { constant: corner.clone(), coeffs: self.block_coeffs(l)?.iter().map(fm).collect() }))
            .collect::<Result<Vec<_>>>()?;
        let linear = self.linear.iter().map(|f| f.iter().map(to_f64).collect()).collect();
        Ok(FloatProblem { g, blocks, linear })
    }

    /// Largest squared circumradius over the simplices under `q`.
    pub fn max_circumradius(&self, q: &SymMat) -> Result<Rat> {
        let mut best = Rat::zero();
        for s in &self.simplices {
            let (_, r2) = circumsphere(q, s)?;
            if r2 > best {
                best = r2;
            }
        }
        Ok(best)
    }

    /// Exact residual of the dual equality constraints.
    fn residual(&self, dual: &DualData) -> Result<Vec<Rat>> {
        let coeffs = (0..self.simplices.len()).map(|l| self.block_coeffs(l)).collect::<Result<Vec<_>>>()?;
        Ok((0..self.t.dim())
            .map(|k| {
                let mut r = self.t.basis()[k].inner(&dual.w).expect("same size");
                for (l, z) in dual.z_blocks.iter().enumerate() {
                    r += coeffs[l][k].inner(z).expect("same size");
                }
                for (f, z) in self.linear.iter().zip(&dual.z_lin) {
                    r += &f[k] * z;
                }
                r
            })
            .collect())
    }

    /// Verifies exact dual feasibility and returns the implied lower bound
    /// on `μ^d / det` over the cone: `det W · exp(d − 4 Σ Z_L[0,0])`.
    pub fn dual_lower_bound(&self, dual: &DualData) -> Result<Rat> {
        let bad = |m: &str| Err(Error::Solver(format!("dual certificate: {m}")));
        if dual.z_blocks.len() != self.simplices.len() || dual.z_lin.len() != self.linear.len() {
            return bad("block count mismatch");
        }
        if !dual.w.is_positive_definite() {
            return bad("W is not positive definite");
        }
        if !dual.z_blocks.iter().all(SymMat::is_psd) {
            return bad("a block multiplier is not PSD");
        }
        if dual.z_lin.iter().any(Signed::is_negative) {
            return bad("negative scalar multiplier");
        }
        if self.residual(dual)?.iter().any(|r| !r.is_zero()) {
            return bad("equality constraints violated");
        }
        let trace: Rat = dual.z_blocks.iter().fold(Rat::zero(), |a, z| a + z.get(0, 0));
        let arg = int(self.dim() as i64) - trace * int(4);
        Ok(dual.w.det() * exp_lower(&arg))
    }

    /// Rounds a floating dual point onto a grid, loads the diagonals of the
    /// block multipliers until PSD, and absorbs the equality residual in `W`.
    fn repair_dual(&self, w: &DMatrix<f64>, z: &[DMatrix<f64>], zl: &[f64], bits: i32) -> Option<DualData> {
        let scale = 2f64.powi(bits);
        let grid = |x: f64| from_f64((x * scale).round()) / from_f64(scale);
        let sym = |m: &DMatrix<f64>| -> SymMat {
            let n = m.nrows();
            let mut lower = Vec::with_capacity(n * (n + 1) / 2);
            for i in 0..n {
                for j in 0..=i {
                    lower.push(grid((m[(i, j)] + m[(j, i)]) / 2.0));
                }
            }
            SymMat::from_lower(n, lower).expect("square")
        };
        let mut z_blocks = Vec::new();
        for zm in z {
            let mut s = sym(zm);
            let mut load = Rat::one() / from_f64(scale);
            let mut tries = 0;
            while !s.is_psd() {
                let id = SymMat::identity(s.dim()).scale(&load);
                s = s.add(&id).expect("same size");
                load *= int(4);
                tries += 1;
                if tries > 20 {
                    return None;
                }
            }
            z_blocks.push(s);
        }
        let z_lin: Vec<Rat> = zl.iter().map(|&x| grid(x.max(0.0))).collect();
        let mut dual = DualData { w: sym(w), z_blocks, z_lin };
        let r = self.residual(&dual).ok()?;
        let y = crate::qcore::linalg::solve(self.t.gram(), &r)?;
        dual.w = dual.w.sub(&self.t.form(&y)).ok()?;
        dual.w.is_positive_definite().then_some(dual)
    }
}

/// Certified enclosure of `min μ^d / det` over one cone.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCertificate {
    pub cone_id: usize,
    pub problem: MaxDetProblem,
    /// Feasible form with `μ(q_star) = 1` exactly.
    pub q_star: SymMat,
    /// `μ(q_star)^d / det q_star`.
    pub upper: Rat,
    pub dual: Option<DualData>,
    /// Zero when no dual point could be certified.
    pub lower: Rat,
    pub gap: f64,
    pub newton_steps: usize,
}

impl BoundCertificate {
    pub fn dim(&self) -> usize {
        self.problem.dim()
    }

    /// `(Θ_lower, Θ_upper)` as floats.
    pub fn theta_interval(&self) -> (f64, f64) {
        (theta_from_ratio(&self.lower, self.dim()), theta_from_ratio(&self.upper, self.dim()))
    }
}

/// `μ^d / det` of `q` and `q` rescaled to `μ = 1`, for `q` in the closed
/// cone where every simplex of the triangulation stays Delone.
fn exact_ratio(problem: &MaxDetProblem, q: &SymMat) -> Result<(Rat, SymMat)> {
    let mu = problem.max_circumradius(q)?;
    let scaled = q.scale(&(Rat::one() / &mu));
    Ok((Rat::one() / scaled.det(), scaled))
}

fn upper_bound(sc: &SecondaryCone, problem: &MaxDetProblem, x: &[f64], x0: &[Rat], opts: &SolverOptions) -> Result<(Rat, SymMat)> {
    let t = &sc.t;
    let mut best = exact_ratio(problem, &t.form(x0))?;
    let lambdas = [Rat::zero(), rat(1, 1 << 30), rat(1, 1 << 20), rat(1, 1 << 12), rat(1, 64), rat(1, 2)];
    for &den in &opts.denominators {
        let xr: Vec<Rat> = x.iter().map(|&v| approx_f64(v, den)).collect();
        for lam in &lambdas {
            let xb: Vec<Rat> = xr.iter().zip(x0).map(|(a, b)| a * (Rat::one() - lam) + b * lam).collect();
            let q = t.form(&xb);
            if sc.cone.contains(&xb) && q.is_positive_definite() {
                let cand = exact_ratio(problem, &q)?;
                if cand.0 < best.0 {
                    best = cand;
                }
                break;
            }
        }
    }
    Ok(best)
}

/// Solves the maxdet problem for one generic cone and certifies both bounds.
pub fn optimize_cone(sc: &SecondaryCone, opts: &SolverOptions, cone_id: usize) -> Result<(SolverResult, BoundCertificate)> {
    let problem = MaxDetProblem::from_cone(sc)?;
    let fp = problem.to_float()?;
    let xi = sc.interior_point()?;
    let mu0 = problem.max_circumradius(&sc.t.form(&xi))?;
    let x0: Vec<Rat> = xi.iter().map(|v| v / (&mu0 * int(2))).collect();
    let res = solve(&fp, x0.iter().map(to_f64).collect(), opts);
    let (upper, q_star) = upper_bound(sc, &problem, &res.x, &x0, opts)?;
    let mut dual = None;
    let mut lower = Rat::zero();
    for (x, t) in res.centers.iter().rev() {
        let Some((w, z, zl)) = fp.dual_estimate(x, *t) else { continue };
        for bits in [40, 48, 32, 24] {
            if let Some(dd) = problem.repair_dual(&w, &z, &zl, bits) {
                let lb = problem.dual_lower_bound(&dd)?;
                if lb > lower {
                    lower = lb;
                    dual = Some(dd);
                }
                break;
            }
        }
    }
    if lower > upper {
        return Err(Error::Solver("certified lower bound exceeds upper bound".into()));
    }
    let gap = if lower.is_positive() { to_f64(&upper).ln() - to_f64(&lower).ln() } else { f64::INFINITY };
    let cert = BoundCertificate { cone_id, problem, q_star, upper, dual, lower, gap, newton_steps: res.newton_steps };
    Ok((res, cert))
}

/// Certified `Θ_T` enclosure over all representatives of a report.
#[derive(Clone, Debug)]
pub struct ThetaT {
    pub dim: usize,
    pub lower: Rat,
    pub upper: Rat,
    pub certificates: Vec<BoundCertificate>,
    /// Set when the enumeration was partial.
    pub conditional: bool,
}

impl ThetaT {
    pub fn theta_interval(&self) -> (f64, f64) {
        (theta_from_ratio(&self.lower, self.dim), theta_from_ratio(&self.upper, self.dim))
    }
}

pub fn theta_t(report: &EnumerationReport, opts: &SolverOptions) -> Result<ThetaT> {
    let certificates = report
        .representatives
        .par_iter()
        .enumerate()
        .map(|(i, r)| optimize_cone(&r.cone, opts, i).map(|(_, c)| c))
        .collect::<Result<Vec<_>>>()?;
    let lower = certificates.iter().map(|c| c.lower.clone()).min().ok_or(Error::EmptyCone)?;
    let upper = certificates.iter().map(|c| c.upper.clone()).min().ok_or(Error::EmptyCone)?;
    Ok(ThetaT { dim: report.t.ambient_dim(), lower, upper, certificates, conditional: !report.is_complete() })
}

/// Squared packing-covering constant `4 μ(Q) / min Q`.
pub fn packing_covering(q: &QForm) -> Result<Rat> {
    let mu = delone_subdivision(q)?.inhomogeneous_minimum();
    let (min, _) = shortest_vectors(q)?;
    Ok(mu * int(4) / min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::secondary::secondary_cone;

    fn pts(p: &[&[i64]]) -> Vec<Vec<i64>> {
        p.iter().map(|x| x.to_vec()).collect()
    }

    #[test]
    fn br_examples() {
        let l = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        let b = br_matrix(&SymMat::identity(2), &l).unwrap();
        assert_eq!(b, SymMat::from_i64(&[&[4, 1, 1], &[1, 1, 0], &[1, 0, 1]]));
        assert!(b.is_positive_definite());
        let b2 = br_matrix(&SymMat::identity(2).scale(&int(2)), &l).unwrap();
        assert_eq!(b2, SymMat::from_i64(&[&[4, 2, 2], &[2, 2, 0], &[2, 0, 2]]));
        assert!(b2.is_psd() && b2.det().is_zero());
        let b4 = br_matrix(&SymMat::identity(2).scale(&int(4)), &l).unwrap();
        assert_eq!(b4.det(), int(-64));
        assert!(br_matrix(&SymMat::identity(2), &pts(&[&[0, 0], &[1, 0], &[2, 0]])).is_err());
    }

    #[test]
    fn packing_covering_examples() {
        assert_eq!(packing_covering(&QForm::new(SymMat::identity(2))).unwrap(), int(2));
        assert_eq!(packing_covering(&QForm::new(SymMat::from_i64(&[&[2, 1], &[1, 2]]))).unwrap(), rat(4, 3));
    }

    #[test]
    fn quadrant_optimum() {
        let t = SubspaceT::new(vec![SymMat::from_i64(&[&[1, 0], &[0, 0]]), SymMat::from_i64(&[&[0, 0], &[0, 1]])]).unwrap();
        let d = delone_subdivision(&QForm::new(SymMat::from_i64(&[&[1, 0], &[0, 3]]))).unwrap();
        let sc = secondary_cone(&d, &t).unwrap();
        let (res, c) = optimize_cone(&sc, &SolverOptions::default(), 0).unwrap();
        assert!(res.converged);
        assert_eq!(c.upper, rat(1, 4));
        assert!(c.lower <= rat(1, 4) && to_f64(&c.lower) > 0.25 - 1e-8);
        let (lo, hi) = c.theta_interval();
        assert!((hi - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!(lo <= hi && hi - lo < 1e-6);
    }

    #[test]
    fn hexagonal_optimum() {
        let t = SubspaceT::full(2);
        let d = delone_subdivision(&QForm::new(SymMat::from_i64(&[&[2, 1], &[1, 2]]))).unwrap();
        let sc = secondary_cone(&d, &t).unwrap();
        let (_, c) = optimize_cone(&sc, &SolverOptions::default(), 0).unwrap();
        let (lo, hi) = c.theta_interval();
        let exact = 2.0 * std::f64::consts::PI / (3.0 * 3f64.sqrt());
        assert!(lo <= exact + 1e-12 && exact <= hi + 1e-12, "{lo} {hi}");
        assert!(hi - lo < 1e-4);
        assert_eq!(c.upper, rat(4, 27));
    }
}

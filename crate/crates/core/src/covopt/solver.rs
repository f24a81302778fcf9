//! Primal barrier method for
//! `min −log det G(x)` s.t. `F_L(x) ⪰ 0`, `ℓ_j(x) ≥ 0`, in double precision.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

/// Affine matrix function `M(x) = M_0 + Σ x_k M_k`.
#[derive(Clone, Debug)]
pub struct AffineMat {
    pub constant: DMatrix<f64>,
    pub coeffs: Vec<DMatrix<f64>>,
}

impl AffineMat {
    pub fn eval(&self, x: &[f64]) -> DMatrix<f64> {
        let mut m = self.constant.clone();
        for (c, xi) in self.coeffs.iter().zip(x) {
            m += c * *xi;
        }
        m
    }
}

#[derive(Clone, Debug)]
pub struct FloatProblem {
    pub g: AffineMat,
    pub blocks: Vec<AffineMat>,
    pub linear: Vec<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Stop when the barrier duality gap `m/t` drops below this.
    pub gap_tol: f64,
    pub max_newton: usize,
    /// Denominator bounds tried when rounding the optimum.
    pub denominators: Vec<i64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { gap_tol: 1e-10, max_newton: 4000, denominators: vec![10_000, 100_000, 1_000_000, 10_000_000, 100_000_000, 1_000_000_000] }
    }
}

#[derive(Clone, Debug)]
pub struct SolverResult {
    pub x: Vec<f64>,
    pub t: f64,
    pub newton_steps: usize,
    pub converged: bool,
    pub logdet: f64,
    /// Centered iterates `(x, t)` of the last few outer rounds, newest last.
    pub centers: Vec<(Vec<f64>, f64)>,
}

fn chol(m: DMatrix<f64>) -> Option<Cholesky<f64, Dyn>> {
    Cholesky::new(m)
}

fn logdet(c: &Cholesky<f64, Dyn>) -> f64 {
    2.0 * c.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>()
}

impl FloatProblem {
    pub fn nvars(&self) -> usize {
        self.g.coeffs.len()
    }

    /// Total barrier dimension (sum of block sizes plus scalar constraints).
    pub fn barrier_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.constant.nrows()).sum::<usize>() + self.linear.len()
    }

    fn lin(&self, j: usize, x: &[f64]) -> f64 {
        self.linear[j].iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// `t·(−log det G) − Σ log det F_L − Σ log ℓ_j`, `None` outside the domain.
    pub fn barrier(&self, x: &[f64], t: f64) -> Option<f64> {
        let g = chol(self.g.eval(x))?;
        let mut v = -t * logdet(&g);
        for b in &self.blocks {
            v -= logdet(&chol(b.eval(x))?);
        }
        for j in 0..self.linear.len() {
            let l = self.lin(j, x);
            if l <= 0.0 {
                return None;
            }
            v -= l.ln();
        }
        Some(v)
    }

    /// Gradient and Hessian of the barrier objective.
    pub fn derivatives(&self, x: &[f64], t: f64) -> Option<(DVector<f64>, DMatrix<f64>)> {
        let n = self.nvars();
        let mut grad = DVector::zeros(n);
        let mut hess = DMatrix::zeros(n, n);
        let mut add_block = |m: &AffineMat, weight: f64| -> Option<()> {
            let inv = chol(m.eval(x))?.inverse();
            let p: Vec<DMatrix<f64>> = m.coeffs.iter().map(|c| &inv * c).collect();
            for k in 0..n {
                grad[k] -= weight * p[k].trace();
                for l in 0..=k {
                    let h = weight * (&p[k] * &p[l]).trace();
                    hess[(k, l)] += h;
                    if l != k {
                        hess[(l, k)] += h;
                    }
                }
            }
            Some(())
        };
        add_block(&self.g, t)?;
        for b in &self.blocks {
            add_block(b, 1.0)?;
        }
        for (j, a) in self.linear.iter().enumerate() {
            let l = self.lin(j, x);
            if l <= 0.0 {
                return None;
            }
            for k in 0..n {
                grad[k] -= a[k] / l;
                for m in 0..n {
                    hess[(k, m)] += a[k] * a[m] / (l * l);
                }
            }
        }
        Some((grad, hess))
    }

    pub fn logdet_g(&self, x: &[f64]) -> Option<f64> {
        Some(logdet(&chol(self.g.eval(x))?))
    }

    /// Dual point `(W, Z_L, z_j)` recovered from a central point at `t`.
    pub fn dual_estimate(&self, x: &[f64], t: f64) -> Option<(DMatrix<f64>, Vec<DMatrix<f64>>, Vec<f64>)> {
        let w = chol(self.g.eval(x))?.inverse();
        let z = self.blocks.iter().map(|b| Some(chol(b.eval(x))?.inverse() / t)).collect::<Option<Vec<_>>>()?;
        let zl = (0..self.linear.len()).map(|j| 1.0 / (t * self.lin(j, x))).collect();
        Some((w, z, zl))
    }
}

/// Minimizes `t·(−log det G) − barrier` along increasing `t` from a strictly
/// feasible start.
/// Newton steps allowed per value of `t`.
const MAX_CENTERING: usize = 100;
const KEEP_CENTERS: usize = 6;

pub fn solve(p: &FloatProblem, x0: Vec<f64>, opts: &SolverOptions) -> SolverResult {
    let m = p.barrier_dim().max(1) as f64;
    let mut x = x0;
    let mut t = 1.0;
    let mut steps = 0;
    let mut converged = false;
    let mut centers: Vec<(Vec<f64>, f64)> = Vec::new();
    'outer: loop {
        for _ in 0..MAX_CENTERING {
            if steps >= opts.max_newton {
                break 'outer;
            }
            let Some((g, h)) = p.derivatives(&x, t) else { break 'outer };
            let Some(hc) = chol(h) else { break 'outer };
            let dx = hc.solve(&(-&g));
            let dec = -g.dot(&dx);
            steps += 1;
            if dec / 2.0 < 1e-9 {
                break;
            }
            let f0 = p.barrier(&x, t).expect("current point is feasible");
            let mut s = 1.0;
            let mut moved = false;
            // Steps this short only chase rounding noise: treat as centered.
            while s > 1e-6 {
                let xn: Vec<f64> = x.iter().zip(dx.iter()).map(|(a, b)| a + s * b).collect();
                if let Some(f1) = p.barrier(&xn, t) {
                    if f1 < f0 && f1 <= f0 - 0.25 * s * dec {
                        x = xn;
                        moved = true;
                        break;
                    }
                }
                s /= 2.0;
            }
            if !moved {
                break;
            }
        }
        centers.push((x.clone(), t));
        if centers.len() > KEEP_CENTERS {
            centers.remove(0);
        }
        if m / t < opts.gap_tol {
            converged = true;
            break;
        }
        t *= 8.0;
    }
    let logdet = p.logdet_g(&x).unwrap_or(f64::NEG_INFINITY);
    SolverResult { x, t, newton_steps: steps, converged, logdet, centers }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `max log(ab)` with `a + b ≤ 4`, written as the 1×1 block `4 − a − b`.
    fn quadrant() -> FloatProblem {
        let e = |i: usize| {
            let mut m = DMatrix::zeros(2, 2);
            m[(i, i)] = 1.0;
            m
        };
        let g = AffineMat { constant: DMatrix::zeros(2, 2), coeffs: vec![e(0), e(1)] };
        let b = AffineMat { constant: DMatrix::from_element(1, 1, 4.0), coeffs: vec![DMatrix::from_element(1, 1, -1.0); 2] };
        FloatProblem { g, blocks: vec![b], linear: vec![vec![1.0, 0.0], vec![0.0, 1.0]] }
    }

    #[test]
    fn quadrant_optimum() {
        let r = solve(&quadrant(), vec![1.0, 1.0], &SolverOptions::default());
        assert!(r.converged);
        assert!((r.x[0] - 2.0).abs() < 1e-6 && (r.x[1] - 2.0).abs() < 1e-6);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let p = quadrant();
        let x = [0.7, 1.9];
        let t = 3.0;
        let (g, _) = p.derivatives(&x, t).unwrap();
        for k in 0..2 {
            let h = 1e-6;
            let mut xp = x;
            let mut xm = x;
            xp[k] += h;
            xm[k] -= h;
            let fd = (p.barrier(&xp, t).unwrap() - p.barrier(&xm, t).unwrap()) / (2.0 * h);
            assert!((fd - g[k]).abs() <= 1e-6 * g[k].abs().max(1.0));
        }
    }
}

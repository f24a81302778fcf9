//! Totally real number fields with exact trace forms, the subspace of
//! trace-form lattices, and the thin-field verdict.
//!
//! Fixture format (`.nf`): `poly a_n … a_0` (integer coefficients, leading
//! first), `basis n` followed by `n` rows giving each integral basis element
//! in power-basis coordinates `c_0 … c_{n−1}`, then `disc d_K`.

pub mod fixtures;
pub mod poly;

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::covopt::ThetaT;
use crate::delone::{theta_from_ratio, unit_ball_volume};
use crate::error::{Error, Result};
use crate::qcore::io::content_lines;
use crate::qcore::linalg;
use crate::qcore::rat::{big, fmt_rat, parse_rat, rat, Rat};
use crate::qcore::{SubspaceT, SymMat};

use poly::{count_roots, isolate_roots, Poly};

fn keyed<'a>(it: &mut impl Iterator<Item = &'a &'a str>, key: &str) -> Result<Vec<&'a str>> {
    let line = it.next().ok_or_else(|| Error::Parse(format!("missing `{key}` line")))?;
    let mut words = line.split_whitespace();
    if words.next() != Some(key) {
        return Err(Error::Parse(format!("expected `{key}`, found {line:?}")));
    }
    Ok(words.collect())
}

/// Element of `K = Q[x]/(f)` in power-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement(Vec<Rat>);

impl FieldElement {
    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &FieldElement) -> FieldElement {
        FieldElement(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, s: &Rat) -> FieldElement {
        FieldElement(self.0.iter().map(|a| a * s).collect())
    }

    fn poly(&self) -> Poly {
        Poly::new(self.0.clone())
    }
}

#[derive(Clone, Debug)]
pub struct NumberField {
    f: Poly,
    n: usize,
    basis: Vec<FieldElement>,
    disc: BigInt,
    sturm: Vec<Poly>,
    roots: Vec<(Rat, Rat)>,
}

impl NumberField {
    /// Validates `f` (monic, squarefree, totally real) and the integral basis
    /// (independent, closed under multiplication, discriminant `disc`).
    pub fn new(coeffs_leading_first: &[i64], basis: Vec<Vec<Rat>>, disc: BigInt) -> Result<Self> {
        let bad = |m: &str| Error::InvalidField(m.to_string());
        if coeffs_leading_first.first() != Some(&1) || coeffs_leading_first.len() < 2 {
            return Err(bad("polynomial must be monic of degree at least 1"));
        }
        let low_first: Vec<i64> = coeffs_leading_first.iter().rev().copied().collect();
        let f = Poly::from_i64(&low_first);
        let n = low_first.len() - 1;
        if f.gcd(&f.derivative()).degree() > 0 {
            return Err(bad("polynomial is not squarefree"));
        }
        let roots = isolate_roots(&f);
        if roots.len() != n {
            return Err(Error::InvalidField(format!("{} of {} roots are real", roots.len(), n)));
        }
        if basis.len() != n || basis.iter().any(|b| b.len() != n) {
            return Err(bad("basis must have n elements of n coordinates"));
        }
        let binv = linalg::inverse(&basis).ok_or_else(|| bad("basis is linearly dependent"))?;
        let k = NumberField { sturm: f.sturm(), f, n, basis: basis.into_iter().map(FieldElement).collect(), disc, roots };
        for i in 0..n {
            for j in 0..=i {
                let p = k.mul(&k.basis[i], &k.basis[j]);
                let c: Vec<Rat> = (0..n).map(|l| (0..n).map(|m| &p.0[m] * &binv[m][l]).sum()).collect();
                if c.iter().any(|x| !x.is_integer()) {
                    return Err(Error::InvalidField(format!("basis not closed under multiplication (ω{} ω{})", j + 1, i + 1)));
                }
            }
        }
        let det = k.trace_form(&k.one())?.det();
        if det != big(&k.disc) {
            return Err(Error::InvalidField(format!("trace form determinant {} differs from d_K = {}", fmt_rat(&det), k.disc)));
        }
        Ok(k)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let perr = Error::Parse;
        let lines = content_lines(text);
        let mut it = lines.iter();
        let coeffs = keyed(&mut it, "poly")?
            .iter()
            .map(|w| w.parse::<i64>().map_err(|_| perr(format!("bad coefficient {w:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let n: usize = keyed(&mut it, "basis")?.first().and_then(|w| w.parse().ok()).ok_or_else(|| perr("bad basis count".into()))?;
        let mut basis = Vec::with_capacity(n);
        for _ in 0..n {
            let line = it.next().ok_or_else(|| perr("missing basis row".into()))?;
            basis.push(line.split_whitespace().map(parse_rat).collect::<Result<Vec<_>>>()?);
        }
        let disc: BigInt = keyed(&mut it, "disc")?.first().and_then(|w| w.parse().ok()).ok_or_else(|| perr("bad discriminant".into()))?;
        if it.next().is_some() {
            return Err(perr("trailing content after `disc`".into()));
        }
        NumberField::new(&coeffs, basis, disc)
    }

    pub fn format(&self) -> String {
        let mut s = String::from("poly");
        for c in self.f.coeffs().iter().rev() {
            write!(s, " {}", fmt_rat(c)).expect("string write");
        }
        writeln!(s, "\nbasis {}", self.n).expect("string write");
        for b in &self.basis {
            let row: Vec<String> = b.0.iter().map(fmt_rat).collect();
            writeln!(s, "{}", row.join(" ")).expect("string write");
        }
        writeln!(s, "disc {}", self.disc).expect("string write");
        s
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn polynomial(&self) -> &Poly {
        &self.f
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn integral_basis(&self) -> &[FieldElement] {
        &self.basis
    }

    /// Isolating intervals `(a, b]` of the real embeddings.
    pub fn embeddings(&self) -> &[(Rat, Rat)] {
        &self.roots
    }

    /// Element from power-basis coordinates (padded or checked to length `n`).
    pub fn element(&self, coords: &[Rat]) -> Result<FieldElement> {
        if coords.len() > self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: coords.len() });
        }
        let mut c = coords.to_vec();
        c.resize(self.n, Rat::zero());
        Ok(FieldElement(c))
    }

    /// `Σ c_i ω_i`.
    pub fn from_basis(&self, c: &[Rat]) -> Result<FieldElement> {
        if c.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: c.len() });
        }
        Ok(self.basis.iter().zip(c).fold(self.zero(), |acc, (b, x)| acc.add(&b.scale(x))))
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(vec![Rat::zero(); self.n])
    }

    pub fn one(&self) -> FieldElement {
        let mut c = vec![Rat::zero(); self.n];
        c[0] = Rat::one();
        FieldElement(c)
    }

    /// The class of `x` (zero when `n = 1`).
    pub fn generator(&self) -> FieldElement {
        self.element(&[Rat::zero(), Rat::one()]).unwrap_or_else(|_| self.element(&[-self.f.coeffs()[0].clone()]).expect("n = 1"))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = a.poly().mul(&b.poly()).rem(&self.f);
        let mut c = p.coeffs().to_vec();
        c.resize(self.n, Rat::zero());
        FieldElement(c)
    }

    /// `Tr_{K/Q}(a)`, the trace of multiplication by `a` on the power basis.
    pub fn trace(&self, a: &FieldElement) -> Rat {
        let mut xi = self.one();
        let x = self.generator();
        let mut t = Rat::zero();
        for i in 0..self.n {
            t += &self.mul(a, &xi).0[i];
            xi = self.mul(&xi, &x);
        }
        t
    }

    /// Gram matrix `Tr(α ω_i ω_j)` over the integral basis.
    pub fn trace_form(&self, alpha: &FieldElement) -> Result<SymMat> {
        if alpha.is_zero() {
            return Err(Error::ZeroElement);
        }
        let n = self.n;
        let mut m = SymMat::zeros(n);
        for i in 0..n {
            let ai = self.mul(alpha, &self.basis[i]);
            for j in 0..=i {
                m.set(i, j, self.trace(&self.mul(&ai, &self.basis[j])));
            }
        }
        Ok(m)
    }

    /// Whether `α` is positive under every real embedding. Each root
    /// interval of `f` is refined until `α` has no root on it, then `α` is
    /// evaluated at the right endpoint.
    pub fn is_totally_positive(&self, alpha: &FieldElement) -> bool {
        let g = alpha.poly();
        if g.degree() <= 0 {
            return g.lead().is_positive();
        }
        if self.f.gcd(&g).degree() > 0 {
            return false;
        }
        let g_sturm = g.sturm();
        self.roots.iter().all(|(a, b)| {
            let (mut a, mut b) = (a.clone(), b.clone());
            while count_roots(&g_sturm, &a, &b) > 0 {
                (a, b) = poly::bisect(&self.sturm, &a, &b);
            }
            g.eval(&b).is_positive()
        })
    }

    /// `α_k = c_k + ω_k` with the least integer `c_k ≥ 0` making it totally
    /// positive.
    pub fn field_alphas(&self) -> Result<Vec<FieldElement>> {
        // |σ(ω)| ≤ Σ |c_i| B^i with B the root bound; one past that suffices.
        let bound = self.f.root_bound();
        let limit = self
            .basis
            .iter()
            .map(|b| b.0.iter().enumerate().map(|(i, c)| c.abs() * num_traits::pow(bound.clone(), i)).sum::<Rat>())
            .max()
            .unwrap_or_else(Rat::one)
            + Rat::one();
        self.basis
            .iter()
            .map(|w| {
                let mut c = Rat::zero();
                loop {
                    let a = w.add(&self.one().scale(&c));
                    if !a.is_zero() && self.is_totally_positive(&a) {
                        return Ok(a);
                    }
                    if c > limit {
                        return Err(Error::InvalidField("no totally positive shift found".into()));
                    }
                    c += Rat::one();
                }
            })
            .collect()
    }

    /// The subspace spanned by the trace forms of the `α_k`.
    pub fn field_subspace(&self) -> Result<SubspaceT> {
        let mats = self.field_alphas()?.iter().map(|a| self.trace_form(a)).collect::<Result<Vec<_>>>()?;
        SubspaceT::new(mats)
    }

    /// `n^n / d_K`, the square of `t(K)/κ_n`.
    pub fn t_ratio(&self) -> Rat {
        Rat::new(num_traits::pow(BigInt::from(self.n), self.n), self.disc.clone())
    }

    /// `t(K) = sqrt(n^n / d_K) κ_n`.
    pub fn t_value(&self) -> f64 {
        self.t_ratio().to_f64().unwrap_or(f64::NAN).sqrt() * unit_ball_volume(self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThinVerdict {
    Thin,
    WeaklyThin,
    NotThin,
    Inconclusive,
}

impl fmt::Display for ThinVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThinVerdict::Thin => "thin",
            ThinVerdict::WeaklyThin => "weakly_thin",
            ThinVerdict::NotThin => "not_thin",
            ThinVerdict::Inconclusive => "inconclusive",
        })
    }
}

/// Relative slack for accepting equality `Θ(K) = t(K)`: the upper bound must
/// hit `t(K)` exactly, the lower bound within this factor.
pub fn weak_tolerance() -> Rat {
    rat(1, 1_000_000)
}

#[derive(Clone, Debug)]
pub struct ThinClassification {
    pub verdict: ThinVerdict,
    pub degree: usize,
    pub disc: BigInt,
    /// `n^n / d_K`.
    pub t_ratio: Rat,
    pub t_value: f64,
    /// Certified bounds on `μ^n / det` over the trace-form lattices.
    pub lower: Rat,
    pub upper: Rat,
    pub theta: (f64, f64),
    pub cones: usize,
    pub complete: bool,
}

/// Compares the certified `Θ_T` bounds with `t(K)` in the squared domain,
/// where `κ_n` cancels and the comparison is exact.
pub fn classify_thin(k: &NumberField, theta: &ThetaT) -> Result<ThinClassification> {
    if theta.dim != k.n {
        return Err(Error::DimensionMismatch { expected: k.n, found: theta.dim });
    }
    let tau = k.t_ratio();
    let complete = !theta.conditional;
    let verdict = if theta.upper < tau {
        ThinVerdict::Thin
    } else if !complete {
        ThinVerdict::Inconclusive
    } else if theta.lower > tau {
        ThinVerdict::NotThin
    } else if theta.upper == tau && theta.lower >= &tau * (Rat::one() - weak_tolerance()) {
        ThinVerdict::WeaklyThin
    } else {
        ThinVerdict::Inconclusive
    };
    Ok(ThinClassification {
        verdict,
        degree: k.n,
        disc: k.disc.clone(),
        t_value: theta_from_ratio(&tau, k.n),
        t_ratio: tau,
        lower: theta.lower.clone(),
        upper: theta.upper.clone(),
        theta: theta.theta_interval(),
        cones: theta.certificates.len(),
        complete,
    })
}

pub fn format_classification(c: &ThinClassification) -> String {
    format!(
        "verdict {}\ndegree {}\ndisc {}\nt_ratio {}\nt {:.6}\ncones {}\nstatus {}\nratio_lower {}\nratio_upper {}\ntheta {:.10} {:.10}\n",
        c.verdict,
        c.degree,
        c.disc,
        fmt_rat(&c.t_ratio),
        c.t_value,
        c.cones,
        if c.complete { "complete" } else { "partial" },
        fmt_rat(&c.lower),
        fmt_rat(&c.upper),
        c.theta.0,
        c.theta.1
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::rat::int_vec;

    fn quad(c: i64, basis: &[&[Rat]], d: i64) -> NumberField {
        NumberField::new(&[1, 0, c], basis.iter().map(|b| b.to_vec()).collect(), BigInt::from(d)).unwrap()
    }

    #[test]
    fn trace_forms() {
        let k = NumberField::new(&[1, -1, -1], vec![int_vec(&[1, 0]), int_vec(&[0, 1])], BigInt::from(5)).unwrap();
        assert_eq!(k.trace_form(&k.one()).unwrap(), SymMat::from_i64(&[&[2, 1], &[1, 3]]));
        let x = k.generator();
        assert_eq!(k.trace_form(&x).unwrap(), SymMat::from_i64(&[&[1, 3], &[3, 4]]));
        assert!(k.is_totally_positive(&k.element(&int_vec(&[3, -1])).unwrap()));
        assert!(!k.is_totally_positive(&x));
        assert_eq!(k.trace_form(&k.zero()), Err(Error::ZeroElement));

        let k2 = quad(-2, &[&int_vec(&[1, 0]), &int_vec(&[0, 1])], 8);
        assert_eq!(k2.trace_form(&k2.one()).unwrap(), SymMat::from_i64(&[&[2, 0], &[0, 4]]));
        let x2 = k2.generator();
        let tx = k2.trace_form(&x2).unwrap();
        assert_eq!(tx, SymMat::from_i64(&[&[0, 4], &[4, 0]]));
        assert!(!tx.is_positive_definite());
        assert!(!k2.is_totally_positive(&x2));
    }

    #[test]
    fn validation() {
        let pb = vec![int_vec(&[1, 0]), int_vec(&[0, 1])];
        assert!(NumberField::new(&[1, 0, 1], pb.clone(), BigInt::from(-4)).is_err());
        assert!(NumberField::new(&[1, -2, 1], pb.clone(), BigInt::from(0)).is_err());
        assert!(NumberField::new(&[2, 0, -1], pb.clone(), BigInt::from(8)).is_err());
        assert!(NumberField::new(&[1, 0, -5], pb.clone(), BigInt::from(5)).is_err());
        let half = vec![int_vec(&[1, 0]), vec![rat(1, 2), rat(1, 2)]];
        assert!(NumberField::new(&[1, 0, -5], half, BigInt::from(5)).is_ok());
        let bad = vec![int_vec(&[1, 0]), vec![rat(0, 1), rat(1, 2)]];
        assert!(NumberField::new(&[1, 0, -5], bad, BigInt::from(5)).is_err());
    }

    #[test]
    fn field_subspace_q5() {
        let k = NumberField::new(&[1, -1, -1], vec![int_vec(&[1, 0]), int_vec(&[0, 1])], BigInt::from(5)).unwrap();
        let alphas = k.field_alphas().unwrap();
        assert_eq!(alphas[0], k.one());
        assert_eq!(alphas[1], k.element(&int_vec(&[1, 1])).unwrap());
        let t = k.field_subspace().unwrap();
        let expected = SubspaceT::new(vec![SymMat::from_i64(&[&[2, 1], &[1, 3]]), SymMat::from_i64(&[&[1, 3], &[3, 4]])]).unwrap();
        for b in expected.basis() {
            assert!(t.contains(b));
        }
        assert_eq!(t.dim(), 2);
    }

    #[test]
    fn t_values() {
        let k = quad(-5, &[&int_vec(&[1, 0]), &[rat(1, 2), rat(1, 2)]], 5);
        assert_eq!(k.t_ratio(), rat(4, 5));
        assert!((k.t_value() - 2.8099).abs() < 5e-5);
    }
}

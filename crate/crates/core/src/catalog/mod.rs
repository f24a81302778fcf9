//! Named lattices and forms: root lattices, Coxeter lattices `A_d^r`, the
//! `E_7` pair, and lamination of a family of forms.

use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::qcore::linalg;
use crate::qcore::rat::{dot, int, rat, Rat};
use crate::qcore::{QForm, SubspaceT, SymMat};

/// A lattice given by independent basis vectors in `Q^m`, with Gram `BᵗB`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    pub vectors: Vec<Vec<Rat>>,
    pub gram: QForm,
}

impl LatticeBasis {
    pub fn new(vectors: Vec<Vec<Rat>>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::ZeroDimensional);
        }
        if linalg::rank(&vectors) != vectors.len() {
            return Err(Error::AffinelyDependent);
        }
        let rows: Vec<Vec<Rat>> = vectors.iter().map(|a| vectors.iter().map(|b| dot(a, b)).collect()).collect();
        let gram = QForm::positive_definite(SymMat::from_rows(&rows)?)?;
        Ok(LatticeBasis { vectors, gram })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Basis of the Z-span of integer vectors, by row echelon reduction with
/// extended gcd steps.
pub fn integer_span_basis(gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i128>> = gens.iter().map(|g| g.iter().map(|&x| x as i128).collect()).collect();
    let m = rows.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut start = 0;
    for col in 0..m {
        if start >= rows.len() {
            break;
        }
        loop {
            // Row with the smallest nonzero entry in this column becomes the pivot.
            let Some(p) = (start..rows.len()).filter(|&i| rows[i][col] != 0).min_by_key(|&i| rows[i][col].abs()) else {
                break;
            };
            rows.swap(start, p);
            let mut done = true;
            for i in start + 1..rows.len() {
                let q = Integer::div_floor(&rows[i][col], &rows[start][col]);
                if q != 0 {
                    let pivot = rows[start].clone();
                    for (x, y) in rows[i].iter_mut().zip(&pivot) {
                        *x -= q * y;
                    }
                }
                done &= rows[i][col] == 0;
            }
            if done {
                out.push(rows[start].iter().map(|&x| x as i64).collect());
                start += 1;
                break;
            }
        }
    }
    out
}

/// The Coxeter lattice `A_d^r`: `A_d` glued with
/// `(1/r) Σ e_i − (e_1 + … + e_{(d+1)/r})`, in coordinates of `Q^{d+1}`.
pub fn coxeter_lattice(d: usize, r: usize) -> Result<LatticeBasis> {
    if d == 0 {
        return Err(Error::ZeroDimensional);
    }
    if r == 0 || (d + 1) % r != 0 {
        return Err(Error::NotDivisor(r, d + 1));
    }
    let ri = r as i64;
    let s = (d + 1) / r;
    let mut gens: Vec<Vec<i64>> = (0..d)
        .map(|i| {
            let mut v = vec![0; d + 1];
            v[i] = ri;
            v[i + 1] = -ri;
            v
        })
        .collect();
    gens.push((0..=d).map(|i| if i < s { 1 - ri } else { 1 }).collect());
    let basis = integer_span_basis(&gens);
    let scale = rat(1, ri);
    let lb = LatticeBasis::new(basis.iter().map(|v| v.iter().map(|&x| int(x) * &scale).collect()).collect())?;
    if lb.gram.det() != rat(d as i64 + 1, ri * ri) {
        return Err(Error::InconsistentSubdivision("Coxeter lattice has the wrong index".into()));
    }
    Ok(lb)
}

/// Gram of `A_d^r` scaled by `r²`, hence integral.
pub fn coxeter_form(d: usize, r: usize) -> Result<QForm> {
    let lb = coxeter_lattice(d, r)?;
    let r2 = int((r * r) as i64);
    Ok(lb.gram.scale(&r2))
}

pub fn root_lattice_a(d: usize) -> Result<QForm> {
    coxeter_form(d, 1)
}

/// `A_d^*` as `A_d^{d+1}`.
pub fn dual_root_lattice_a(d: usize) -> Result<QForm> {
    coxeter_form(d, d + 1)
}

pub fn root_lattice_d(d: usize) -> Result<QForm> {
    if d < 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: d });
    }
    let mut gens: Vec<Vec<i64>> = (0..d - 1)
        .map(|i| {
            let mut v = vec![0; d];
            v[i] = 1;
            v[i + 1] = -1;
            v
        })
        .collect();
    let mut last = vec![0; d];
    last[d - 2] = 1;
    last[d - 1] = 1;
    gens.push(last);
    let lb = LatticeBasis::new(gens.iter().map(|v| v.iter().map(|&x| int(x)).collect()).collect())?;
    Ok(lb.gram)
}

/// Cartan matrix of `E_7`: the chain 1–3–4–5–6–7 with node 2 on node 4.
pub fn e7() -> QForm {
    let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 3)];
    let mut m = SymMat::zeros(7);
    for i in 0..7 {
        m.set(i, i, int(2));
    }
    for (i, j) in edges {
        m.set(i.max(j), i.min(j), int(-1));
    }
    QForm::positive_definite(m).expect("Cartan matrix is positive definite")
}

/// Gram of `E_7^*` (the inverse Cartan matrix), scaled by 2 to be integral.
pub fn e7_dual() -> QForm {
    let inv = linalg::inverse(&e7().matrix().rows()).expect("invertible");
    let scaled: Vec<Vec<Rat>> = inv.iter().map(|r| r.iter().map(|x| x * int(2)).collect()).collect();
    QForm::positive_definite(SymMat::from_rows(&scaled).expect("symmetric")).expect("positive definite")
}

/// Forms by name: `I<d>`, `A<d>`, `A<d>*`, `A<d>^<r>`, `D<d>`, `E7`, `E7*`.
pub fn named_form(name: &str) -> Result<QForm> {
    let bad = || Error::Parse(format!("unknown lattice name {name:?}"));
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    match name {
        "E7" => return Ok(e7()),
        "E7*" => return Ok(e7_dual()),
        _ => {}
    }
    let (head, rest) = name.split_at(1.min(name.len()));
    match head {
        "I" | "Z" => Ok(QForm::new(SymMat::identity(num(rest)?))),
        "D" => root_lattice_d(num(rest)?),
        "A" => {
            if let Some(d) = rest.strip_suffix('*') {
                dual_root_lattice_a(num(d)?)
            } else if let Some((d, r)) = rest.split_once('^') {
                coxeter_form(num(d)?, num(r)?)
            } else {
                root_lattice_a(num(rest)?)
            }
        }
        _ => Err(bad()),
    }
}

pub const NAMES_HELP: &str = "I<d>, A<d>, A<d>*, A<d>^<r>, D<d>, E7, E7*";

/// `[[A, Ac], [cᵗA, cᵗAc]]`.
fn lift(a: &SymMat, c: &[Rat]) -> SymMat {
    let d = a.dim();
    let ac = a.mul_vec(c);
    let mut m = SymMat::zeros(d + 1);
    for i in 0..d {
        for j in 0..=i {
            m.set(i, j, a.get(i, j).clone());
        }
        m.set(d, i, ac[i].clone());
    }
    m.set(d, d, a.quad(c));
    m
}

/// Subspace of forms `[[Q, Qc], [cᵗQ, cᵗQc + λ²]]` over `Q ∈ T`: each basis
/// matrix lifted, plus the unit matrix carrying `λ²`.
pub fn laminate(q: &QForm, t: &SubspaceT, c: &[Rat]) -> Result<SubspaceT> {
    let d = t.ambient_dim();
    if q.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: q.dim() });
    }
    if c.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: c.len() });
    }
    if !t.contains(q.matrix()) {
        return Err(Error::NotInSubspace);
    }
    let mut basis: Vec<SymMat> = t.basis().iter().map(|a| lift(a, c)).collect();
    let mut e = SymMat::zeros(d + 1);
    e.set(d, d, Rat::one());
    basis.push(e);
    SubspaceT::new(basis)
}

/// The laminated form with layer height `λ²`.
pub fn laminated_form(q: &QForm, c: &[Rat], lambda_sq: &Rat) -> SymMat {
    let mut m = lift(q.matrix(), c);
    let d = q.dim();
    let x = m.get(d, d) + lambda_sq;
    m.set(d, d, x);
    m
}

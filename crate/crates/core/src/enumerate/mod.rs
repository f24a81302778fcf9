//! Search for a generic Delone subdivision in `T` and breadth-first
//! traversal of the flip graph up to `T`-equivalence.

use std::fmt::Write as _;

use log::{debug, info};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::delone::{delone_subdivision, DeloneSubdivision};
use crate::error::{Error, Result};
use crate::polycone::io::format_cone;
use crate::qcore::io::{format_subspace, format_symmat};
use crate::qcore::rat::{fmt_rat, int, Rat};
use crate::qcore::{QForm, SubspaceT, SymMat};
use crate::secondary::{flip, is_dead_end, secondary_cone, SecondaryCone};
use crate::symmetry::{t_equivalent_unchecked, ConeInvariants};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_cones: usize,
    pub seed: u64,
    pub max_tries: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { max_cones: 10_000, seed: 0, max_tries: 2_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Complete,
    HitLimit,
}

#[derive(Clone, Debug)]
pub struct Representative {
    pub cone: SecondaryCone,
    pub invariants: ConeInvariants,
    /// A form in the interior of the cone.
    pub sample: QForm,
}

/// Crossing of facet `facet` of representative `from` lands in the class of
/// representative `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub from: usize,
    pub facet: usize,
    pub to: usize,
}

#[derive(Clone, Debug)]
pub struct EnumerationReport {
    pub t: SubspaceT,
    pub representatives: Vec<Representative>,
    pub dead_ends: usize,
    pub crossings: Vec<Crossing>,
    pub status: Status,
}

/// The projection of the identity onto `T`, if it is positive definite.
fn projected_identity(t: &SubspaceT) -> Option<Vec<Rat>> {
    let x = t.project_coords(&SymMat::identity(t.ambient_dim()));
    t.form(&x).is_positive_definite().then_some(x)
}

/// A nonzero PSD form orthogonal to `T` proves that `T` has no PD form.
fn no_pd_certificate(t: &SubspaceT) -> bool {
    let id = SymMat::identity(t.ambient_dim());
    let y = id.sub(&t.project(&id).expect("same size")).expect("same size");
    !y.is_zero() && y.is_psd()
}

/// Random rational PD form in `T` whose Delone subdivision is `T`-generic.
pub fn find_generic(t: &SubspaceT, seed: u64, max_tries: usize) -> Result<(QForm, DeloneSubdivision)> {
    if t.dim() < 2 {
        return Err(Error::NotGeneric { rigidity: 0, dim: t.dim() });
    }
    if no_pd_certificate(t) {
        return Err(Error::NoDefiniteForm);
    }
    let k = t.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut base: Option<Vec<Rat>> = projected_identity(t);
    let mut found_pd = base.is_some();
    for attempt in 0..max_tries {
        let h = 2 + (attempt / 16) as i64;
        let noise: Vec<Rat> = (0..k).map(|_| int(rng.gen_range(-h..=h))).collect();
        let x: Vec<Rat> = match &base {
            Some(b) if attempt % 2 == 1 => {
                let s = int(4 * h);
                b.iter().zip(&noise).map(|(bi, n)| bi * &s + n).collect()
            }
            _ => noise,
        };
        if x.iter().all(Zero::is_zero) {
            continue;
        }
        let m = t.form(&x);
        if !m.is_positive_definite() {
            continue;
        }
        found_pd = true;
        base.get_or_insert_with(|| x.clone());
        let q = QForm::new(m);
        let d = delone_subdivision(&q)?;
        let sc = secondary_cone(&d, t)?;
        debug!("attempt {attempt}: rigidity {} of {}", sc.rigidity_index, k);
        if sc.is_generic() {
            return Ok((q, d));
        }
    }
    if found_pd {
        Err(Error::TriesExhausted(max_tries))
    } else {
        Err(Error::NoDefiniteForm)
    }
}

fn representative(cone: SecondaryCone) -> Result<Representative> {
    let invariants = ConeInvariants::of(&cone)?;
    let sample = QForm::new(cone.t.form(&cone.interior_point()?));
    Ok(Representative { cone, invariants, sample })
}

enum Outcome {
    DeadEnd,
    Neighbor(Box<Representative>),
}

/// Breadth-first enumeration of `T`-inequivalent `T`-generic cones.
pub fn enumerate_cones(t: &SubspaceT, limits: &EnumerationLimits) -> Result<EnumerationReport> {
    let (_, d0) = find_generic(t, limits.seed, limits.max_tries)?;
    let mut reps = vec![representative(secondary_cone(&d0, t)?)?];
    let mut frontier = vec![0usize];
    let mut dead_ends = 0;
    let mut crossings = Vec::new();
    let mut status = Status::Complete;
    while !frontier.is_empty() {
        let jobs: Vec<(usize, usize)> = frontier
            .iter()
            .flat_map(|&r| (0..reps[r].cone.cone.inequalities.len()).map(move |f| (r, f)))
            .collect();
        let outcomes: Vec<Result<Outcome>> = jobs
            .par_iter()
            .map(|&(r, f)| {
                let rep = &reps[r];
                if is_dead_end(&rep.cone, f)? {
                    return Ok(Outcome::DeadEnd);
                }
                let d = flip(&rep.cone, f, &rep.sample)?;
                let sc = secondary_cone(&d, t)?;
                if !sc.is_generic() {
                    return Err(Error::NotGeneric { rigidity: sc.rigidity_index, dim: t.dim() });
                }
                Ok(Outcome::Neighbor(Box::new(representative(sc)?)))
            })
            .collect();
        let mut next = Vec::new();
        for (&(r, f), out) in jobs.iter().zip(outcomes) {
            match out? {
                Outcome::DeadEnd => dead_ends += 1,
                Outcome::Neighbor(n) => {
                    let same: Vec<usize> = (0..reps.len()).filter(|&i| reps[i].invariants == n.invariants).collect();
                    let hit = same
                        .par_iter()
                        .map(|&i| t_equivalent_unchecked(&reps[i].cone, &n.cone).map(|g| g.map(|_| i)))
                        .collect::<Result<Vec<_>>>()?
                        .into_iter()
                        .flatten()
                        .next();
                    match hit {
                        Some(i) => crossings.push(Crossing { from: r, facet: f, to: i }),
                        None if reps.len() >= limits.max_cones => status = Status::HitLimit,
                        None => {
                            let i = reps.len();
                            info!("cone {i}: {} rays, {} facets", n.cone.cone.rays.len(), n.cone.cone.inequalities.len());
                            reps.push(*n);
                            crossings.push(Crossing { from: r, facet: f, to: i });
                            next.push(i);
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(EnumerationReport { t: t.clone(), representatives: reps, dead_ends, crossings, status })
}

impl EnumerationReport {
    pub fn is_complete(&self) -> bool {
        self.status == Status::Complete
    }
}

pub fn format_report(r: &EnumerationReport) -> String {
    let mut s = String::new();
    let status = match r.status {
        Status::Complete => "complete",
        Status::HitLimit => "partial",
    };
    let _ = writeln!(s, "status {status}");
    let _ = writeln!(s, "representatives {}", r.representatives.len());
    let _ = writeln!(s, "dead_ends {}", r.dead_ends);
    let _ = writeln!(s, "crossings {}", r.crossings.len());
    s.push_str(&format_subspace(&r.t));
    for (i, rep) in r.representatives.iter().enumerate() {
        let v = &rep.invariants;
        let _ = writeln!(s, "representative {i}");
        let _ = writeln!(
            s,
            "invariants rigidity {} rays {} facets {} det {} min {} kissing {}",
            v.rigidity,
            v.rays,
            v.facets,
            fmt_rat(&v.det),
            fmt_rat(&v.min),
            v.kissing
        );
        let _ = writeln!(s, "sample");
        s.push_str(&format_symmat(rep.sample.matrix()));
        let _ = writeln!(s, "cone");
        s.push_str(&format_cone(&rep.cone.cone));
    }
    for c in &r.crossings {
        let _ = writeln!(s, "crossing {} facet {} -> {}", c.from, c.facet, c.to);
    }
    s
}

//! JSON mirrors of the text reports. Rationals are strings `p/q`.

use ltype::covopt::{BoundCertificate, ThetaT};
use ltype::delone::DeloneSubdivision;
use ltype::enumerate::{EnumerationReport, Status};
use ltype::numberfield::ThinClassification;
use ltype::polycone::PolyCone;
use ltype::qcore::rat::fmt_rat;
use ltype::secondary::SecondaryCone;
use ltype::{Rat, SubspaceT, SymMat, Unimodular};
use serde_json::{json, Value};

pub fn rat(r: &Rat) -> Value {
    Value::String(fmt_rat(r))
}

pub fn vec(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn symmat(m: &SymMat) -> Value {
    Value::Array(m.rows().iter().map(|r| vec(r)).collect())
}

pub fn unimodular(u: &Unimodular) -> Value {
    let d = u.dim();
    Value::Array((0..d).map(|i| json!((0..d).map(|j| u.get(i, j)).collect::<Vec<_>>())).collect())
}

pub fn subspace(t: &SubspaceT) -> Value {
    json!({ "ambient": t.ambient_dim(), "basis": t.basis().iter().map(symmat).collect::<Vec<_>>() })
}

pub fn subdivision(s: &DeloneSubdivision) -> Value {
    json!({
        "dim": s.dim(),
        "cells": s.cells().iter().map(|c| json!({
            "vertices": c.vertices,
            "center": vec(&c.center),
            "radius_sq": rat(&c.radius_sq),
        })).collect::<Vec<_>>(),
        "facets": s.facets().iter().map(|f| json!({
            "vertices": f.vertices,
            "cells": f.cells.iter().map(|(i, t)| json!({ "cell": i, "translation": t })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "triangulation": s.is_triangulation(),
        "mu": rat(&s.inhomogeneous_minimum()),
    })
}

fn funs(fs: &[ltype::polycone::LinFun]) -> Value {
    Value::Array(fs.iter().map(|f| json!({ "coeffs": vec(&f.coeffs), "tag": f.tag })).collect())
}

pub fn cone(c: &PolyCone) -> Value {
    json!({
        "ambient": c.ambient(),
        "equalities": funs(&c.equalities),
        "inequalities": funs(&c.inequalities),
        "rays": c.rays.iter().map(|r| vec(r)).collect::<Vec<_>>(),
        "lineality": c.lineality.iter().map(|r| vec(r)).collect::<Vec<_>>(),
    })
}

pub fn secondary(sc: &SecondaryCone) -> Value {
    json!({
        "rigidity": sc.rigidity_index,
        "generic": sc.is_generic(),
        "subspace": subspace(&sc.t),
        "cone": cone(&sc.cone),
        "facets": sc.facet_records.iter().map(|f| json!({
            "functional": vec(&f.functional),
            "normal": symmat(&f.normal),
            "delone_facets": f.delone_facets,
        })).collect::<Vec<_>>(),
    })
}

pub fn report(r: &EnumerationReport) -> Value {
    json!({
        "status": if r.status == Status::Complete { "complete" } else { "partial" },
        "subspace": subspace(&r.t),
        "dead_ends": r.dead_ends,
        "representatives": r.representatives.iter().map(|rep| {
            let v = &rep.invariants;
            json!({
                "invariants": {
                    "rigidity": v.rigidity, "rays": v.rays, "facets": v.facets,
                    "det": rat(&v.det), "min": rat(&v.min), "kissing": v.kissing,
                },
                "sample": symmat(rep.sample.matrix()),
                "cone": cone(&rep.cone.cone),
            })
        }).collect::<Vec<_>>(),
        "crossings": r.crossings.iter().map(|c| json!({ "from": c.from, "facet": c.facet, "to": c.to })).collect::<Vec<_>>(),
    })
}

pub fn certificate(c: &BoundCertificate) -> Value {
    let (lo, hi) = c.theta_interval();
    json!({
        "cone": c.cone_id,
        "subspace": subspace(&c.problem.t),
        "simplices": c.problem.simplices,
        "linear": c.problem.linear.iter().map(|f| vec(f)).collect::<Vec<_>>(),
        "q_star": symmat(&c.q_star),
        "upper": rat(&c.upper),
        "lower": rat(&c.lower),
        "dual": c.dual.as_ref().map(|d| json!({
            "w": symmat(&d.w),
            "z_blocks": d.z_blocks.iter().map(symmat).collect::<Vec<_>>(),
            "z_lin": vec(&d.z_lin),
        })),
        "theta": [lo, hi],
        "gap": c.gap,
        "newton_steps": c.newton_steps,
    })
}

pub fn theta_t(th: &ThetaT) -> Value {
    let (lo, hi) = th.theta_interval();
    json!({
        "dim": th.dim,
        "lower": rat(&th.lower),
        "upper": rat(&th.upper),
        "theta": [lo, hi],
        "conditional": th.conditional,
        "certificates": th.certificates.iter().map(certificate).collect::<Vec<_>>(),
    })
}

pub fn classification(c: &ThinClassification) -> Value {
    json!({
        "verdict": c.verdict.to_string(),
        "degree": c.degree,
        "disc": c.disc.to_string(),
        "t_ratio": rat(&c.t_ratio),
        "t": c.t_value,
        "ratio_lower": rat(&c.lower),
        "ratio_upper": rat(&c.upper),
        "theta": [c.theta.0, c.theta.1],
        "cones": c.cones,
        "complete": c.complete,
    })
}

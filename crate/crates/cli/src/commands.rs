//! One function per subcommand, each producing the text report and its
//! JSON mirror.

use std::fmt::Write as _;
use std::path::Path;

use ltype::catalog::{named_form, NAMES_HELP};
use ltype::covopt::cert::{format_certificate, format_theta_t, parse_certificates, verify_certificate};
use ltype::covopt::{optimize_cone, theta_t, ThetaT};
use ltype::delone::io::format_subdivision;
use ltype::delone::{covering_density, delone_subdivision};
use ltype::enumerate::{enumerate_cones, format_report};
use ltype::numberfield::{classify_thin, fixtures, format_classification, NumberField};
use ltype::polycone::io::format_cone;
use ltype::qcore::io::{format_symmat, parse_subspace, parse_symmat};
use ltype::qcore::rat::fmt_rat;
use ltype::secondary::{flip, is_dead_end, secondary_cone, SecondaryCone};
use ltype::symmetry::{automorphism_group, isometry};
use ltype::{QForm, SubspaceT};
use serde_json::{json, Value};

use crate::config::Settings;
use crate::json;
use crate::{Command, GlobalOpts};

pub struct Output {
    pub text: String,
    pub json: Value,
    /// A limit was hit; the result is valid but incomplete.
    pub partial: bool,
    /// A verification step failed.
    pub failed: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, partial: false, failed: false }
    }
}

type Res<T> = Result<T, String>;

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn lib<T>(path: &Path, r: ltype::Result<T>) -> Res<T> {
    r.map_err(|e| format!("{}: {e}", path.display()))
}

fn load_form(path: &Path) -> Res<QForm> {
    let m = lib(path, parse_symmat(&read(path)?))?;
    lib(path, QForm::positive_definite(m))
}

fn load_subspace(path: Option<&Path>, d: usize) -> Res<SubspaceT> {
    match path {
        Some(p) => {
            let t = lib(p, parse_subspace(&read(p)?))?;
            if t.ambient_dim() != d {
                return Err(format!("{}: subspace lives in dimension {}, form in {d}", p.display(), t.ambient_dim()));
            }
            Ok(t)
        }
        None => Ok(SubspaceT::full(d)),
    }
}

fn cone_of(form: &Path, subspace: Option<&Path>) -> Res<SecondaryCone> {
    let q = load_form(form)?;
    let t = load_subspace(subspace, q.dim())?;
    if !t.contains(q.matrix()) {
        return Err(format!("{}: form does not lie in the subspace", form.display()));
    }
    let d = delone_subdivision(&q).map_err(|e| e.to_string())?;
    secondary_cone(&d, &t).map_err(|e| e.to_string())
}

fn cone_text(sc: &SecondaryCone) -> String {
    let mut s = format!("rigidity {}\ngeneric {}\n", sc.rigidity_index, sc.is_generic());
    s.push_str(&format_cone(&sc.cone));
    s
}

/// Verifies certificates when asked; returns failure lines.
fn check(th_certs: &[ltype::covopt::BoundCertificate], verify: bool) -> Vec<String> {
    if !verify {
        return Vec::new();
    }
    th_certs.iter().filter_map(|c| verify_certificate(c).err().map(|e| e.to_string())).collect()
}

fn verification_text(failures: &[String], verify: bool) -> String {
    if !verify {
        return String::new();
    }
    if failures.is_empty() {
        "verified all certificates\n".into()
    } else {
        failures.iter().map(|f| format!("verify FAIL {f}\n")).collect()
    }
}

pub fn dispatch(cmd: &Command, s: &Settings, g: &GlobalOpts) -> Res<Output> {
    match cmd {
        Command::Delone { form } => {
            let q = load_form(form)?;
            let d = delone_subdivision(&q).map_err(|e| e.to_string())?;
            let (ratio, theta) = covering_density(&q).map_err(|e| e.to_string())?;
            let mut text = format_subdivision(&d);
            let _ = writeln!(text, "ratio {}\ntheta {theta:.9}", fmt_rat(&ratio));
            let j = json!({ "subdivision": json::subdivision(&d), "ratio": json::rat(&ratio), "theta": theta });
            Ok(Output::ok(text, j))
        }
        Command::Cone { form, subspace } => {
            let sc = cone_of(form, subspace.as_deref())?;
            Ok(Output::ok(cone_text(&sc), json::secondary(&sc)))
        }
        Command::Flip { form, subspace, facet } => {
            let sc = cone_of(form, subspace.as_deref())?;
            let n = sc.cone.inequalities.len();
            if *facet >= n {
                return Err(format!("facet {facet} out of range (cone has {n})"));
            }
            if is_dead_end(&sc, *facet).map_err(|e| e.to_string())? {
                return Err(format!("facet {facet} is a dead end"));
            }
            let x = sc.interior_point().map_err(|e| e.to_string())?;
            let witness = QForm::new(sc.t.form(&x));
            let d = flip(&sc, *facet, &witness).map_err(|e| e.to_string())?;
            let next = secondary_cone(&d, &sc.t).map_err(|e| e.to_string())?;
            let sample = next.t.form(&next.interior_point().map_err(|e| e.to_string())?);
            let mut text = format!("flipped facet {facet}\n");
            text.push_str(&format_subdivision(&d));
            text.push_str("sample\n");
            text.push_str(&format_symmat(&sample));
            text.push_str(&cone_text(&next));
            let j = json!({ "facet": facet, "subdivision": json::subdivision(&d), "sample": json::symmat(&sample), "cone": json::secondary(&next) });
            Ok(Output::ok(text, j))
        }
        Command::Enumerate { subspace } => {
            let t = lib(subspace, parse_subspace(&read(subspace)?))?;
            let r = enumerate_cones(&t, &s.limits).map_err(|e| e.to_string())?;
            let mut out = Output::ok(format_report(&r), json::report(&r));
            out.partial = !r.is_complete();
            Ok(out)
        }
        Command::Optimize { subspace, form } => {
            if let Some(f) = form {
                let sc = cone_of(f, subspace.as_deref())?;
                let (_, c) = optimize_cone(&sc, &s.solver, 0).map_err(|e| e.to_string())?;
                let failures = check(std::slice::from_ref(&c), g.verify);
                let mut out = Output::ok(format_certificate(&c) + &verification_text(&failures, g.verify), json::certificate(&c));
                out.failed = !failures.is_empty();
                return Ok(out);
            }
            let p = subspace.as_ref().ok_or("optimize needs --subspace or --form")?;
            let t = lib(p, parse_subspace(&read(p)?))?;
            let r = enumerate_cones(&t, &s.limits).map_err(|e| e.to_string())?;
            let th = theta_t(&r, &s.solver).map_err(|e| e.to_string())?;
            Ok(theta_output(&th, String::new(), json!({}), g.verify))
        }
        Command::Thinfield { field, fixture } => {
            let k = match (field, fixture) {
                (Some(p), _) => lib(p, NumberField::parse(&read(p)?))?,
                (None, Some(d)) => fixtures::field(*d).ok_or_else(|| format!("no built-in field with d_K = {d}"))?.map_err(|e| e.to_string())?,
                (None, None) => return Err("thinfield needs --field or --fixture".into()),
            };
            let t = k.field_subspace().map_err(|e| e.to_string())?;
            let r = enumerate_cones(&t, &s.limits).map_err(|e| e.to_string())?;
            let th = theta_t(&r, &s.solver).map_err(|e| e.to_string())?;
            let c = classify_thin(&k, &th).map_err(|e| e.to_string())?;
            Ok(theta_output(&th, format_classification(&c), json::classification(&c), g.verify))
        }
        Command::Catalog { name, list } => match (name, list) {
            (Some(n), false) => {
                let q = named_form(n).map_err(|e| e.to_string())?;
                Ok(Output::ok(format_symmat(q.matrix()), json!({ "name": n, "form": json::symmat(q.matrix()) })))
            }
            _ => Ok(Output::ok(format!("names {NAMES_HELP}\n"), json!({ "names": NAMES_HELP }))),
        },
        Command::Autgroup { form } => {
            let q = load_form(form)?;
            let grp = automorphism_group(&q).map_err(|e| e.to_string())?;
            let order = grp.order().unwrap_or(0);
            let mut text = format!("order {order}\ngenerators {}\n", grp.generators.len());
            for u in &grp.generators {
                let d = u.dim();
                for i in 0..d {
                    let row: Vec<String> = (0..d).map(|j| u.get(i, j).to_string()).collect();
                    let _ = writeln!(text, "{}", row.join(" "));
                }
                text.push('\n');
            }
            let j = json!({ "order": order, "generators": grp.generators.iter().map(json::unimodular).collect::<Vec<_>>() });
            Ok(Output::ok(text, j))
        }
        Command::Isometry { form, other } => {
            let (a, b) = (load_form(form)?, load_form(other)?);
            let u = isometry(&a, &b).map_err(|e| e.to_string())?;
            let mut text = format!("isometric {}\n", u.is_some());
            if let Some(u) = &u {
                let d = u.dim();
                for i in 0..d {
                    let row: Vec<String> = (0..d).map(|j| u.get(i, j).to_string()).collect();
                    let _ = writeln!(text, "{}", row.join(" "));
                }
            }
            Ok(Output::ok(text, json!({ "isometric": u.is_some(), "matrix": u.as_ref().map(json::unimodular) })))
        }
        Command::Verify { certificates } => {
            let text = read(certificates)?;
            let start = text
                .lines()
                .position(|l| l.starts_with("theta_t") || l.trim() == "certificate")
                .ok_or_else(|| format!("{}: no certificates found", certificates.display()))?;
            let body: String = text.lines().skip(start).map(|l| format!("{l}\n")).collect();
            let certs = lib(certificates, parse_certificates(&body))?;
            let mut out = String::new();
            let mut rows = Vec::new();
            let mut failed = false;
            for c in &certs {
                let res = verify_certificate(c);
                failed |= res.is_err();
                match &res {
                    Ok(()) => {
                        let _ = writeln!(out, "cone {} PASS lower {} upper {}", c.cone_id, fmt_rat(&c.lower), fmt_rat(&c.upper));
                    }
                    Err(e) => {
                        let _ = writeln!(out, "cone {} FAIL {e}", c.cone_id);
                    }
                }
                rows.push(json!({ "cone": c.cone_id, "ok": res.is_ok(), "error": res.err().map(|e| e.to_string()) }));
            }
            let _ = writeln!(out, "verified {} of {}", certs.len() - rows.iter().filter(|r| r["ok"] == false).count(), certs.len());
            let mut o = Output::ok(out, Value::Array(rows));
            o.failed = failed;
            Ok(o)
        }
    }
}

fn theta_output(th: &ThetaT, head: String, head_json: Value, verify: bool) -> Output {
    let failures = check(&th.certificates, verify);
    let text = head + &verification_text(&failures, verify) + &format_theta_t(th);
    let j = json!({ "summary": head_json, "theta_t": json::theta_t(th), "verify_failures": failures });
    Output { text, json: j, partial: th.conditional, failed: !failures.is_empty() }
}

//! Certificate files: one `certificate … end` block per cone, optionally
//! preceded by a `theta_t` summary line. Every number is an exact rational
//! except the float `gap` and `theta` lines, which are informational.

use std::fmt::Write as _;

use num_traits::{One, Signed};

use super::{br_matrix, BoundCertificate, DualData, MaxDetProblem, ThetaT};
use crate::delone::delone_subdivision;
use crate::error::{Error, Result};
use crate::qcore::io::{content_lines, format_ivec, format_subspace, format_symmat, format_vec, parse_subspace, parse_symmat, parse_vec};
use crate::qcore::rat::{dot, fmt_rat, parse_rat, Rat};
use crate::qcore::{QForm, SymMat};

pub fn format_certificate(c: &BoundCertificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "certificate");
    let _ = writeln!(s, "cone {}", c.cone_id);
    s.push_str(&format_subspace(&c.problem.t));
    let _ = writeln!(s, "simplices {}", c.problem.simplices.len());
    for l in &c.problem.simplices {
        for v in l {
            let _ = writeln!(s, "{}", format_ivec(v));
        }
    }
    let _ = writeln!(s, "linear {}", c.problem.linear.len());
    for f in &c.problem.linear {
        let _ = writeln!(s, "{}", format_vec(f));
    }
    let _ = writeln!(s, "q_star");
    s.push_str(&format_symmat(&c.q_star));
    let _ = writeln!(s, "upper {}", fmt_rat(&c.upper));
    let _ = writeln!(s, "lower {}", fmt_rat(&c.lower));
    match &c.dual {
        Some(d) => {
            let _ = writeln!(s, "dual");
            let _ = writeln!(s, "w");
            s.push_str(&format_symmat(&d.w));
            for z in &d.z_blocks {
                let _ = writeln!(s, "z_block");
                s.push_str(&format_symmat(z));
            }
            let _ = writeln!(s, "z_lin {}", format_vec(&d.z_lin));
        }
        None => {
            let _ = writeln!(s, "no_dual");
        }
    }
    let (lo, hi) = c.theta_interval();
    let _ = writeln!(s, "theta {lo:.9} {hi:.9}");
    let _ = writeln!(s, "gap {:e}", c.gap);
    let _ = writeln!(s, "newton_steps {}", c.newton_steps);
    let _ = writeln!(s, "end");
    s
}

pub fn format_theta_t(th: &ThetaT) -> String {
    let (lo, hi) = th.theta_interval();
    let mut s = format!(
        "theta_t dim {} lower {} upper {} theta {lo:.9} {hi:.9} conditional {}\n",
        th.dim,
        fmt_rat(&th.lower),
        fmt_rat(&th.upper),
        th.conditional
    );
    for c in &th.certificates {
        s.push_str(&format_certificate(c));
    }
    s
}

struct Cursor<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn next(&mut self) -> Result<&'a str> {
        let l = self.lines.get(self.pos).copied().ok_or_else(|| Error::Parse("unexpected end of certificate".into()))?;
        self.pos += 1;
        Ok(l)
    }

    fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).copied()
    }

    fn keyed(&mut self, key: &str) -> Result<&'a str> {
        let l = self.next()?;
        let rest = l.strip_prefix(key).ok_or_else(|| Error::Parse(format!("expected `{key}`, found {l:?}")))?;
        Ok(rest.trim())
    }

    fn count(&mut self, key: &str) -> Result<usize> {
        self.keyed(key)?.parse().map_err(|_| Error::Parse(format!("bad count after `{key}`")))
    }

    fn symmat(&mut self) -> Result<SymMat> {
        let head = self.next()?;
        let d = head.strip_prefix("dim").and_then(|x| x.trim().parse::<usize>().ok()).ok_or_else(|| Error::Parse(format!("expected `dim`, found {head:?}")))?;
        let mut text = format!("{head}\n");
        for _ in 0..d {
            text.push_str(self.next()?);
            text.push('\n');
        }
        parse_symmat(&text)
    }

    fn subspace(&mut self) -> Result<crate::qcore::SubspaceT> {
        let head = self.next()?;
        let d: usize = head.strip_prefix("ambient").and_then(|x| x.trim().parse().ok()).ok_or_else(|| Error::Parse(format!("expected `ambient`, found {head:?}")))?;
        let kind = self.next()?;
        let mut text = format!("{head}\n{kind}\n");
        if kind != "full" {
            let k: usize = kind.strip_prefix("dim").and_then(|x| x.trim().parse().ok()).ok_or_else(|| Error::Parse(format!("bad subspace header {kind:?}")))?;
            for _ in 0..k * d {
                text.push_str(self.next()?);
                text.push('\n');
            }
        }
        parse_subspace(&text)
    }
}

fn parse_ivec(line: &str) -> Result<Vec<i64>> {
    line.split_whitespace().map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("bad integer {t:?}")))).collect()
}

fn parse_one(c: &mut Cursor) -> Result<BoundCertificate> {
    c.keyed("certificate")?;
    let cone_id = c.count("cone")?;
    let t = c.subspace()?;
    let d = t.ambient_dim();
    let ns = c.count("simplices")?;
    let mut simplices = Vec::with_capacity(ns);
    for _ in 0..ns {
        simplices.push((0..=d).map(|_| parse_ivec(c.next()?)).collect::<Result<Vec<_>>>()?);
    }
    let nl = c.count("linear")?;
    let linear = (0..nl).map(|_| parse_vec(c.next()?)).collect::<Result<Vec<_>>>()?;
    c.keyed("q_star")?;
    let q_star = c.symmat()?;
    let upper = parse_rat(c.keyed("upper")?)?;
    let lower = parse_rat(c.keyed("lower")?)?;
    let dual = if c.peek() == Some("dual") {
        c.next()?;
        c.keyed("w")?;
        let w = c.symmat()?;
        let mut z_blocks = Vec::new();
        while c.peek() == Some("z_block") {
            c.next()?;
            z_blocks.push(c.symmat()?);
        }
        let rest = c.keyed("z_lin")?;
        let z_lin = if rest.is_empty() { Vec::new() } else { parse_vec(rest)? };
        Some(DualData { w, z_blocks, z_lin })
    } else {
        c.keyed("no_dual")?;
        None
    };
    c.keyed("theta")?;
    let gap = c.keyed("gap")?.parse::<f64>().map_err(|_| Error::Parse("bad gap".into()))?;
    let newton_steps = c.count("newton_steps")?;
    c.keyed("end")?;
    let problem = MaxDetProblem { t, simplices, linear };
    Ok(BoundCertificate { cone_id, problem, q_star, upper, dual, lower, gap, newton_steps })
}

/// All certificate blocks in a file; a leading `theta_t` line is skipped.
pub fn parse_certificates(text: &str) -> Result<Vec<BoundCertificate>> {
    let lines = content_lines(text);
    let mut c = Cursor { lines, pos: 0 };
    if c.peek().is_some_and(|l| l.starts_with("theta_t")) {
        c.next()?;
    }
    let mut out = Vec::new();
    while c.peek().is_some() {
        out.push(parse_one(&mut c)?);
    }
    Ok(out)
}

/// Exactly re-checks a certificate: the dual point, and the upper bound via
/// a fresh Delone subdivision of `q_star`.
pub fn verify_certificate(c: &BoundCertificate) -> Result<()> {
    let fail = |m: String| Err(Error::Solver(format!("certificate for cone {}: {m}", c.cone_id)));
    let p = &c.problem;
    let x = p.t.coords(&c.q_star)?;
    if p.linear.iter().any(|f| dot(f, &x).is_negative()) {
        return fail("q_star violates a cone inequality".into());
    }
    for l in &p.simplices {
        if !br_matrix(&c.q_star, l)?.is_psd() {
            return fail(format!("circumradius of {l:?} exceeds 1"));
        }
    }
    let mu = delone_subdivision(&QForm::new(c.q_star.clone()))?.inhomogeneous_minimum();
    if !mu.is_one() {
        return fail(format!("μ(q_star) = {} instead of 1", fmt_rat(&mu)));
    }
    if Rat::one() / c.q_star.det() != c.upper {
        return fail("upper bound does not equal 1/det(q_star)".into());
    }
    match &c.dual {
        Some(d) => {
            if p.dual_lower_bound(d)? < c.lower {
                return fail("dual certificate implies a smaller lower bound".into());
            }
        }
        None if c.lower.is_positive() => return fail("positive lower bound without a dual point".into()),
        None => {}
    }
    if c.lower > c.upper {
        return fail("lower bound exceeds upper bound".into());
    }
    Ok(())
}

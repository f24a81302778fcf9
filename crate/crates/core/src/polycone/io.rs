//! Cone files: `ambient k`, then `equalities n`, `inequalities m`, `rays r`
//! and `lineality l` sections, each followed by that many rational rows.
//! An inequality row may carry a provenance tag after a `;`.

use std::fmt::Write as _;

use super::{LinFun, PolyCone};
use crate::error::{Error, Result};
use crate::qcore::io::{content_lines, format_vec, parse_vec};
use crate::qcore::rat::Rat;

pub fn format_cone(c: &PolyCone) -> String {
    let mut s = format!("ambient {}\n", c.ambient());
    let fun_rows = |s: &mut String, name: &str, fs: &[LinFun]| {
        let _ = writeln!(s, "{name} {}", fs.len());
        for f in fs {
            match &f.tag {
                Some(t) => {
                    let _ = writeln!(s, "{} ; {t}", format_vec(&f.coeffs));
                }
                None => {
                    let _ = writeln!(s, "{}", format_vec(&f.coeffs));
                }
            }
        }
    };
    fun_rows(&mut s, "equalities", &c.equalities);
    fun_rows(&mut s, "inequalities", &c.inequalities);
    let vec_rows = |s: &mut String, name: &str, vs: &[Vec<Rat>]| {
        let _ = writeln!(s, "{name} {}", vs.len());
        for v in vs {
            let _ = writeln!(s, "{}", format_vec(v));
        }
    };
    vec_rows(&mut s, "rays", &c.rays);
    vec_rows(&mut s, "lineality", &c.lineality);
    s
}

pub fn parse_cone(text: &str) -> Result<PolyCone> {
    let lines = content_lines(text);
    let mut it = lines.iter().peekable();
    let head = it.next().ok_or_else(|| Error::Parse("empty cone file".into()))?;
    let k = section(head, "ambient")?;
    let mut eqs = Vec::new();
    let mut ineqs = Vec::new();
    let mut rays = Vec::new();
    let mut lin = Vec::new();
    let mut have_v = false;
    while let Some(line) = it.next() {
        let (name, n) = line
            .split_once(' ')
            .and_then(|(a, b)| b.trim().parse::<usize>().ok().map(|n| (a, n)))
            .ok_or_else(|| Error::Parse(format!("expected a section header, found {line:?}")))?;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let row = it.next().ok_or_else(|| Error::Parse(format!("section {name} is truncated")))?;
            let (vals, tag) = match row.split_once(';') {
                Some((v, t)) => (v, Some(t.trim().to_string())),
                None => (*row, None),
            };
            let v = parse_vec(vals)?;
            if v.len() != k {
                return Err(Error::DimensionMismatch { expected: k, found: v.len() });
            }
            rows.push((v, tag));
        }
        match name {
            "equalities" => eqs = rows.into_iter().map(|(v, t)| LinFun { coeffs: v, tag: t }).collect(),
            "inequalities" => ineqs = rows.into_iter().map(|(v, t)| LinFun { coeffs: v, tag: t }).collect(),
            "rays" => {
                have_v |= n > 0;
                rays = rows.into_iter().map(|(v, _)| v).collect();
            }
            "lineality" => {
                have_v |= n > 0;
                lin = rows.into_iter().map(|(v, _)| v).collect();
            }
            other => return Err(Error::Parse(format!("unknown section {other:?}"))),
        }
    }
    if !eqs.is_empty() || !ineqs.is_empty() || !have_v {
        let mut c = PolyCone::from_h(k, eqs, ineqs);
        c.rays = rays;
        c.lineality = lin;
        Ok(c)
    } else {
        Ok(PolyCone::from_v(k, rays, lin))
    }
}

fn section(line: &str, key: &str) -> Result<usize> {
    let mut it = line.split_whitespace();
    match (it.next(), it.next().and_then(|s| s.parse().ok())) {
        (Some(k), Some(n)) if k == key => Ok(n),
        _ => Err(Error::Parse(format!("expected `{key} <n>`, found {line:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::rat::int_vec;

    #[test]
    fn round_trip() {
        let c = PolyCone::from_h(2, vec![], vec![LinFun::tagged(int_vec(&[1, 0]), "x"), LinFun::new(int_vec(&[0, 1]))])
            .dual_description()
            .unwrap();
        let text = format_cone(&c);
        let back = parse_cone(&text).unwrap().dual_description().unwrap();
        assert_eq!(back.rays, c.rays);
        assert_eq!(back.inequalities.len(), 2);
        assert!(parse_cone("ambient 2\nrays 1\n1 2 3\n").is_err());
        let v = parse_cone("ambient 2\nrays 2\n1 0\n0 1\n").unwrap().dual_description().unwrap();
        assert_eq!(v.inequalities.len(), 2);
    }
}

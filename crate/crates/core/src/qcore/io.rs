//! Plain-text formats for forms and subspaces.
//!
//! A form is written as `dim d` followed by the `d` rows of its lower
//! triangle. A subspace is `ambient d`, `dim k`, then `k` such triangles
//! (or the single keyword `full`). Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use super::rat::{fmt_rat, parse_rat, Rat};
use super::subspace::SubspaceT;
use super::symmat::SymMat;
use crate::error::{Error, Result};

/// Non-empty lines with comments stripped.
pub fn content_lines(text: &str) -> Vec<&str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect()
}

fn header(line: Option<&&str>, key: &str) -> Result<usize> {
    let line = line.ok_or_else(|| Error::Parse(format!("missing `{key}` line")))?;
    let mut it = line.split_whitespace();
    if it.next() != Some(key) {
        return Err(Error::Parse(format!("expected `{key} <n>`, found {line:?}")));
    }
    let n = it
        .next()
        .and_then(|s| s.parse::<usize>().ok())
        .ok_or_else(|| Error::Parse(format!("bad `{key}` line {line:?}")))?;
    Ok(n)
}

fn parse_triangle(lines: &[&str], d: usize) -> Result<SymMat> {
    if lines.len() < d {
        return Err(Error::Parse(format!("expected {d} matrix rows, found {}", lines.len())));
    }
    let mut lower = Vec::with_capacity(d * (d + 1) / 2);
    for (i, line) in lines[..d].iter().enumerate() {
        let row: Vec<Rat> = line.split_whitespace().map(parse_rat).collect::<Result<_>>()?;
        if row.len() != i + 1 {
            return Err(Error::Parse(format!("row {} should have {} entries, found {}", i + 1, i + 1, row.len())));
        }
        lower.extend(row);
    }
    SymMat::from_lower(d, lower)
}

pub fn parse_symmat(text: &str) -> Result<SymMat> {
    let lines = content_lines(text);
    let d = header(lines.first(), "dim")?;
    if d == 0 {
        return Err(Error::ZeroDimensional);
    }
    if lines.len() != d + 1 {
        return Err(Error::Parse(format!("expected {d} rows after the header, found {}", lines.len() - 1)));
    }
    parse_triangle(&lines[1..], d)
}

pub fn write_triangle(out: &mut String, m: &SymMat) {
    for i in 0..m.dim() {
        let row: Vec<String> = (0..=i).map(|j| fmt_rat(m.get(i, j))).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

pub fn format_symmat(m: &SymMat) -> String {
    let mut s = format!("dim {}\n", m.dim());
    write_triangle(&mut s, m);
    s
}

pub fn parse_subspace(text: &str) -> Result<SubspaceT> {
    let lines = content_lines(text);
    let d = header(lines.first(), "ambient")?;
    if d == 0 {
        return Err(Error::ZeroDimensional);
    }
    if lines.get(1) == Some(&"full") {
        return Ok(SubspaceT::full(d));
    }
    let k = header(lines.get(1), "dim")?;
    let body = &lines[2..];
    if body.len() != k * d {
        return Err(Error::Parse(format!("expected {} matrix rows, found {}", k * d, body.len())));
    }
    let basis = body.chunks(d).map(|c| parse_triangle(c, d)).collect::<Result<Vec<_>>>()?;
    SubspaceT::new(basis)
}

pub fn format_subspace(t: &SubspaceT) -> String {
    let mut s = format!("ambient {}\ndim {}\n", t.ambient_dim(), t.dim());
    for b in t.basis() {
        s.push('\n');
        write_triangle(&mut s, b);
    }
    s
}

pub fn format_vec(v: &[Rat]) -> String {
    v.iter().map(fmt_rat).collect::<Vec<_>>().join(" ")
}

pub fn parse_vec(line: &str) -> Result<Vec<Rat>> {
    line.split_whitespace().map(parse_rat).collect()
}

pub fn format_ivec(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

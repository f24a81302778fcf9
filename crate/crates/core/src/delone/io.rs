//! Text output of a Delone subdivision: one block per cell class.

use std::fmt::Write as _;

use super::DeloneSubdivision;
use crate::qcore::io::{format_ivec, format_vec};
use crate::qcore::rat::fmt_rat;

pub fn format_subdivision(s: &DeloneSubdivision) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dim {}", s.dim());
    let _ = writeln!(out, "cells {}", s.cells().len());
    for (i, c) in s.cells().iter().enumerate() {
        let _ = writeln!(out, "cell {i} vertices {}", c.vertices.len());
        for v in &c.vertices {
            let _ = writeln!(out, "{}", format_ivec(v));
        }
        let _ = writeln!(out, "center {}", format_vec(&c.center));
        let _ = writeln!(out, "radius_sq {}", fmt_rat(&c.radius_sq));
    }
    let _ = writeln!(out, "facets {}", s.facets().len());
    for f in s.facets() {
        let [(a, ta), (b, tb)] = &f.cells;
        let verts: Vec<String> = f.vertices.iter().map(|v| format!("({})", format_ivec(v))).collect();
        let _ = writeln!(out, "facet {} | {a} + ({}) | {b} + ({})", verts.join(" "), format_ivec(ta), format_ivec(tb));
    }
    let _ = writeln!(out, "triangulation {}", s.is_triangulation());
    let _ = writeln!(out, "mu {}", fmt_rat(&s.inhomogeneous_minimum()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delone::delone_subdivision;
    use crate::qcore::{QForm, SymMat};

    #[test]
    fn square_output() {
        let s = delone_subdivision(&QForm::new(SymMat::identity(2))).unwrap();
        let text = format_subdivision(&s);
        assert!(text.starts_with("dim 2\ncells 1\ncell 0 vertices 4\n0 0\n0 1\n1 0\n1 1\ncenter 1/2 1/2\n"));
        assert!(text.contains("mu 1/2"));
        assert!(text.contains("triangulation false"));
    }
}

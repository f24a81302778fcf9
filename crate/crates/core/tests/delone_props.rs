use ltype::covopt::br_matrix;
use ltype::delone::{circumsphere, covering_density, inhomogeneous_minimum, sphere_test};
use ltype::qcore::rat::{int, rat, Rat};
use ltype::qcore::{QForm, SymMat, Unimodular};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

/// Fraction-free Gaussian elimination over `i128`.
fn bareiss(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else { return 0 };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn quad(q: &[Vec<i64>], v: &[i64]) -> i128 {
    let mut s = 0i128;
    for i in 0..v.len() {
        for j in 0..v.len() {
            s += i128::from(q[i][j]) * i128::from(v[i]) * i128::from(v[j]);
        }
    }
    s
}

/// `w` against the circumsphere of `v` through lifted orientation
/// determinants: +1 outside, 0 on, −1 inside.
fn chirotope_test(q: &[Vec<i64>], v: &[Vec<i64>], w: &[i64]) -> i8 {
    let lifted = |p: &[i64]| {
        let mut r: Vec<i128> = p.iter().map(|&x| i128::from(x)).collect();
        r.push(quad(q, p));
        r.push(1);
        r
    };
    let mut rows: Vec<Vec<i128>> = v.iter().map(|p| lifted(p)).collect();
    rows.push(lifted(w));
    let lift_det = bareiss(rows);
    let orient = bareiss(
        v.iter()
            .map(|p| {
                let mut r: Vec<i128> = p.iter().map(|&x| i128::from(x)).collect();
                r.push(1);
                r
            })
            .collect(),
    );
    -(lift_det.signum() * orient.signum()) as i8
}

/// `AᵗA + I` for a small integer `A`.
fn pd_form(a: &[i64], d: usize) -> Vec<Vec<i64>> {
    (0..d)
        .map(|i| (0..d).map(|j| (0..d).map(|k| a[k * d + i] * a[k * d + j]).sum::<i64>() + i64::from(i == j)).collect())
        .collect()
}

fn symmat(q: &[Vec<i64>]) -> SymMat {
    let rows: Vec<&[i64]> = q.iter().map(Vec::as_slice).collect();
    SymMat::from_i64(&rows)
}

fn form_and_points() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<Vec<i64>>, Vec<i64>)> {
    (1usize..=4).prop_flat_map(|d| {
        (
            prop::collection::vec(-2i64..=2, d * d).prop_map(move |a| pd_form(&a, d)),
            prop::collection::vec(prop::collection::vec(-3i64..=3, d), d + 1),
            prop::collection::vec(-3i64..=3, d),
        )
    })
}

/// Random unimodular matrix as a product of elementary column operations.
fn unimodular(d: usize, ops: &[(usize, usize, i64)]) -> Unimodular {
    let mut u = Unimodular::identity(d);
    for &(i, j, c) in ops {
        let (i, j) = (i % d, j % d);
        if i == j {
            continue;
        }
        let mut e = vec![0; d * d];
        for k in 0..d {
            e[k * d + k] = 1;
        }
        e[i * d + j] = c;
        u = u.mul(&Unimodular::new(d, e).unwrap());
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn sphere_test_matches_chirotope((q, v, w) in form_and_points()) {
        let m = symmat(&q);
        match sphere_test(&m, &v, &w) {
            Ok(s) => prop_assert_eq!(s, chirotope_test(&q, &v, &w)),
            Err(_) => {
                let d = q.len();
                let orient = bareiss(v.iter().map(|p| p.iter().map(|&x| i128::from(x)).chain([1]).collect()).collect());
                prop_assert_eq!(orient, 0, "only degenerate simplices are rejected (d = {})", d);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn inhomogeneous_minimum_is_homogeneous(a in prop::collection::vec(-2i64..=2, 9), c in 1i64..6) {
        let q = QForm::new(symmat(&pd_form(&a, 3)));
        let mu = inhomogeneous_minimum(&q).unwrap();
        let mu_c = inhomogeneous_minimum(&q.scale(&int(c))).unwrap();
        prop_assert_eq!(mu_c, mu * int(c));
    }

    #[test]
    fn density_is_basis_invariant(
        a in prop::collection::vec(-2i64..=2, 9),
        ops in prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 1..6),
    ) {
        let q = symmat(&pd_form(&a, 3));
        let u = unimodular(3, &ops);
        let (r1, _) = covering_density(&QForm::new(q.clone())).unwrap();
        let (r2, _) = covering_density(&QForm::new(q.transform(&u).unwrap())).unwrap();
        prop_assert_eq!(r1, r2);
    }

    #[test]
    fn br_matrix_is_singular_on_the_unit_sphere(
        (q, v, _) in form_and_points().prop_filter("dimension at least 2", |(q, _, _)| q.len() >= 2),
    ) {
        let m = symmat(&q);
        let Ok((_, r2)) = circumsphere(&m, &v) else { return Ok(()) };
        prop_assume!(r2.is_positive());
        let unit = m.scale(&(Rat::one() / &r2));
        let b = br_matrix(&unit, &v).unwrap();
        prop_assert!(b.is_psd());
        prop_assert!(b.det().is_zero());
        let inside = br_matrix(&unit.scale(&rat(1, 2)), &v).unwrap();
        prop_assert!(inside.is_positive_definite());
        let outside = br_matrix(&unit.scale(&int(2)), &v).unwrap();
        prop_assert!(!outside.is_psd());
    }
}

#[test]
fn chirotope_orientation_examples() {
    let id = vec![vec![1, 0], vec![0, 1]];
    let v = vec![vec![0, 0], vec![1, 0], vec![0, 1]];
    assert_eq!(chirotope_test(&id, &v, &[2, 2]), 1);
    assert_eq!(chirotope_test(&id, &v, &[1, 1]), 0);
    let v_rev = vec![vec![0, 0], vec![0, 1], vec![1, 0]];
    assert_eq!(chirotope_test(&id, &v_rev, &[2, 2]), 1);
    let obtuse = vec![vec![2, -1], vec![-1, 2]];
    assert_eq!(chirotope_test(&obtuse, &v, &[1, 1]), -1);
}

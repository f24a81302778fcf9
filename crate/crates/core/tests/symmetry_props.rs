use ltype::qcore::{QForm, SymMat, Unimodular};
use ltype::symmetry::{automorphism_group, isometry};
use proptest::prelude::*;

fn pd_form(a: &[i64], d: usize) -> Vec<Vec<i64>> {
    (0..d)
        .map(|i| (0..d).map(|j| (0..d).map(|k| a[k * d + i] * a[k * d + j]).sum::<i64>() + i64::from(i == j)).collect())
        .collect()
}

fn bil(q: &[Vec<i64>], u: &[i64], v: &[i64]) -> i64 {
    (0..u.len()).map(|i| (0..v.len()).map(|j| q[i][j] * u[i] * v[j]).sum::<i64>()).sum()
}

fn det_i64(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det_i64(&minor)
            })
            .sum(),
    }
}

/// Integer vectors of norm `n`, from a box bounded by `|v_i|² ≤ n (Q⁻¹)_ii`.
fn vectors_of_norm(q: &[Vec<i64>], n: i64) -> Vec<Vec<i64>> {
    let d = q.len();
    let m = nalgebra::DMatrix::from_fn(d, d, |i, j| q[i][j] as f64);
    let inv = m.try_inverse().unwrap();
    let bounds: Vec<i64> = (0..d).map(|i| ((n as f64) * inv[(i, i)]).sqrt().floor() as i64 + 1).collect();
    let mut out = Vec::new();
    let mut v: Vec<i64> = bounds.iter().map(|b| -b).collect();
    'outer: loop {
        if bil(q, &v, &v) == n {
            out.push(v.clone());
        }
        for i in 0..d {
            if v[i] < bounds[i] {
                v[i] += 1;
                continue 'outer;
            }
            v[i] = -bounds[i];
        }
        break;
    }
    out
}

/// Number of `U` with `Uᵗ Q U = Q`, by trying every tuple of columns.
fn brute_force_order(q: &[Vec<i64>]) -> usize {
    let d = q.len();
    let cands: Vec<Vec<Vec<i64>>> = (0..d).map(|i| vectors_of_norm(q, q[i][i])).collect();
    fn extend(q: &[Vec<i64>], cands: &[Vec<Vec<i64>>], cols: &mut Vec<Vec<i64>>) -> usize {
        let k = cols.len();
        if k == q.len() {
            let rows: Vec<Vec<i64>> = (0..k).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
            return usize::from(det_i64(&rows).abs() == 1);
        }
        let mut n = 0;
        for v in &cands[k] {
            if (0..k).all(|j| bil(q, &cols[j], v) == q[j][k]) {
                cols.push(v.clone());
                n += extend(q, cands, cols);
                cols.pop();
            }
        }
        n
    }
    extend(q, &cands, &mut Vec::new())
}

fn qform(q: &[Vec<i64>]) -> QForm {
    let rows: Vec<&[i64]> = q.iter().map(Vec::as_slice).collect();
    QForm::new(SymMat::from_i64(&rows))
}

fn dim_and_form() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (2usize..=3).prop_flat_map(|d| prop::collection::vec(-1i64..=1, d * d).prop_map(move |a| pd_form(&a, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn automorphism_group_matches_brute_force(q in dim_and_form()) {
        let g = automorphism_group(&qform(&q)).unwrap();
        let m = qform(&q);
        for u in g.all_elements() {
            prop_assert_eq!(&m.matrix().congruence(u.entries()), m.matrix());
        }
        prop_assert_eq!(g.order().unwrap(), brute_force_order(&q));
    }

    #[test]
    fn isometry_finds_a_change_of_basis(
        q in dim_and_form(),
        ops in prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..5),
    ) {
        let d = q.len();
        let mut u = Unimodular::identity(d);
        for (i, j, c) in ops {
            let (i, j) = (i % d, j % d);
            if i != j {
                let mut e: Vec<i64> = (0..d * d).map(|k| i64::from(k % (d + 1) == 0)).collect();
                e[i * d + j] = c;
                u = u.mul(&Unimodular::new(d, e).unwrap());
            }
        }
        let a = qform(&q);
        let b = QForm::new(a.matrix().transform(&u).unwrap());
        let w = isometry(&a, &b).unwrap().expect("congruent forms are isometric");
        prop_assert_eq!(&a.matrix().congruence(w.entries()), b.matrix());
        let c = QForm::new(a.matrix().scale(&ltype::qcore::rat::int(2)));
        prop_assert!(isometry(&a, &c).unwrap().is_none());
    }
}

#[test]
fn brute_force_known_orders() {
    assert_eq!(brute_force_order(&[vec![1, 0], vec![0, 1]]), 8);
    assert_eq!(brute_force_order(&[vec![2, -1], vec![-1, 2]]), 12);
    assert_eq!(brute_force_order(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), 48);
}

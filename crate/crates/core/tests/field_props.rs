use ltype::numberfield::{fixtures, FieldElement, NumberField};
use ltype::qcore::rat::{int, Rat};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

const SMALL: [u32; 6] = [5, 8, 13, 49, 81, 148];

fn field(d: u32) -> NumberField {
    fixtures::field(d).unwrap().unwrap()
}

/// Matrix of multiplication by `a` on the power basis, columns `a·x^i`.
fn mult_matrix(k: &NumberField, a: &FieldElement) -> Vec<Vec<Rat>> {
    let n = k.degree();
    let x = k.generator();
    let mut xi = k.one();
    let mut cols = Vec::with_capacity(n);
    for _ in 0..n {
        cols.push(k.mul(a, &xi).coords().to_vec());
        xi = k.mul(&xi, &x);
    }
    (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
}

fn matmul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
}

/// Characteristic polynomial coefficients `c_0 … c_n` (monic) by
/// Faddeev–LeVerrier.
fn charpoly(m: &[Vec<Rat>]) -> Vec<Rat> {
    let n = m.len();
    let mut c = vec![Rat::zero(); n + 1];
    c[n] = int(1);
    let mut mk = vec![vec![Rat::zero(); n]; n];
    for k in 1..=n {
        let mut next = matmul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        mk = next;
        let tr: Rat = (0..n).map(|i| (0..n).map(|j| &m[i][j] * &mk[j][i]).sum::<Rat>()).sum();
        c[n - k] = -tr / int(k as i64);
    }
    c
}

/// A real-rooted monic polynomial has only positive roots iff its
/// coefficients strictly alternate in sign.
fn all_roots_positive(c: &[Rat]) -> bool {
    let n = c.len() - 1;
    (0..=n).all(|k| {
        let s = if (n - k) % 2 == 0 { int(1) } else { int(-1) };
        (&c[k] * s).is_positive()
    })
}

fn element() -> impl Strategy<Value = (u32, Vec<i64>)> {
    (0usize..SMALL.len()).prop_flat_map(|i| {
        let d = SMALL[i];
        let n = field(d).degree();
        (Just(d), prop::collection::vec(-4i64..=4, n))
    })
}

fn from_basis(k: &NumberField, c: &[i64]) -> FieldElement {
    k.from_basis(&c.iter().map(|&x| int(x)).collect::<Vec<_>>()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn trace_form_definite_iff_totally_positive((d, c) in element()) {
        let k = field(d);
        let a = from_basis(&k, &c);
        prop_assume!(!a.is_zero());
        let oracle = all_roots_positive(&charpoly(&mult_matrix(&k, &a)));
        prop_assert_eq!(k.is_totally_positive(&a), oracle);
        prop_assert_eq!(k.trace_form(&a).unwrap().is_positive_definite(), oracle);
    }

    #[test]
    fn trace_is_linear_and_matches_charpoly((d, c) in element(), (_, e) in element(), s in -5i64..=5) {
        let k = field(d);
        let n = k.degree();
        let mut e = e;
        e.resize(n, 1);
        let a = from_basis(&k, &c);
        let b = from_basis(&k, &e);
        let sum = a.add(&b.scale(&int(s)));
        prop_assert_eq!(k.trace(&sum), k.trace(&a) + k.trace(&b) * int(s));
        let cp = charpoly(&mult_matrix(&k, &a));
        prop_assert_eq!(k.trace(&a), -cp[n - 1].clone());
        prop_assume!(!a.is_zero() && !b.is_zero() && !sum.is_zero());
        let ta = k.trace_form(&a).unwrap();
        let tb = k.trace_form(&b).unwrap();
        let mut lin = ta.clone();
        lin.add_scaled(&int(s), &tb);
        prop_assert_eq!(k.trace_form(&sum).unwrap(), lin);
        for i in 0..n {
            prop_assert!(ta.get(i, i).is_integer());
        }
    }
}

#[test]
fn field_alphas_are_totally_positive_with_least_shift() {
    for (d, _) in fixtures::FIELDS {
        let k = field(d);
        for (w, a) in k.integral_basis().iter().zip(k.field_alphas().unwrap()) {
            assert!(all_roots_positive(&charpoly(&mult_matrix(&k, &a))), "d_K = {d}");
            let shift = &a.coords()[0] - &w.coords()[0];
            if shift.is_positive() {
                let prev = w.add(&k.one().scale(&(shift - int(1))));
                assert!(prev.is_zero() || !all_roots_positive(&charpoly(&mult_matrix(&k, &prev))), "d_K = {d}");
            }
        }
    }
}

#[test]
fn discriminant_is_the_trace_form_determinant() {
    for (d, _) in fixtures::FIELDS {
        let k = field(d);
        assert_eq!(k.trace_form(&k.one()).unwrap().det(), int(i64::from(d)));
    }
}

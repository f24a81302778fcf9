use ltype::catalog::{coxeter_form, dual_root_lattice_a, e7, laminate, laminated_form, root_lattice_a};
use ltype::covopt::packing_covering;
use ltype::qcore::rat::{int, rat, Rat};
use ltype::qcore::{QForm, SubspaceT, SymMat};
use ltype::symmetry::isometry;
use num_traits::Zero;
use proptest::prelude::*;

/// `(d+1)² A_d⁻¹` from the closed form `min(i,j)(d+1−max(i,j))/(d+1)`.
fn scaled_dual_cartan(d: usize) -> SymMat {
    let r = (d + 1) as i64;
    let rows: Vec<Vec<i64>> =
        (1..=d as i64).map(|i| (1..=d as i64).map(|j| i.min(j) * (r - i.max(j)) * r).collect()).collect();
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    SymMat::from_i64(&refs)
}

#[test]
fn dual_root_lattices_are_coxeter_lattices() {
    for d in 2..=3 {
        let expected = QForm::new(scaled_dual_cartan(d));
        let cox = coxeter_form(d, d + 1).unwrap();
        assert!(isometry(&cox, &expected).unwrap().is_some(), "d = {d}");
        assert!(isometry(&dual_root_lattice_a(d).unwrap(), &expected).unwrap().is_some());
        assert_eq!(coxeter_form(d, 1).unwrap(), root_lattice_a(d).unwrap());
    }
}

#[test]
fn coxeter_determinants() {
    for d in 1..=6usize {
        for r in (1..=d + 1).filter(|r| (d + 1) % r == 0) {
            let q = coxeter_form(d, r).unwrap();
            let r2 = int((r * r) as i64);
            let unscaled = q.det() / num_traits::pow(r2, d);
            assert_eq!(unscaled, rat((d + 1) as i64, (r * r) as i64), "d = {d}, r = {r}");
        }
    }
    assert!(coxeter_form(4, 3).is_err());
}

#[test]
fn packing_covering_of_cubic_lattices() {
    for d in 1..=4usize {
        let q = QForm::new(SymMat::identity(d));
        assert_eq!(packing_covering(&q).unwrap(), int(d as i64));
    }
}

#[test]
fn coxeter_a7_squared_is_e7() {
    let q = coxeter_form(7, 2).unwrap();
    let target = QForm::new(e7().matrix().scale(&int(4)));
    assert!(isometry(&q, &target).unwrap().is_some());
}

fn full_or_diag() -> impl Strategy<Value = (usize, bool)> {
    (1usize..=3, any::<bool>())
}

fn space(d: usize, diag: bool) -> SubspaceT {
    if !diag {
        return SubspaceT::full(d);
    }
    let basis = (0..d)
        .map(|i| {
            let mut e = SymMat::zeros(d);
            e.set(i, i, int(1));
            e
        })
        .collect();
    SubspaceT::new(basis).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn lamination_adds_one_dimension(
        (d, diag) in full_or_diag(),
        c in prop::collection::vec((-3i64..=3, 1i64..=4), 3),
        lam in (-2i64..=4, 1i64..=3),
    ) {
        let t = space(d, diag);
        let q = QForm::new(SymMat::identity(d).scale(&int(2)));
        let c: Vec<Rat> = c[..d].iter().map(|&(a, b)| rat(a, b)).collect();
        let lt = laminate(&q, &t, &c).unwrap();
        prop_assert_eq!(lt.dim(), t.dim() + 1);
        prop_assert_eq!(lt.ambient_dim(), d + 1);
        let l2 = rat(lam.0, lam.1);
        let m = laminated_form(&q, &c, &l2);
        prop_assert!(lt.contains(&m));
        prop_assert_eq!(m.is_positive_definite(), l2 > Rat::zero());
        prop_assert_eq!(m.det(), q.det() * &l2);
    }
}

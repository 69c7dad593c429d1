mod common;

use std::f64::consts::PI;

use common::*;
use nalgebra::DMatrix;
use proptest::prelude::*;
use sympidx::expm::expm;
use sympidx::generators::BlockSpec;
use sympidx::linalg::*;
use sympidx::paths::evaluate;
use sympidx::{Angle, Error, SymplecticMatrix, Tolerances};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn end_of(b: BlockSpec) -> SymplecticMatrix {
    evaluate(&one(b), 1.0, &tol()).unwrap()
}

fn rot2(theta: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()])
}

#[test]
fn symplectic_check_examples() {
    let t = tol();
    assert!(check_symplectic(&DMatrix::identity(4, 4), &t).unwrap());
    assert!(check_symplectic(&j_matrix(2), &t).unwrap());
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 1.0, 1.0, 1.0]));
    assert!(!check_symplectic(&d, &t).unwrap());
    assert!(matches!(check_symplectic(&DMatrix::identity(3, 3), &t), Err(Error::Dimension(_))));
    assert!(matches!(SymplecticMatrix::new(d, &t), Err(Error::Validation(_))));
}

#[test]
fn direct_sum_of_identities_is_identity() {
    let i2 = SymplecticMatrix::identity(1);
    let s = direct_sum(&i2, &i2);
    assert_eq!(s.entries(), &DMatrix::<f64>::identity(4, 4));
}

#[test]
fn direct_sum_is_symplectic_and_unions_spectra() {
    let t = tol();
    let a = end_of(rotation(1, 2));
    let b = end_of(BlockSpec::QSign { d: 1, sign: -1 });
    let c = end_of(BlockSpec::Hyperbolic { a: 0.8 });
    let ab = direct_sum(&direct_sum(&a, &b), &c);
    assert!(check_symplectic(ab.entries(), &t).unwrap());
    let mut expected = unit_spectrum(&a, &t).unwrap();
    expected.extend(unit_spectrum(&b, &t).unwrap());
    expected.sort_by(|x, y| x.angle.cmp_position(&y.angle));
    assert_eq!(unit_spectrum(&ab, &t).unwrap(), expected);
    for w in [Angle::zero(), Angle::pi_fraction(1, 2).unwrap(), Angle::pi()] {
        let sum = nullity(&a, &w, &t).unwrap() + nullity(&b, &w, &t).unwrap() + nullity(&c, &w, &t).unwrap();
        assert_eq!(nullity(&ab, &w, &t).unwrap(), sum, "at {w}");
    }
}

#[test]
fn rotation_spectrum_is_an_exact_conjugate_pair() {
    let s = unit_spectrum(&end_of(rotation(1, 2)), &tol()).unwrap();
    assert_eq!(s.len(), 2);
    assert_eq!(s[0].angle, Angle::pi_fraction(1, 2).unwrap());
    assert_eq!(s[1].angle, Angle::pi_fraction(3, 2).unwrap());
    assert!(s.iter().all(|e| e.alg_mult == 1 && e.geo_mult == 1));
}

#[test]
fn chain_form_end_has_one_eigenvalue_with_two_eigenvectors() {
    let s = unit_spectrum(&end_of(BlockSpec::Q0 { d: 3 }), &tol()).unwrap();
    assert_eq!(s.len(), 1);
    assert!(s[0].angle.is_zero());
    assert_eq!((s[0].alg_mult, s[0].geo_mult), (6, 2));
}

#[test]
fn hyperbolic_spectrum_is_off_the_circle() {
    let m = end_of(BlockSpec::Hyperbolic { a: 1.0 });
    let s = spectrum(&m, &tol()).unwrap();
    assert!(s.unit.is_empty());
    assert!(s.has_hyperbolic_part);
}

#[test]
fn nullity_examples() {
    let t = tol();
    assert_eq!(nullity(&SymplecticMatrix::identity(1), &Angle::zero(), &t).unwrap(), 2);
    // N₁(1, 1) = [[1, 0], [1, 1]] in (p, q) coordinates
    let n1 = SymplecticMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 1.0]), &t).unwrap();
    assert_eq!(nullity(&n1, &Angle::zero(), &t).unwrap(), 1);
    assert_eq!(nullity(&end_of(BlockSpec::Q0 { d: 3 }), &Angle::zero(), &t).unwrap(), 2);
    assert_eq!(nullity(&end_of(rotation(1, 2)), &Angle::pi_fraction(1, 2).unwrap(), &t).unwrap(), 1);
    assert_eq!(nullity(&end_of(rotation(1, 1)), &Angle::pi(), &t).unwrap(), 2);
}

#[test]
fn nullity_of_near_identity_powers() {
    // R(π/4)^8 is the identity up to rounding; the kernel must be full
    let m = SymplecticMatrix::new(rot2(PI / 4.0), &tol()).unwrap();
    assert_eq!(nullity(&m.pow(8), &Angle::zero(), &tol()).unwrap(), 2);
    assert_eq!(nullity(&m.pow(7), &Angle::zero(), &tol()).unwrap(), 0);
}

#[test]
fn classification_examples() {
    let t = tol();
    assert!(matches!(classify_cnu(&end_of(BlockSpec::Hyperbolic { a: 0.5 }), &t).unwrap(), Classification::Cnu { .. }));
    match classify_cnu(&end_of(rotation(2, 3)), &t).unwrap() {
        Classification::Vnu { witness } => {
            assert!(witness.angle == Angle::pi_fraction(2, 3).unwrap() || witness.angle == Angle::pi_fraction(4, 3).unwrap())
        }
        other => panic!("expected vnu, got {other:?}"),
    }
    let m = end_of(rotation_rad(1.0));
    match classify_cnu(&m, &t).unwrap() {
        Classification::Cnu { undecided } => assert!(undecided.is_empty()),
        other => panic!("expected cnu, got {other:?}"),
    }
    // the defining property: iterate nullities at 1 stay constant
    let base = nullity(&m, &Angle::zero(), &t).unwrap();
    for k in 1..=50 {
        assert_eq!(nullity(&m.pow(k), &Angle::zero(), &t).unwrap(), base, "k = {k}");
    }
}

#[test]
fn cnu_classification_implies_constant_iterate_nullity() {
    let t = tol();
    for b in every_kind() {
        let m = end_of(b.clone());
        if let Classification::Cnu { undecided } = classify_cnu(&m, &t).unwrap() {
            assert!(undecided.is_empty());
            let base = nullity(&m, &Angle::zero(), &t).unwrap();
            // beyond ‖M^k‖ ~ 1e12 the iterate no longer carries its kernel in f64
            for k in (1..=50).take_while(|&k| m.pow(k).entries().amax() < 1e12) {
                assert_eq!(nullity(&m.pow(k), &Angle::zero(), &t).unwrap(), base, "{b:?} at k = {k}");
            }
        }
    }
}

#[test]
fn iterate_nullity_equals_root_of_unity_sum_on_every_kind() {
    let t = tol();
    for b in every_kind() {
        let m = end_of(b.clone());
        for k in 1..=24 {
            assert_eq!(
                nullity(&m.pow(k), &Angle::zero(), &t).unwrap(),
                root_of_unity_nullity(&m, k, &t).unwrap(),
                "{b:?} at k = {k}"
            );
        }
    }
}

#[test]
fn eigenvalue_routine_reports_bad_input() {
    let m = DMatrix::from_element(2, 2, f64::NAN);
    assert!(eigenvalues(&m).is_err());
}

#[test]
fn matrix_exponential_matches_closed_forms() {
    for theta in [0.3, 1.0, PI, 5.0, 40.0] {
        let e = expm(&(j_matrix(1) * theta)).unwrap();
        assert!((e - rot2(theta)).amax() < 1e-12, "rotation {theta}");
    }
    for a in [0.5, -2.0, 6.0] {
        let g = DMatrix::from_row_slice(2, 2, &[a, 0.0, 0.0, -a]);
        let e = expm(&g).unwrap();
        let want = DMatrix::from_row_slice(2, 2, &[a.exp(), 0.0, 0.0, (-a).exp()]);
        assert!((&e - &want).amax() <= 1e-12 * want.amax(), "hyperbolic {a}");
    }
    // nilpotent shift: exp(sN) has s^k/k! on the k-th superdiagonal
    let n = DMatrix::from_fn(4, 4, |i, j| if j == i + 1 { 1.0 } else { 0.0 });
    let s = 2.5f64;
    let e = expm(&(n * s)).unwrap();
    let fact = [1.0, 1.0, 2.0, 6.0];
    for i in 0..4 {
        for j in i..4 {
            let want = s.powi((j - i) as i32) / fact[j - i];
            assert!((e[(i, j)] - want).abs() < 1e-12 * want.max(1.0));
        }
    }
    assert!(expm(&DMatrix::from_element(2, 2, f64::INFINITY)).is_err());
}

fn symmetric(k: usize) -> impl Strategy<Value = DMatrix<f64>> {
    proptest::collection::vec(-2.0f64..2.0, k * k).prop_map(move |v| {
        let a = DMatrix::from_vec(k, k, v);
        (&a + a.transpose()) * 0.5
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hamiltonian_flows_are_symplectic(q in symmetric(4)) {
        let m = expm(&(j_matrix(2) * q)).unwrap();
        prop_assert!(check_symplectic(&m, &tol()).unwrap());
    }

    #[test]
    fn exponential_inverts(q in symmetric(4)) {
        let a = j_matrix(2) * q;
        let p = expm(&a).unwrap() * expm(&(-a)).unwrap();
        prop_assert!((p - DMatrix::<f64>::identity(4, 4)).amax() < 1e-9);
    }

    #[test]
    fn spectra_are_conjugation_symmetric(q in symmetric(4)) {
        let m = SymplecticMatrix::new(expm(&(j_matrix(2) * q)).unwrap(), &tol()).unwrap();
        if let Ok(s) = unit_spectrum(&m, &tol()) {
            for e in &s {
                let c = e.angle.conjugate();
                let partner = s.iter().find(|f| f.angle.same_point(&c, 1e-9));
                prop_assert!(partner.is_some_and(|f| f.alg_mult == e.alg_mult && f.geo_mult == e.geo_mult));
            }
        }
    }
}

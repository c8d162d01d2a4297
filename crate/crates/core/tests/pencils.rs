mod common;

use common::{branch_points, cfg, GENUS_ONE, GENUS_TWO};
use minitwistor::pencils::{self, EqualDivision};
use minitwistor::poly::{self, c};
use minitwistor::projective::{hyperplane_distance, restrict_hyperplane};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn family_identity_holds(pts in branch_points(1..=3), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let cfg = cfg(&pts);
        for div in pencils::all_divisions(cfg.n) {
            prop_assert!(pencils::family_identity_defect(&div, &cfg, c(re, im)) <= 1e-12);
        }
    }

    #[test]
    fn swapping_the_division_reparametrises(pts in branch_points(1..=3), s in -4.0f64..4.0) {
        prop_assume!(s.abs() > 1e-3);
        let cfg = cfg(&pts);
        let n = cfg.n;
        for div in pencils::all_divisions(n) {
            let a = pencils::family_member(&div, &cfg, s);
            let b = pencils::family_member(&div.swapped(), &cfg, pencils::swap_parameter(n, s));
            prop_assert!(hyperplane_distance(&a, &b) <= 1e-12);
        }
    }

    #[test]
    fn members_restrict_to_twice_a_fiber(pts in branch_points(1..=3), s in 0.05f64..5.0) {
        let cfg = cfg(&pts);
        let n = cfg.n;
        let div = EqualDivision::central(n);
        let h = pencils::family_member(&div, &cfg, s);
        prop_assert!(h.is_real(n, 1e-12));
        let d = restrict_hyperplane(&h, &cfg).unwrap();
        let fiber = pencils::psi_fiber(&div, &cfg, Some(pencils::pencil_t(n, s)));
        prop_assert!(d.mismatch(&fiber.times(2)) < 1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn circle_images_have_the_expected_structure(pts in branch_points(2..=3)) {
        let cfg = cfg(&pts);
        for chk in pencils::verify_circle_images(&cfg, 512) {
            prop_assert!(chk.passed, "{}: {}", chk.name, chk.detail);
        }
    }
}

#[test]
fn number_of_equal_divisions() {
    for n in 1..=4 {
        let expected = (poly::binom(2 * n, n) / 2.0).round() as usize;
        assert_eq!(pencils::all_divisions(n).len(), expected);
    }
}

#[test]
fn invalid_divisions_are_rejected() {
    assert!(EqualDivision::new(2, &[1, 1]).is_none());
    assert!(EqualDivision::new(2, &[1, 5]).is_none());
    assert!(EqualDivision::new(2, &[1, 2, 3]).is_none());
    assert!(EqualDivision::new(2, &[3, 4]).is_some());
}

#[test]
fn genus_one_central_member_by_hand() {
    // A = (z + 3)(z + 1), B = (z - 1)(z - 3); at s = 1 the member reduces to
    // P = (A + B)/2 = z^2 + 3 and c = 1.
    let cfg = cfg(&GENUS_ONE);
    let h = pencils::family_member(&EqualDivision::central(2), &cfg, 1.0).normalized();
    let p: Vec<f64> = h.p.iter().map(|x| (x / h.p[2]).re).collect();
    assert!((p[0] - 3.0).abs() < 1e-12 && p[1].abs() < 1e-12);
    assert!(((h.c / h.p[2]).re.abs() - 1.0).abs() < 1e-12);
}

#[test]
fn members_over_distinct_divisions_differ() {
    for pts in [&GENUS_ONE[..], &GENUS_TWO] {
        let cfg = cfg(pts);
        let divs = pencils::all_divisions(cfg.n);
        for (i, a) in divs.iter().enumerate() {
            for b in &divs[i + 1..] {
                let d = hyperplane_distance(
                    &pencils::family_member(a, &cfg, 0.7),
                    &pencils::family_member(b, &cfg, 0.7),
                );
                assert!(d > 1e-6);
            }
        }
    }
}

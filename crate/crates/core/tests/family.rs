mod common;

use common::{branch_points, cfg, GENUS_ONE, GENUS_TWO};
use minitwistor::curve::CurvePoint;
use minitwistor::family::{member_distance, FamilySolver, SolverOptions};
use minitwistor::jacobian::{JacOptions, Jacobian};
use minitwistor::poly::c;
use minitwistor::projective::{hyperplane_distance, normalized_coeff_distance, restrict_hyperplane};
use minitwistor::verify;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn solver(pts: &[f64]) -> FamilySolver {
    FamilySolver::new(&cfg(pts), SolverOptions::default())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn boundary_members_have_the_promised_shape(pts in branch_points(1..=3), t in 0.05f64..0.95, i in 0usize..6) {
        let s = FamilySolver::new(&cfg(&pts), SolverOptions::default());
        let n = s.cfg.n;
        let i = 1 + i % (2 * n - 1);
        let lam = s.cfg.a(i) + t * (s.cfg.a(i + 1) - s.cfg.a(i));
        let m = s.boundary_member(lam);
        prop_assert_eq!(m.d_prime.degree(), n - 1);
        prop_assert!(s.restriction_defect(&m).unwrap() < 1e-8);
    }

    #[test]
    fn interior_members_satisfy_the_doubling_relation(pts in branch_points(2..=3), seed in any::<u64>()) {
        let s = FamilySolver::new(&cfg(&pts), SolverOptions::default());
        let jac = Jacobian::new(&s.cfg, JacOptions::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for z in verify::interior_points(&s.cfg, 2, &mut rng) {
            let m = s.continue_to(z, None).unwrap();
            prop_assert_eq!(m.d_prime.degree(), s.cfg.n - 1);
            prop_assert!(s.restriction_defect(&m).unwrap() < 1e-7);
            prop_assert!(verify::doubling_residual(&jac, &m).unwrap() <= 1e-7);
        }
    }
}

#[test]
fn continuation_meets_the_boundary_from_three_anchors() {
    for (pts, lams) in [
        (&GENUS_ONE[..], vec![5.0, -6.0, 0.3]),
        (&GENUS_TWO[..], vec![6.0, -6.0, 4.0, -4.0, 0.3]),
    ] {
        let s = solver(pts);
        let arcs = verify::real_arc_parameters(&s.cfg);
        let anchors = [arcs[0], s.default_anchor(), *arcs.last().unwrap()];
        for lam in lams {
            let b = s.boundary_member(lam);
            for a in anchors {
                let m = s.continue_to(c(lam, 1e-4), Some(a)).unwrap();
                assert!(normalized_coeff_distance(&m.h, &b.h) <= 1e-6, "lambda {lam}, anchor {a}");
            }
        }
    }
}

#[test]
fn result_does_not_depend_on_the_anchor() {
    let s = solver(&GENUS_TWO);
    let arcs = verify::real_arc_parameters(&s.cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for z in verify::interior_points(&s.cfg, 4, &mut rng) {
        let a = s.continue_to(z, Some(arcs[0])).unwrap();
        let b = s.continue_to(z, Some(*arcs.last().unwrap())).unwrap();
        assert!(hyperplane_distance(&a.h, &b.h) < 1e-8);
        assert!(member_distance(&a, &b) < 1e-8);
    }
}

#[test]
fn slice_injectivity_with_sixty_four_phases() {
    for pts in [&GENUS_ONE[..], &GENUS_TWO] {
        let s = solver(pts);
        let mut rng = ChaCha8Rng::seed_from_u64(100 + s.cfg.n as u64);
        let members: Vec<_> = verify::interior_points(&s.cfg, 11, &mut rng)
            .into_iter()
            .map(|z| s.continue_to(z, None).unwrap())
            .collect();
        let rep = s.slice_injectivity_check(&members, 64, 1e-6);
        assert!(rep.pairs >= 100);
        assert!(rep.violations.is_empty(), "{:?}", rep.violations);
        for chk in rep.checks(1e-6).into_iter().chain(verify::minus_one_checks(&s, &members)) {
            assert!(chk.passed, "{}: {}", chk.name, chk.detail);
        }
    }
}

#[test]
fn conic_members_are_the_real_lines_through_q() {
    let s = solver(&[-1.0, 2.0]);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for z in verify::interior_points(&s.cfg, 8, &mut rng) {
        let m = s.continue_to(z, None).unwrap();
        assert!(m.h.is_real(1, 1e-12));
        let d = restrict_hyperplane(&m.h, &s.cfg).unwrap();
        assert!(d.mismatch(&m.expected_restriction(&s.cfg)) < 1e-9);
    }
}

#[test]
fn boundary_member_at_infinity_matches_large_parameters() {
    let s = solver(&GENUS_ONE);
    let inf = s.boundary_member(f64::INFINITY);
    assert!(matches!(inf.q, CurvePoint::Infinity(_)));
    for lam in [1e9, -1e9] {
        assert!(normalized_coeff_distance(&s.boundary_member(lam).h, &inf.h) < 1e-6);
    }
}

#[test]
fn family_suite_passes() {
    use minitwistor::config::RunConfig;
    for pts in [&GENUS_ONE[..], &GENUS_TWO, &[-4.0, -1.5, 0.5, 2.0], &[-1.0, 2.0]] {
        let rc = RunConfig::for_points(pts);
        let cfg = rc.branch_config().unwrap();
        let jac = Jacobian::new(&cfg, verify::jac_options(&rc)).unwrap();
        for chk in verify::family_suite(&cfg, &jac, &rc) {
            assert!(chk.passed, "{pts:?} {}: {}", chk.name, chk.detail);
        }
    }
}

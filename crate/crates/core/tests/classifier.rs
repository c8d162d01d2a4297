mod common;

use common::{cfg, GENUS_ONE, GENUS_TWO};
use minitwistor::classifier::{self, LocalType};
use minitwistor::curve::CurvePoint;
use minitwistor::family::{FamilySolver, SolverOptions};
use minitwistor::pencils::{self, EqualDivision};
use minitwistor::poly::c;
use minitwistor::verify;
use rand::SeedableRng;

fn grid() -> Vec<f64> {
    classifier::geometric_grid(1e-3, 1e3, 241)
}

#[test]
fn genus_two_central_trace() {
    let cfg = cfg(&GENUS_TWO);
    let div = EqualDivision::central(3);
    let tr = classifier::trace_transitions(&cfg, &div, &grid()).unwrap();
    assert_eq!(tr.criticals.len(), 2);
    let (u1, u2) = (tr.criticals[0].s, tr.criticals[1].s);
    assert!(u1 < 1.0 && u2 > 1.0);
    assert!((u1 * u2 - 1.0).abs() <= 1e-8);
    assert_eq!(verify::regime_summary(&tr), "real/conjugate/real");
    assert!(tr.consistent && tr.endpoints_all_real);

    let mut roots = classifier::tangency_roots(&cfg, &div, 1.0);
    roots.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
    let r = 23f64.sqrt();
    for (got, want) in roots.iter().zip([c(0.0, -r), c(0.0, 0.0), c(0.0, r)]) {
        assert!((got - want).norm() <= 1e-9, "{got}");
    }
}

#[test]
fn genus_one_central_trace_has_no_criticals() {
    let cfg = cfg(&GENUS_ONE);
    let tr = classifier::trace_transitions(&cfg, &EqualDivision::central(2), &grid()).unwrap();
    assert!(tr.criticals.is_empty());
    assert!(tr.regimes.iter().all(|r| r.label == "real"));
}

#[test]
fn outer_division_degenerates_at_one_and_three() {
    // For I = {1, 4}: A - s^2 B = (1 - s^2) z^2 + s^2 - 9, which loses its
    // leading term at s = 1 and has a double root at z = 0 when s = 3.
    let cfg = cfg(&GENUS_ONE);
    let div = EqualDivision::new(2, &[1, 4]).unwrap();
    let tr = classifier::trace_transitions(&cfg, &div, &grid()).unwrap();
    let s: Vec<f64> = tr.criticals.iter().map(|c| c.s).collect();
    assert_eq!(s.len(), 2);
    assert!((s[0] - 1.0).abs() < 1e-12 && (s[1] - 3.0).abs() < 1e-12, "{s:?}");
}

#[test]
fn genus_one_central_members_have_real_nodes() {
    let cfg = cfg(&GENUS_ONE);
    for k in 0..12 {
        let s = 10f64.powf(-2.0 + 4.0 * k as f64 / 11.0);
        let h = pencils::family_member(&EqualDivision::central(2), &cfg, s);
        let cls = classifier::classify_member(&cfg, &h).unwrap();
        assert_eq!(cls.genus_drop, 2);
        assert!(cls.records.iter().all(|r| matches!(r.kind, LocalType::NodeReal { .. })));
    }
}

#[test]
fn interior_genus_one_members_have_one_real_node() {
    let cfg = cfg(&GENUS_ONE);
    let s = FamilySolver::new(&cfg, SolverOptions::default());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for z in verify::interior_points(&cfg, 6, &mut rng) {
        let m = s.continue_to(z, None).unwrap();
        let cls = classifier::classify_member(&cfg, &m.h).unwrap();
        assert_eq!(cls.records.len(), 1);
        assert!(matches!(cls.records[0].kind, LocalType::NodeReal { .. }));
        assert!(cls.sigma_paired);
    }
}

#[test]
fn divisor_multiplicities_set_the_local_type() {
    let cfg = cfg(&GENUS_TWO);
    let z = c(0.4, 1.3);
    let p = CurvePoint::finite(z, cfg.branch_fn(z));
    let pc = cfg.apply_sigma(&p);
    let r = cfg.ramification_point(2);
    let cls = classifier::classify_divisor(&cfg, &[(p, 2), (pc, 2), (r, 4)]);
    assert_eq!(cls.genus_drop, 4);
    assert!(cls.sigma_paired);
    assert!(cls.records.iter().any(|x| matches!(x.kind, LocalType::Contact { order: 4 })));
    let cusp = classifier::classify_divisor(&cfg, &[(r, 3)]);
    assert!(matches!(cusp.records[0].kind, LocalType::CuspFlag { multiplicity: 3 }));
    assert_eq!(classifier::genus_drop_check(&cls, 4), Ok(4));
    assert_eq!(classifier::genus_drop_check(&cls, 3), Err(4));
}

mod common;

use common::{branch_points, cfg, GENUS_ONE, GENUS_TWO};
use minitwistor::family::{FamilySolver, SolverOptions};
use minitwistor::jacobian::{JacOptions, Jacobian};
use minitwistor::pencils::{self, EqualDivision};
use minitwistor::verify;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn riemann_relations_hold(pts in branch_points(2..=3)) {
        let jac = Jacobian::new(&cfg(&pts), JacOptions::default()).unwrap();
        let rr = jac.lattice.riemann_relations();
        prop_assert!(rr.symmetry_defect < 1e-10);
        prop_assert!(rr.min_imag_eigenvalue > 0.0);
    }

    #[test]
    fn central_family_satisfies_abel(pts in branch_points(2..=3), s in 0.05f64..8.0) {
        let cfg = cfg(&pts);
        let jac = Jacobian::new(&cfg, JacOptions::default()).unwrap();
        let h = pencils::family_member(&EqualDivision::central(cfg.n), &cfg, s);
        prop_assert!(verify::abel_residual(&jac, &cfg, &h).unwrap() <= 1e-7);
    }
}

#[test]
fn ramification_points_are_two_torsion() {
    for pts in [&GENUS_ONE[..], &GENUS_TWO] {
        let cfg = cfg(pts);
        let jac = Jacobian::new(&cfg, JacOptions::default()).unwrap();
        for i in 1..=2 * cfg.n {
            let a = jac.abel_point(&cfg.ramification_point(i)).unwrap();
            let twice: Vec<_> = a.iter().map(|x| x * 2.0).collect();
            assert!(jac.lattice.norm_mod(&twice) < 1e-9, "r_{i}");
        }
    }
}

#[test]
fn abel_holds_for_boundary_central_and_interior_members() {
    use rand::SeedableRng;
    for pts in [&GENUS_ONE[..], &GENUS_TWO] {
        let cfg = cfg(pts);
        let n = cfg.n;
        let jac = Jacobian::new(&cfg, JacOptions::default()).unwrap();
        let solver = FamilySolver::new(&cfg, SolverOptions::default());
        let mut hs = Vec::new();
        for lam in verify::real_arc_parameters(&cfg).into_iter().chain([f64::INFINITY]) {
            hs.push(solver.boundary_member(lam).h);
        }
        for j in 1..=2 * n {
            hs.push(solver.corner_member(j).h);
        }
        for k in 0..16 {
            let s = 10f64.powf(-2.0 + 4.0 * k as f64 / 15.0);
            hs.push(pencils::family_member(&EqualDivision::central(n), &cfg, s));
            hs.push(pencils::family_member(&EqualDivision::central(n), &cfg, -s));
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for z in verify::interior_points(&cfg, 20, &mut rng) {
            hs.push(solver.continue_to(z, None).unwrap().h);
        }
        assert!(hs.len() >= 50);
        for h in &hs {
            assert!(verify::abel_residual(&jac, &cfg, h).unwrap() <= 1e-7);
        }
    }
}

#[test]
fn jacobian_suite_passes() {
    use minitwistor::config::RunConfig;
    for pts in [&GENUS_ONE[..], &GENUS_TWO, &[-4.0, -1.5, 0.5, 2.0]] {
        let rc = RunConfig::for_points(pts);
        let cfg = rc.branch_config().unwrap();
        let jac = Jacobian::new(&cfg, verify::jac_options(&rc)).unwrap();
        for chk in verify::jacobian_suite(&cfg, &jac, &rc) {
            assert!(chk.passed, "{}: {}", chk.name, chk.detail);
        }
    }
}

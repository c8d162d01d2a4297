mod common;

use common::{branch_points, cfg, GENUS_ONE, GENUS_TWO};
use minitwistor::classifier;
use minitwistor::family::{FamilySolver, SolverOptions};
use minitwistor::poly::{c, C64};
use minitwistor::projective::{hyperplane_distance, Hyperplane3};
use minitwistor::twistor::{self, RootSelection};
use minitwistor::verify;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solve_lambda_inverts_the_modulus(pts in branch_points(1..=3), i in 0usize..7, t in 0.01f64..0.99) {
        let cfg = cfg(&pts);
        let i = i % (2 * cfg.n + 1);
        let (lo, hi) = twistor::interval(&cfg, i);
        let lam = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => lo + t * (hi - lo),
            (false, _) => hi - 10.0 * t,
            (_, false) => lo + 10.0 * t,
        };
        let m2 = twistor::chain_modulus_sq(&cfg, i, lam);
        prop_assert!(m2 > 0.0);
        let back = twistor::solve_lambda(&cfg, i, m2).unwrap();
        prop_assert!((back - lam).abs() <= 1e-10 * (1.0 + lam.abs()));
    }

    #[test]
    fn chain_lines_are_real_and_on_the_model(pts in branch_points(1..=3), i in 0usize..7, r in 0.2f64..4.0, th in 0.0f64..std::f64::consts::TAU) {
        let cfg = cfg(&pts);
        let i = i % (2 * cfg.n + 1);
        let line = twistor::chain_line(&cfg, i, C64::from_polar(r, th)).unwrap();
        prop_assert!(line.product_defect(&cfg) < 1e-10);
        prop_assert!(line.reality_defect(16) < 1e-10);
    }
}

#[test]
fn modulus_is_strictly_decreasing_on_hundred_point_grids() {
    for pts in [&[-1.0, 2.0][..], &GENUS_ONE, &GENUS_TWO] {
        let (worst, mono) = verify::lambda_round_trip(&cfg(pts), 100);
        assert!(worst <= 1e-10);
        assert!(mono);
    }
}

#[test]
fn osculating_image_has_multiplicity_n() {
    for pts in [&GENUS_ONE[..], &GENUS_TWO] {
        let cfg = cfg(pts);
        let rep = twistor::image_of_chain_line(&cfg, 0, cfg.a(1) - 1.0).unwrap();
        assert_eq!(rep.components.len(), 1);
        assert_eq!(rep.components[0].multiplicity, cfg.n);
        assert_eq!(rep.orbifold_order, cfg.n);
        let h = rep.hyperplane.unwrap();
        // P = (z - lambda)^n and c = 0.
        assert_eq!(h.c, c(0.0, 0.0));
        assert!((h.p[cfg.n] - c(1.0, 0.0)).norm() < 1e-15);
    }
}

#[test]
fn central_pencil_ends_are_the_corner_members() {
    for pts in [&GENUS_ONE[..], &GENUS_TWO] {
        let cfg = cfg(pts);
        let n = cfg.n;
        let s = FamilySolver::new(&cfg, SolverOptions::default());
        let left = twistor::central_line_image(&cfg, Some(c(0.0, 0.0))).hyperplane.unwrap();
        let right = twistor::central_line_image(&cfg, None).hyperplane.unwrap();
        assert!(hyperplane_distance(&left, &s.corner_member(n).h) < 1e-12);
        assert!(hyperplane_distance(&right, &s.corner_member(n + 1).h) < 1e-12);
    }
}

#[test]
fn chain_lines_lie_in_their_image_hyperplanes() {
    let cfg = cfg(&GENUS_TWO);
    for i in [0, 1, 2, 4, 5, 6] {
        let line = twistor::chain_line(&cfg, i, c(0.8, 0.6)).unwrap();
        let lam = match line.kind {
            twistor::LineKind::Chain { lambda, .. } => lambda,
            _ => unreachable!(),
        };
        let h3 = Hyperplane3::pullback(&twistor::image_of_chain_line(&cfg, i, lam).unwrap().hyperplane.unwrap());
        for p in line.image_samples(&cfg, 16).unwrap() {
            let s = p.iter().map(|x| x.norm()).fold(0.0, f64::max);
            assert!(h3.eval(&p).norm() <= 1e-12 * s);
        }
    }
}

/// Generic real twistor lines: the quotient image is a hyperplane section
/// through `q + conj q + 2D'` and `q` lies in the open quarter.
#[test]
fn generic_lines_map_to_family_members() {
    let cfg = cfg(&GENUS_ONE);
    let s = FamilySolver::new(&cfg, SolverOptions::default());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut built = 0;
    while built < 20 {
        let p = c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let q = rng.gen_range(-3.0..3.0);
        let th = rng.gen_range(0.0..std::f64::consts::TAU);
        let Ok(line) = twistor::generic_line(&cfg, p, q, &RootSelection::NegativeReal, th) else {
            continue;
        };
        built += 1;
        assert!(line.product_defect(&cfg) < 1e-10);
        assert!(line.reality_defect(16) < 1e-10);
        let img = twistor::image_of_generic_line(&cfg, &line, 40).unwrap();
        assert!(img.surface_residual <= 1e-10);
        assert!(img.singular_ratio < 1e-8);
        assert!(img.shape_defect <= 1e-8);
        assert!(img.q_in_open_quarter);
        let m = s.continue_to(img.q.z().unwrap(), None).unwrap();
        assert!(hyperplane_distance(&m.h, &img.h) < 1e-7);
        // A member with q, conj q simple and D' doubled has deg D' = g
        // double points on the curve.
        let cls = classifier::classify_member(&cfg, &img.h).unwrap();
        assert_eq!(cls.genus_drop, cfg.genus());
    }
}

//! Named numerical verification suites. Each suite returns a list of
//! [`Check`]s; nothing here panics on a failed property.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classifier::{self, LocalType};
use crate::config::RunConfig;
use crate::curve::{BranchConfig, CurvePoint, Flavor};
use crate::error::Result;
use crate::family::{FamilyMember, FamilySolver, SolverOptions};
use crate::jacobian::{JacOptions, Jacobian, JacobianPoint};
use crate::pencils::{self, EqualDivision};
use crate::poly::{self, c, C64};
use crate::projective::{
    self, hyperplane_distance, normalized_coeff_distance, quotient_map, restrict_hyperplane,
    Hyperplane, Hyperplane3, MonomialSplit,
};
use crate::report::Check;
use crate::twistor::{self, RootSelection};

#[derive(Clone, Debug, Serialize)]
pub struct Suite {
    pub name: String,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl Suite {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn timed(name: &str, f: impl FnOnce() -> Vec<Check>) -> Suite {
    let t0 = Instant::now();
    let checks = f();
    Suite {
        name: name.to_string(),
        checks,
        seconds: t0.elapsed().as_secs_f64(),
    }
}

fn vadd(a: &[C64], b: &[C64]) -> JacobianPoint {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vscale(a: &[C64], s: f64) -> JacobianPoint {
    a.iter().map(|x| x * s).collect()
}

/// `a(h|_Sigma)` modulo the lattice.
pub fn abel_residual(jac: &Jacobian, cfg: &BranchConfig, h: &Hyperplane) -> Result<f64> {
    let d = restrict_hyperplane(h, cfg)?;
    Ok(jac.lattice.norm_mod(&jac.abel_divisor(&d)?))
}

/// `2 a(D'_q) + beta(q)` modulo the lattice.
pub fn doubling_residual(jac: &Jacobian, m: &FamilyMember) -> Result<f64> {
    let a = jac.abel_divisor(&m.d_prime)?;
    let b = jac.beta(&m.q)?;
    Ok(jac.lattice.norm_mod(&vadd(&vscale(&a, 2.0), &b)))
}

fn solver_options(rc: &RunConfig) -> SolverOptions {
    SolverOptions {
        newton_tol: rc.tolerances.newton,
        ..SolverOptions::default()
    }
}

pub fn jac_options(rc: &RunConfig) -> JacOptions {
    JacOptions {
        quadrature_tol: rc.tolerances.quadrature,
        ..JacOptions::default()
    }
}

/// Points of the open quarter a fixed distance from its boundary.
pub fn interior_points(cfg: &BranchConfig, count: usize, rng: &mut impl Rng) -> Vec<C64> {
    let lo = cfg.a(1) - 1.0;
    let hi = cfg.a(2 * cfg.n) + 1.0;
    let top = 0.5 * (hi - lo);
    (0..count)
        .map(|_| c(rng.gen_range(lo..hi), rng.gen_range(0.15 * top..top)))
        .collect()
}

/// Boundary parameters on the real arcs, away from the corners. The
/// unbounded arc contributes one point on each side.
pub fn real_arc_parameters(cfg: &BranchConfig) -> Vec<f64> {
    let n = cfg.n;
    let mut out = Vec::new();
    if n % 2 == 0 {
        out.push(cfg.a(2 * n) + 2.0);
        out.push(cfg.a(1) - 3.0);
    }
    for i in 1..2 * n {
        if i % 2 == n % 2 {
            out.push(cfg.a(i) + 0.35 * (cfg.a(i + 1) - cfg.a(i)));
        }
    }
    out
}

/// Exact check of `Q(rnc) = prod (z - a_j u)` with rational arithmetic on the
/// binary values of the branch points.
pub fn exact_minitwistor_check(cfg: &BranchConfig) -> bool {
    let n = cfg.n;
    let eq = projective::minitwistor_equation(cfg);
    // prod (z - a_j): coefficient of z^k u^(2n-k) is f_k.
    let mut f = vec![BigRational::one()];
    for &a in &cfg.branch_points {
        let a = BigRational::from_float(a).unwrap();
        let mut next = vec![BigRational::zero(); f.len() + 1];
        for (k, x) in f.iter().enumerate() {
            next[k + 1] += x;
            next[k] -= x * &a;
        }
        f = next;
    }
    let mut q = vec![BigRational::zero(); 2 * n + 1];
    for &(a, b, coef) in &eq.terms {
        if a > n || b > n {
            return false;
        }
        q[a + b] += BigRational::from_float(coef).unwrap();
    }
    q == f
}

pub fn curve_suite(cfg: &BranchConfig, rc: &RunConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(rc.seed);
    let mut out = Vec::new();
    let r = cfg.r_far();
    let mut worst: f64 = 0.0;
    for _ in 0..rc.densities.random_points {
        let z = c(rng.gen_range(-r..r), rng.gen_range(-r..r));
        let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let p = CurvePoint::finite(z, cfg.branch_fn(z) * s);
        worst = worst.max(cfg.residual(&p));
    }
    out.push(Check::bound("curve residual of v = F(z) against f", worst, 1e-10));
    let expanded = poly::from_roots_real(&cfg.branch_points);
    let fd = expanded
        .iter()
        .zip(&cfg.f_coeffs)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / poly::max_abs_real(&expanded);
    out.push(Check::bound("f coefficients expand the branch points", fd, 1e-14));

    let mut inv: f64 = 0.0;
    for _ in 0..rc.densities.random_points.min(2000) {
        let p = cfg.random_point(&mut rng, r);
        let s = cfg.apply_sigma(&p);
        let t = cfg.apply_tau(&p);
        inv = inv
            .max(cfg.apply_sigma(&s).distance(&p))
            .max(cfg.apply_tau(&t).distance(&p))
            .max(cfg.apply_sigma(&t).distance(&cfg.apply_tau(&s)));
    }
    out.push(Check::bound("sigma and tau are commuting involutions", inv, 1e-12));

    let m = 2 * cfg.n;
    let mut alternate = true;
    let mut joined = true;
    let mut fixed: f64 = 0.0;
    for i in 0..m {
        let fl = cfg.classify_circle(i).flavor;
        let next = cfg.classify_circle((i + 1) % m).flavor;
        alternate &= fl != next;
        let (start, end) = if i == 0 { (cfg.a(1), cfg.a(m)) } else { (cfg.a(i), cfg.a(i + 1)) };
        let e0 = cfg.circle_point(i, std::f64::consts::PI).distance(&CurvePoint::finite(c(start, 0.0), c(0.0, 0.0)));
        let e1 = cfg.circle_point(i, 0.0).distance(&CurvePoint::finite(c(end, 0.0), c(0.0, 0.0)));
        joined &= e0 < 1e-9 && e1 < 1e-9;
        for k in 0..rc.densities.circle_samples {
            let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.41) / rc.densities.circle_samples as f64;
            let p = cfg.circle_point(i, th);
            let img = match fl {
                Flavor::Real => cfg.apply_sigma(&p),
                Flavor::PureImaginary => cfg.apply_sigma(&cfg.apply_tau(&p)),
            };
            let scale = 1.0 + p.v().map(|v| v.norm()).unwrap_or(0.0);
            fixed = fixed.max(img.distance(&p) / scale);
        }
    }
    out.push(Check::new("circle flavors alternate", alternate, format!("{m} circles")));
    out.push(Check::new(
        "circles meet only at ramification points",
        joined,
        "endpoint check on each circle",
    ));
    out.push(Check::bound("circle samples are fixed by their involution", fixed, 1e-12));

    let mut bad = 0;
    let mut tested = 0;
    for _ in 0..rc.densities.random_points.min(1000) {
        let p = cfg.random_point(&mut rng, r);
        let z = p.z().unwrap();
        if z.im.abs() < 1e-6 {
            continue;
        }
        tested += 1;
        let orbit = [p, cfg.apply_sigma(&p), cfg.apply_tau(&p), cfg.apply_sigma(&cfg.apply_tau(&p))];
        let inside = orbit
            .iter()
            .filter(|q| {
                let m = cfg.quarter_membership(q, 1e-12);
                m.in_quarter && !m.on_boundary
            })
            .count();
        if inside != 1 {
            bad += 1;
        }
    }
    out.push(Check::new(
        "each orbit meets the open quarter once",
        bad == 0,
        format!("{bad} of {tested} orbits"),
    ));
    out
}

pub fn projective_suite(cfg: &BranchConfig, rc: &RunConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(rc.seed ^ 0x51);
    let n = cfg.n;
    let mut out = Vec::new();
    out.push(Check::new(
        "minitwistor equation holds exactly on the rational normal curve",
        exact_minitwistor_check(cfg),
        "rational arithmetic on the coefficients",
    ));
    let eq = projective::minitwistor_equation(cfg);
    let alt = projective::minitwistor_equation_with(cfg, MonomialSplit::Extremal);
    let mut rel: f64 = 0.0;
    let mut split: f64 = 0.0;
    for _ in 0..200 {
        let l = c(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        let v = projective::rnc_embed(n, Some(l));
        let fv = cfg.f(l);
        let q = eq.eval(&v);
        let scale = cfg.branch_points.iter().fold(1.0, |acc, a| acc * (l.norm() + a.abs()));
        rel = rel.max((q - fv).norm() / scale);
        split = split.max((q - alt.eval(&v)).norm() / scale);
    }
    out.push(Check::bound("Q on the rational normal curve equals f", rel, 1e-12));
    out.push(Check::bound("monomial splits agree on the scroll", split, 1e-12));

    let mut qres: f64 = 0.0;
    for _ in 0..200 {
        let z = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let u = C64::from_polar(rng.gen_range(0.3..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
        let x = C64::from_polar(rng.gen_range(0.3..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
        let prod = cfg.branch_points.iter().fold(c(1.0, 0.0), |acc, &a| acc * (z - u * a));
        match quotient_map(x, prod / x, z, u, cfg) {
            Ok(pt) => qres = qres.max(projective::minitwistor_residual(&eq, &pt)),
            Err(_) => qres = f64::INFINITY,
        }
    }
    out.push(Check::bound("quotient map lands on the minitwistor surface", qres, 1e-10));

    let count = (rc.densities.random_points / 2).max(2);
    let mut wrong = 0;
    let mut sigma: f64 = 0.0;
    for k in 0..count {
        let p: Vec<C64> = (0..=n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let cw = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        // Every fourth hyperplane passes through the vertex.
        let cw = if k % 4 == 3 { c(0.0, 0.0) } else { cw };
        match restrict_hyperplane(&Hyperplane::new(p, cw), cfg) {
            Ok(d) if d.degree() == 2 * n => {}
            _ => wrong += 1,
        }
        let pr: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let cr = rng.gen_range(-1.0..1.0);
        let cw = if n % 2 == 0 { c(cr, 0.0) } else { c(0.0, cr) };
        let h = Hyperplane::from_real(&pr, n, cw);
        if let Ok(d) = restrict_hyperplane(&h, cfg) {
            sigma = sigma.max(d.mismatch(&d.map(|q| cfg.apply_sigma(q))));
        }
    }
    out.push(Check::new(
        "restriction degree is 2n",
        wrong == 0,
        format!("{wrong} of {count} random hyperplanes"),
    ));
    out.push(Check::bound("real hyperplanes restrict to sigma-invariant divisors", sigma, 1e-8));
    out
}

pub fn pencils_suite(cfg: &BranchConfig, rc: &RunConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(rc.seed ^ 0x77);
    let n = cfg.n;
    let mut out = Vec::new();
    let divs = pencils::all_divisions(n);
    let expected = (poly::binom(2 * n, n) / 2.0).round() as usize;
    out.push(Check::new(
        "number of equal divisions",
        divs.len() == expected,
        format!("{} divisions, expected {expected}", divs.len()),
    ));
    let mut ident: f64 = 0.0;
    let mut swap: f64 = 0.0;
    let mut real_ok = true;
    let mut fiber: f64 = 0.0;
    for div in &divs {
        for _ in 0..20 {
            let t = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            ident = ident.max(pencils::family_identity_defect(div, cfg, t));
        }
        for _ in 0..8 {
            let s = rng.gen_range(-3.0..3.0);
            let h = pencils::family_member(div, cfg, s);
            let h2 = pencils::family_member(&div.swapped(), cfg, pencils::swap_parameter(n, s));
            swap = swap.max(hyperplane_distance(&h, &h2));
            real_ok &= h.is_real(n, 1e-12);
            if let Ok(d) = restrict_hyperplane(&h, cfg) {
                let t = pencils::pencil_t(n, s);
                let f = pencils::psi_fiber(div, cfg, Some(t)).times(2);
                fiber = fiber.max(d.mismatch(&f));
            } else {
                fiber = f64::INFINITY;
            }
        }
    }
    out.push(Check::bound("family identity P^2 - c^2 f = ((A - t^2 B)/2)^2", ident, 1e-12));
    out.push(Check::bound("swapped division gives the same members", swap, 1e-12));
    out.push(Check::new("members over real parameters are real", real_ok, "all divisions"));
    out.push(Check::bound("restriction equals twice the fiber", fiber, 1e-8));
    let mut distinct = f64::INFINITY;
    for (i, a) in divs.iter().enumerate() {
        for b in &divs[i + 1..] {
            let d = hyperplane_distance(&pencils::family_member(a, cfg, 0.0), &pencils::family_member(b, cfg, 0.0));
            distinct = distinct.min(d);
        }
    }
    out.push(Check::new(
        "families are pairwise distinct",
        divs.len() < 2 || distinct > 1e-6,
        format!("min distance at s = 0: {distinct:.3e}"),
    ));
    let central = EqualDivision::central(n);
    let mut unique = true;
    for _ in 0..20 {
        let s = rng.gen_range(0.05..5.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let d = pencils::psi_fiber(&central, cfg, Some(pencils::pencil_t(n, s)));
        let on: usize = d
            .points
            .iter()
            .filter(|(p, _)| cfg.circle_of_point(p, 1e-9).map(|c| c.index) == Some(n))
            .map(|(_, m)| *m)
            .sum();
        unique &= on == 1;
    }
    out.push(Check::new("each fiber meets the central circle once", unique, "20 parameters"));
    out.extend(pencils::verify_circle_images(cfg, rc.densities.circle_samples));
    out
}

pub fn jacobian_suite(cfg: &BranchConfig, jac: &Jacobian, rc: &RunConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(rc.seed ^ 0x99);
    let n = cfg.n;
    let tol = rc.tolerances.abel;
    let mut out = Vec::new();
    if jac.g() == 0 {
        out.push(Check::new("genus zero: trivial Jacobian", true, "n = 1"));
        return out;
    }
    let rr = jac.lattice.riemann_relations();
    out.push(Check::bound("period matrix is symmetric", rr.symmetry_defect, 1e-9));
    out.push(Check::new(
        "imaginary part of the period matrix is definite",
        rr.min_imag_eigenvalue > 0.0,
        format!("min eigenvalue {:.3e}", rr.min_imag_eigenvalue),
    ));
    let solver = FamilySolver::new(cfg, solver_options(rc));
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for lam in real_arc_parameters(cfg).into_iter().chain([f64::INFINITY]) {
        let h = solver.boundary_member(lam).h;
        worst = worst.max(abel_residual(jac, cfg, &h).unwrap_or(f64::INFINITY));
        count += 1;
    }
    for div in pencils::all_divisions(n) {
        for _ in 0..3 {
            let h = pencils::family_member(&div, cfg, rng.gen_range(-3.0..3.0));
            worst = worst.max(abel_residual(jac, cfg, &h).unwrap_or(f64::INFINITY));
            count += 1;
        }
    }
    out.push(Check::new(
        "Abel residual of boundary and pencil members",
        worst <= tol,
        format!("max {worst:.3e} over {count} members, bound {tol:.1e}"),
    ));
    let mut lift: f64 = 0.0;
    for _ in 0..100 {
        let i = rng.gen_range(0..2 * n);
        let p = cfg.circle_point(i, rng.gen_range(0.1..3.0));
        let y = match jac.abel_point(&p) {
            Ok(y) => y,
            Err(_) => {
                lift = f64::INFINITY;
                continue;
            }
        };
        let target = vscale(&y, -2.0);
        let seed: JacobianPoint = y.iter().map(|x| x + c(1e-4, -1e-4)).collect();
        match jac.doubling_lift(&target, &seed) {
            Ok(x) => lift = lift.max(jac.lattice.distance(&x, &y)),
            Err(_) => lift = f64::INFINITY,
        }
    }
    out.push(Check::bound("doubling lift is a local section", lift, 1e-10));
    // beta along a horizontal line through the quarter: no jumps.
    let (lo, hi) = (cfg.a(1) - 1.0, cfg.a(2 * n) + 1.0);
    let steps = 64;
    let mut incs = Vec::new();
    let mut prev: Option<JacobianPoint> = None;
    for k in 0..=steps {
        let z = c(lo + (hi - lo) * k as f64 / steps as f64, 0.7);
        let q = CurvePoint::finite(z, cfg.quarter_sign() * cfg.branch_fn(z));
        if let Ok(b) = jac.beta(&q) {
            if let Some(p) = &prev {
                incs.push(jac.lattice.distance(&b, p));
            }
            prev = Some(b);
        }
    }
    let mut sorted = incs.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = sorted.get(sorted.len() / 2).copied().unwrap_or(0.0);
    let max = sorted.last().copied().unwrap_or(f64::INFINITY);
    out.push(Check::new(
        "beta is continuous along a path",
        incs.len() == steps && max <= 10.0 * median.max(1e-6),
        format!("max increment {max:.3e}, median {median:.3e}"),
    ));
    out
}

pub fn family_suite(cfg: &BranchConfig, jac: &Jacobian, rc: &RunConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(rc.seed ^ 0x1234);
    let n = cfg.n;
    let tol = rc.tolerances.abel;
    let solver = FamilySolver::new(cfg, solver_options(rc));
    let mut out = Vec::new();

    let mut shape: f64 = 0.0;
    let mut deg_ok = true;
    for lam in real_arc_parameters(cfg).into_iter().chain([f64::INFINITY]) {
        let m = solver.boundary_member(lam);
        shape = shape.max(solver.restriction_defect(&m).unwrap_or(f64::INFINITY));
        deg_ok &= m.d_prime.degree() == n - 1;
    }
    for j in 1..=2 * n {
        let m = solver.corner_member(j);
        shape = shape.max(solver.restriction_defect(&m).unwrap_or(f64::INFINITY));
        deg_ok &= m.d_prime.degree() == n - 1;
    }
    out.push(Check::bound("boundary members restrict as q + conj q + 2D'", shape, 1e-8));

    let pts = interior_points(cfg, rc.densities.members, &mut rng);
    let mut members = Vec::new();
    let mut failures = 0;
    for &z in &pts {
        match solver.continue_to(z, None) {
            Ok(m) => members.push(m),
            Err(_) => failures += 1,
        }
    }
    out.push(Check::new(
        "continuation reaches every interior sample",
        failures == 0,
        format!("{failures} failures of {}", pts.len()),
    ));
    let mut ishape: f64 = 0.0;
    let mut abel: f64 = 0.0;
    let mut dbl: f64 = 0.0;
    for m in &members {
        ishape = ishape.max(solver.restriction_defect(m).unwrap_or(f64::INFINITY));
        abel = abel.max(abel_residual(jac, cfg, &m.h).unwrap_or(f64::INFINITY));
        if n > 1 {
            dbl = dbl.max(doubling_residual(jac, m).unwrap_or(f64::INFINITY));
        }
        deg_ok &= m.d_prime.degree() == n - 1;
    }
    out.push(Check::bound("interior members restrict as q + conj q + 2D'", ishape, 1e-7));
    out.push(Check::bound("Abel residual of interior members", abel, tol));
    out.push(Check::bound("doubling relation 2a(D') + beta(q) = 0", dbl, tol));
    out.push(Check::new("deg D' = n - 1", deg_ok, "boundary, corner and interior members"));

    let mut offs: f64 = 0.0;
    for lam in real_arc_parameters(cfg) {
        offs = offs.max(solver.boundary_offset_error(lam, 1e-4).unwrap_or(f64::INFINITY));
    }
    out.push(Check::bound("continuation matches boundary members at offset 1e-4", offs, 1e-6));

    let anchors = real_arc_parameters(cfg);
    let mut path: f64 = 0.0;
    for &z in pts.iter().take(3) {
        let a = solver.continue_to(z, Some(anchors[0]));
        let b = solver.continue_to(z, Some(*anchors.last().unwrap()));
        path = path.max(match (a, b) {
            (Ok(a), Ok(b)) => hyperplane_distance(&a.h, &b.h),
            _ => f64::INFINITY,
        });
    }
    out.push(Check::bound("results do not depend on the anchor", path, 1e-8));

    let mut corner: f64 = 0.0;
    for j in 1..=2 * n {
        let h = solver.corner_member(j).h;
        for side in [-1.0, 1.0] {
            // Next to the central arc the parameter moves like sqrt(offset).
            let lam = cfg.a(j) + side * 1e-14 * (1.0 + cfg.a(j).abs());
            corner = corner.max(normalized_coeff_distance(&solver.boundary_member(lam).h, &h));
        }
    }
    out.push(Check::bound("boundary family is continuous through the corners", corner, 1e-6));
    let inf_h = solver.boundary_member(f64::INFINITY).h;
    let inf = normalized_coeff_distance(&solver.boundary_member(1e10).h, &inf_h)
        .max(normalized_coeff_distance(&solver.boundary_member(-1e10).h, &inf_h));
    out.push(Check::bound("both limits at infinity agree", inf, 1e-6));

    if n > 1 {
        let start = jac.origin();
        match jac.seifert_lift(&solver.boundary_trace(24), &start) {
            Ok(s) => out.push(Check::bound("boundary doubling lift closes", s.closure_defect, 1e-8)),
            Err(e) => out.push(Check::new("boundary doubling lift closes", false, e.to_string())),
        }
    }

    let rep = solver.slice_injectivity_check(&members, rc.densities.phases, 1e-6);
    out.extend(rep.checks(1e-6));
    out.extend(minus_one_checks(&solver, &members));
    out
}

/// The element `-1` acts on restrictions by the hyperelliptic involution and
/// only `t = +-1` keep the centre on a rotated hyperplane.
pub fn minus_one_checks(solver: &FamilySolver, members: &[FamilyMember]) -> Vec<Check> {
    let cfg = &solver.cfg;
    let mut tau: f64 = 0.0;
    let mut centre = true;
    for m in members {
        let r = solver.rotate_member(m, c(-1.0, 0.0));
        match (restrict_hyperplane(&m.h, cfg), restrict_hyperplane(&r.h, cfg)) {
            (Ok(a), Ok(b)) => tau = tau.max(b.mismatch(&a.map(|p| cfg.apply_tau(p)))),
            _ => tau = f64::INFINITY,
        }
        for k in 1..8 {
            let t = C64::from_polar(1.0, std::f64::consts::PI * k as f64 / 8.0);
            if k != 4 && m.h3.rotate(t).through_centre(1e-9) {
                centre = false;
            }
        }
    }
    vec![
        Check::bound("rotation by -1 acts as tau on restrictions", tau, 1e-8),
        Check::new("only t = +-1 keep the centre", centre, format!("{} members", members.len())),
    ]
}

pub fn twistor_suite(cfg: &BranchConfig, rc: &RunConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(rc.seed ^ 0x4242);
    let n = cfg.n;
    let mut out = Vec::new();
    let (rt, mono) = lambda_round_trip(cfg, 100);
    out.push(Check::bound("solve_lambda inverts the modulus formula", rt, 1e-10));
    out.push(Check::new("modulus is strictly decreasing on each interval", mono, "100-point grids"));

    let mut prod: f64 = 0.0;
    let mut real: f64 = 0.0;
    let mut onh: f64 = 0.0;
    for i in 0..=2 * n {
        let cv = C64::from_polar(rng.gen_range(0.3..3.0), rng.gen_range(0.0..std::f64::consts::TAU));
        let line = match twistor::chain_line(cfg, i, cv) {
            Ok(l) => l,
            Err(_) => {
                prod = f64::INFINITY;
                continue;
            }
        };
        prod = prod.max(line.product_defect(cfg));
        real = real.max(line.reality_defect(16));
        if i != n {
            let lam = match line.kind {
                twistor::LineKind::Chain { lambda, .. } => lambda,
                _ => unreachable!(),
            };
            if let (Ok(rep), Ok(samples)) = (twistor::image_of_chain_line(cfg, i, lam), line.image_samples(cfg, 12)) {
                let h3 = Hyperplane3::pullback(rep.hyperplane.as_ref().unwrap());
                for p in samples {
                    let s = p.iter().map(|x| x.norm()).fold(0.0, f64::max);
                    onh = onh.max(h3.eval(&p).norm() / s);
                }
            } else {
                onh = f64::INFINITY;
            }
        }
    }
    out.push(Check::bound("chain lines lie on the model", prod, 1e-10));
    out.push(Check::bound("chain lines are real", real, 1e-10));
    out.push(Check::bound("chain lines lie in their image hyperplanes", onh, 1e-12));

    let mut cont: f64 = 0.0;
    for i in 1..=2 * n {
        let a = cfg.a(i);
        let left = i - 1;
        let right = i;
        let h = |k: usize, lam: f64| -> Option<Hyperplane> {
            if k == n {
                // Limits of the central component are the ends of the pencil.
                let t = if lam < 0.5 * (cfg.a(n) + cfg.a(n + 1)) { Some(c(0.0, 0.0)) } else { None };
                twistor::central_line_image(cfg, t).hyperplane
            } else {
                twistor::image_of_chain_line(cfg, k, lam).ok().and_then(|r| r.hyperplane)
            }
        };
        match (h(left, a - 1e-9), h(right, a + 1e-9)) {
            (Some(x), Some(y)) => cont = cont.max(normalized_coeff_distance(&x, &y)),
            _ => cont = f64::INFINITY,
        }
    }
    out.push(Check::bound("chain image hyperplanes are continuous across a_i", cont, 1e-6));

    let solver = FamilySolver::new(cfg, SolverOptions::default());
    let l0 = twistor::central_line_image(cfg, Some(c(0.0, 0.0)));
    let linf = twistor::central_line_image(cfg, None);
    let hl = solver.corner_member(n).h;
    let hr = solver.corner_member(n + 1).h;
    let ends = hyperplane_distance(l0.hyperplane.as_ref().unwrap(), &hl)
        .max(hyperplane_distance(linf.hyperplane.as_ref().unwrap(), &hr));
    out.push(Check::bound("ends of the central pencil are h_L and h_R", ends, 1e-12));

    let mut gprod: f64 = 0.0;
    let mut greal: f64 = 0.0;
    let mut ratio: f64 = 0.0;
    let mut surf: f64 = 0.0;
    let mut shape: f64 = 0.0;
    let mut inq = true;
    let mut agree: f64 = 0.0;
    let mut phase: f64 = 0.0;
    let mut built = 0;
    let lines = if n == 1 { 2 } else { 4 };
    for _ in 0..lines {
        let p = c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let q = rng.gen_range(cfg.a(1)..cfg.a(2 * n));
        let th = rng.gen_range(0.0..std::f64::consts::TAU);
        let line = match twistor::generic_line(cfg, p, q, &RootSelection::NegativeReal, th) {
            Ok(l) => l,
            Err(_) => continue,
        };
        built += 1;
        gprod = gprod.max(line.product_defect(cfg));
        greal = greal.max(line.reality_defect(16));
        match twistor::image_of_generic_line(cfg, &line, 8 * (n + 3)) {
            Ok(img) => {
                ratio = ratio.max(img.singular_ratio);
                surf = surf.max(img.surface_residual);
                shape = shape.max(img.shape_defect);
                inq &= img.q_in_open_quarter;
                agree = agree.max(match solver.continue_to(img.q.z().unwrap(), None) {
                    Ok(m) => hyperplane_distance(&m.h, &img.h),
                    Err(_) => f64::INFINITY,
                });
                let other = twistor::generic_line(cfg, p, q, &RootSelection::NegativeReal, th + 1.3)
                    .and_then(|l| twistor::image_of_generic_line(cfg, &l, 8 * (n + 3)));
                phase = phase.max(match other {
                    Ok(o) => hyperplane_distance(&o.h, &img.h),
                    Err(_) => f64::INFINITY,
                });
            }
            Err(_) => {
                ratio = f64::INFINITY;
            }
        }
    }
    out.push(Check::new("generic lines constructed", built == lines, format!("{built} of {lines}")));
    out.push(Check::bound("generic lines lie on the model", gprod, 1e-10));
    out.push(Check::bound("generic lines are real", greal, 1e-10));
    out.push(Check::bound("generic images lie on the minitwistor surface", surf, 1e-10));
    out.push(Check::bound("generic images span a unique hyperplane", ratio, 1e-8));
    out.push(Check::bound("generic images restrict as q + conj q + 2D'", shape, 1e-8));
    out.push(Check::new("extracted q lies in the open quarter", inq, format!("{built} lines")));
    out.push(Check::bound("generic images are the continued family members", agree, 1e-7));
    out.push(Check::bound("image hyperplane is independent of the circle phase", phase, 1e-7));
    out
}

/// Worst round-trip error of `solve_lambda` and strict monotonicity of the
/// modulus on `count`-point grids in every interval.
pub fn lambda_round_trip(cfg: &BranchConfig, count: usize) -> (f64, bool) {
    let n = cfg.n;
    let mut worst: f64 = 0.0;
    let mut mono = true;
    for i in 0..=2 * n {
        let (lo, hi) = twistor::interval(cfg, i);
        let (a, b) = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => (lo, hi),
            (false, true) => (hi - 10.0, hi),
            (true, false) => (lo, lo + 10.0),
            _ => unreachable!(),
        };
        let mut prev = f64::INFINITY;
        for k in 1..=count {
            let lam = a + (b - a) * k as f64 / (count + 1) as f64;
            let m2 = twistor::chain_modulus_sq(cfg, i, lam);
            mono &= m2 < prev;
            prev = m2;
            match twistor::solve_lambda(cfg, i, m2) {
                Ok(l) => worst = worst.max((l - lam).abs() / (1.0 + lam.abs())),
                Err(_) => worst = f64::INFINITY,
            }
        }
    }
    (worst, mono)
}

pub fn classifier_suite(cfg: &BranchConfig, rc: &RunConfig) -> Vec<Check> {
    let n = cfg.n;
    let mut out = Vec::new();
    let solver = FamilySolver::new(cfg, solver_options(rc));
    for (label, j) in [("h_L", n), ("h_R", n + 1)] {
        let h = solver.corner_member(j).h;
        match classifier::classify_member(cfg, &h) {
            Ok(cls) => {
                let real = cls
                    .records
                    .iter()
                    .filter(|r| matches!(r.kind, LocalType::NodeReal { .. }))
                    .count();
                out.push(Check::new(
                    format!("{label} has n real nodes"),
                    real == n && cls.records.len() == n && cls.genus_drop == n,
                    format!("{real} real nodes, genus drop {}", cls.genus_drop),
                ));
            }
            Err(e) => out.push(Check::new(format!("{label} has n real nodes"), false, e.to_string())),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rc.seed ^ 0xc1a5);
    let mut paired = true;
    let mut drops = Vec::new();
    for z in interior_points(cfg, 4, &mut rng) {
        if let Ok(m) = solver.continue_to(z, None) {
            if let Ok(cls) = classifier::classify_member(cfg, &m.h) {
                paired &= cls.sigma_paired;
                drops.push(cls.genus_drop);
            }
        }
    }
    out.push(Check::new(
        "singularities of real members are sigma-paired",
        paired && !drops.is_empty(),
        format!("{} members", drops.len()),
    ));
    out.push(Check::new(
        "interior members have n - 1 double points on the curve",
        !drops.is_empty() && drops.iter().all(|&d| d == n - 1),
        format!("genus drops {drops:?}"),
    ));
    out.extend(transition_suite(cfg, rc));
    out
}

fn is_symmetric(cfg: &BranchConfig) -> bool {
    let m = 2 * cfg.n;
    (1..=m).all(|i| (cfg.a(i) + cfg.a(m + 1 - i)).abs() <= 1e-12 * (1.0 + cfg.a(i).abs()))
}

pub fn transition_suite(cfg: &BranchConfig, rc: &RunConfig) -> Vec<Check> {
    let n = cfg.n;
    let mut out = Vec::new();
    let grid = classifier::geometric_grid(1e-3, 1e3, rc.densities.trace_grid);
    let div = EqualDivision::central(n);
    match classifier::trace_transitions(cfg, &div, &grid) {
        Ok(tr) => {
            out.push(Check::new(
                "trace endpoints are all-real",
                tr.endpoints_all_real,
                format!("{} criticals", tr.criticals.len()),
            ));
            out.push(Check::new(
                "regime labels are constant between criticals",
                tr.consistent,
                format!("{} regimes", tr.regimes.len()),
            ));
            let alternating = tr.regimes.windows(2).all(|w| w[0].label != w[1].label);
            out.push(Check::new("regimes alternate at criticals", alternating, regime_summary(&tr)));
            if is_symmetric(cfg) {
                let s: Vec<f64> = tr.criticals.iter().map(|c| c.s).collect();
                let paired = s
                    .iter()
                    .all(|&u| s.iter().any(|&w| (u * w - 1.0).abs() <= 1e-8));
                out.push(Check::new(
                    "criticals come in (u, 1/u) pairs",
                    paired,
                    format!("{s:?}"),
                ));
            }
        }
        Err(e) => out.push(Check::new("transition trace", false, e.to_string())),
    }
    out
}

pub fn regime_summary(tr: &classifier::TransitionTrace) -> String {
    tr.regimes
        .iter()
        .map(|r| r.label.as_str())
        .collect::<Vec<_>>()
        .join("/")
}

/// Runs every suite for the configuration.
pub fn run_suites(rc: &RunConfig) -> Result<Vec<Suite>> {
    let cfg = rc.branch_config()?;
    let mut suites = vec![
        timed("curve", || curve_suite(&cfg, rc)),
        timed("projective", || projective_suite(&cfg, rc)),
        timed("pencils", || pencils_suite(&cfg, rc)),
    ];
    let jac = Jacobian::new(&cfg, jac_options(rc));
    match jac {
        Ok(jac) => {
            suites.push(timed("jacobian", || jacobian_suite(&cfg, &jac, rc)));
            suites.push(timed("family", || family_suite(&cfg, &jac, rc)));
        }
        Err(e) => suites.push(Suite {
            name: "jacobian".into(),
            checks: vec![Check::new("period lattice", false, e.to_string())],
            seconds: 0.0,
        }),
    }
    suites.push(timed("twistor", || twistor_suite(&cfg, rc)));
    suites.push(timed("classifier", || classifier_suite(&cfg, rc)));
    Ok(suites)
}

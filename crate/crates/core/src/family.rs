//! The family of real hyperplanes `h_q`, `q` in the quarter, whose
//! restriction to the curve is `q + sigma(q) + 2 D'_q`.
//!
//! On the boundary the members are explicit. In the interior they are found
//! by Newton continuation of the polynomial identity
//!
//! ```text
//!     P(z)^2 - gamma f(z) = (z - z_q)(z - conj z_q) T(z)^2,   gamma = c^2,
//! ```
//!
//! written in the local coordinate `w = z - Re z_q` so that every coefficient
//! is real. The unknowns are `P` (degree `n`), `gamma` and `T` (degree `g`),
//! and one normalisation row makes the system square.

use serde::Serialize;
use twofloat::TwoFloat;

use crate::curve::{BranchConfig, CurvePoint, Flavor, Sign};
use crate::error::{Error, Result};
use crate::pencils::{self, EqualDivision};
use crate::poly::{self, c, C64};
use crate::projective::{
    hyperplane_distance, projective_distance, restrict_hyperplane, Divisor, Hyperplane,
    Hyperplane3,
};
use crate::report::Check;
use crate::roots::{self, RootOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    BoundaryExplicit,
    InteriorContinued,
    Rotated,
}

/// Real polynomial data of an interior solution, in the global coordinate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InteriorState {
    pub p: Vec<f64>,
    pub gamma: f64,
    pub t: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyMember {
    pub q: CurvePoint,
    pub h: Hyperplane,
    pub h3: Hyperplane3,
    pub d_prime: Divisor,
    pub provenance: Provenance,
    pub phase: C64,
    #[serde(skip)]
    pub state: Option<InteriorState>,
}

impl FamilyMember {
    fn new(q: CurvePoint, h: Hyperplane, d_prime: Divisor, provenance: Provenance) -> Self {
        let h = h.normalized();
        FamilyMember {
            q,
            h3: Hyperplane3::pullback(&h),
            h,
            d_prime,
            provenance,
            phase: c(1.0, 0.0),
            state: None,
        }
    }

    /// Expected restriction divisor `q + sigma(q) + 2 D'`.
    pub fn expected_restriction(&self, cfg: &BranchConfig) -> Divisor {
        let mut d = Divisor::new();
        d.add(self.q, 1, 1e-12);
        d.add(cfg.apply_sigma(&self.q), 1, 1e-12);
        d.plus(&self.d_prime.times(2), 1e-12)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SolverOptions {
    /// Relative residual accepted by Newton.
    pub newton_tol: f64,
    pub max_newton: usize,
    /// Smallest continuation step, relative to the path length.
    pub min_step: f64,
    pub initial_step: f64,
    pub max_step: f64,
    /// Largest accepted relative change between predictor and corrector.
    pub max_jump: f64,
    /// `|T(z_q)|` relative to `|T|` below which the point is flagged as a cusp.
    pub cusp_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            newton_tol: 1e-13,
            max_newton: 20,
            min_step: 1e-6,
            initial_step: 0.02,
            max_step: 0.1,
            max_jump: 0.02,
            cusp_tol: 1e-7,
        }
    }
}

fn half(k: usize) -> usize {
    k / 2
}

pub struct FamilySolver {
    pub cfg: BranchConfig,
    pub opts: SolverOptions,
    central: EqualDivision,
}

impl FamilySolver {
    pub fn new(cfg: &BranchConfig, opts: SolverOptions) -> Self {
        FamilySolver {
            cfg: cfg.clone(),
            opts,
            central: EqualDivision::central(cfg.n),
        }
    }

    fn n(&self) -> usize {
        self.cfg.n
    }

    /// Adds the extra points of `D'` over a non-central arc: `k = |n - i|`
    /// copies of the pair `q, tau q` minus one copy of `q + sigma q`.
    fn arc_extra(&self, d: &mut Divisor, q: &CurvePoint, k: usize, flavor: Flavor) {
        let tq = self.cfg.apply_tau(q);
        match flavor {
            Flavor::Real => {
                d.add(*q, half(k.saturating_sub(2)), 1e-12);
                d.add(tq, half(k), 1e-12);
            }
            Flavor::PureImaginary => {
                d.add(*q, half(k.saturating_sub(1)), 1e-12);
                d.add(tq, half(k.saturating_sub(1)), 1e-12);
            }
        }
    }

    /// Explicit member over the boundary point above `lambda` (`+-inf`
    /// allowed). Branch points give the corner members.
    pub fn boundary_member(&self, lambda: f64) -> FamilyMember {
        let cfg = &self.cfg;
        let n = self.n();
        let q = cfg.boundary_point(lambda);
        if !lambda.is_finite() {
            let h = Hyperplane::from_real(&[1.0], n, c(0.0, 0.0));
            let mut d = Divisor::new();
            self.arc_extra(&mut d, &q, n, cfg.classify_circle(0).flavor);
            return FamilyMember::new(q, h, d, Provenance::BoundaryExplicit);
        }
        if let Some(j) = cfg.branch_index(c(lambda, 0.0), 0.0) {
            return self.corner_member(j);
        }
        let i = cfg.interval_of(lambda);
        let flavor = cfg.classify_circle(i).flavor;
        if i == n {
            let t = pencils::psi_evaluate(&self.central, cfg, &q).expect("finite on central arc");
            let h = pencils::family_member_t(&self.central, cfg, t);
            let dt = pencils::psi_fiber(&self.central, cfg, Some(t));
            let d = remove_point(&dt, &q);
            return FamilyMember::new(q, h, d, Provenance::BoundaryExplicit);
        }
        let (fixed, k): (Vec<usize>, usize) = if i == 0 {
            (Vec::new(), n)
        } else if i < n {
            ((1..=i).collect(), n - i)
        } else {
            ((i + 1..=2 * n).collect(), i - n)
        };
        let roots: Vec<f64> = fixed.iter().map(|&j| cfg.a(j)).collect();
        let p = poly::mul(&poly::from_roots_real(&roots), &poly::pow_linear_real(lambda, k));
        let h = Hyperplane::from_real(&p, n, c(0.0, 0.0));
        let mut d = Divisor::new();
        for &j in &fixed {
            d.add(cfg.ramification_point(j), 1, 1e-12);
        }
        self.arc_extra(&mut d, &q, k, flavor);
        FamilyMember::new(q, h, d, Provenance::BoundaryExplicit)
    }

    /// Members at the ramification points, including `h_L` at `r_n` and
    /// `h_R` at `r_{n+1}`.
    pub fn corner_member(&self, j: usize) -> FamilyMember {
        let cfg = &self.cfg;
        let n = self.n();
        let q = cfg.ramification_point(j);
        let (fixed, k): (Vec<usize>, usize) = if j <= n {
            ((1..j).collect(), n - j + 1)
        } else {
            ((j + 1..=2 * n).collect(), j - n)
        };
        let roots: Vec<f64> = fixed.iter().map(|&i| cfg.a(i)).collect();
        let p = poly::mul(&poly::from_roots_real(&roots), &poly::pow_linear_real(cfg.a(j), k));
        let h = Hyperplane::from_real(&p, n, c(0.0, 0.0));
        let mut d = Divisor::new();
        for &i in &fixed {
            d.add(cfg.ramification_point(i), 1, 1e-12);
        }
        d.add(q, k - 1, 1e-12);
        FamilyMember::new(q, h, d, Provenance::BoundaryExplicit)
    }

    /// Interior state matching the central family at `lambda` in the open
    /// central arc.
    fn anchor_state(&self, lambda: f64) -> InteriorState {
        let cfg = &self.cfg;
        if cfg.interval_of(lambda) != self.n() {
            // Off the central arc the explicit member has c = 0 and a factor
            // `z - lambda` in P; the central pencil member through the same
            // point belongs to a different solution branch.
            let p = poly::real_parts(&self.boundary_member(lambda).h.p);
            let (tq, _) = poly::divmod_real(&p, &[-lambda, 1.0]);
            let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            return InteriorState {
                p: p.iter().map(|x| x / norm).collect(),
                gamma: 0.0,
                t: poly::pad(&tq, cfg.n).iter().map(|x| x / norm).collect(),
            };
        }
        let q = cfg.boundary_point(lambda);
        let t = pencils::psi_evaluate(&self.central, cfg, &q).expect("finite on central arc");
        let a = self.central.a_poly(cfg);
        let b = self.central.b_poly(cfg);
        // t^2 is real for the parity-adjusted parameter.
        let t2 = (t * t).re;
        let p: Vec<f64> = poly::scale(&poly::add(&a, &poly::scale(&b, t2)), 0.5);
        let gpoly: Vec<f64> = poly::scale(&poly::sub(&a, &poly::scale(&b, t2)), 0.5);
        let (tq, _) = poly::divmod_real(&gpoly, &[-lambda, 1.0]);
        let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        InteriorState {
            p: p.iter().map(|x| x / norm).collect(),
            gamma: t2 / (norm * norm),
            t: poly::pad(&tq, cfg.n).iter().map(|x| x / norm).collect(),
        }
    }

    /// Newton solve of the interior system at `z_q` from an initial state.
    /// Returns the state, the final relative residual and the iteration count.
    ///
    /// The residual is evaluated in double-double arithmetic while the
    /// Jacobian is factored in double precision. Close to a non-central arc
    /// the system is nearly singular and a plain double-precision residual
    /// loses most digits of the solution.
    pub fn newton(&self, zq: C64, guess: &InteriorState) -> Result<(InteriorState, f64, usize)> {
        let (x, res, its) = self.newton_local(zq, guess)?;
        Ok((self.unshift(&x, zq.re), res, its))
    }

    fn local_f(&self, xq: f64) -> Vec<TwoFloat> {
        let mut fhat = vec![TwoFloat::from(1.0)];
        for j in 1..=2 * self.n() {
            let r = TwoFloat::new_add(xq, -self.cfg.a(j));
            let mut next = vec![TwoFloat::from(0.0); fhat.len() + 1];
            for (k, &a) in fhat.iter().enumerate() {
                next[k] += a * r;
                next[k + 1] += a;
            }
            fhat = next;
        }
        fhat
    }

    fn newton_local(&self, zq: C64, guess: &InteriorState) -> Result<(Vec<f64>, f64, usize)> {
        let n = self.n();
        let np = n + 1;
        let xq = zq.re;
        let y2 = TwoFloat::new_mul(zq.im, zq.im);
        let fhat = self.local_f(xq);
        let ph = poly::shift_real(&poly::pad(&guess.p, np), xq);
        let th = poly::shift_real(&poly::pad(&guess.t, n), xq);
        let mut x0: Vec<f64> = ph.clone();
        x0.push(guess.gamma);
        x0.extend_from_slice(&th);
        let pref = ph;
        let pn: f64 = pref.iter().map(|v| v * v).sum();
        let mut x: Vec<TwoFloat> = x0.iter().map(|&v| TwoFloat::from(v)).collect();
        let norm = |x: &[TwoFloat]| 1.0 + x.iter().map(|v| v.hi() * v.hi()).sum::<f64>();
        let resid = |x: &[TwoFloat]| {
            let r = dd_residual(x, &fhat, y2, &pref, pn, n);
            r.iter().map(|v| v.hi() * v.hi()).sum::<f64>().sqrt()
        };
        let mut res = resid(&x) / norm(&x);
        for it in 0..self.opts.max_newton {
            if !res.is_finite() {
                break;
            }
            if res <= 1e-30 {
                return Ok((round(&x), res, it));
            }
            let jac = dd_jacobian(&x, &fhat, y2, &pref, pn, n);
            let rhs: Vec<TwoFloat> = dd_residual(&x, &fhat, y2, &pref, pn, n)
                .into_iter()
                .map(|v| -v)
                .collect();
            let Some(step) = dd_solve(jac, rhs) else {
                break;
            };
            let size = step.iter().map(|v| v.hi() * v.hi()).sum::<f64>().sqrt() / norm(&x).sqrt();
            // Damped update: halve until the residual decreases.
            let mut lam = 1.0;
            let mut accepted = false;
            for _ in 0..12 {
                let trial: Vec<TwoFloat> =
                    x.iter().zip(step.iter()).map(|(a, b)| *a + *b * lam).collect();
                let rr = resid(&trial) / norm(&trial);
                if rr < res {
                    x = trial;
                    res = rr;
                    accepted = true;
                    break;
                }
                lam *= 0.5;
            }
            if !accepted || size <= 1e-28 {
                break;
            }
            if res <= self.opts.newton_tol && size <= 1e-20 {
                return Ok((round(&x), res, it + 1));
            }
        }
        if res <= self.opts.newton_tol {
            return Ok((round(&x), res, self.opts.max_newton));
        }
        Err(Error::Divergence { residual: res })
    }

    fn unshift(&self, x: &[f64], xq: f64) -> InteriorState {
        let n = self.n();
        InteriorState {
            p: poly::shift_real(&x[..=n], -xq),
            gamma: x[n + 1],
            t: poly::shift_real(&x[n + 2..], -xq),
        }
    }

    /// Builds the member from a converged state at `q`.
    pub fn member_from_state(&self, q: &CurvePoint, st: &InteriorState) -> Result<FamilyMember> {
        let cfg = &self.cfg;
        let n = self.n();
        let (zq, vq) = match *q {
            CurvePoint::Finite { z, v } => (z, v),
            _ => return Err(Error::Degenerate("interior point at infinity".into())),
        };
        let pc = poly::to_complex(&st.p);
        let cw = poly::eval(&pc, zq) / vq;
        // c from gamma keeps full relative accuracy when c is tiny; the
        // sign comes from the sheet of q.
        let root = if st.gamma >= 0.0 {
            c(st.gamma.sqrt(), 0.0)
        } else {
            c(0.0, (-st.gamma).sqrt())
        };
        let cw = if (cw - root).norm() <= (cw + root).norm() { root } else { -root };
        let h = Hyperplane::new(poly::pad(&pc, n + 1), cw);
        let opts = RootOptions {
            lead_tol: 1e-11,
            cluster_radius: 1e-6,
            max_iter: 800,
        };
        let rts = roots::roots_with_multiplicity(&poly::to_complex(&st.t), &opts);
        let mut d = Divisor::new();
        let mut deg = 0;
        for r in rts {
            let v = poly::eval(&pc, r.z) / cw;
            let scale = 1.0 + r.z.norm();
            let p = match cfg.branch_index(r.z, 1e-9 * scale) {
                Some(j) => cfg.ramification_point(j),
                None => CurvePoint::finite(r.z, v),
            };
            d.add(p, r.mult, 1e-9);
            deg += r.mult;
        }
        let near_q = d
            .points
            .iter()
            .map(|(p, _)| p.distance(q))
            .fold(f64::INFINITY, f64::min);
        if near_q <= self.opts.cusp_tol * (1.0 + zq.norm()) {
            return Err(Error::Cusp(format!("{zq}")));
        }
        if deg < cfg.genus() {
            let s = Sign::from_value((pc[n] / cw).re);
            d.add(CurvePoint::Infinity(s), cfg.genus() - deg, 1e-9);
        }
        let mut m = FamilyMember::new(*q, h, d, Provenance::InteriorContinued);
        m.state = Some(st.clone());
        Ok(m)
    }

    /// One Newton solve at `q` seeded by a nearby member.
    pub fn interior_solve(&self, q: &CurvePoint, seed: &FamilyMember) -> Result<FamilyMember> {
        let zq = q.z().ok_or_else(|| Error::Degenerate("interior point at infinity".into()))?;
        if self.n() == 1 {
            return self.conic_member(q);
        }
        let guess = match &seed.state {
            Some(s) => s.clone(),
            None => self.state_from_member(seed)?,
        };
        let (st, _, _) = self.newton(zq, &guess)?;
        self.member_from_state(q, &st)
    }

    /// Recovers polynomial data from an explicit member.
    fn state_from_member(&self, m: &FamilyMember) -> Result<InteriorState> {
        let cfg = &self.cfg;
        let n = self.n();
        let zq = m.q.z().ok_or_else(|| Error::Degenerate("seed at infinity".into()))?;
        let ph = m.h.normalized();
        // Real representative: P real, gamma = c^2 real.
        let p = poly::real_parts(&ph.p);
        let gamma = (ph.c * ph.c).re;
        let r = poly::sub(
            &poly::mul(&p, &p),
            &poly::scale(&cfg.f_coeffs, gamma),
        );
        let quad = [zq.norm_sqr(), -2.0 * zq.re, 1.0];
        let (t2, _) = poly::divmod_real(&poly::pad(&r, 2 * n + 1), &quad);
        // Square root of the quotient via its roots: pair them up.
        let rts = roots::roots_with_multiplicity(&poly::to_complex(&t2), &RootOptions::default());
        let lead = t2.last().copied().unwrap_or(0.0);
        let mut t_roots = Vec::new();
        for rt in rts {
            for _ in 0..rt.mult / 2 {
                t_roots.push(rt.z);
            }
        }
        let tpoly = poly::from_roots(&t_roots);
        let t: Vec<f64> = poly::real_parts(&tpoly)
            .iter()
            .map(|x| x * lead.abs().sqrt())
            .collect();
        Ok(InteriorState { p, gamma, t: poly::pad(&t, n) })
    }

    /// Closed form for `n = 1`: the real line through `q` and `sigma q`.
    pub fn conic_member(&self, q: &CurvePoint) -> Result<FamilyMember> {
        let (z, v) = match *q {
            CurvePoint::Finite { z, v } => (z, v),
            _ => return Err(Error::Degenerate("point at infinity".into())),
        };
        // Unknowns (p0, p1, s) with c = i s; equation p0 + p1 z - i s v = 0.
        let w = c(0.0, 1.0) * v;
        let r1 = [1.0, z.re, -w.re];
        let r2 = [0.0, z.im, -w.im];
        let k = [
            r1[1] * r2[2] - r1[2] * r2[1],
            r1[2] * r2[0] - r1[0] * r2[2],
            r1[0] * r2[1] - r1[1] * r2[0],
        ];
        let h = Hyperplane::new(vec![c(k[0], 0.0), c(k[1], 0.0)], c(0.0, k[2]));
        Ok(FamilyMember::new(*q, h, Divisor::new(), Provenance::InteriorContinued))
    }

    /// Default anchor for continuation: the midpoint of the central arc.
    pub fn default_anchor(&self) -> f64 {
        let n = self.n();
        0.5 * (self.cfg.a(n) + self.cfg.a(n + 1))
    }

    /// Continues along the straight segment from the central anchor
    /// `lambda0` to the interior point `z` (upper half plane, quarter sheet).
    pub fn continue_to(&self, z: C64, lambda0: Option<f64>) -> Result<FamilyMember> {
        let cfg = &self.cfg;
        let q = CurvePoint::finite(z, cfg.quarter_sign() * cfg.branch_fn(z));
        if self.n() == 1 {
            return self.conic_member(&q);
        }
        let l0 = lambda0.unwrap_or_else(|| self.default_anchor());
        let mut st = self.anchor_state(l0);
        let path = self.continuation_path(l0, z);
        for w in path.windows(2) {
            st = self.continue_state(w[0], &st, w[1])?.0;
        }
        self.member_from_state(&q, &st)
    }

    /// Polyline from the anchor to `z` that rises to a safe height before
    /// moving sideways, so it never skims past a branch point.
    pub fn continuation_path(&self, lambda0: f64, z: C64) -> Vec<C64> {
        let cfg = &self.cfg;
        let spread = cfg.a(2 * cfg.n) - cfg.a(1);
        let y = z.im.max(0.25 * spread);
        let mut path = vec![c(lambda0, 0.0), c(lambda0, y), c(z.re, y), z];
        path.dedup_by(|a, b| (*a - *b).norm() <= 1e-15 * (1.0 + b.norm()));
        path
    }

    /// Path-following from `(z0, st0)` to `z1`. Returns the final state and
    /// the list of accepted parameter values.
    pub fn continue_state(
        &self,
        z0: C64,
        st0: &InteriorState,
        z1: C64,
    ) -> Result<(InteriorState, Vec<f64>)> {
        let mut s = 0.0;
        let mut h = self.opts.initial_step;
        let mut cur = st0.clone();
        let mut prev: Option<(f64, InteriorState)> = None;
        let mut params = vec![0.0];
        // A vertical leg that approaches the real axis is parametrised
        // geometrically in the height: the solution varies on the scale of
        // the distance to the boundary.
        let geometric = (z1.re - z0.re).abs() <= 1e-15 * (1.0 + z0.re.abs())
            && z1.im > 0.0
            && z1.im < 0.1 * z0.im;
        let at = |s: f64| {
            if geometric {
                c(z0.re, z0.im * (z1.im / z0.im).powf(s))
            } else {
                z0 + (z1 - z0) * s
            }
        };
        let want = if self.n() % 2 == 0 { 1.0 } else { -1.0 };
        while s < 1.0 {
            let step = h.min(1.0 - s);
            let s_new = s + step;
            let guess = match &prev {
                Some((sp, stp)) => extrapolate(stp, *sp, &cur, s, s_new),
                None => cur.clone(),
            };
            match self.newton(at(s_new), &guess) {
                Ok((st, _, its))
                    if state_jump(&st, &guess) < self.opts.max_jump
                        && st.gamma * want >= 0.0 =>
                {
                    prev = Some((s, cur));
                    cur = st;
                    s = s_new;
                    params.push(s);
                    if its <= 4 {
                        h = (h * 1.6).min(self.opts.max_step);
                    }
                }
                other => {
                    h *= 0.5;
                    if h < self.opts.min_step {
                        return match other {
                            Err(e) => Err(e),
                            Ok((st, res, _)) => Err(Error::Divergence {
                                residual: res.max(state_jump(&st, &guess)),
                            }),
                        };
                    }
                }
            }
        }
        Ok((cur, params))
    }

    /// Member over an arbitrary quarter point: explicit on the boundary,
    /// continued in the interior.
    pub fn member(&self, q: &CurvePoint, tol: f64) -> Result<FamilyMember> {
        let qp = self.cfg.quarter_membership(q, tol);
        if qp.on_boundary {
            return Ok(match *q {
                CurvePoint::Infinity(_) => self.boundary_member(f64::INFINITY),
                CurvePoint::Finite { z, .. } => self.boundary_member(z.re),
            });
        }
        if !qp.in_quarter {
            return Err(Error::Degenerate("point is outside the quarter".into()));
        }
        self.continue_to(q.z().unwrap(), None)
    }

    pub fn rotate_member(&self, m: &FamilyMember, phase: C64) -> FamilyMember {
        let h3 = m.h3.rotate(phase);
        let h = if h3.through_centre(1e-12) {
            h3.project().normalized()
        } else {
            m.h.clone()
        };
        FamilyMember {
            q: m.q,
            h,
            h3,
            d_prime: m.d_prime.clone(),
            provenance: Provenance::Rotated,
            phase: m.phase * phase,
            state: m.state.clone(),
        }
    }

    /// Pairwise check that `t . H_{q1} = H_{q2}` only for `q1 = q2, t = 1`.
    pub fn slice_injectivity_check(
        &self,
        members: &[FamilyMember],
        phases: usize,
        threshold: f64,
    ) -> SliceReport {
        let grid: Vec<C64> = (0..phases)
            .map(|k| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / phases as f64))
            .collect();
        let mut min_cross = f64::INFINITY;
        let mut min_self_nontrivial = f64::INFINITY;
        let mut max_self_identity: f64 = 0.0;
        let mut minus_one_distinct = true;
        let mut violations = Vec::new();
        for (i, m1) in members.iter().enumerate() {
            for (j, m2) in members.iter().enumerate() {
                let target = m2.h3.coeffs();
                for (k, &t) in grid.iter().enumerate() {
                    let d = projective_distance(&m1.h3.rotate(t).coeffs(), &target);
                    if i == j {
                        if k == 0 {
                            max_self_identity = max_self_identity.max(d);
                        } else {
                            min_self_nontrivial = min_self_nontrivial.min(d);
                            if 2 * k == phases && d <= threshold {
                                minus_one_distinct = false;
                            }
                            if d <= threshold {
                                violations.push((i, j, k));
                            }
                        }
                    } else {
                        min_cross = min_cross.min(d);
                        if d <= threshold {
                            violations.push((i, j, k));
                        }
                    }
                }
            }
        }
        SliceReport {
            pairs: members.len() * members.len().saturating_sub(1),
            phases,
            min_cross_distance: min_cross,
            min_self_nontrivial,
            max_self_identity,
            minus_one_distinct,
            violations,
        }
    }

    /// Hyperplane distance of a continued member to the explicit boundary
    /// member over `lambda`.
    pub fn boundary_offset_error(&self, lambda: f64, eps: f64) -> Result<f64> {
        let m = self.continue_to(c(lambda, eps), None)?;
        let b = self.boundary_member(lambda);
        Ok(crate::projective::normalized_coeff_distance(&m.h, &b.h))
    }

    /// Sample points tracing the quarter boundary once, from `r_1` through
    /// `r_2, .., r_{2n}`, out to infinity and back to `r_1`.
    pub fn boundary_trace(&self, per_arc: usize) -> Vec<CurvePoint> {
        let cfg = &self.cfg;
        let m = 2 * cfg.n;
        let mut pts = Vec::new();
        for i in 1..m {
            let (a, b) = (cfg.a(i), cfg.a(i + 1));
            for k in 0..per_arc {
                // Cosine spacing to resolve the square-root behaviour at the
                // ends.
                let th = std::f64::consts::PI * k as f64 / per_arc as f64;
                let x = 0.5 * (a + b) - 0.5 * (b - a) * th.cos();
                pts.push(cfg.boundary_point(x));
            }
        }
        // Arc over I_0: lambda = c0 + k/x with x from 1 down to -1.
        let c0 = 0.5 * (cfg.a(1) + cfg.a(m));
        let kk = 0.5 * (cfg.a(m) - cfg.a(1));
        for k in 0..(2 * per_arc) {
            let th = std::f64::consts::PI * k as f64 / (2 * per_arc) as f64;
            let x = th.cos();
            if x.abs() < 1e-12 {
                pts.push(cfg.boundary_point(f64::INFINITY));
            } else {
                pts.push(cfg.boundary_point(c0 + kk / x));
            }
        }
        pts.push(cfg.ramification_point(1));
        pts
    }

    /// Explicit `D'` along a boundary trace.
    pub fn boundary_d_prime(&self, q: &CurvePoint) -> Divisor {
        match *q {
            CurvePoint::Infinity(_) => self.boundary_member(f64::INFINITY).d_prime,
            CurvePoint::Finite { z, .. } => self.boundary_member(z.re).d_prime,
        }
    }

    /// Checks that the restriction of a member has the promised shape.
    pub fn restriction_defect(&self, m: &FamilyMember) -> Result<f64> {
        let d = restrict_hyperplane(&m.h, &self.cfg)?;
        Ok(d.mismatch(&m.expected_restriction(&self.cfg)))
    }
}

fn dd_jacobian(
    x: &[TwoFloat],
    fhat: &[TwoFloat],
    y2: TwoFloat,
    pref: &[f64],
    pn: f64,
    n: usize,
) -> Vec<Vec<TwoFloat>> {
    let np = n + 1;
    let nt = n;
    let dim = np + 1 + nt;
    let zero = TwoFloat::from(0.0);
    let (p, t) = (&x[..np], &x[np + 1..]);
    let mut j = vec![vec![zero; dim]; 2 * n + 2];
    for k in 0..=2 * n {
        j[k][np] = -fhat[k];
        for i in 0..np {
            if k >= i && k - i < np {
                j[k][i] += p[k - i] * 2.0;
            }
        }
        for i in 0..nt {
            if k >= i && k - i < nt {
                j[k][np + 1 + i] -= y2 * t[k - i] * 2.0;
            }
            if k >= i + 2 && k - 2 - i < nt {
                j[k][np + 1 + i] -= t[k - 2 - i] * 2.0;
            }
        }
    }
    for i in 0..np {
        j[2 * n + 1][i] = TwoFloat::from(pref[i] / pn);
    }
    j
}

/// Gaussian elimination with partial pivoting in double-double.
fn dd_solve(mut a: Vec<Vec<TwoFloat>>, mut b: Vec<TwoFloat>) -> Option<Vec<TwoFloat>> {
    let m = b.len();
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &k| {
            a[i][col].hi().abs().partial_cmp(&a[k][col].hi().abs()).unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[piv][col].hi() == 0.0 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..m {
            let f = a[row][col] / a[col][col];
            for k in col..m {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = vec![TwoFloat::from(0.0); m];
    for row in (0..m).rev() {
        let mut acc = b[row];
        for k in row + 1..m {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

fn round(x: &[TwoFloat]) -> Vec<f64> {
    x.iter().map(|v| v.hi() + v.lo()).collect()
}

fn dd_residual(
    x: &[TwoFloat],
    fhat: &[TwoFloat],
    y2: TwoFloat,
    pref: &[f64],
    pn: f64,
    n: usize,
) -> Vec<TwoFloat> {
    let np = n + 1;
    let nt = n;
    let zero = TwoFloat::from(0.0);
    let (p, gamma, t) = (&x[..np], x[np], &x[np + 1..]);
    let mut r = vec![zero; 2 * n + 2];
    for (k, e) in r.iter_mut().enumerate().take(2 * n + 1) {
        let mut acc = -(gamma * fhat[k]);
        for i in 0..np {
            if k >= i && k - i < np {
                acc += p[i] * p[k - i];
            }
        }
        for i in 0..nt {
            if k >= i && k - i < nt {
                acc -= y2 * t[i] * t[k - i];
            }
            if k >= i + 2 && k - 2 - i < nt {
                acc -= t[i] * t[k - 2 - i];
            }
        }
        *e = acc;
    }
    let mut e = TwoFloat::from(-1.0);
    for i in 0..np {
        e += p[i] * (pref[i] / pn);
    }
    r[2 * n + 1] = e;
    r
}

fn remove_point(d: &Divisor, q: &CurvePoint) -> Divisor {
    let mut out = d.clone();
    if let Some(k) = out
        .points
        .iter()
        .enumerate()
        .min_by(|a, b| {
            a.1 .0
                .distance(q)
                .partial_cmp(&b.1 .0.distance(q))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .map(|(k, _)| k)
    {
        if out.points[k].1 > 1 {
            out.points[k].1 -= 1;
        } else {
            out.points.remove(k);
        }
    }
    out
}

fn lincomb(a: &[f64], b: &[f64], wa: f64, wb: f64) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| wa * a.get(k).copied().unwrap_or(0.0) + wb * b.get(k).copied().unwrap_or(0.0))
        .collect()
}

/// Linear extrapolation through two states.
fn extrapolate(s0: &InteriorState, t0: f64, s1: &InteriorState, t1: f64, t: f64) -> InteriorState {
    let w = if t1 != t0 { (t - t1) / (t1 - t0) } else { 0.0 };
    InteriorState {
        p: lincomb(&s1.p, &s0.p, 1.0 + w, -w),
        gamma: s1.gamma * (1.0 + w) - s0.gamma * w,
        t: lincomb(&s1.t, &s0.t, 1.0 + w, -w),
    }
}

/// Relative change between the corrected state and its predictor.
fn state_jump(a: &InteriorState, b: &InteriorState) -> f64 {
    let va: Vec<f64> = a.p.iter().chain(std::iter::once(&a.gamma)).chain(a.t.iter()).copied().collect();
    let vb: Vec<f64> = b.p.iter().chain(std::iter::once(&b.gamma)).chain(b.t.iter()).copied().collect();
    let num: f64 = va.iter().zip(&vb).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let den: f64 = vb.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    num / den
}

#[derive(Clone, Debug, Serialize)]
pub struct SliceReport {
    pub pairs: usize,
    pub phases: usize,
    pub min_cross_distance: f64,
    pub min_self_nontrivial: f64,
    pub max_self_identity: f64,
    pub minus_one_distinct: bool,
    pub violations: Vec<(usize, usize, usize)>,
}

impl SliceReport {
    pub fn checks(&self, threshold: f64) -> Vec<Check> {
        vec![
            Check::new(
                "no coincidence between distinct members under rotation",
                self.min_cross_distance > threshold,
                format!("min distance {:.3e} over {} pairs", self.min_cross_distance, self.pairs),
            ),
            Check::new(
                "rotation by t != 1 moves every member",
                self.min_self_nontrivial > threshold && self.minus_one_distinct,
                format!("min distance {:.3e}", self.min_self_nontrivial),
            ),
            Check::bound("identity rotation fixes members", self.max_self_identity, 1e-12),
        ]
    }
}

/// Hyperplane distance helper for continuity checks.
pub fn member_distance(a: &FamilyMember, b: &FamilyMember) -> f64 {
    hyperplane_distance(&a.h, &b.h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::make_branch_config;

    #[test]
    fn boundary_member_minus_two() {
        let cfg = make_branch_config(&[-3.0, -1.0, 1.0, 3.0]).unwrap();
        let s = FamilySolver::new(&cfg, SolverOptions::default());
        let m = s.boundary_member(-2.0);
        let want = Hyperplane::from_real(&[6.0, 5.0, 1.0], 2, c(0.0, 0.0));
        assert!(hyperplane_distance(&m.h, &want) < 1e-14);
        assert_eq!(m.d_prime.degree(), 1);
        assert!(m.d_prime.points[0].0.distance(&cfg.ramification_point(1)) < 1e-14);
        assert!(s.restriction_defect(&m).unwrap() < 1e-8);
    }

    #[test]
    fn central_member_at_origin() {
        let cfg = make_branch_config(&[-3.0, -1.0, 1.0, 3.0]).unwrap();
        let s = FamilySolver::new(&cfg, SolverOptions::default());
        let m = s.boundary_member(0.0);
        let want = Hyperplane::from_real(&[3.0, 0.0, 1.0], 2, c(1.0, 0.0));
        assert!(hyperplane_distance(&m.h, &want) < 1e-14);
        assert!(matches!(m.d_prime.points[0].0, CurvePoint::Infinity(Sign::Plus)));
    }

    #[test]
    fn restriction_shape_all_boundary_members() {
        for pts in [vec![-3.0, -1.0, 1.0, 3.0], vec![-5.0, -3.0, -1.0, 1.0, 3.0, 5.0], vec![-2.0, 2.0]] {
            let cfg = make_branch_config(&pts).unwrap();
            let s = FamilySolver::new(&cfg, SolverOptions::default());
            for q in s.boundary_trace(7) {
                let m = match q {
                    CurvePoint::Infinity(_) => s.boundary_member(f64::INFINITY),
                    CurvePoint::Finite { z, .. } => s.boundary_member(z.re),
                };
                assert_eq!(m.d_prime.degree(), cfg.genus());
                let e = s.restriction_defect(&m).unwrap();
                assert!(e < 1e-6, "{pts:?} {q:?} {e}");
            }
        }
    }
}

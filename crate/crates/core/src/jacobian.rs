//! Period lattice, Abel–Jacobi map with base point `r_1`, the real identity
//! component and the doubling cover used to extend the family inwards.
//!
//! Differentials are `omega_m = kappa z^(m-1) dz / v` for `m = 1..g`, with
//! `kappa = 1` for even `n` and `kappa = i` for odd `n`. With that choice the
//! real structure acts on Abel–Jacobi values by complex conjugation.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::curve::{BranchConfig, CurvePoint, Sign};
use crate::error::{Error, Result};
use crate::lattice::RealLattice;
use crate::poly::{c, C64};
use crate::projective::Divisor;
use crate::quadrature::{chebyshev_theta, Legendre};

pub type JacobianPoint = Vec<C64>;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct JacOptions {
    /// Absolute tolerance for path integrals.
    pub abel_tol: f64,
    /// Relative increment tolerance for the Chebyshev period rule.
    pub quadrature_tol: f64,
    pub legendre_degree: usize,
    /// Two doubling candidates closer than this make the sheet ambiguous.
    pub sheet_tol: f64,
}

impl Default for JacOptions {
    fn default() -> Self {
        JacOptions {
            abel_tol: 1e-13,
            quadrature_tol: 1e-12,
            legendre_degree: 20,
            sheet_tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PeriodLattice {
    pub g: usize,
    pub kappa: C64,
    /// `C_j`: integrals of the differentials over the cut `[a_{2j-1}, a_{2j}]`.
    pub cuts: Vec<JacobianPoint>,
    /// `G_j`: integrals over the gap `[a_{2j}, a_{2j+1}]`.
    pub gaps: Vec<JacobianPoint>,
    /// `2C_1..2C_g, 2G_1..2G_g`.
    pub generators: Vec<JacobianPoint>,
    /// Indices into `generators` of the purely real ones.
    pub real_generators: Vec<usize>,
    pub a_cycles: Vec<JacobianPoint>,
    pub b_cycles: Vec<JacobianPoint>,
    full: Option<RealLattice>,
    real: Option<RealLattice>,
    imag: Option<RealLattice>,
}

fn to_real(x: &[C64]) -> DVector<f64> {
    let g = x.len();
    let mut v = DVector::zeros(2 * g);
    for k in 0..g {
        v[k] = x[k].re;
        v[g + k] = x[k].im;
    }
    v
}

fn from_real(v: &DVector<f64>) -> JacobianPoint {
    let g = v.len() / 2;
    (0..g).map(|k| c(v[k], v[g + k])).collect()
}

fn vsub(a: &[C64], b: &[C64]) -> JacobianPoint {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn vadd(a: &[C64], b: &[C64]) -> JacobianPoint {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vscale(a: &[C64], s: C64) -> JacobianPoint {
    a.iter().map(|x| x * s).collect()
}

pub fn vnorm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `int_{alpha}^{beta} z^(m-1) / F(z) dz` for consecutive branch points,
/// `F` taken from above, `m = 1..g`.
fn interval_integral(cfg: &BranchConfig, lo: usize, tol: f64) -> Result<JacobianPoint> {
    let g = cfg.genus();
    let alpha = cfg.a(lo);
    let beta = cfg.a(lo + 1);
    let mid = 0.5 * (alpha + beta);
    let h = 0.5 * (beta - alpha);
    let others: Vec<f64> = cfg
        .branch_points
        .iter()
        .enumerate()
        .filter(|(k, _)| *k + 1 != lo && *k + 1 != lo + 1)
        .map(|(_, &a)| a)
        .collect();
    let integrand = |th: f64| -> Vec<C64> {
        let zeta = mid - h * th.cos();
        let rest = others.iter().fold(c(1.0, 0.0), |acc, &a| {
            let d = zeta - a;
            acc * if d >= 0.0 { c(d.sqrt(), 0.0) } else { c(0.0, (-d).sqrt()) }
        });
        let base = (c(0.0, 1.0) * rest).inv();
        let mut out = Vec::with_capacity(g);
        let mut pw = 1.0;
        for _ in 0..g {
            out.push(base * pw);
            pw *= zeta;
        }
        out
    };
    chebyshev_theta(&integrand, g, tol, (alpha, beta))
}

pub fn compute_periods(cfg: &BranchConfig, opts: &JacOptions) -> Result<PeriodLattice> {
    let n = cfg.n;
    let g = cfg.genus();
    let kappa = if n % 2 == 0 { c(1.0, 0.0) } else { c(0.0, 1.0) };
    let mut cuts = Vec::with_capacity(n);
    for j in 1..=n {
        cuts.push(vscale(&interval_integral(cfg, 2 * j - 1, opts.quadrature_tol)?, kappa));
    }
    let mut gaps = Vec::with_capacity(n.saturating_sub(1));
    for j in 1..n {
        gaps.push(vscale(&interval_integral(cfg, 2 * j, opts.quadrature_tol)?, kappa));
    }
    let two = c(2.0, 0.0);
    let mut generators = Vec::with_capacity(2 * g);
    for j in 0..g {
        generators.push(vscale(&cuts[j], two));
    }
    for j in 0..g {
        generators.push(vscale(&gaps[j], two));
    }
    let real_generators: Vec<usize> = (0..2 * g)
        .filter(|&k| generators[k].iter().all(|x| x.im.abs() <= 1e-9 * (1.0 + x.norm())))
        .collect();
    // Symplectic basis: A_k around the k-th cut, B_k leaving the k-th cut
    // above the axis and returning below it on the other sheet, so only the
    // gaps contribute.
    let mut a_cycles = Vec::with_capacity(g);
    let mut b_cycles = Vec::with_capacity(g);
    for k in 0..g {
        a_cycles.push(vscale(&cuts[k], c(-2.0, 0.0)));
        let mut b = vec![c(0.0, 0.0); g];
        for gap in gaps.iter().take(n - 1).skip(k) {
            b = vadd(&b, gap);
        }
        b_cycles.push(vscale(&b, two));
    }

    let (full, real, imag) = if g == 0 {
        (None, None, None)
    } else {
        let mut m = DMatrix::zeros(2 * g, 2 * g);
        for (k, gen) in generators.iter().enumerate() {
            m.set_column(k, &to_real(gen));
        }
        let full = RealLattice::new(&m)
            .ok_or_else(|| Error::Internal("period generators are dependent".into()))?;
        let imag_idx: Vec<usize> = (0..2 * g).filter(|k| !real_generators.contains(k)).collect();
        let build = |idx: &[usize], part: fn(&C64) -> f64| -> Option<RealLattice> {
            if idx.len() != g {
                return None;
            }
            let mut m = DMatrix::zeros(g, g);
            for (col, &k) in idx.iter().enumerate() {
                for r in 0..g {
                    m[(r, col)] = part(&generators[k][r]);
                }
            }
            RealLattice::new(&m)
        };
        let real = build(&real_generators, |x| x.re);
        let imag = build(&imag_idx, |x| x.im);
        (Some(full), real, imag)
    };
    Ok(PeriodLattice {
        g,
        kappa,
        cuts,
        gaps,
        generators,
        real_generators,
        a_cycles,
        b_cycles,
        full,
        real,
        imag,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RiemannReport {
    pub symmetry_defect: f64,
    /// Smallest eigenvalue of `sign * Im tau`; positive when the relation holds.
    pub min_imag_eigenvalue: f64,
}

impl PeriodLattice {
    /// Representative of `x` modulo the lattice, nearest the origin.
    pub fn reduce(&self, x: &[C64]) -> JacobianPoint {
        match &self.full {
            None => Vec::new(),
            Some(l) => {
                let v = to_real(x);
                from_real(&(&v - l.closest(&v)))
            }
        }
    }

    /// Distance on the torus.
    pub fn distance(&self, x: &[C64], y: &[C64]) -> f64 {
        match &self.full {
            None => 0.0,
            Some(l) => l.distance(&to_real(&vsub(x, y))),
        }
    }

    pub fn norm_mod(&self, x: &[C64]) -> f64 {
        match &self.full {
            None => 0.0,
            Some(l) => l.distance(&to_real(x)),
        }
    }

    /// Whether `x` lies on the identity component of the real torus.
    pub fn on_identity_component(&self, x: &[C64], tol: f64) -> bool {
        match &self.imag {
            None => self.g == 0,
            Some(l) => {
                let v = DVector::from_iterator(self.g, x.iter().map(|z| z.im));
                l.distance(&v) <= tol
            }
        }
    }

    /// Whether `x` lies on the real torus (any component).
    pub fn on_real_torus(&self, x: &[C64], tol: f64) -> bool {
        let conj: Vec<C64> = x.iter().map(|z| z.conj()).collect();
        self.distance(x, &conj) <= tol
    }

    pub fn real_lattice(&self) -> Option<&RealLattice> {
        self.real.as_ref()
    }

    /// Symmetry and positivity of `tau = A^{-1} B`.
    pub fn riemann_relations(&self) -> RiemannReport {
        let g = self.g;
        if g == 0 {
            return RiemannReport {
                symmetry_defect: 0.0,
                min_imag_eigenvalue: f64::INFINITY,
            };
        }
        let mut a = DMatrix::<C64>::zeros(g, g);
        let mut b = DMatrix::<C64>::zeros(g, g);
        for k in 0..g {
            for m in 0..g {
                a[(m, k)] = self.a_cycles[k][m];
                b[(m, k)] = self.b_cycles[k][m];
            }
        }
        let tau = match a.try_inverse() {
            Some(ai) => ai * b,
            None => {
                return RiemannReport {
                    symmetry_defect: f64::INFINITY,
                    min_imag_eigenvalue: f64::NEG_INFINITY,
                }
            }
        };
        let scale = tau.iter().map(|x| x.norm()).fold(0.0, f64::max).max(1e-300);
        let sym = (&tau - tau.transpose()).iter().map(|x| x.norm()).fold(0.0, f64::max) / scale;
        let im = DMatrix::<f64>::from_fn(g, g, |i, j| 0.5 * (tau[(i, j)].im + tau[(j, i)].im));
        let eig = im.symmetric_eigen().eigenvalues;
        let lo = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min_eig = if hi < 0.0 { -hi } else { lo };
        RiemannReport {
            symmetry_defect: sym,
            min_imag_eigenvalue: min_eig / scale,
        }
    }
}

/// Abel–Jacobi machinery bound to one curve.
pub struct Jacobian {
    pub cfg: BranchConfig,
    pub lattice: PeriodLattice,
    pub opts: JacOptions,
    legendre: Legendre,
    /// `int_{a_1}^{infinity_+} z^(m-1)/F dz` along the upper path.
    i_inf: JacobianPoint,
    y_height: f64,
    rho: f64,
}

#[derive(Clone, Copy)]
struct Seg {
    p0: C64,
    p1: C64,
    sing0: bool,
    sing1: bool,
}

impl Jacobian {
    pub fn new(cfg: &BranchConfig, opts: JacOptions) -> Result<Self> {
        let lattice = compute_periods(cfg, &opts)?;
        let spread = cfg.a(2 * cfg.n) - cfg.a(1);
        let min_gap = cfg
            .branch_points
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        let mut jac = Jacobian {
            cfg: cfg.clone(),
            lattice,
            opts,
            legendre: Legendre::new(opts.legendre_degree),
            i_inf: Vec::new(),
            y_height: (0.25 * spread).max(0.5),
            rho: 0.25 * min_gap,
        };
        if jac.g() > 0 {
            let zr = c(0.0, cfg.r_far());
            let head = jac.path_integral_finite(zr, true)?;
            let tail = jac.infinity_tail(zr.inv())?;
            jac.i_inf = vadd(&head, &tail);
        }
        Ok(jac)
    }

    pub fn g(&self) -> usize {
        self.lattice.g
    }

    pub fn origin(&self) -> JacobianPoint {
        vec![c(0.0, 0.0); self.g()]
    }

    /// Integrand `zeta^(m-1) / F(zeta)`. When `zeta` sits next to branch
    /// point `near.0`, the offset `near.1 = zeta - a_j` is supplied separately
    /// so that the singular factor keeps full relative precision.
    fn integrand(&self, zeta: C64, near: Option<(usize, C64)>, real_axis: bool) -> Vec<C64> {
        let g = self.g();
        let mut f = c(1.0, 0.0);
        for (k, &a) in self.cfg.branch_points.iter().enumerate() {
            let d = match near {
                Some((j, off)) if j == k + 1 => off,
                _ => zeta - a,
            };
            f *= if real_axis {
                if d.re >= 0.0 {
                    c(d.re.sqrt(), 0.0)
                } else {
                    c(0.0, (-d.re).sqrt())
                }
            } else {
                d.sqrt()
            };
        }
        let base = f.inv();
        let mut out = Vec::with_capacity(g);
        let mut pw = c(1.0, 0.0);
        for _ in 0..g {
            out.push(base * pw);
            pw *= zeta;
        }
        out
    }

    fn segment(&self, s: Seg) -> Result<JacobianPoint> {
        let g = self.g();
        let d = s.p1 - s.p0;
        if d.norm() == 0.0 {
            return Ok(vec![c(0.0, 0.0); g]);
        }
        let real_seg = s.p0.im == 0.0 && s.p1.im == 0.0;
        let j0 = if s.sing0 { self.cfg.branch_index(s.p0, 0.0) } else { None };
        let j1 = if s.sing1 { self.cfg.branch_index(s.p1, 0.0) } else { None };
        let f = |t: f64| -> Vec<C64> {
            // phi(t) and 1 - phi(t), each formed without cancellation.
            let (phi, rem, dphi) = match (s.sing0, s.sing1) {
                (false, false) => (t, 1.0 - t, 1.0),
                (true, false) => (t * t, 1.0 - t * t, 2.0 * t),
                (false, true) => {
                    let u = 1.0 - t;
                    (1.0 - u * u, u * u, 2.0 * u)
                }
                (true, true) => {
                    let u = 1.0 - t;
                    (t * t * (3.0 - 2.0 * t), u * u * (1.0 + 2.0 * t), 6.0 * t * u)
                }
            };
            let mut zeta = if phi <= 0.5 { s.p0 + d * phi } else { s.p1 - d * rem };
            if real_seg {
                zeta.im = 0.0;
            }
            let near = if phi <= 0.5 {
                j0.map(|j| (j, d * phi))
            } else {
                j1.map(|j| (j, -d * rem))
            };
            let w = d * dphi;
            let on_axis = real_seg || zeta.im == 0.0;
            self.integrand(zeta, near, on_axis)
                .into_iter()
                .map(|x| x * w)
                .collect()
        };
        let scale = 1.0 + d.norm();
        self.legendre.integrate(&f, 0.0, 1.0, g, self.opts.abel_tol * scale)
    }

    /// `int_0^{w0} w^(n-1-m) / G(w) dw` with `G(w) = prod sqrt(1 - a_j w)`.
    fn infinity_tail(&self, w0: C64) -> Result<JacobianPoint> {
        let g = self.g();
        let n = self.cfg.n;
        let pts = self.cfg.branch_points.clone();
        let f = |t: f64| -> Vec<C64> {
            let w = w0 * t;
            let gw = pts.iter().fold(c(1.0, 0.0), |acc, &a| acc * (c(1.0, 0.0) - w * a).sqrt());
            let base = gw.inv() * w0;
            (1..=g).map(|m| base * w.powu((n - 1 - m) as u32)).collect()
        };
        self.legendre.integrate(&f, 0.0, 1.0, g, self.opts.abel_tol)
    }

    fn path_integral_finite(&self, z: C64, upper: bool) -> Result<JacobianPoint> {
        let g = self.g();
        let a1 = c(self.cfg.a(1), 0.0);
        let y = if upper { self.y_height } else { -self.y_height };
        let iy = c(0.0, y);
        let mut segs = Vec::new();
        // Nearest branch point.
        let (j, dist) = self
            .cfg
            .branch_points
            .iter()
            .enumerate()
            .map(|(k, &a)| (k + 1, (z - a).norm()))
            .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if dist <= self.rho {
            let aj = c(self.cfg.a(j), 0.0);
            if j > 1 {
                segs.push(Seg { p0: a1, p1: a1 + iy, sing0: true, sing1: false });
                segs.push(Seg { p0: a1 + iy, p1: aj + iy, sing0: false, sing1: false });
                segs.push(Seg { p0: aj + iy, p1: aj, sing0: false, sing1: true });
            }
            if dist > 0.0 {
                segs.push(Seg { p0: aj, p1: z, sing0: true, sing1: false });
            }
        } else {
            let top = c(z.re, y);
            segs.push(Seg { p0: a1, p1: a1 + iy, sing0: true, sing1: false });
            segs.push(Seg { p0: a1 + iy, p1: top, sing0: false, sing1: false });
            segs.push(Seg { p0: top, p1: z, sing0: false, sing1: false });
        }
        let mut acc = vec![c(0.0, 0.0); g];
        for s in segs {
            acc = vadd(&acc, &self.segment(s)?);
        }
        Ok(acc)
    }

    /// `int_{a_1}^{z} zeta^(m-1)/F(zeta) d zeta` along the standard path in
    /// the closed half plane containing `z` (upper for real `z`).
    pub fn path_integral(&self, z: C64) -> Result<JacobianPoint> {
        if self.g() == 0 {
            return Ok(Vec::new());
        }
        let upper = z.im >= 0.0;
        if z.norm() > self.cfg.r_far() {
            let tail = self.infinity_tail(z.inv())?;
            return Ok(vsub(&self.i_inf, &tail));
        }
        self.path_integral_finite(z, upper)
    }

    /// `a(p)` for a single point; not reduced modulo the lattice.
    pub fn abel_point(&self, p: &CurvePoint) -> Result<JacobianPoint> {
        if self.g() == 0 {
            return Ok(Vec::new());
        }
        match *p {
            CurvePoint::Infinity(s) => Ok(vscale(&self.i_inf, self.lattice.kappa * s.value())),
            CurvePoint::Finite { z, v } => {
                // Points numerically on the real line are treated as limits
                // from above, consistently for the sheet and the path.
                let z = if z.im.abs() <= 1e-14 * (1.0 + z.re.abs()) { c(z.re, 0.0) } else { z };
                if v.norm() == 0.0 || self.cfg.branch_index(z, 0.0).is_some() {
                    let r = self.path_integral(z)?;
                    return Ok(vscale(&r, self.lattice.kappa));
                }
                let fz = self.cfg.branch_fn(z);
                let s = if (v - fz).norm() <= (v + fz).norm() { 1.0 } else { -1.0 };
                let r = self.path_integral(z)?;
                Ok(vscale(&r, self.lattice.kappa * s))
            }
        }
    }

    pub fn abel_divisor(&self, d: &Divisor) -> Result<JacobianPoint> {
        let mut acc = self.origin();
        for (p, m) in &d.points {
            let a = self.abel_point(p)?;
            acc = vadd(&acc, &vscale(&a, c(*m as f64, 0.0)));
        }
        Ok(acc)
    }

    /// `beta(q) = a(q) + a(sigma q)`.
    pub fn beta(&self, q: &CurvePoint) -> Result<JacobianPoint> {
        let a = self.abel_point(q)?;
        let b = self.abel_point(&self.cfg.apply_sigma(q))?;
        Ok(vadd(&a, &b))
    }

    /// All `x` with `-2x = target` modulo the lattice.
    pub fn doubling_candidates(&self, target: &[C64]) -> Vec<JacobianPoint> {
        let g = self.g();
        let half: JacobianPoint = vscale(target, c(-0.5, 0.0));
        let gens = &self.lattice.generators;
        let mut out = Vec::with_capacity(1 << (2 * g));
        for mask in 0..(1usize << (2 * g)) {
            let mut x = half.clone();
            for (k, gen) in gens.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    x = vadd(&x, &vscale(gen, c(0.5, 0.0)));
                }
            }
            out.push(x);
        }
        out
    }

    /// Candidates on the identity component of the real torus.
    pub fn real_doubling_candidates(&self, target: &[C64], tol: f64) -> Vec<JacobianPoint> {
        self.doubling_candidates(target)
            .into_iter()
            .filter(|x| self.lattice.on_identity_component(x, tol))
            .collect()
    }

    /// The solution of `-2x = target` continuing `seed`.
    pub fn doubling_lift(&self, target: &[C64], seed: &[C64]) -> Result<JacobianPoint> {
        if self.g() == 0 {
            return Ok(Vec::new());
        }
        let mut scored: Vec<(f64, JacobianPoint)> = self
            .doubling_candidates(target)
            .into_iter()
            .map(|x| (self.lattice.distance(&x, seed), x))
            .collect();
        scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        if scored.len() > 1 && scored[1].0 - scored[0].0 < self.opts.sheet_tol {
            return Err(Error::AmbiguousSheet(scored[1].0 - scored[0].0));
        }
        let best = scored.swap_remove(0).1;
        // Express the chosen candidate near the seed.
        let diff = self.lattice.reduce(&vsub(&best, seed));
        Ok(vadd(seed, &diff))
    }

    /// Continues the doubling lift of `-beta` along a boundary trace, starting
    /// from `start`, and measures how well it closes.
    pub fn seifert_lift(&self, boundary: &[CurvePoint], start: &[C64]) -> Result<SeifertSurface> {
        let mut lift = Vec::with_capacity(boundary.len());
        let mut betas = Vec::with_capacity(boundary.len());
        let mut cur = start.to_vec();
        for q in boundary {
            let b = self.beta(q)?;
            cur = self.doubling_lift(&b, &cur)?;
            lift.push(cur.clone());
            betas.push(b);
        }
        let closure = match (lift.first(), lift.last()) {
            (Some(a), Some(b)) => self.lattice.distance(a, b),
            _ => 0.0,
        };
        Ok(SeifertSurface {
            boundary: boundary.to_vec(),
            lift,
            beta: betas,
            closure_defect: closure,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeifertSurface {
    pub boundary: Vec<CurvePoint>,
    pub lift: Vec<JacobianPoint>,
    pub beta: Vec<JacobianPoint>,
    pub closure_defect: f64,
}

impl SeifertSurface {
    /// Lift value at the boundary sample nearest to `p`.
    pub fn nearest_lift(&self, p: &CurvePoint) -> Option<&JacobianPoint> {
        self.boundary
            .iter()
            .zip(&self.lift)
            .min_by(|a, b| {
                a.0.distance(p)
                    .partial_cmp(&b.0.distance(p))
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .map(|(_, l)| l)
    }
}

/// Convenience for infinite points in tests and reports.
pub fn infinity(sign: f64) -> CurvePoint {
    CurvePoint::Infinity(Sign::from_value(sign))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{make_branch_config, Sheet};

    #[test]
    fn genus_one_symmetric_lattice_is_rectangular() {
        let cfg = make_branch_config(&[-3.0, -1.0, 1.0, 3.0]).unwrap();
        let l = compute_periods(&cfg, &JacOptions::default()).unwrap();
        assert_eq!(l.generators.len(), 2);
        let re = l.generators.iter().filter(|v| v[0].im.abs() < 1e-12).count();
        let im = l.generators.iter().filter(|v| v[0].re.abs() < 1e-12).count();
        assert_eq!((re, im), (1, 1));
        let rr = l.riemann_relations();
        assert!(rr.symmetry_defect < 1e-8 && rr.min_imag_eigenvalue > 0.0);
    }

    #[test]
    fn genus_two_riemann_relations() {
        let cfg = make_branch_config(&[-5.0, -3.0, -1.0, 1.0, 3.0, 5.0]).unwrap();
        let l = compute_periods(&cfg, &JacOptions::default()).unwrap();
        let rr = l.riemann_relations();
        assert!(rr.symmetry_defect < 1e-8, "{rr:?}");
        assert!(rr.min_imag_eigenvalue > 0.0, "{rr:?}");
        assert_eq!(l.real_generators.len(), 2);
    }

    #[test]
    fn hyperelliptic_pairs_cancel_and_sigma_conjugates() {
        for pts in [vec![-3.0, -1.0, 1.0, 3.0], vec![-5.0, -3.0, -1.0, 1.0, 3.0, 5.0]] {
            let cfg = make_branch_config(&pts).unwrap();
            let jac = Jacobian::new(&cfg, JacOptions::default()).unwrap();
            for z in [c(0.3, 0.7), c(-2.2, -0.4), c(4.0, 1.5), c(-0.9, 0.01), c(20.0, 3.0)] {
                let p = cfg.lift_point(z, Sheet::Plus);
                let a = jac.abel_point(&p).unwrap();
                let b = jac.abel_point(&cfg.apply_tau(&p)).unwrap();
                assert!(jac.lattice.norm_mod(&vadd(&a, &b)) < 1e-10);
                let s = jac.abel_point(&cfg.apply_sigma(&p)).unwrap();
                let conj: Vec<C64> = a.iter().map(|x| x.conj()).collect();
                assert!(jac.lattice.distance(&s, &conj) < 1e-10);
            }
        }
    }
}

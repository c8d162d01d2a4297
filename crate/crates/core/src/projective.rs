//! Rational normal curve, the quadric relation of the minitwistor surface,
//! hyperplanes and their restriction divisors on the curve.
//!
//! Coordinates on `P^{n+1}` are `z_0..z_n` (monomials `v1^m v2^(n-m)`) and the
//! fiber coordinate `w`. A hyperplane `sum p_m z_m - c w = 0` is stored as the
//! pair `(P, c)` with `P(z) = sum p_m z^m`; on the curve it cuts out the zeros
//! of `P(z) - c v`.

use serde::Serialize;

use crate::curve::{BranchConfig, CurvePoint, Sign};
use crate::error::{Error, Result};
use crate::poly::{self, c, C64};
use crate::roots::{self, RootOptions};

/// Homogeneous coordinates of the point `(lambda : 1)` of `P^1` on the
/// rational normal curve. `None` stands for `lambda = infinity`.
pub fn rnc_embed(n: usize, lambda: Option<C64>) -> Vec<C64> {
    match lambda {
        None => {
            let mut v = vec![c(0.0, 0.0); n + 1];
            v[n] = c(1.0, 0.0);
            v
        }
        Some(l) => {
            let mut v = Vec::with_capacity(n + 1);
            let mut acc = c(1.0, 0.0);
            for _ in 0..=n {
                v.push(acc);
                acc *= l;
            }
            v
        }
    }
}

/// Quadratic form `Q(z_0..z_n)` as a list of monomials `coef * z_a * z_b`
/// with `a >= b`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinitwistorEquation {
    pub n: usize,
    pub terms: Vec<(usize, usize, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialSplit {
    /// `z_a z_b` with `a - b` as small as possible.
    Balanced,
    /// `z_a z_b` with `a = min(n, k)`.
    Extremal,
}

pub fn split_monomial(n: usize, k: usize, rule: MonomialSplit) -> (usize, usize) {
    match rule {
        MonomialSplit::Balanced => {
            let a = (k + 1) / 2;
            (a, k - a)
        }
        MonomialSplit::Extremal => {
            let a = n.min(k);
            (a, k - a)
        }
    }
}

pub fn minitwistor_equation(cfg: &BranchConfig) -> MinitwistorEquation {
    minitwistor_equation_with(cfg, MonomialSplit::Balanced)
}

pub fn minitwistor_equation_with(cfg: &BranchConfig, rule: MonomialSplit) -> MinitwistorEquation {
    let terms = cfg
        .f_coeffs
        .iter()
        .enumerate()
        .filter(|(_, &f)| f != 0.0)
        .map(|(k, &f)| {
            let (a, b) = split_monomial(cfg.n, k, rule);
            (a, b, f)
        })
        .collect();
    MinitwistorEquation { n: cfg.n, terms }
}

impl MinitwistorEquation {
    pub fn eval(&self, z: &[C64]) -> C64 {
        self.terms
            .iter()
            .fold(c(0.0, 0.0), |acc, &(a, b, f)| acc + z[a] * z[b] * f)
    }

    /// Symmetric Gram matrix of the form.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.n + 1]; self.n + 1];
        for &(a, b, f) in &self.terms {
            if a == b {
                m[a][a] += f;
            } else {
                m[a][b] += 0.5 * f;
                m[b][a] += 0.5 * f;
            }
        }
        m
    }
}

/// `(u^n : u^(n-1) z : ... : z^n : x : y)`, after checking the relation
/// `xy = prod (z - a_i u)`.
pub fn quotient_map(x: C64, y: C64, z: C64, u: C64, cfg: &BranchConfig) -> Result<Vec<C64>> {
    let rhs = cfg
        .branch_points
        .iter()
        .fold(c(1.0, 0.0), |acc, &a| acc * (z - u * a));
    let scale = 1.0 + (x * y).norm().max(rhs.norm());
    let residual = (x * y - rhs).norm() / scale;
    if residual > 1e-8 {
        return Err(Error::OffModel { residual });
    }
    let n = cfg.n;
    let mut out = Vec::with_capacity(n + 3);
    for m in 0..=n {
        out.push(u.powu((n - m) as u32) * z.powu(m as u32));
    }
    out.push(x);
    out.push(y);
    Ok(out)
}

/// Relative residual of `z_{n+1} z_{n+2} = Q(z_0..z_n)` at a point.
pub fn minitwistor_residual(eq: &MinitwistorEquation, pt: &[C64]) -> f64 {
    let n = eq.n;
    let lhs = pt[n + 1] * pt[n + 2];
    let rhs = eq.eval(&pt[..=n]);
    let scale = pt.iter().map(|x| x.norm_sqr()).sum::<f64>();
    (lhs - rhs).norm() / scale.max(f64::MIN_POSITIVE)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Hyperplane {
    /// Coefficients of `P`, ascending, length `n + 1`.
    pub p: Vec<C64>,
    pub c: C64,
}

impl Hyperplane {
    pub fn new(p: Vec<C64>, c: C64) -> Self {
        Hyperplane { p, c }
    }

    pub fn from_real(p: &[f64], n: usize, cw: C64) -> Self {
        Hyperplane {
            p: poly::pad(&poly::to_complex(p), n + 1),
            c: cw,
        }
    }

    pub fn n(&self) -> usize {
        self.p.len() - 1
    }

    pub fn coeffs(&self) -> Vec<C64> {
        let mut v = self.p.clone();
        v.push(self.c);
        v
    }

    /// Scales so that the largest coefficient has modulus one. The phase is
    /// taken from the largest coefficient of `P` so that real hyperplanes stay
    /// visibly real.
    pub fn normalized(&self) -> Hyperplane {
        let pm = poly::max_abs(&self.p);
        let phase = if pm > 0.0 {
            let k = self
                .p
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
                .unwrap()
                .0;
            self.p[k] / self.p[k].norm()
        } else if self.c.norm() > 0.0 {
            self.c / self.c.norm()
        } else {
            c(1.0, 0.0)
        };
        let m = pm.max(self.c.norm()).max(f64::MIN_POSITIVE);
        let s = (phase * m).inv();
        Hyperplane {
            p: self.p.iter().map(|&x| x * s).collect(),
            c: self.c * s,
        }
    }

    pub fn is_real(&self, n: usize, tol: f64) -> bool {
        let h = self.normalized();
        let sgn = if n % 2 == 0 { 1.0 } else { -1.0 };
        poly::imag_defect(&h.p) <= tol && (h.c.conj() * sgn - h.c).norm() <= tol
    }

    pub fn passes_through_vertex(&self, tol: f64) -> bool {
        self.c.norm() <= tol * poly::max_abs(&self.p).max(f64::MIN_POSITIVE)
    }

    pub fn scale(&self, s: C64) -> Hyperplane {
        Hyperplane {
            p: self.p.iter().map(|&x| x * s).collect(),
            c: self.c * s,
        }
    }

    /// Value of `P(z) - c v` at a finite point, or the leading behaviour at
    /// infinity.
    pub fn eval_on(&self, p: &CurvePoint) -> C64 {
        match *p {
            CurvePoint::Finite { z, v } => poly::eval(&self.p, z) - self.c * v,
            CurvePoint::Infinity(s) => self.p[self.n()] - self.c * s.value(),
        }
    }
}

/// Sine of the angle between two coefficient vectors, a projective distance.
/// Computed from the residual of projecting `a` onto `b`, which keeps full
/// relative accuracy for nearly parallel vectors.
pub fn projective_distance(a: &[C64], b: &[C64]) -> f64 {
    let na: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 || !na.is_finite() || !nb.is_finite() {
        return 1.0;
    }
    let ip = b
        .iter()
        .zip(a)
        .fold(c(0.0, 0.0), |acc, (y, x)| acc + y.conj() * x)
        / (nb * nb);
    let res: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - ip * y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    (res / na).min(1.0)
}

pub fn hyperplane_distance(a: &Hyperplane, b: &Hyperplane) -> f64 {
    projective_distance(&a.coeffs(), &b.coeffs())
}

/// Coefficientwise distance after normalisation (phase aligned).
pub fn normalized_coeff_distance(a: &Hyperplane, b: &Hyperplane) -> f64 {
    let x = a.normalized().coeffs();
    let y = b.normalized().coeffs();
    // Align the phases once more through the inner product.
    let ip = x.iter().zip(&y).fold(c(0.0, 0.0), |acc, (p, q)| acc + p.conj() * q);
    let ph = if ip.norm() > 0.0 { ip / ip.norm() } else { c(1.0, 0.0) };
    x.iter()
        .zip(&y)
        .map(|(p, q)| (p * ph - q).norm())
        .fold(0.0, f64::max)
}

/// Hyperplane of `P^{n+2}`: `sum b_m z_m + alpha z_{n+1} + beta z_{n+2} = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Hyperplane3 {
    pub b: Vec<C64>,
    pub alpha: C64,
    pub beta: C64,
}

impl Hyperplane3 {
    pub fn coeffs(&self) -> Vec<C64> {
        let mut v = self.b.clone();
        v.push(self.alpha);
        v.push(self.beta);
        v
    }

    pub fn from_coeffs(v: &[C64]) -> Self {
        let n = v.len() - 3;
        Hyperplane3 {
            b: v[..=n].to_vec(),
            alpha: v[n + 1],
            beta: v[n + 2],
        }
    }

    /// Preimage of `h` under the projection from the centre `(0:..:0:1:-1)`.
    pub fn pullback(h: &Hyperplane) -> Self {
        Hyperplane3 {
            b: h.p.clone(),
            alpha: -h.c * 0.5,
            beta: -h.c * 0.5,
        }
    }

    /// Dual action of `z_{n+1} -> t z_{n+1}`, `z_{n+2} -> z_{n+2} / t`.
    pub fn rotate(&self, t: C64) -> Self {
        Hyperplane3 {
            b: self.b.clone(),
            alpha: self.alpha / t,
            beta: self.beta * t,
        }
    }

    pub fn through_centre(&self, tol: f64) -> bool {
        let m = self.coeffs().iter().map(|x| x.norm()).fold(0.0, f64::max);
        (self.alpha - self.beta).norm() <= tol * m.max(f64::MIN_POSITIVE)
    }

    /// Image hyperplane in `P^{n+1}` when the centre lies on it.
    pub fn project(&self) -> Hyperplane {
        Hyperplane {
            p: self.b.clone(),
            c: -(self.alpha + self.beta),
        }
    }

    pub fn eval(&self, pt: &[C64]) -> C64 {
        self.coeffs()
            .iter()
            .zip(pt)
            .fold(c(0.0, 0.0), |acc, (a, x)| acc + a * x)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Default)]
pub struct Divisor {
    pub points: Vec<(CurvePoint, usize)>,
}

impl Divisor {
    pub fn new() -> Self {
        Divisor { points: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.points.iter().map(|(_, m)| m).sum()
    }

    /// Adds `m` copies of `p`, merging with an existing point within `tol`.
    pub fn add(&mut self, p: CurvePoint, m: usize, tol: f64) {
        if m == 0 {
            return;
        }
        for (q, k) in self.points.iter_mut() {
            if q.distance(&p) <= tol {
                *k += m;
                return;
            }
        }
        self.points.push((p, m));
    }

    pub fn plus(&self, other: &Divisor, tol: f64) -> Divisor {
        let mut d = self.clone();
        for &(p, m) in &other.points {
            d.add(p, m, tol);
        }
        d
    }

    pub fn times(&self, k: usize) -> Divisor {
        Divisor {
            points: self.points.iter().map(|&(p, m)| (p, m * k)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&CurvePoint) -> CurvePoint) -> Divisor {
        Divisor {
            points: self.points.iter().map(|(p, m)| (f(p), *m)).collect(),
        }
    }

    /// Points repeated by multiplicity.
    pub fn expanded(&self) -> Vec<CurvePoint> {
        self.points
            .iter()
            .flat_map(|&(p, m)| std::iter::repeat(p).take(m))
            .collect()
    }

    /// Multiset equality up to `tol` in point distance.
    pub fn matches(&self, other: &Divisor, tol: f64) -> bool {
        self.mismatch(other) <= tol
    }

    /// Largest distance in an optimal-greedy pairing of the expanded
    /// multisets, infinite when the degrees differ.
    pub fn mismatch(&self, other: &Divisor) -> f64 {
        let a = self.expanded();
        let mut b = other.expanded();
        if a.len() != b.len() {
            return f64::INFINITY;
        }
        // Greedy pairing on globally sorted distances.
        let mut pairs = Vec::new();
        for (i, p) in a.iter().enumerate() {
            for (j, q) in b.iter().enumerate() {
                pairs.push((p.distance(q), i, j));
            }
        }
        pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
        let mut used_a = vec![false; a.len()];
        let mut used_b = vec![false; b.len()];
        let mut worst: f64 = 0.0;
        for (d, i, j) in pairs {
            if !used_a[i] && !used_b[j] {
                used_a[i] = true;
                used_b[j] = true;
                worst = worst.max(d);
            }
        }
        b.clear();
        worst
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RestrictOptions {
    pub roots: RootOptions,
    /// Relative size below which `c` is treated as zero.
    pub vertex_tol: f64,
    /// Distance within which a root is identified with a branch point.
    pub branch_tol: f64,
}

impl Default for RestrictOptions {
    fn default() -> Self {
        RestrictOptions {
            roots: RootOptions {
                lead_tol: 1e-11,
                cluster_radius: 1e-6,
                max_iter: 800,
            },
            vertex_tol: 1e-13,
            branch_tol: 1e-7,
        }
    }
}

pub fn restrict_hyperplane(h: &Hyperplane, cfg: &BranchConfig) -> Result<Divisor> {
    restrict_hyperplane_with(h, cfg, &RestrictOptions::default())
}

pub fn restrict_hyperplane_with(
    h: &Hyperplane,
    cfg: &BranchConfig,
    opts: &RestrictOptions,
) -> Result<Divisor> {
    let n = cfg.n;
    let h = h.normalized();
    if poly::max_abs(&h.p) == 0.0 && h.c.norm() == 0.0 {
        return Err(Error::Internal("zero hyperplane".into()));
    }
    let fc = poly::to_complex(&cfg.f_coeffs);
    let mut d = Divisor::new();
    let merge_tol = 1e-9;
    if h.passes_through_vertex(opts.vertex_tol) {
        let rts = roots::roots_with_multiplicity(&h.p, &opts.roots);
        let deg: usize = rts.iter().map(|r| r.mult).sum();
        for r in rts {
            let scale = 1.0 + r.z.norm();
            if let Some(i) = cfg.branch_index(r.z, opts.branch_tol * scale) {
                d.add(cfg.ramification_point(i), 2 * r.mult, merge_tol);
            } else {
                let v = cfg.f(r.z).sqrt();
                d.add(CurvePoint::finite(r.z, v), r.mult, merge_tol);
                d.add(CurvePoint::finite(r.z, -v), r.mult, merge_tol);
            }
        }
        let drop = n - deg.min(n);
        d.add(CurvePoint::Infinity(Sign::Plus), drop, merge_tol);
        d.add(CurvePoint::Infinity(Sign::Minus), drop, merge_tol);
    } else {
        let p2 = poly::mul(&h.p, &h.p);
        let r = poly::sub(&p2, &poly::scale(&fc, h.c * h.c));
        let rts = roots::roots_with_multiplicity(&r, &opts.roots);
        let deg: usize = rts.iter().map(|r| r.mult).sum();
        for rt in rts {
            let scale = 1.0 + rt.z.norm();
            if let Some(i) = cfg.branch_index(rt.z, opts.branch_tol * scale) {
                d.add(cfg.ramification_point(i), rt.mult, merge_tol);
            } else {
                let v = poly::eval(&h.p, rt.z) / h.c;
                d.add(CurvePoint::finite(rt.z, v), rt.mult, merge_tol);
            }
        }
        let drop = 2 * n - deg.min(2 * n);
        if drop > 0 {
            let lead = h.p[n];
            let s = if (lead - h.c).norm() <= (lead + h.c).norm() {
                Sign::Plus
            } else {
                Sign::Minus
            };
            d.add(CurvePoint::Infinity(s), drop, merge_tol);
        }
    }
    Ok(d)
}

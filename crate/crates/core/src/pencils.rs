//! Circle families of real evenly tangent hyperplanes attached to equal
//! divisions of the branch points, and the degree-`n` function `psi = A/v`.
//!
//! For a division `{I, J}` with `A = prod_I (z - a_i)` and `B = prod_J`, the
//! member at pencil value `t` is `P = (A + t^2 B)/2`, `c = t`. Then
//! `P^2 - t^2 f = ((A - t^2 B)/2)^2`, so the restriction is twice the fiber
//! `psi^{-1}(t)`.

use serde::Serialize;
use std::f64::consts::PI;

use crate::curve::{BranchConfig, CurvePoint, Flavor, Sign};
use crate::poly::{self, c, C64};
use crate::projective::{Divisor, Hyperplane};
use crate::report::Check;
use crate::roots::{self, RootOptions};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqualDivision {
    pub i_set: Vec<usize>,
    pub j_set: Vec<usize>,
}

impl EqualDivision {
    pub fn new(n: usize, i_set: &[usize]) -> Option<Self> {
        let mut i: Vec<usize> = i_set.to_vec();
        i.sort_unstable();
        i.dedup();
        if i.len() != n || i.iter().any(|&k| k == 0 || k > 2 * n) {
            return None;
        }
        let j = (1..=2 * n).filter(|k| !i.contains(k)).collect();
        Some(EqualDivision { i_set: i, j_set: j })
    }

    /// The division `{1..n} | {n+1..2n}`.
    pub fn central(n: usize) -> Self {
        EqualDivision {
            i_set: (1..=n).collect(),
            j_set: (n + 1..=2 * n).collect(),
        }
    }

    pub fn swapped(&self) -> Self {
        EqualDivision {
            i_set: self.j_set.clone(),
            j_set: self.i_set.clone(),
        }
    }

    pub fn a_poly(&self, cfg: &BranchConfig) -> Vec<f64> {
        let r: Vec<f64> = self.i_set.iter().map(|&k| cfg.a(k)).collect();
        poly::from_roots_real(&r)
    }

    pub fn b_poly(&self, cfg: &BranchConfig) -> Vec<f64> {
        let r: Vec<f64> = self.j_set.iter().map(|&k| cfg.a(k)).collect();
        poly::from_roots_real(&r)
    }
}

/// One representative per unordered division: the `n`-subsets containing 1.
pub fn all_divisions(n: usize) -> Vec<EqualDivision> {
    let mut out = Vec::new();
    let mut cur = vec![1usize];
    fn rec(n: usize, next: usize, cur: &mut Vec<usize>, out: &mut Vec<EqualDivision>) {
        if cur.len() == n {
            out.push(EqualDivision::new(n, cur).unwrap());
            return;
        }
        for k in next..=2 * n {
            cur.push(k);
            rec(n, k + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, 2, &mut cur, &mut out);
    out
}

/// Pencil value `t` for the real parameter `s`: `t = s` for even `n`,
/// `t = i s` for odd `n`.
pub fn pencil_t(n: usize, s: f64) -> C64 {
    if n % 2 == 0 {
        c(s, 0.0)
    } else {
        c(0.0, s)
    }
}

/// Real parameter of a pencil value (inverse of [`pencil_t`]).
pub fn pencil_s(n: usize, t: C64) -> C64 {
    if n % 2 == 0 {
        t
    } else {
        t / c(0.0, 1.0)
    }
}

/// Parameter `s'` on the swapped division that gives the same member.
pub fn swap_parameter(n: usize, s: f64) -> f64 {
    if n % 2 == 0 {
        1.0 / s
    } else {
        -1.0 / s
    }
}

pub fn family_member_t(div: &EqualDivision, cfg: &BranchConfig, t: C64) -> Hyperplane {
    let n = cfg.n;
    let a = poly::to_complex(&div.a_poly(cfg));
    let b = poly::to_complex(&div.b_poly(cfg));
    if !t.re.is_finite() || !t.im.is_finite() {
        return Hyperplane::new(b, c(0.0, 0.0));
    }
    let p = poly::scale(&poly::add(&a, &poly::scale(&b, t * t)), c(0.5, 0.0));
    Hyperplane::new(poly::pad(&p, n + 1), t)
}

pub fn family_member(div: &EqualDivision, cfg: &BranchConfig, s: f64) -> Hyperplane {
    if !s.is_finite() {
        return family_member_t(div, cfg, c(f64::INFINITY, 0.0));
    }
    family_member_t(div, cfg, pencil_t(cfg.n, s))
}

/// Relative coefficientwise defect of `P^2 - c^2 f - ((A - t^2 B)/2)^2`.
pub fn family_identity_defect(div: &EqualDivision, cfg: &BranchConfig, t: C64) -> f64 {
    let h = family_member_t(div, cfg, t);
    let a = poly::to_complex(&div.a_poly(cfg));
    let b = poly::to_complex(&div.b_poly(cfg));
    let f = poly::to_complex(&cfg.f_coeffs);
    let lhs = poly::sub(&poly::mul(&h.p, &h.p), &poly::scale(&f, h.c * h.c));
    let g = poly::scale(&poly::sub(&a, &poly::scale(&b, t * t)), c(0.5, 0.0));
    let rhs = poly::mul(&g, &g);
    let diff = poly::sub(&lhs, &rhs);
    let scale = poly::max_abs(&lhs).max(poly::max_abs(&rhs)).max(f64::MIN_POSITIVE);
    poly::max_abs(&diff) / scale
}

/// `psi(p) = A(z)/v`, with `None` standing for infinity.
pub fn psi_evaluate(div: &EqualDivision, cfg: &BranchConfig, p: &CurvePoint) -> Option<C64> {
    match *p {
        CurvePoint::Infinity(s) => Some(c(s.value(), 0.0)),
        CurvePoint::Finite { z, v } => {
            let a = poly::eval_real_at(&div.a_poly(cfg), z);
            let b = poly::eval_real_at(&div.b_poly(cfg), z);
            if a.norm() >= b.norm() {
                if v.norm() == 0.0 {
                    None
                } else {
                    Some(a / v)
                }
            } else {
                Some(v / b)
            }
        }
    }
}

/// Fiber `psi^{-1}(t)` as a degree-`n` divisor. `None` is `t = infinity`.
pub fn psi_fiber(div: &EqualDivision, cfg: &BranchConfig, t: Option<C64>) -> Divisor {
    let n = cfg.n;
    let mut d = Divisor::new();
    let t = match t {
        None => {
            for &j in &div.j_set {
                d.add(cfg.ramification_point(j), 1, 0.0);
            }
            return d;
        }
        Some(t) => t,
    };
    if t.norm() == 0.0 {
        for &i in &div.i_set {
            d.add(cfg.ramification_point(i), 1, 0.0);
        }
        return d;
    }
    let a = poly::to_complex(&div.a_poly(cfg));
    let b = poly::to_complex(&div.b_poly(cfg));
    let g = poly::sub(&a, &poly::scale(&b, t * t));
    let opts = RootOptions {
        lead_tol: 1e-12,
        cluster_radius: 1e-7,
        max_iter: 800,
    };
    let rts = roots::roots_with_multiplicity(&g, &opts);
    let deg: usize = rts.iter().map(|r| r.mult).sum();
    for r in rts {
        let v = poly::eval(&a, r.z) / t;
        d.add(CurvePoint::finite(r.z, v), r.mult, 1e-9);
    }
    if deg < n {
        let s = if (t - 1.0).norm() <= (t + 1.0).norm() {
            Sign::Plus
        } else {
            Sign::Minus
        };
        d.add(CurvePoint::Infinity(s), n - deg, 1e-9);
    }
    d
}

/// Angle `2 atan(s)` of a point of the real projective line.
fn rp1_angle(s: Option<f64>) -> f64 {
    match s {
        None => PI,
        Some(x) => 2.0 * x.atan(),
    }
}

fn unwrap(angles: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(angles.len());
    let mut off = 0.0;
    for (k, &a) in angles.iter().enumerate() {
        if k > 0 {
            let prev = angles[k - 1];
            let mut d = a - prev;
            while d > PI {
                d -= 2.0 * PI;
                off -= 2.0 * PI;
            }
            while d < -PI {
                d += 2.0 * PI;
                off += 2.0 * PI;
            }
        }
        out.push(a + off);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CircleImage {
    pub index: usize,
    pub flavor: Flavor,
    pub max_defect: f64,
    pub winding: f64,
    pub turning_points: usize,
    pub contains_s_l: bool,
    pub contains_s_r: bool,
}

/// Samples the full circle `i` and reports the behaviour of the parity
/// adjusted coordinate `psi` (divided by `i` when `n` is odd).
pub fn circle_image(cfg: &BranchConfig, i: usize, samples: usize) -> CircleImage {
    let div = EqualDivision::central(cfg.n);
    let flavor = cfg.classify_circle(i).flavor;
    let mut angles = Vec::with_capacity(samples);
    let mut max_defect: f64 = 0.0;
    // Offset keeps samples off the ramification points.
    for k in 0..samples {
        let th = 2.0 * PI * (k as f64 + 0.37) / samples as f64;
        let p = cfg.circle_point(i, th);
        let val = psi_evaluate(&div, cfg, &p).map(|x| pencil_s(cfg.n, x));
        let s = match (val, flavor) {
            (None, _) => None,
            (Some(x), Flavor::Real) => {
                max_defect = max_defect.max(x.im.abs() / (1.0 + x.norm()));
                Some(x.re)
            }
            (Some(x), Flavor::PureImaginary) => {
                max_defect = max_defect.max(x.re.abs() / (1.0 + x.norm()));
                Some(x.im)
            }
        };
        angles.push(rp1_angle(s));
    }
    let mut closed = angles.clone();
    closed.push(angles[0]);
    let un = unwrap(&closed);
    let winding = (un[un.len() - 1] - un[0]) / (2.0 * PI);
    let diffs: Vec<f64> = un.windows(2).map(|w| w[1] - w[0]).collect();
    let mut turning = 0;
    for k in 0..diffs.len() {
        let a = diffs[k];
        let b = diffs[(k + 1) % diffs.len()];
        if a * b < 0.0 {
            turning += 1;
        }
    }
    let lo = un.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = un.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let contains = |target: f64| {
        let k0 = ((lo - target) / (2.0 * PI)).ceil();
        target + 2.0 * PI * k0 <= hi
    };
    CircleImage {
        index: i,
        flavor,
        max_defect,
        winding,
        turning_points: turning,
        contains_s_l: contains(0.0),
        contains_s_r: contains(PI),
    }
}

/// Checks the circle image structure of `psi` on every circle.
pub fn verify_circle_images(cfg: &BranchConfig, samples: usize) -> Vec<Check> {
    let n = cfg.n;
    let mut out = Vec::new();
    for i in 0..2 * n {
        let im = circle_image(cfg, i, samples);
        let flav_ok = im.max_defect <= 1e-9;
        out.push(Check::new(
            format!("circle {i} image lies on the expected line"),
            flav_ok,
            format!("flavor {:?}, max defect {:.3e}", im.flavor, im.max_defect),
        ));
        let bij = i == n || (i == 0 && n % 2 == 0);
        if bij {
            let ok = (im.winding.abs() - 1.0).abs() < 1e-6 && im.turning_points == 0;
            out.push(Check::new(
                format!("circle {i} maps bijectively"),
                ok,
                format!("winding {:.6}, turning points {}", im.winding, im.turning_points),
            ));
        } else if im.flavor == Flavor::Real {
            let side_ok = if i < n { im.contains_s_l } else { im.contains_s_r };
            let ok = im.winding.abs() < 1e-6 && im.turning_points == 2 && side_ok;
            out.push(Check::new(
                format!("circle {i} folds 2:1 onto an interval"),
                ok,
                format!(
                    "winding {:.6}, turning points {}, contains s_L {}, contains s_R {}",
                    im.winding, im.turning_points, im.contains_s_l, im.contains_s_r
                ),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::make_branch_config;

    #[test]
    fn member_at_one_is_tangent_at_origin() {
        let cfg = make_branch_config(&[-3.0, -1.0, 1.0, 3.0]).unwrap();
        let h = family_member(&EqualDivision::central(2), &cfg, 1.0);
        let want = [3.0, 0.0, 1.0];
        for k in 0..3 {
            assert!((h.p[k] - c(want[k], 0.0)).norm() < 1e-14);
        }
        assert_eq!(h.c, c(1.0, 0.0));
    }

    #[test]
    fn division_count() {
        assert_eq!(all_divisions(2).len(), 3);
        assert_eq!(all_divisions(3).len(), 10);
        assert_eq!(all_divisions(1).len(), 1);
    }

    #[test]
    fn fiber_at_two() {
        let cfg = make_branch_config(&[-3.0, -1.0, 1.0, 3.0]).unwrap();
        let d = psi_fiber(&EqualDivision::central(2), &cfg, Some(c(2.0, 0.0)));
        let mut zs: Vec<f64> = d.expanded().iter().map(|p| p.z().unwrap().re).collect();
        zs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let r = 73f64.sqrt();
        assert!((zs[0] - (10.0 - r) / 3.0).abs() < 1e-12);
        assert!((zs[1] - (10.0 + r) / 3.0).abs() < 1e-12);
        for p in d.expanded() {
            assert!(cfg.residual(&p) < 1e-8);
        }
    }
}

#[cfg(test)]
mod circle_tests {
    use super::*;
    use crate::curve::make_branch_config;

    #[test]
    fn circle_images_genus_one_and_two() {
        for pts in [vec![-3.0, -1.0, 1.0, 3.0], vec![-5.0, -3.0, -1.0, 1.0, 3.0, 5.0], vec![-2.0, -0.5, 0.3, 1.0, 2.5, 4.0]] {
            let cfg = make_branch_config(&pts).unwrap();
            for ch in verify_circle_images(&cfg, 2000) {
                assert!(ch.passed, "{pts:?}: {} {}", ch.name, ch.detail);
            }
        }
    }
}

//! The hyperelliptic curve `v^2 = f(z)`, `f = prod (z - a_i)`, with its two
//! involutions, the circles over the real line and the quarter region.
//!
//! Sheets are handled with the function `F(z) = prod_j sqrt(z - a_j)` built
//! from principal square roots. It is analytic off the cuts
//! `[a_1,a_2], [a_3,a_4], ...` and behaves like `z^n` at infinity, so over the
//! open upper half plane it singles out one sheet without any path tracking.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::poly::{self, c, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum QuarterSeed {
    #[default]
    Plus,
    Conjugate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchConfig {
    pub n: usize,
    pub branch_points: Vec<f64>,
    pub f_coeffs: Vec<f64>,
    pub seed: QuarterSeed,
}

pub fn make_branch_config(points: &[f64]) -> Result<BranchConfig> {
    if points.len() < 2 || points.len() % 2 != 0 {
        return Err(Error::Validation(format!(
            "expected an even number (at least 2) of branch points, got {}",
            points.len()
        )));
    }
    for (k, w) in points.windows(2).enumerate() {
        if !w[0].is_finite() || !w[1].is_finite() {
            return Err(Error::Validation("branch points must be finite".into()));
        }
        if w[1] == w[0] {
            return Err(Error::Validation(format!(
                "duplicate branch points a{}={} and a{}={}",
                k + 1,
                w[0],
                k + 2,
                w[1]
            )));
        }
        if w[1] < w[0] {
            return Err(Error::Validation(format!(
                "not increasing: a{}={} > a{}={}",
                k + 1,
                w[0],
                k + 2,
                w[1]
            )));
        }
    }
    Ok(BranchConfig {
        n: points.len() / 2,
        branch_points: points.to_vec(),
        f_coeffs: poly::from_roots_real(points),
        seed: QuarterSeed::Plus,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
    pub fn from_value(x: f64) -> Sign {
        if x >= 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A point of the curve. At infinity the sign is the limit of `v / z^n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum CurvePoint {
    Finite { z: C64, v: C64 },
    Infinity(Sign),
}

impl CurvePoint {
    pub fn finite(z: C64, v: C64) -> Self {
        CurvePoint::Finite { z, v }
    }
    pub fn z(&self) -> Option<C64> {
        match *self {
            CurvePoint::Finite { z, .. } => Some(z),
            CurvePoint::Infinity(_) => None,
        }
    }
    pub fn v(&self) -> Option<C64> {
        match *self {
            CurvePoint::Finite { v, .. } => Some(v),
            CurvePoint::Infinity(_) => None,
        }
    }
    pub fn is_infinite(&self) -> bool {
        matches!(self, CurvePoint::Infinity(_))
    }

    /// Distance used for matching points; infinite points are only close to
    /// themselves or to very large finite points on the same sheet.
    pub fn distance(&self, other: &CurvePoint) -> f64 {
        match (self, other) {
            (CurvePoint::Finite { z: z1, v: v1 }, CurvePoint::Finite { z: z2, v: v2 }) => {
                let dz = (z1 - z2).norm();
                let dv = (v1 - v2).norm() / (1.0 + v1.norm().max(v2.norm())).sqrt();
                dz.max(dv)
            }
            (CurvePoint::Infinity(a), CurvePoint::Infinity(b)) => {
                if a == b {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            _ => f64::INFINITY,
        }
    }
}

/// Sheet rule for [`BranchConfig::lift_point`].
#[derive(Clone, Copy, Debug)]
pub enum Sheet {
    /// Principal square root of `f(z)` (and its negative).
    Plus,
    Minus,
    /// Root nearest to a reference value.
    Near(C64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Real,
    PureImaginary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CircleId {
    pub index: usize,
    pub flavor: Flavor,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuarterPoint {
    pub point: CurvePoint,
    pub in_half: bool,
    pub in_quarter: bool,
    pub on_boundary: bool,
    pub semicircle: Option<CircleId>,
    /// Index `i` when the point is the ramification point `r_i`.
    pub corner: Option<usize>,
}

/// Square root of a real number as seen from the upper half plane.
fn sqrt_above(x: f64) -> C64 {
    if x >= 0.0 {
        c(x.sqrt(), 0.0)
    } else {
        c(0.0, (-x).sqrt())
    }
}

impl BranchConfig {
    pub fn with_seed(mut self, seed: QuarterSeed) -> Self {
        self.seed = seed;
        self
    }

    pub fn genus(&self) -> usize {
        self.n - 1
    }

    pub fn a(&self, i: usize) -> f64 {
        self.branch_points[i - 1]
    }

    pub fn f(&self, z: C64) -> C64 {
        poly::eval_real_at(&self.f_coeffs, z)
    }

    pub fn f_real(&self, x: f64) -> f64 {
        poly::eval_real(&self.f_coeffs, x)
    }

    pub fn max_abs_branch(&self) -> f64 {
        self.branch_points.iter().map(|a| a.abs()).fold(0.0, f64::max)
    }

    /// Radius beyond which expansions at infinity are used.
    pub fn r_far(&self) -> f64 {
        2.0 * self.max_abs_branch() + 2.0
    }

    /// `(-1)^n`.
    pub fn parity(&self) -> f64 {
        if self.n % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Branch function `F(z)` off the real axis.
    pub fn branch_fn(&self, z: C64) -> C64 {
        if z.im == 0.0 {
            return self.branch_fn_above(z.re);
        }
        self.branch_points
            .iter()
            .fold(c(1.0, 0.0), |acc, &a| acc * (z - a).sqrt())
    }

    /// Boundary value of `F` on the real line from the upper half plane.
    pub fn branch_fn_above(&self, x: f64) -> C64 {
        self.branch_points
            .iter()
            .fold(c(1.0, 0.0), |acc, &a| acc * sqrt_above(x - a))
    }

    /// Sign `s_Q` with `v = s_Q F(z)` on the quarter over the upper half plane.
    pub fn quarter_sign(&self) -> f64 {
        let seed = c(0.0, 1.0 + self.max_abs_branch());
        let principal = self.f(seed).sqrt();
        let f = self.branch_fn(seed);
        let s = if (f - principal).norm() <= (f + principal).norm() {
            1.0
        } else {
            -1.0
        };
        match self.seed {
            QuarterSeed::Plus => s,
            QuarterSeed::Conjugate => -s,
        }
    }

    pub fn seed_point(&self) -> CurvePoint {
        let z = c(0.0, 1.0 + self.max_abs_branch());
        CurvePoint::finite(z, self.quarter_sign() * self.branch_fn(z))
    }

    pub fn residual(&self, p: &CurvePoint) -> f64 {
        match *p {
            CurvePoint::Finite { z, v } => {
                let fz = self.f(z);
                (v * v - fz).norm() / (1.0 + fz.norm())
            }
            CurvePoint::Infinity(_) => 0.0,
        }
    }

    pub fn lift_point(&self, z: C64, sheet: Sheet) -> CurvePoint {
        if let Some(i) = self.branch_index(z, 0.0) {
            return self.ramification_point(i);
        }
        let r = self.f(z).sqrt();
        let v = match sheet {
            Sheet::Plus => r,
            Sheet::Minus => -r,
            Sheet::Near(w) => {
                if (r - w).norm() <= (r + w).norm() {
                    r
                } else {
                    -r
                }
            }
        };
        CurvePoint::finite(z, v)
    }

    pub fn ramification_point(&self, i: usize) -> CurvePoint {
        CurvePoint::finite(c(self.a(i), 0.0), c(0.0, 0.0))
    }

    /// Index of the branch point equal to `z` within `tol`.
    pub fn branch_index(&self, z: C64, tol: f64) -> Option<usize> {
        self.branch_points
            .iter()
            .position(|&a| (z - a).norm() <= tol)
            .map(|k| k + 1)
    }

    pub fn apply_sigma(&self, p: &CurvePoint) -> CurvePoint {
        match *p {
            CurvePoint::Finite { z, v } => CurvePoint::finite(z.conj(), v.conj() * self.parity()),
            CurvePoint::Infinity(s) => {
                if self.n % 2 == 0 {
                    CurvePoint::Infinity(s)
                } else {
                    CurvePoint::Infinity(s.flip())
                }
            }
        }
    }

    pub fn apply_tau(&self, p: &CurvePoint) -> CurvePoint {
        match *p {
            CurvePoint::Finite { z, v } => CurvePoint::finite(z, -v),
            CurvePoint::Infinity(s) => CurvePoint::Infinity(s.flip()),
        }
    }

    pub fn classify_circle(&self, i: usize) -> CircleId {
        let flavor = if i % 2 == self.n % 2 {
            Flavor::Real
        } else {
            Flavor::PureImaginary
        };
        CircleId { index: i, flavor }
    }

    /// Index of the arc `I_i` containing the real number `x`. Branch point
    /// `a_i` (i < 2n) is assigned to `I_i`, and `a_{2n}` to `I_0`.
    pub fn interval_of(&self, x: f64) -> usize {
        let m = 2 * self.n;
        if !x.is_finite() || x < self.a(1) || x >= self.a(m) {
            return 0;
        }
        (1..m).rev().find(|&i| x >= self.a(i)).unwrap_or(0)
    }

    pub fn circle_of_point(&self, p: &CurvePoint, tol: f64) -> Option<CircleId> {
        match *p {
            CurvePoint::Infinity(_) => Some(self.classify_circle(0)),
            CurvePoint::Finite { z, .. } => {
                if z.im.abs() > tol * (1.0 + z.re.abs()) {
                    None
                } else {
                    Some(self.classify_circle(self.interval_of(z.re)))
                }
            }
        }
    }

    pub fn quarter_membership(&self, p: &CurvePoint, tol: f64) -> QuarterPoint {
        let sq = self.quarter_sign();
        let mut out = QuarterPoint {
            point: *p,
            in_half: false,
            in_quarter: false,
            on_boundary: false,
            semicircle: None,
            corner: None,
        };
        match *p {
            CurvePoint::Infinity(s) => {
                let on = s.value() == sq;
                let on_tau = -s.value() * self.parity() == sq;
                out.on_boundary = on;
                out.in_quarter = on;
                out.in_half = on || on_tau;
                out.semicircle = Some(self.classify_circle(0));
            }
            CurvePoint::Finite { z, v } => {
                let scale = 1.0 + v.norm();
                let near_real = z.im.abs() <= tol * (1.0 + z.re.abs());
                if near_real {
                    if let Some(i) = self.branch_index(c(z.re, 0.0), tol * (1.0 + z.re.abs())) {
                        out.corner = Some(i);
                        out.on_boundary = true;
                        out.in_quarter = true;
                        out.in_half = true;
                        out.semicircle = Some(self.classify_circle(self.interval_of(z.re)));
                        return out;
                    }
                    let fa = self.branch_fn_above(z.re);
                    let sheet = sq * fa;
                    out.semicircle = Some(self.classify_circle(self.interval_of(z.re)));
                    let tau_sigma_img = -self.parity() * sheet.conj();
                    if (v - sheet).norm() <= 1e3 * tol * scale {
                        out.on_boundary = true;
                        out.in_quarter = true;
                        out.in_half = true;
                    } else if (v - tau_sigma_img).norm() <= 1e3 * tol * scale {
                        out.in_half = true;
                    }
                } else {
                    let fz = self.branch_fn(z);
                    if z.im > 0.0 {
                        let inq = (v - sq * fz).norm() <= (v + sq * fz).norm();
                        out.in_quarter = inq;
                        out.in_half = inq;
                    } else {
                        let target = -self.parity() * sq * fz;
                        out.in_half = (v - target).norm() <= (v + target).norm();
                    }
                }
            }
        }
        out
    }

    /// Point `(lambda, s_Q F(lambda))` of the quarter boundary over a real
    /// number, or `infinity_{s_Q}` when `lambda` is infinite.
    pub fn boundary_parametrization(&self, lambda: f64) -> QuarterPoint {
        let p = self.boundary_point(lambda);
        self.quarter_membership(&p, 1e-12)
    }

    pub fn boundary_point(&self, lambda: f64) -> CurvePoint {
        if !lambda.is_finite() {
            return CurvePoint::Infinity(Sign::from_value(self.quarter_sign()));
        }
        if let Some(i) = self.branch_index(c(lambda, 0.0), 0.0) {
            return self.ramification_point(i);
        }
        CurvePoint::finite(c(lambda, 0.0), self.quarter_sign() * self.branch_fn_above(lambda))
    }

    /// Point of the full circle `Sigma_i` (or its fixed-locus twin) at angle
    /// `theta`. Angles in `(0, pi)` give the quarter's semicircle.
    pub fn circle_point(&self, i: usize, theta: f64) -> CurvePoint {
        let sq = self.quarter_sign();
        let th = theta.rem_euclid(2.0 * PI);
        let upper = th > 0.0 && th < PI;
        let sgn = if upper { sq } else { -sq };
        let m = 2 * self.n;
        let z = if i == 0 {
            let c0 = 0.5 * (self.a(1) + self.a(m));
            let k = 0.5 * (self.a(m) - self.a(1));
            let x = th.cos();
            if x.abs() < 1e-300 {
                return CurvePoint::Infinity(Sign::from_value(sgn));
            }
            c0 + k / x
        } else {
            let mid = 0.5 * (self.a(i) + self.a(i + 1));
            let r = 0.5 * (self.a(i + 1) - self.a(i));
            mid + r * th.cos()
        };
        if let Some(j) = self.branch_index(c(z, 0.0), 1e-15 * (1.0 + z.abs())) {
            return self.ramification_point(j);
        }
        CurvePoint::finite(c(z, 0.0), sgn * self.branch_fn_above(z))
    }

    /// Uniformly spread random point on the curve over a disk of radius `r`.
    pub fn random_point<R: rand::Rng>(&self, rng: &mut R, r: f64) -> CurvePoint {
        let z = c(rng.gen_range(-r..r), rng.gen_range(-r..r));
        let sheet = if rng.gen_bool(0.5) { Sheet::Plus } else { Sheet::Minus };
        self.lift_point(z, sheet)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> BranchConfig {
        make_branch_config(&[-3.0, -1.0, 1.0, 3.0]).unwrap()
    }

    #[test]
    fn expands_f() {
        let b = cfg();
        assert_eq!(b.n, 2);
        assert_eq!(b.f_coeffs, vec![9.0, 0.0, -10.0, 0.0, 1.0]);
        let b1 = make_branch_config(&[-1.0, 1.0]).unwrap();
        assert_eq!(b1.f_coeffs, vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn rejects_bad_input() {
        let e = make_branch_config(&[1.0, -1.0]).unwrap_err();
        assert!(e.to_string().contains("not increasing"));
        assert!(make_branch_config(&[1.0, 2.0, 3.0]).is_err());
        assert!(make_branch_config(&[0.0, 0.0]).unwrap_err().to_string().contains("duplicate"));
    }

    #[test]
    fn quarter_boundary_over_zero_is_plus_three() {
        let b = cfg();
        let p = b.boundary_point(0.0);
        assert!((p.v().unwrap() - c(3.0, 0.0)).norm() < 1e-14);
        let q = b.quarter_membership(&b.seed_point(), 1e-9);
        assert!(q.in_quarter && !q.on_boundary);
    }

    #[test]
    fn branch_fn_is_continuous_across_gaps() {
        let b = cfg();
        for &x in &[-5.0, -2.0, 0.0, 2.0, 7.0] {
            let up = b.branch_fn(c(x, 1e-9));
            let dn = b.branch_fn(c(x, -1e-9));
            let gap = b.interval_of(x) % 2 == 0;
            assert_eq!((up - dn).norm() < 1e-6, gap, "x={x}");
        }
    }
}

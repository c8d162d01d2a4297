//! Vector-valued complex quadrature: adaptive Gauss–Legendre on segments and
//! a Gauss–Chebyshev rule for integrals with inverse square root endpoints.

use gauss_quad::legendre::GaussLegendre;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::poly::{c, C64};

pub struct Legendre {
    pairs: Vec<(f64, f64)>,
}

impl Legendre {
    pub fn new(degree: usize) -> Self {
        let rule = GaussLegendre::new(degree.max(2)).expect("valid Gauss-Legendre degree");
        Legendre {
            pairs: rule.as_node_weight_pairs().to_vec(),
        }
    }

    fn apply(&self, f: &dyn Fn(f64) -> Vec<C64>, a: f64, b: f64, dim: usize) -> Vec<C64> {
        let h = 0.5 * (b - a);
        let m = 0.5 * (a + b);
        let mut acc = vec![c(0.0, 0.0); dim];
        for &(x, w) in &self.pairs {
            let y = f(m + h * x);
            for (s, v) in acc.iter_mut().zip(y) {
                *s += v * (w * h);
            }
        }
        acc
    }

    /// Adaptive bisection on `[a, b]` until halves agree with the whole to
    /// `tol` (absolute, max norm).
    pub fn integrate(
        &self,
        f: &dyn Fn(f64) -> Vec<C64>,
        a: f64,
        b: f64,
        dim: usize,
        tol: f64,
    ) -> Result<Vec<C64>> {
        let whole = self.apply(f, a, b, dim);
        self.refine(f, a, b, dim, (tol, 1e-3 * tol), whole, 0)
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(
        &self,
        f: &dyn Fn(f64) -> Vec<C64>,
        a: f64,
        b: f64,
        dim: usize,
        (tol, floor): (f64, f64),
        whole: Vec<C64>,
        depth: usize,
    ) -> Result<Vec<C64>> {
        let m = 0.5 * (a + b);
        let left = self.apply(f, a, m, dim);
        let right = self.apply(f, m, b, dim);
        let err = whole
            .iter()
            .zip(left.iter().zip(&right))
            .map(|(w, (l, r))| (w - l - r).norm())
            .fold(0.0, f64::max);
        if !err.is_finite() {
            return Err(Error::Quadrature {
                a: format!("{a}"),
                b: format!("{b}"),
                increment: err,
            });
        }
        if err <= tol || depth >= 30 {
            if err > tol * 1e3 {
                return Err(Error::Quadrature {
                    a: format!("{a}"),
                    b: format!("{b}"),
                    increment: err,
                });
            }
            return Ok(left.iter().zip(&right).map(|(l, r)| l + r).collect());
        }
        // Halve the budget per side, but not below a floor: near endpoint
        // singularities rounding noise would otherwise drive the recursion to
        // its depth limit.
        let sub = ((0.5 * tol).max(floor), floor);
        let l = self.refine(f, a, m, dim, sub, left, depth + 1)?;
        let r = self.refine(f, m, b, dim, sub, right, depth + 1)?;
        Ok(l.iter().zip(&r).map(|(x, y)| x + y).collect())
    }
}

/// `int_0^pi g(theta) d theta` by the Chebyshev midpoint rule, doubling the
/// node count until the increment falls below `tol`.
pub fn chebyshev_theta(
    g: &dyn Fn(f64) -> Vec<C64>,
    dim: usize,
    tol: f64,
    label: (f64, f64),
) -> Result<Vec<C64>> {
    let rule = |n: usize| -> Vec<C64> {
        let mut acc = vec![c(0.0, 0.0); dim];
        for k in 0..n {
            let th = (k as f64 + 0.5) * PI / n as f64;
            for (s, v) in acc.iter_mut().zip(g(th)) {
                *s += v;
            }
        }
        acc.iter().map(|x| x * (PI / n as f64)).collect()
    };
    let mut n = 16;
    let mut prev = rule(n);
    let mut inc = f64::INFINITY;
    while n < 1 << 20 {
        n *= 2;
        let next = rule(n);
        inc = prev
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let scale = 1.0 + next.iter().map(|x| x.norm()).fold(0.0, f64::max);
        prev = next;
        if inc < tol * scale {
            return Ok(prev);
        }
    }
    Err(Error::Quadrature {
        a: format!("{}", label.0),
        b: format!("{}", label.1),
        increment: inc,
    })
}

//! Dense univariate polynomials stored as ascending coefficient vectors.
//!
//! `p[k]` is the coefficient of `z^k`. Functions accept trailing zeros and
//! never trim unless asked to.

use num_complex::Complex64;

pub type C64 = Complex64;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn to_complex(p: &[f64]) -> Vec<C64> {
    p.iter().map(|&x| c(x, 0.0)).collect()
}

pub fn real_parts(p: &[C64]) -> Vec<f64> {
    p.iter().map(|x| x.re).collect()
}

/// Largest absolute imaginary part relative to the largest modulus.
pub fn imag_defect(p: &[C64]) -> f64 {
    let scale = max_abs(p).max(f64::MIN_POSITIVE);
    p.iter().map(|x| x.im.abs()).fold(0.0, f64::max) / scale
}

pub fn max_abs(p: &[C64]) -> f64 {
    p.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn max_abs_real(p: &[f64]) -> f64 {
    p.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn eval_real(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

pub fn eval_real_at(p: &[f64], z: C64) -> C64 {
    p.iter().rev().fold(C64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

pub fn eval(p: &[C64], z: C64) -> C64 {
    p.iter().rev().fold(C64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Horner evaluation with a running bound on the rounding error
/// (the usual `sum |a_k| |z|^k` majorant).
pub fn eval_with_bound(p: &[C64], z: C64) -> (C64, f64) {
    let r = z.norm();
    let mut acc = C64::new(0.0, 0.0);
    let mut bound = 0.0;
    for &a in p.iter().rev() {
        acc = acc * z + a;
        bound = bound * r + a.norm();
    }
    (acc, bound)
}

pub fn add<T: Copy + std::ops::Add<Output = T> + Default>(a: &[T], b: &[T]) -> Vec<T> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| {
            let x = a.get(k).copied().unwrap_or_default();
            let y = b.get(k).copied().unwrap_or_default();
            x + y
        })
        .collect()
}

pub fn sub<T>(a: &[T], b: &[T]) -> Vec<T>
where
    T: Copy + std::ops::Sub<Output = T> + Default,
{
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| {
            let x = a.get(k).copied().unwrap_or_default();
            let y = b.get(k).copied().unwrap_or_default();
            x - y
        })
        .collect()
}

pub fn scale<T: Copy + std::ops::Mul<Output = T>>(a: &[T], s: T) -> Vec<T> {
    a.iter().map(|&x| x * s).collect()
}

pub fn mul<T>(a: &[T], b: &[T]) -> Vec<T>
where
    T: Copy + std::ops::Mul<Output = T> + std::ops::Add<Output = T> + Default,
{
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![T::default(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = out[i + j] + x * y;
        }
    }
    out
}

pub fn from_roots_real(roots: &[f64]) -> Vec<f64> {
    roots.iter().fold(vec![1.0], |acc, &r| mul(&acc, &[-r, 1.0]))
}

pub fn from_roots(roots: &[C64]) -> Vec<C64> {
    roots
        .iter()
        .fold(vec![c(1.0, 0.0)], |acc, &r| mul(&acc, &[-r, c(1.0, 0.0)]))
}

pub fn pow_linear_real(root: f64, k: usize) -> Vec<f64> {
    from_roots_real(&vec![root; k])
}

pub fn derivative<T>(p: &[T]) -> Vec<T>
where
    T: Copy + std::ops::Mul<f64, Output = T>,
{
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &a)| a * k as f64)
        .collect()
}

/// Coefficients of `p(w + s)` as a polynomial in `w` (Taylor shift).
pub fn shift_real(p: &[f64], s: f64) -> Vec<f64> {
    let mut q = p.to_vec();
    let n = q.len();
    for i in 0..n {
        for k in (i..n.saturating_sub(1)).rev() {
            q[k] += s * q[k + 1];
        }
    }
    q
}

pub fn pad<T: Copy + Default>(p: &[T], len: usize) -> Vec<T> {
    let mut q = p.to_vec();
    q.resize(len.max(p.len()), T::default());
    q
}

/// Index of the highest coefficient whose modulus exceeds `tol * max|p|`.
pub fn effective_degree(p: &[C64], tol: f64) -> Option<usize> {
    let m = max_abs(p);
    if m == 0.0 {
        return None;
    }
    p.iter().rposition(|x| x.norm() > tol * m)
}

/// Synthetic division of `p` by `(z - r)`, returning quotient and remainder.
pub fn deflate(p: &[C64], r: C64) -> (Vec<C64>, C64) {
    if p.is_empty() {
        return (Vec::new(), c(0.0, 0.0));
    }
    let n = p.len() - 1;
    let mut q = vec![c(0.0, 0.0); n];
    let mut acc = p[n];
    for k in (0..n).rev() {
        q[k] = acc;
        acc = p[k] + acc * r;
    }
    (q, acc)
}

/// Long division for real polynomials; the divisor must have a nonzero
/// leading coefficient.
pub fn divmod_real(a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let db = b.len() - 1;
    let lead = b[db];
    let mut r = a.to_vec();
    if a.len() <= db {
        return (vec![0.0], r);
    }
    let mut q = vec![0.0; a.len() - db];
    for k in (0..q.len()).rev() {
        let coef = r[k + db] / lead;
        q[k] = coef;
        for j in 0..=db {
            r[k + j] -= coef * b[j];
        }
    }
    r.truncate(db.max(1));
    (q, r)
}

/// Binomial coefficient as a float.
pub fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_matches_direct_evaluation() {
        let p = [9.0, 0.0, -10.0, 0.0, 1.0];
        let q = shift_real(&p, 0.7);
        for &w in &[-1.3, 0.0, 0.25, 2.0] {
            assert!((eval_real(&q, w) - eval_real(&p, w + 0.7)).abs() < 1e-12);
        }
    }

    #[test]
    fn divmod_recovers_factor() {
        let a = mul(&[1.0, 2.0, 3.0], &[-1.0, 1.0]);
        let (q, r) = divmod_real(&a, &[-1.0, 1.0]);
        assert!(r.iter().all(|x| x.abs() < 1e-14));
        assert_eq!(q.len(), 3);
        assert!((q[2] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn deflation_remainder_is_value() {
        let p = to_complex(&[9.0, 0.0, -10.0, 0.0, 1.0]);
        let (_, rem) = deflate(&p, c(0.5, 0.2));
        assert!((rem - eval(&p, c(0.5, 0.2))).norm() < 1e-13);
    }
}

//! Real lattices: LLL reduction and closest-vector search, used for
//! distances on the Jacobian torus.

use nalgebra::{DMatrix, DVector};

/// A full-rank lattice in `R^d`, stored with an LLL-reduced basis (columns).
#[derive(Clone, Debug)]
pub struct RealLattice {
    pub basis: DMatrix<f64>,
    inverse: DMatrix<f64>,
}

fn gram_schmidt(b: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let d = b.ncols();
    let mut bs = b.clone();
    let mut mu = DMatrix::<f64>::zeros(d, d);
    for i in 0..d {
        let mut v = b.column(i).clone_owned();
        for j in 0..i {
            let bj = bs.column(j).clone_owned();
            let den = bj.dot(&bj);
            let m = if den > 0.0 { b.column(i).dot(&bj) / den } else { 0.0 };
            mu[(i, j)] = m;
            v -= bj * m;
        }
        bs.set_column(i, &v);
    }
    (bs, mu)
}

/// Lenstra–Lenstra–Lovász reduction with parameter `delta`.
pub fn lll(basis: &DMatrix<f64>, delta: f64) -> DMatrix<f64> {
    let d = basis.ncols();
    let mut b = basis.clone();
    if d <= 1 {
        return b;
    }
    let mut k = 1;
    let mut guard = 0;
    while k < d && guard < 10_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (_, mu) = gram_schmidt(&b);
            let q = mu[(k, j)].round();
            if q != 0.0 {
                let bj = b.column(j).clone_owned();
                let mut bk = b.column(k).clone_owned();
                bk -= bj * q;
                b.set_column(k, &bk);
            }
        }
        let (bs, mu) = gram_schmidt(&b);
        let nk = bs.column(k).norm_squared();
        let nk1 = bs.column(k - 1).norm_squared();
        if nk >= (delta - mu[(k, k - 1)] * mu[(k, k - 1)]) * nk1 {
            k += 1;
        } else {
            b.swap_columns(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    b
}

impl RealLattice {
    pub fn new(generators: &DMatrix<f64>) -> Option<Self> {
        let basis = lll(generators, 0.75);
        let inverse = basis.clone().try_inverse()?;
        Some(RealLattice { basis, inverse })
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Closest lattice vector to `x`: Babai rounding in the reduced basis
    /// followed by a search over neighbouring coefficient vectors.
    pub fn closest(&self, x: &DVector<f64>) -> DVector<f64> {
        let d = self.dim();
        if d == 0 {
            return DVector::zeros(x.len());
        }
        let coeffs = &self.inverse * x;
        let base: Vec<f64> = coeffs.iter().map(|c| c.round()).collect();
        let mut best = self.combine(&base);
        let mut best_d = (x - &best).norm();
        if d <= 6 {
            let total = 3usize.pow(d as u32);
            for code in 0..total {
                let mut cc = base.clone();
                let mut r = code;
                for coef in cc.iter_mut() {
                    *coef += (r % 3) as f64 - 1.0;
                    r /= 3;
                }
                let v = self.combine(&cc);
                let dd = (x - &v).norm();
                if dd < best_d {
                    best_d = dd;
                    best = v;
                }
            }
        } else {
            for k in 0..d {
                for s in [-1.0, 1.0] {
                    let mut cc = base.clone();
                    cc[k] += s;
                    let v = self.combine(&cc);
                    let dd = (x - &v).norm();
                    if dd < best_d {
                        best_d = dd;
                        best = v;
                    }
                }
            }
        }
        best
    }

    fn combine(&self, coeffs: &[f64]) -> DVector<f64> {
        &self.basis * DVector::from_column_slice(coeffs)
    }

    /// Integer coordinates of a lattice vector, rounded.
    pub fn coordinates(&self, x: &DVector<f64>) -> DVector<f64> {
        (&self.inverse * x).map(|c| c.round())
    }

    /// Distance from `x` to the lattice.
    pub fn distance(&self, x: &DVector<f64>) -> f64 {
        (x - self.closest(x)).norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lll_reduces_a_skewed_basis() {
        let b = DMatrix::from_column_slice(2, 2, &[1.0, 0.0, 37.0, 1.0]);
        let r = lll(&b, 0.75);
        assert!(r.column(0).norm() <= 1.0 + 1e-12);
        assert!(r.column(1).norm() <= 1.0 + 1e-12);
        let lat = RealLattice::new(&b).unwrap();
        let x = DVector::from_column_slice(&[12.2, -3.9]);
        let v = lat.closest(&x);
        assert!((v[0] - 12.0).abs() < 1e-12 && (v[1] + 4.0).abs() < 1e-12);
    }
}

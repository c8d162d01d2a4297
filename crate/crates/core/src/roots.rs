//! Simultaneous polynomial root finding (Aberth–Ehrlich) with detection of
//! clustered roots.
//!
//! Multiple roots are the whole point here: a hyperplane tangent to the curve
//! shows up as a double root of the restricted polynomial, and the plain
//! iteration only resolves such a root to about `sqrt(eps)`. Clusters are
//! therefore merged, validated against the local Taylor expansion, and
//! re-polished as simple roots of the appropriate derivative.

use crate::poly::{self, c, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub z: C64,
    pub mult: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct RootOptions {
    /// Relative threshold below which a leading coefficient counts as zero.
    pub lead_tol: f64,
    /// Radius (relative to `1 + |z|`) inside which roots may be merged.
    pub cluster_radius: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            lead_tol: 1e-12,
            cluster_radius: 1e-5,
            max_iter: 800,
        }
    }
}

/// Strips (near-)zero leading coefficients, returning the trimmed polynomial.
pub fn trim(p: &[C64], lead_tol: f64) -> Vec<C64> {
    match poly::effective_degree(p, lead_tol) {
        None => Vec::new(),
        Some(d) => p[..=d].to_vec(),
    }
}

/// All roots of `p` with multiplicity, as produced by the iteration (no
/// clustering). `p` must already be trimmed.
pub fn aberth(p: &[C64], max_iter: usize) -> Vec<C64> {
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = p[n];
    let monic: Vec<C64> = p.iter().map(|&a| a / lead).collect();
    if n == 1 {
        return vec![-monic[0]];
    }
    let dp = poly::derivative(&monic);

    // Initial guesses on a circle whose radius is the geometric mean of the
    // root moduli (from the constant term), nudged off symmetric positions.
    let mut rad = monic[0].norm().powf(1.0 / n as f64);
    let cauchy = 1.0 + monic[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    if !(rad > 1e-8) || !rad.is_finite() {
        rad = cauchy.min(1.0);
    }
    let centre = -monic[n - 1] / n as f64;
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            centre + C64::from_polar(rad.max(centre.norm() * 0.1 + 0.5), th)
        })
        .collect();

    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let mut all_done = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (pv, bound) = poly::eval_with_bound(&monic, z[k]);
            if pv.norm() <= 4.0 * f64::EPSILON * bound {
                done[k] = true;
                continue;
            }
            let dv = poly::eval(&dp, z[k]);
            let ratio = pv / dv;
            let mut s = c(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    let d = z[k] - z[j];
                    if d.norm() > 0.0 {
                        s += d.inv();
                    }
                }
            }
            let denom = c(1.0, 0.0) - ratio * s;
            let step = if denom.norm() > 0.0 && dv.norm() > 0.0 {
                ratio / denom
            } else {
                // Derivative vanished: kick the estimate.
                C64::from_polar(1e-3 * (1.0 + z[k].norm()), 1.0 + k as f64)
            };
            z[k] -= step;
            if step.norm() <= 1e-16 * (1.0 + z[k].norm()) {
                done[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    z
}

/// Taylor coefficients `p^{(k)}(a)/k!` for `k = 0..=deg p`.
pub fn taylor_at(p: &[C64], a: C64) -> Vec<C64> {
    // Repeated synthetic division.
    let mut q = p.to_vec();
    let mut out = Vec::with_capacity(p.len());
    while !q.is_empty() {
        let (next, rem) = poly::deflate(&q, a);
        out.push(rem);
        q = next;
    }
    out
}

/// Polishes an `m`-fold root estimate by Newton on `p^{(m-1)}`.
fn polish(p: &[C64], mut z: C64, m: usize) -> C64 {
    let mut d = p.to_vec();
    for _ in 1..m {
        d = poly::derivative(&d);
    }
    let dd = poly::derivative(&d);
    for _ in 0..60 {
        let v = poly::eval(&d, z);
        let w = poly::eval(&dd, z);
        if w.norm() == 0.0 {
            break;
        }
        let step = v / w;
        let next = z - step;
        if !next.re.is_finite() || !next.im.is_finite() {
            break;
        }
        z = next;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

/// Whether `m` roots of `p` plausibly coalesce at `a` within `radius`.
fn cluster_is_valid(p: &[C64], a: C64, m: usize, radius: f64) -> bool {
    let t = taylor_at(p, a);
    if t.len() <= m {
        return false;
    }
    // Scale by the largest of the higher Taylor coefficients so that the test
    // does not depend on the normalisation of p.
    let tm = t[m].norm().max(t[m..].iter().map(|x| x.norm()).fold(0.0, f64::max) * 1e-3);
    if tm == 0.0 {
        return false;
    }
    let rel = radius.max(1e-14);
    // Rounding bound: Taylor coefficients of |p| at |a|.
    let abs_p: Vec<C64> = p.iter().map(|x| c(x.norm(), 0.0)).collect();
    let bound = taylor_at(&abs_p, c(a.norm(), 0.0));
    (0..m).all(|k| {
        let allowed = 8.0 * poly::binom(m, k) * rel.powi((m - k) as i32) * tm
            + 64.0 * f64::EPSILON * bound[k].norm();
        t[k].norm() <= allowed
    })
}

/// Root multiset of `p` with clustered roots merged into multiplicities.
/// Leading coefficients below `lead_tol` are dropped first; the caller can
/// compare `deg` of the returned multiset with the nominal degree to learn
/// how many roots went to infinity.
pub fn roots_with_multiplicity(p: &[C64], opts: &RootOptions) -> Vec<Root> {
    let q = trim(p, opts.lead_tol);
    if q.len() <= 1 {
        return Vec::new();
    }
    let raw = aberth(&q, opts.max_iter);
    cluster(&q, &raw, opts.cluster_radius)
}

/// Groups raw root estimates into clusters. Candidate groups are formed by
/// single linkage at the given radius, then, if the Taylor test rejects a
/// group, it is split at its widest gap and retried.
pub fn cluster(p: &[C64], raw: &[C64], radius: f64) -> Vec<Root> {
    let n = raw.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut j = i;
        while parent[j] != r {
            let nx = parent[j];
            parent[j] = r;
            j = nx;
        }
        r
    }
    // Raw estimates of an m-fold root scatter like eps^(1/m), so candidate
    // groups are formed generously and the Taylor test decides.
    let link = radius.max(1e-3);
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = 1.0 + raw[i].norm().max(raw[j].norm());
            if (raw[i] - raw[j]).norm() <= link * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<C64>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(raw[i]);
    }
    let mut out = Vec::new();
    let mut stack: Vec<Vec<C64>> = groups.into_values().collect();
    while let Some(g) = stack.pop() {
        let m = g.len();
        let centre = g.iter().fold(c(0.0, 0.0), |a, &b| a + b) / m as f64;
        if m == 1 {
            out.push(Root {
                z: polish(p, centre, 1),
                mult: 1,
            });
            continue;
        }
        let scale = 1.0 + centre.norm();
        if cluster_is_valid(p, centre, m, radius * scale) {
            let spread = g.iter().map(|x| (x - centre).norm()).fold(0.0, f64::max);
            let z = polish(p, centre, m);
            let z = if (z - centre).norm() <= (radius * scale).max(2.0 * spread) {
                z
            } else {
                centre
            };
            out.push(Root { z, mult: m });
        } else {
            let (a, b) = split_widest(&g);
            stack.push(a);
            stack.push(b);
        }
    }
    out.sort_by(|a, b| {
        a.z.re
            .partial_cmp(&b.z.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.z.im.partial_cmp(&b.z.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    out
}

/// Splits a point set in two by removing the longest edge of its minimum
/// spanning tree.
fn split_widest(g: &[C64]) -> (Vec<C64>, Vec<C64>) {
    let n = g.len();
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut link = vec![0usize; n];
    best[0] = 0.0;
    let mut edges = Vec::new();
    for _ in 0..n {
        let u = (0..n)
            .filter(|&i| !in_tree[i])
            .min_by(|&a, &b| best[a].partial_cmp(&best[b]).unwrap())
            .unwrap();
        in_tree[u] = true;
        if u != 0 {
            edges.push((best[u], link[u], u));
        }
        for w in 0..n {
            let d = (g[u] - g[w]).norm();
            if !in_tree[w] && d < best[w] {
                best[w] = d;
                link[w] = u;
            }
        }
    }
    let cut = edges
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .0.partial_cmp(&b.1 .0).unwrap())
        .map(|(k, _)| k)
        .unwrap();
    // Connected components of the tree without the cut edge.
    let mut adj = vec![Vec::new(); n];
    for (k, &(_, a, b)) in edges.iter().enumerate() {
        if k != cut {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut side = vec![false; n];
    let mut st = vec![0usize];
    side[0] = true;
    while let Some(u) = st.pop() {
        for &w in &adj[u] {
            if !side[w] {
                side[w] = true;
                st.push(w);
            }
        }
    }
    let a = (0..n).filter(|&i| side[i]).map(|i| g[i]).collect();
    let b = (0..n).filter(|&i| !side[i]).map(|i| g[i]).collect();
    (a, b)
}

/// Roots of a real polynomial, flattened with multiplicity, clustering off.
pub fn real_poly_roots(p: &[f64]) -> Vec<C64> {
    let q = trim(&poly::to_complex(p), 1e-14);
    if q.len() <= 1 {
        return Vec::new();
    }
    let raw = aberth(&q, 800);
    raw.into_iter().map(|z| polish(&q, z, 1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_re(v: &[Root]) -> Vec<(f64, usize)> {
        v.iter().map(|r| (r.z.re, r.mult)).collect()
    }

    #[test]
    fn finds_simple_real_roots() {
        let p = poly::to_complex(&poly::from_roots_real(&[-3.0, -1.0, 1.0, 3.0]));
        let r = roots_with_multiplicity(&p, &RootOptions::default());
        let got = sorted_re(&r);
        for (k, want) in [-3.0, -1.0, 1.0, 3.0].iter().enumerate() {
            assert!((got[k].0 - want).abs() < 1e-12);
            assert_eq!(got[k].1, 1);
        }
    }

    #[test]
    fn merges_double_and_triple_roots() {
        let p = poly::to_complex(&poly::from_roots_real(&[0.5, 0.5, -2.0, -2.0, -2.0, 4.0]));
        let r = roots_with_multiplicity(&p, &RootOptions::default());
        assert_eq!(r.len(), 3);
        assert!((r[0].z.re + 2.0).abs() < 1e-10 && r[0].mult == 3);
        assert!((r[1].z.re - 0.5).abs() < 1e-10 && r[1].mult == 2);
        assert!((r[2].z.re - 4.0).abs() < 1e-12 && r[2].mult == 1);
    }

    #[test]
    fn keeps_close_but_distinct_roots_apart() {
        let p = poly::to_complex(&poly::from_roots_real(&[1.0, 1.0 + 1e-3, 5.0]));
        let r = roots_with_multiplicity(&p, &RootOptions::default());
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn complex_conjugate_double_pair() {
        // (z^2 + 23)^2 z^2
        let base = poly::mul(&[23.0, 0.0, 1.0], &[0.0, 1.0]);
        let p = poly::to_complex(&poly::mul(&base, &base));
        let r = roots_with_multiplicity(&p, &RootOptions::default());
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|x| x.mult == 2));
        let s = 23f64.sqrt();
        assert!(r.iter().any(|x| (x.z - c(0.0, s)).norm() < 1e-9));
        assert!(r.iter().any(|x| (x.z - c(0.0, -s)).norm() < 1e-9));
    }

    #[test]
    fn near_zero_leading_coefficient_drops_degree() {
        let p = vec![c(-9.0, 0.0), c(20.0, 0.0), c(-3.0, 0.0), c(1e-17, 0.0)];
        let r = roots_with_multiplicity(&p, &RootOptions::default());
        assert_eq!(r.iter().map(|x| x.mult).sum::<usize>(), 2);
    }
}

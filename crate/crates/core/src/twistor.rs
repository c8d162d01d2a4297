//! Twistor lines on the projective model `xy = prod (z - a_j u)` and their
//! images in the minitwistor surface.
//!
//! A line is stored by the polynomials `x(u)`, `y(u)` (sections of
//! `O(2n)`) and `z(u)` (a section of `O(2)`). The real structure is
//! `(x, y, z, u) -> (conj y / conj u^{2n}, conj x / conj u^{2n}, -conj z / conj u^2, -1 / conj u)`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::curve::{BranchConfig, CurvePoint};
use crate::error::{Error, Result};
use crate::pencils::{self, EqualDivision};
use crate::poly::{self, c, C64};
use crate::projective::{
    projective_distance, quotient_map, restrict_hyperplane, Divisor, Hyperplane, Hyperplane3,
};

/// `(-1)^i prod_{j>i}(lambda - a_j) / prod_{j<=i}(lambda - a_j)`, the squared
/// modulus of the intersection coordinate with the `i`-th axis component.
pub fn chain_modulus_sq(cfg: &BranchConfig, i: usize, lambda: f64) -> f64 {
    let m = 2 * cfg.n;
    let num: f64 = (i + 1..=m).map(|j| lambda - cfg.a(j)).product();
    let den: f64 = (1..=i).map(|j| lambda - cfg.a(j)).product();
    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
    sign * num / den
}

/// Endpoints of the `i`-th interval, with `a_0 = -inf`, `a_{2n+1} = +inf`.
pub fn interval(cfg: &BranchConfig, i: usize) -> (f64, f64) {
    let m = 2 * cfg.n;
    let lo = if i == 0 { f64::NEG_INFINITY } else { cfg.a(i) };
    let hi = if i == m { f64::INFINITY } else { cfg.a(i + 1) };
    (lo, hi)
}

/// The unique `lambda` in the `i`-th interval with `chain_modulus_sq = m2`.
/// The right-hand side decreases from `+inf` to `0` across the interval.
pub fn solve_lambda(cfg: &BranchConfig, i: usize, m2: f64) -> Result<f64> {
    if i > 2 * cfg.n {
        return Err(Error::Index(format!("interval index {i} out of range 0..={}", 2 * cfg.n)));
    }
    if !(m2 > 0.0) || !m2.is_finite() {
        return Err(Error::Validation(format!("modulus must be positive and finite, got {m2}")));
    }
    let (lo, hi) = interval(cfg, i);
    let span = 1.0 + cfg.max_abs_branch();
    // Finite brackets for the unbounded end intervals.
    let mut a = if lo.is_finite() { lo } else { hi - span };
    let mut b = if hi.is_finite() { hi } else { lo + span };
    if !lo.is_finite() {
        while chain_modulus_sq(cfg, i, a) < m2 {
            a = hi - 2.0 * (hi - a);
        }
    }
    if !hi.is_finite() {
        while chain_modulus_sq(cfg, i, b) > m2 {
            b = lo + 2.0 * (b - lo);
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if chain_modulus_sq(cfg, i, mid) > m2 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum RootSelection {
    /// For each `j`, the root `u` of `z(u) = a_j u` with `Re(u conj p) < 0`.
    /// This is the choice that degenerates to the chain lines as `p -> 0`.
    NegativeReal,
    /// The root inside the unit disk for every `j`.
    UnitDisk,
    /// Explicit choice per branch point: `true` takes the root inside the
    /// unit disk.
    Explicit(Vec<bool>),
}

#[derive(Clone, Debug, Serialize)]
pub enum LineKind {
    Chain { i: usize, c: C64, lambda: f64 },
    Invariant { i: usize },
    Generic { p: C64, q: f64, selection: RootSelection },
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistorLine {
    pub n: usize,
    pub kind: LineKind,
    /// Coefficients in `u`, lowest first.
    pub x: Vec<C64>,
    pub y: Vec<C64>,
    pub z: Vec<C64>,
}

impl TwistorLine {
    /// `(x, y, z, u)` at the affine parameter `u`.
    pub fn point(&self, u: C64) -> (C64, C64, C64, C64) {
        (poly::eval(&self.x, u), poly::eval(&self.y, u), poly::eval(&self.z, u), u)
    }

    /// Relative coefficient defect of `x y - prod (z - a_j u)`.
    pub fn product_defect(&self, cfg: &BranchConfig) -> f64 {
        let lhs = poly::mul(&self.x, &self.y);
        let rhs = cfg.branch_points.iter().fold(vec![c(1.0, 0.0)], |acc, &a| {
            let mut lin = self.z.clone();
            lin.resize(3, c(0.0, 0.0));
            lin[1] -= c(a, 0.0);
            poly::mul(&acc, &lin)
        });
        let diff = poly::sub(&lhs, &rhs);
        poly::max_abs(&diff) / poly::max_abs(&rhs).max(poly::max_abs(&lhs)).max(f64::MIN_POSITIVE)
    }

    /// Largest relative distance between `sigma(L(u))` and `L(-1/conj u)`
    /// over sample parameters on a circle.
    pub fn reality_defect(&self, samples: usize) -> f64 {
        let k = 2 * self.n as i32;
        let mut worst: f64 = 0.0;
        for s in 0..samples {
            let th = 2.0 * std::f64::consts::PI * (s as f64 + 0.37) / samples as f64;
            let u = C64::from_polar(0.8, th);
            let (x, y, z, _) = self.point(u);
            let ub = u.conj();
            let sx = y.conj() / ub.powi(k);
            let sy = x.conj() / ub.powi(k);
            let sz = -z.conj() / (ub * ub);
            let u2 = -ub.inv();
            let (x2, y2, z2, _) = self.point(u2);
            let scale = 1.0 + x2.norm().max(y2.norm()).max(z2.norm());
            let d = (sx - x2).norm().max((sy - y2).norm()).max((sz - z2).norm()) / scale;
            worst = worst.max(d);
        }
        worst
    }

    /// Images of sample points under the quotient map to `P^{n+2}`.
    pub fn image_samples(&self, cfg: &BranchConfig, count: usize) -> Result<Vec<Vec<C64>>> {
        (0..count)
            .map(|s| {
                let th = 2.0 * std::f64::consts::PI * (s as f64 + 0.5) / count as f64;
                let u = C64::from_polar(1.0, th);
                let (x, y, z, u) = self.point(u);
                quotient_map(x, y, z, u, cfg)
            })
            .collect()
    }
}

/// The line through the intersection point with coordinate `c` on the
/// `i`-th axis component; `lambda` comes from the modulus of `c`.
pub fn chain_line(cfg: &BranchConfig, i: usize, cval: C64) -> Result<TwistorLine> {
    if cval.norm() == 0.0 || !cval.norm().is_finite() {
        return Err(Error::Degenerate(
            "c must be nonzero and finite; use the invariant line constructor".into(),
        ));
    }
    let n = cfg.n;
    let lambda = solve_lambda(cfg, i, cval.norm_sqr())?;
    let left: f64 = (1..=i).map(|j| lambda - cfg.a(j)).product();
    let right: f64 = (i + 1..=2 * n).map(|j| lambda - cfg.a(j)).product();
    let mut x = vec![c(0.0, 0.0); 2 * n + 1];
    let mut y = vec![c(0.0, 0.0); 2 * n + 1];
    x[i] = cval * left;
    y[2 * n - i] = cval.inv() * right;
    Ok(TwistorLine {
        n,
        kind: LineKind::Chain { i, c: cval, lambda },
        x,
        y,
        z: vec![c(0.0, 0.0), c(lambda, 0.0), c(0.0, 0.0)],
    })
}

/// `L_i = {x = y = z - a_i u = 0}`.
pub fn invariant_line(cfg: &BranchConfig, i: usize) -> Result<TwistorLine> {
    if i == 0 || i > 2 * cfg.n {
        return Err(Error::Index(format!("invariant line index {i} out of range 1..={}", 2 * cfg.n)));
    }
    Ok(TwistorLine {
        n: cfg.n,
        kind: LineKind::Invariant { i },
        x: vec![c(0.0, 0.0)],
        y: vec![c(0.0, 0.0)],
        z: vec![c(0.0, 0.0), c(cfg.a(i), 0.0), c(0.0, 0.0)],
    })
}

/// The two roots of `-conj(p) u^2 + (q - a) u + p`, smaller modulus first.
fn section_roots(p: C64, q: f64, a: f64) -> (C64, C64) {
    let qa = c(q - a, 0.0);
    let disc = (qa * qa + p.conj() * p * 4.0).sqrt();
    // Stable quadratic formula: avoid cancellation in the larger root.
    let s = if (qa + disc).norm() >= (qa - disc).norm() { qa + disc } else { qa - disc };
    let big = s / (p.conj() * 2.0);
    let small = -(p * 2.0) / s;
    if small.norm() <= big.norm() {
        (small, big)
    } else {
        (big, small)
    }
}

/// A generic real twistor line over the real section
/// `z(u) = p + q u - conj(p) u^2`, with the `S^1` phase `theta`.
pub fn generic_line(
    cfg: &BranchConfig,
    p: C64,
    q: f64,
    selection: &RootSelection,
    theta: f64,
) -> Result<TwistorLine> {
    let n = cfg.n;
    if p.norm() <= 1e-12 * (1.0 + q.abs()) {
        return Err(Error::Degenerate(
            "section z = q u meets the axis chain; use chain_line".into(),
        ));
    }
    let mut xr = Vec::with_capacity(2 * n);
    let mut yr = Vec::with_capacity(2 * n);
    for j in 1..=2 * n {
        let (inside, outside) = section_roots(p, q, cfg.a(j));
        let pick_inside = match selection {
            RootSelection::UnitDisk => true,
            RootSelection::Explicit(v) => *v.get(j - 1).ok_or_else(|| {
                Error::Validation(format!("selection has {} entries, need {}", v.len(), 2 * n))
            })?,
            RootSelection::NegativeReal => {
                let si = (inside * p.conj()).re;
                let so = (outside * p.conj()).re;
                let tol = 1e-12 * (inside * p.conj()).norm().max((outside * p.conj()).norm());
                if si.abs() <= tol && so.abs() <= tol {
                    return Err(Error::Degenerate(format!(
                        "root pair for a_{j} is ambiguous under the sign selection"
                    )));
                }
                si < so
            }
        };
        let (s, o) = if pick_inside { (inside, outside) } else { (outside, inside) };
        xr.push(s);
        yr.push(o);
    }
    // Reality forces beta = conj(alpha prod(-u_k)) and alpha beta is the
    // leading coefficient conj(p)^{2n} of the product.
    let prod_neg: C64 = xr.iter().fold(c(1.0, 0.0), |acc, &u| acc * (-u.conj()));
    let lead = p.conj().powu(2 * n as u32);
    let ratio = lead / prod_neg;
    if ratio.re <= 0.0 || ratio.im.abs() > 1e-8 * ratio.norm() {
        return Err(Error::Degenerate(format!(
            "root selection is incompatible with the real structure (ratio {ratio})"
        )));
    }
    let alpha = C64::from_polar(ratio.re.sqrt(), theta);
    let beta = (alpha * xr.iter().fold(c(1.0, 0.0), |acc, &u| acc * (-u))).conj();
    let x = poly::scale(&poly::from_roots(&xr), alpha);
    let y = poly::scale(&poly::from_roots(&yr), beta);
    Ok(TwistorLine {
        n,
        kind: LineKind::Generic {
            p,
            q,
            selection: selection.clone(),
        },
        x,
        y,
        z: vec![p, c(q, 0.0), -p.conj()],
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImageComponent {
    pub label: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ImageReport {
    pub components: Vec<ImageComponent>,
    /// Hyperplane of `P^{n+1}` realizing the image (when there is one real
    /// hyperplane).
    pub hyperplane: Option<Hyperplane>,
    /// For the central component: the hyperplanes of the two conjugate
    /// halves `Gamma`, `conj Gamma`.
    pub split: Option<(Hyperplane, Hyperplane)>,
    /// `|n - i|` for chain lines.
    pub orbifold_order: usize,
    pub real_hyperplane: bool,
    pub note: String,
}

fn lines_label(range: impl Iterator<Item = usize>) -> Vec<ImageComponent> {
    range
        .flat_map(|j| {
            [
                ImageComponent { label: format!("l{j}"), multiplicity: 1 },
                ImageComponent { label: format!("conj l{j}"), multiplicity: 1 },
            ]
        })
        .collect()
}

/// Symbolic image of a chain line over `lambda` in the `i`-th interval,
/// `i != n`, together with its hyperplane realization.
pub fn image_of_chain_line(cfg: &BranchConfig, i: usize, lambda: f64) -> Result<ImageReport> {
    let n = cfg.n;
    if i > 2 * n {
        return Err(Error::Index(format!("chain index {i} out of range 0..={}", 2 * n)));
    }
    if i == n {
        return Err(Error::Validation(
            "lines through the central component: use central_line_image".into(),
        ));
    }
    let (lo, hi) = interval(cfg, i);
    if !(lambda > lo && lambda < hi) {
        return Err(Error::Validation(format!("lambda = {lambda} is not in the open interval {i}")));
    }
    let (fixed, k): (Vec<usize>, usize) = if i < n {
        ((1..=i).collect(), n - i)
    } else {
        ((i + 1..=2 * n).collect(), i - n)
    };
    let roots: Vec<f64> = fixed.iter().map(|&j| cfg.a(j)).collect();
    let p = poly::mul(&poly::from_roots_real(&roots), &poly::pow_linear_real(lambda, k));
    let mut components = vec![ImageComponent {
        label: format!("f_{lambda}"),
        multiplicity: k,
    }];
    components.extend(lines_label(fixed.iter().copied()));
    let note = if fixed.is_empty() {
        "osculating hyperplane of the rational normal curve".to_string()
    } else {
        format!("conic of multiplicity {k} with {} line pairs", fixed.len())
    };
    Ok(ImageReport {
        components,
        hyperplane: Some(Hyperplane::from_real(&p, n, c(0.0, 0.0))),
        split: None,
        orbifold_order: k,
        real_hyperplane: true,
        note,
    })
}

/// Image of the invariant line `L_i`: the union of line pairs `l_j`,
/// `conj l_j` for `j <= i` if `i <= n`, mirrored otherwise.
pub fn image_of_invariant_line(cfg: &BranchConfig, i: usize) -> Result<ImageReport> {
    let n = cfg.n;
    if i == 0 || i > 2 * n {
        return Err(Error::Index(format!("invariant line index {i} out of range 1..={}", 2 * n)));
    }
    let lambda = cfg.a(i);
    let (fixed, k): (Vec<usize>, usize) = if i <= n {
        ((1..i).collect(), n - i + 1)
    } else {
        ((i + 1..=2 * n).collect(), i - n)
    };
    let roots: Vec<f64> = fixed.iter().map(|&j| cfg.a(j)).collect();
    let p = poly::mul(&poly::from_roots_real(&roots), &poly::pow_linear_real(lambda, k));
    let range: Vec<usize> = if i <= n { (1..=i).collect() } else { (i..=2 * n).collect() };
    Ok(ImageReport {
        components: lines_label(range.into_iter()),
        hyperplane: Some(Hyperplane::from_real(&p, n, c(0.0, 0.0))),
        split: None,
        orbifold_order: 0,
        real_hyperplane: true,
        note: format!("invariant line L{i}"),
    })
}

/// Image of a twistor line through the central component. `param` is the
/// pencil parameter `t` (`None` for infinity); the image splits into two
/// conjugate rational curves whose hyperplanes are the members at `t` and
/// at the conjugate parameter.
pub fn central_line_image(cfg: &BranchConfig, param: Option<C64>) -> ImageReport {
    let n = cfg.n;
    let div = EqualDivision::central(n);
    let sgn = if n % 2 == 0 { 1.0 } else { -1.0 };
    let (h, hb, label) = match param {
        None => {
            let h = pencils::family_member_t(&div, cfg, c(f64::INFINITY, 0.0));
            (h.clone(), h, "Gamma_inf".to_string())
        }
        Some(t) => (
            pencils::family_member_t(&div, cfg, t),
            pencils::family_member_t(&div, cfg, t.conj() * sgn),
            format!("Gamma_{t}"),
        ),
    };
    let d = projective_distance(&h.coeffs(), &hb.coeffs());
    let real = d <= 1e-12;
    let components = if param.map(|t| t.norm() == 0.0).unwrap_or(false) {
        (1..=n)
            .map(|j| ImageComponent { label: format!("l{j}"), multiplicity: 1 })
            .chain((1..=n).map(|j| ImageComponent { label: format!("conj l{j}"), multiplicity: 1 }))
            .collect()
    } else {
        vec![
            ImageComponent { label: label.clone(), multiplicity: 1 },
            ImageComponent { label: format!("conj {label}"), multiplicity: 1 },
        ]
    };
    ImageReport {
        components,
        hyperplane: if real { Some(h.clone()) } else { None },
        split: Some((h, hb)),
        orbifold_order: 0,
        real_hyperplane: real,
        note: if real {
            "parameter on the real locus: both halves lie in one real hyperplane".into()
        } else {
            "halves lie in distinct conjugate hyperplanes".into()
        },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GenericImage {
    pub h3: Hyperplane3,
    /// Smallest over second-smallest singular value of the sample matrix.
    pub singular_ratio: f64,
    /// Worst relative residual of the samples on the minitwistor surface.
    pub surface_residual: f64,
    /// Worst residual of the samples against the fitted hyperplane.
    pub fit_residual: f64,
    pub phase: C64,
    pub h: Hyperplane,
    pub q: CurvePoint,
    pub d_prime: Divisor,
    pub restriction: Divisor,
    pub shape_defect: f64,
    pub q_in_open_quarter: bool,
}

/// Fits the hyperplane of `P^{n+2}` through the image of a generic line,
/// rotates it through the centre and extracts `q` and `D'`.
pub fn image_of_generic_line(
    cfg: &BranchConfig,
    line: &TwistorLine,
    samples: usize,
) -> Result<GenericImage> {
    let n = cfg.n;
    let dim = n + 3;
    let pts = line.image_samples(cfg, samples.max(2 * dim))?;
    let eq = crate::projective::minitwistor_equation(cfg);
    let surface_residual = pts
        .iter()
        .map(|p| crate::projective::minitwistor_residual(&eq, p))
        .fold(0.0, f64::max);
    let rows: Vec<Vec<C64>> = pts
        .iter()
        .map(|p| {
            let s = p.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            p.iter().map(|x| x / s).collect()
        })
        .collect();
    let m = DMatrix::from_fn(rows.len(), dim, |r, k| rows[r][k]);
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.as_ref().ok_or_else(|| Error::Internal("svd failed".into()))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].partial_cmp(&svd.singular_values[b]).unwrap());
    let smin = svd.singular_values[order[0]];
    let snext = svd.singular_values[order[1]];
    let hv: Vec<C64> = (0..dim).map(|k| vt[(order[0], k)].conj()).collect();
    // The decomposition flushes tiny singular values to zero; the residual
    // of the singular vector is the honest size of the smallest one.
    let smin = smin.max(
        rows.iter()
            .map(|r| r.iter().zip(&hv).fold(c(0.0, 0.0), |acc, (a, b)| acc + a * b).norm_sqr())
            .sum::<f64>()
            .sqrt(),
    );
    let singular_ratio = smin / snext.max(f64::MIN_POSITIVE);
    let fit_residual = rows
        .iter()
        .map(|r| r.iter().zip(&hv).fold(c(0.0, 0.0), |acc, (a, b)| acc + a * b).norm())
        .fold(0.0, f64::max);
    if fit_residual > 1e-8 {
        return Err(Error::OffModel { residual: fit_residual });
    }
    let h3 = Hyperplane3::from_coeffs(&hv);
    if h3.beta.norm() == 0.0 || h3.alpha.norm() == 0.0 {
        return Err(Error::Degenerate("fitted hyperplane has no fibre terms".into()));
    }
    let t0 = (h3.alpha / h3.beta).sqrt();
    let t0 = t0 / t0.norm();
    let mut best: Option<GenericImage> = None;
    for t in [t0, -t0] {
        let rot = h3.rotate(t);
        let h = rot.project().normalized();
        let restriction = restrict_hyperplane(&h, cfg)?;
        let (q, d_prime) = split_restriction(cfg, &restriction);
        let Some(q) = q else { continue };
        let qm = cfg.quarter_membership(&q, 1e-9);
        let mut expect = Divisor::new();
        expect.add(q, 1, 1e-12);
        expect.add(cfg.apply_sigma(&q), 1, 1e-12);
        let expect = expect.plus(&d_prime.times(2), 1e-12);
        let img = GenericImage {
            h3: h3.clone(),
            singular_ratio,
            surface_residual,
            fit_residual,
            phase: t,
            shape_defect: restriction.mismatch(&expect),
            q_in_open_quarter: qm.in_quarter && !qm.on_boundary,
            h,
            q,
            d_prime,
            restriction,
        };
        let better = match &best {
            None => true,
            Some(b) => img.q_in_open_quarter && !b.q_in_open_quarter,
        };
        if better {
            best = Some(img);
        }
    }
    best.ok_or_else(|| Error::Degenerate("restriction has no simple point pair".into()))
}

/// Splits a restriction divisor into the simple point over the upper half
/// plane and the half of the even part.
fn split_restriction(cfg: &BranchConfig, d: &Divisor) -> (Option<CurvePoint>, Divisor) {
    let mut q = None;
    let mut half = Divisor::new();
    for (p, m) in &d.points {
        if m % 2 == 1 {
            if let CurvePoint::Finite { z, .. } = p {
                if z.im > 0.0 && q.is_none() {
                    q = Some(*p);
                }
            }
        }
        if m / 2 > 0 {
            half.add(*p, m / 2, 1e-9);
        }
    }
    let _ = cfg;
    (q, half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::make_branch_config;

    #[test]
    fn solve_lambda_examples() {
        let cfg = make_branch_config(&[-3.0, -1.0, 1.0, 3.0]).unwrap();
        assert!((solve_lambda(&cfg, 1, 15.0).unwrap() + 2.0).abs() < 1e-10);
        assert!((solve_lambda(&cfg, 1, 1e12).unwrap() + 3.0).abs() < 1e-3);
        assert!((solve_lambda(&cfg, 1, 1e-12).unwrap() + 1.0).abs() < 1e-3);
        let l = solve_lambda(&cfg, 0, 7.0).unwrap();
        assert!((chain_modulus_sq(&cfg, 0, l) - 7.0).abs() < 1e-9);
        let l = solve_lambda(&cfg, 4, 0.25).unwrap();
        assert!(l > 3.0 && (chain_modulus_sq(&cfg, 4, l) - 0.25).abs() < 1e-10);
    }

    #[test]
    fn chain_line_example() {
        let cfg = make_branch_config(&[-3.0, -1.0, 1.0, 3.0]).unwrap();
        let l = chain_line(&cfg, 1, c(15f64.sqrt(), 0.0)).unwrap();
        assert!((l.x[1] - c(15f64.sqrt(), 0.0)).norm() < 1e-9);
        assert!((l.y[3] + c(15f64.sqrt(), 0.0)).norm() < 1e-9);
        assert!(l.product_defect(&cfg) < 1e-10);
        assert!(l.reality_defect(16) < 1e-10);
    }

    #[test]
    fn generic_line_is_real_and_on_model() {
        let cfg = make_branch_config(&[-3.0, -1.0, 1.0, 3.0]).unwrap();
        let l = generic_line(&cfg, c(0.3, -0.4), 0.7, &RootSelection::NegativeReal, 0.4).unwrap();
        assert!(l.product_defect(&cfg) < 1e-10);
        assert!(l.reality_defect(16) < 1e-10, "{}", l.reality_defect(16));
    }

    #[test]
    fn chain_image_hyperplane_contains_samples() {
        let cfg = make_branch_config(&[-3.0, -1.0, 1.0, 3.0]).unwrap();
        let line = chain_line(&cfg, 1, C64::from_polar(15f64.sqrt(), 0.3)).unwrap();
        let rep = image_of_chain_line(&cfg, 1, -2.0).unwrap();
        let h3 = Hyperplane3::pullback(rep.hyperplane.as_ref().unwrap());
        for p in line.image_samples(&cfg, 12).unwrap() {
            let s = p.iter().map(|x| x.norm()).fold(0.0, f64::max);
            assert!(h3.eval(&p).norm() / s < 1e-12);
        }
        assert_eq!(rep.orbifold_order, 1);
    }
}

//! Singularities of minitwistor lines and the transitions along a circle
//! family as the pencil parameter varies.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::curve::{BranchConfig, CircleId, CurvePoint};
use crate::error::{Error, Result};
use crate::pencils::{self, EqualDivision};
use crate::poly::{self, C64};
use crate::projective::{restrict_hyperplane, Hyperplane};
use crate::roots;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum LocalType {
    NodeReal { circle: Option<CircleId> },
    /// Non-real node; `partner` indexes the record at the conjugate point.
    NodeConjugate { partner: Option<usize> },
    /// Contact of order `2m` with `m >= 2` (a tacnode when `m = 2`).
    Contact { order: usize },
    /// Odd multiplicity at least three.
    CuspFlag { multiplicity: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularityRecord {
    pub point: CurvePoint,
    pub multiplicity: usize,
    pub kind: LocalType,
    pub genus_drop: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub records: Vec<SingularityRecord>,
    pub genus_drop: usize,
    /// Every non-real record has a partner at its conjugate point.
    pub sigma_paired: bool,
}

fn is_sigma_fixed(cfg: &BranchConfig, p: &CurvePoint, tol: f64) -> bool {
    match p {
        CurvePoint::Infinity(_) => cfg.apply_sigma(p) == *p,
        CurvePoint::Finite { z, v } => {
            let scale = 1.0 + z.norm() + v.norm();
            p.distance(&cfg.apply_sigma(p)) <= tol * scale
        }
    }
}

/// Classifies the singular points of the curve cut out by `h`, read off from
/// the multiplicities of its restriction to the spectral curve.
pub fn classify_member(cfg: &BranchConfig, h: &Hyperplane) -> Result<Classification> {
    let div = restrict_hyperplane(h, cfg)?;
    Ok(classify_divisor(cfg, &div.points))
}

pub fn classify_divisor(cfg: &BranchConfig, points: &[(CurvePoint, usize)]) -> Classification {
    let tol = 1e-8;
    let mut records: Vec<SingularityRecord> = Vec::new();
    for &(p, m) in points {
        let (kind, drop) = match m {
            0 | 1 => continue,
            2 if is_sigma_fixed(cfg, &p, tol) => (
                LocalType::NodeReal {
                    circle: cfg.circle_of_point(&p, tol),
                },
                1,
            ),
            2 => (LocalType::NodeConjugate { partner: None }, 1),
            m if m % 2 == 0 => (LocalType::Contact { order: m }, m / 2),
            m => (LocalType::CuspFlag { multiplicity: m }, m / 2),
        };
        records.push(SingularityRecord {
            point: p,
            multiplicity: m,
            kind,
            genus_drop: drop,
        });
    }
    let mut sigma_paired = true;
    for k in 0..records.len() {
        if !matches!(records[k].kind, LocalType::NodeConjugate { .. }) {
            continue;
        }
        let conj = cfg.apply_sigma(&records[k].point);
        let partner = records.iter().position(|r| {
            let scale = 1.0 + r.point.z().map(|z| z.norm()).unwrap_or(0.0);
            r.point.distance(&conj) <= 1e-7 * scale
        });
        if partner.is_none() {
            sigma_paired = false;
        }
        records[k].kind = LocalType::NodeConjugate { partner };
    }
    let genus_drop = records.iter().map(|r| r.genus_drop).sum();
    Classification {
        records,
        genus_drop,
        sigma_paired,
    }
}

/// Sum of local genus drops, compared against the expected value.
pub fn genus_drop_check(cls: &Classification, expected: usize) -> std::result::Result<usize, usize> {
    if cls.genus_drop == expected {
        Ok(cls.genus_drop)
    } else {
        Err(cls.genus_drop)
    }
}

type RPoly = Vec<BigRational>;

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite input")
}

fn rtrim(mut p: RPoly) -> RPoly {
    while p.len() > 1 && p.last().map(|x| x.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

fn rmul(a: &[BigRational], b: &[BigRational]) -> RPoly {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn rfrom_roots(r: &[BigRational]) -> RPoly {
    r.iter().fold(vec![BigRational::one()], |acc, a| {
        rmul(&acc, &[-a.clone(), BigRational::one()])
    })
}

fn rderiv(p: &[BigRational]) -> RPoly {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, x)| x * BigRational::from_integer(BigInt::from(k)))
        .collect()
}

fn rrem(a: &[BigRational], b: &[BigRational]) -> RPoly {
    let b = rtrim(b.to_vec());
    let mut r = rtrim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let k = r.len() - 1 - db;
        let q = &r[r.len() - 1] / &lead;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &q * bj;
        }
        r.pop();
        r = rtrim(r);
        if r.len() <= db {
            break;
        }
    }
    r
}

fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut d = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            d = -d;
        }
        let pv = m[col][col].clone();
        d *= &pv;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pv;
            for k in col..n {
                let t = &f * &m[col][k];
                m[r][k] -= t;
            }
        }
    }
    d
}

/// Discriminant of a polynomial of exact degree `len - 1`.
fn discriminant(p: &[BigRational]) -> BigRational {
    let p = rtrim(p.to_vec());
    let n = p.len() - 1;
    if n < 2 {
        return BigRational::one();
    }
    let dp = rderiv(&p);
    let size = 2 * n - 1;
    let mut syl = vec![vec![BigRational::zero(); size]; size];
    // Rows hold coefficients from the leading one down.
    for r in 0..n - 1 {
        for k in 0..=n {
            syl[r][r + k] = p[n - k].clone();
        }
    }
    for r in 0..n {
        for k in 0..n {
            syl[n - 1 + r][r + k] = dp[n - 1 - k].clone();
        }
    }
    let res = det(syl);
    let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
    res / &p[n] * BigRational::from_integer(BigInt::from(sign))
}

/// Number of distinct real roots by a Sturm sequence.
fn real_root_count(p: &[BigRational]) -> usize {
    let p0 = rtrim(p.to_vec());
    if p0.len() <= 1 {
        return 0;
    }
    let mut seq = vec![p0.clone(), rtrim(rderiv(&p0))];
    loop {
        let a = &seq[seq.len() - 2];
        let b = &seq[seq.len() - 1];
        if b.len() == 1 {
            break;
        }
        let r = rrem(a, b);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
        seq.push(r.into_iter().map(|x| -x).collect());
    }
    let changes = |neg: bool| {
        let signs: Vec<i32> = seq
            .iter()
            .map(|q| {
                let lead = q.last().unwrap();
                let mut s = if lead.is_positive() { 1 } else if lead.is_negative() { -1 } else { 0 };
                if neg && (q.len() - 1) % 2 == 1 {
                    s = -s;
                }
                s
            })
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    changes(true).saturating_sub(changes(false))
}

/// Exact `A - t^2 B` for the pencil parameter `s` (so `t^2 = s^2` for even
/// `n` and `-s^2` for odd `n`).
struct ExactPencil {
    a: RPoly,
    b: RPoly,
    odd: bool,
}

impl ExactPencil {
    fn new(cfg: &BranchConfig, div: &EqualDivision) -> Self {
        let ra: Vec<BigRational> = div.i_set.iter().map(|&k| rat(cfg.a(k))).collect();
        let rb: Vec<BigRational> = div.j_set.iter().map(|&k| rat(cfg.a(k))).collect();
        ExactPencil {
            a: rfrom_roots(&ra),
            b: rfrom_roots(&rb),
            odd: cfg.n % 2 == 1,
        }
    }

    fn g(&self, s: &BigRational) -> RPoly {
        let mut t2 = s * s;
        if self.odd {
            t2 = -t2;
        }
        self.a.iter().zip(&self.b).map(|(x, y)| x - &t2 * y).collect()
    }

    /// Discriminant of the binary form of degree `n`; continuous through
    /// parameters where the leading coefficient vanishes.
    fn disc(&self, s: f64) -> BigRational {
        let g = self.g(&rat(s));
        let n = g.len() - 1;
        if !g[n].is_zero() {
            return discriminant(&g);
        }
        let t = rtrim(g);
        if t.len() < n {
            return BigRational::zero();
        }
        let lead = t.last().unwrap().clone();
        discriminant(&t) * &lead * &lead
    }

    fn sign(&self, s: f64) -> i32 {
        let d = self.disc(s);
        if d.is_positive() {
            1
        } else if d.is_negative() {
            -1
        } else {
            0
        }
    }

    /// Number of non-real roots of `A - t^2 B` (a root at infinity counts
    /// as real).
    fn complex_roots(&self, s: f64) -> usize {
        let g = rtrim(self.g(&rat(s)));
        let deg = g.len() - 1;
        deg - real_root_count(&g).min(deg)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Critical {
    pub s: f64,
    pub bracket: (f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Regime {
    pub from: f64,
    pub to: f64,
    pub label: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransitionTrace {
    pub division: EqualDivision,
    pub grid: Vec<f64>,
    pub disc_signs: Vec<i32>,
    pub criticals: Vec<Critical>,
    pub regimes: Vec<Regime>,
    pub endpoints_all_real: bool,
    /// Labels at every grid point agree with the regime containing it.
    pub consistent: bool,
}

fn regime_label(complex: usize) -> &'static str {
    if complex == 0 {
        "real"
    } else {
        "conjugate"
    }
}

/// Locates the parameters `s > 0` where `A - t^2 B` acquires a double root,
/// by sign changes of its exact discriminant on `grid` and bisection.
pub fn trace_transitions(
    cfg: &BranchConfig,
    div: &EqualDivision,
    grid: &[f64],
) -> Result<TransitionTrace> {
    if grid.len() < 2 || grid.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
        return Err(Error::Validation("grid needs at least two positive finite values".into()));
    }
    if div.i_set.len() != cfg.n {
        return Err(Error::Validation("division does not match the configuration".into()));
    }
    let mut grid = grid.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    let ex = ExactPencil::new(cfg, div);
    let signs: Vec<i32> = grid.iter().map(|&s| ex.sign(s)).collect();
    if signs.iter().all(|&s| s == 0) {
        return Err(Error::Degenerate("discriminant vanishes on the whole grid".into()));
    }
    let mut criticals = Vec::new();
    let mut k = 0;
    while k + 1 < grid.len() {
        let (mut lo, mut hi) = (grid[k], grid[k + 1]);
        let (sl, sh) = (signs[k], signs[k + 1]);
        if sl == 0 {
            criticals.push(Critical { s: lo, bracket: (lo, lo) });
        } else if sh != 0 && sl != sh {
            let bracket = (lo, hi);
            while hi - lo > 1e-14 * hi {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let sm = ex.sign(mid);
                if sm == 0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if sm == sl {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            criticals.push(Critical { s: 0.5 * (lo + hi), bracket });
        }
        k += 1;
    }
    if let Some(&0) = signs.last() {
        let s = *grid.last().unwrap();
        criticals.push(Critical { s, bracket: (s, s) });
    }
    let mut cuts = vec![grid[0]];
    cuts.extend(criticals.iter().map(|c| c.s));
    cuts.push(*grid.last().unwrap());
    let mut regimes = Vec::new();
    for w in cuts.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let mid = (w[0] * w[1]).sqrt();
        regimes.push(Regime {
            from: w[0],
            to: w[1],
            label: regime_label(ex.complex_roots(mid)).to_string(),
        });
    }
    let mut consistent = true;
    for (&s, &sg) in grid.iter().zip(&signs) {
        if sg == 0 || criticals.iter().any(|c| (c.s - s).abs() <= 1e-12 * s) {
            continue;
        }
        let label = regime_label(ex.complex_roots(s));
        if let Some(r) = regimes.iter().find(|r| s >= r.from && s <= r.to) {
            consistent &= r.label == label;
        }
    }
    let endpoints_all_real = ex.complex_roots(grid[0]) == 0
        && ex.complex_roots(*grid.last().unwrap()) == 0;
    Ok(TransitionTrace {
        division: div.clone(),
        grid,
        disc_signs: signs,
        criticals,
        regimes,
        endpoints_all_real,
        consistent,
    })
}

/// Geometric grid on `[lo, hi]` with `count` points.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let count = count.max(2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Roots in `z` of `A - t^2 B` at the pencil parameter `s`: the tangency
/// locations of the family member.
pub fn tangency_roots(cfg: &BranchConfig, div: &EqualDivision, s: f64) -> Vec<C64> {
    let t = pencils::pencil_t(cfg.n, s);
    let a = poly::to_complex(&div.a_poly(cfg));
    let b = poly::to_complex(&div.b_poly(cfg));
    let g = poly::sub(&a, &poly::scale(&b, t * t));
    let g: Vec<f64> = poly::real_parts(&g);
    roots::real_poly_roots(&g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::make_branch_config;
    use crate::poly::c;

    #[test]
    fn exact_discriminant_of_quadratic() {
        let p: RPoly = [2.0, -3.0, 1.0].iter().map(|&x| rat(x)).collect();
        assert_eq!(discriminant(&p), rat(1.0));
        let q: RPoly = [1.0, 0.0, 1.0].iter().map(|&x| rat(x)).collect();
        assert_eq!(discriminant(&q), rat(-4.0));
        let cubic = rfrom_roots(&[rat(0.0), rat(1.0), rat(3.0)]);
        // prod (ri - rj)^2 = 1 * 9 * 4
        assert_eq!(discriminant(&cubic), rat(36.0));
        assert_eq!(real_root_count(&cubic), 3);
        assert_eq!(real_root_count(&q), 0);
    }

    #[test]
    fn genus_two_trace() {
        let cfg = make_branch_config(&[-5.0, -3.0, -1.0, 1.0, 3.0, 5.0]).unwrap();
        let div = EqualDivision::central(3);
        let tr = trace_transitions(&cfg, &div, &geometric_grid(1e-3, 1e3, 121)).unwrap();
        assert_eq!(tr.criticals.len(), 2);
        let (u1, u2) = (tr.criticals[0].s, tr.criticals[1].s);
        assert!(u1 < 1.0 && 1.0 < u2 && (u1 * u2 - 1.0).abs() < 1e-8);
        let labels: Vec<&str> = tr.regimes.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, ["real", "conjugate", "real"]);
        assert!(tr.endpoints_all_real && tr.consistent);
        let mut r = tangency_roots(&cfg, &div, 1.0);
        r.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        let w = 23f64.sqrt();
        assert!((r[0] - c(0.0, -w)).norm() < 1e-9 && r[1].norm() < 1e-9 && (r[2] - c(0.0, w)).norm() < 1e-9);
    }

    #[test]
    fn left_member_has_real_nodes() {
        let cfg = make_branch_config(&[-3.0, -1.0, 1.0, 3.0]).unwrap();
        let div = EqualDivision::central(2);
        let h = pencils::family_member(&div, &cfg, 0.0);
        let cls = classify_member(&cfg, &h).unwrap();
        assert_eq!(cls.records.len(), 2);
        assert!(cls.records.iter().all(|r| matches!(r.kind, LocalType::NodeReal { .. })));
        assert_eq!(cls.genus_drop, 2);
    }
}

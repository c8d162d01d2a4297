use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use minitwistor::classifier;
use minitwistor::config::RunConfig;
use minitwistor::curve::{BranchConfig, CurvePoint, Flavor};
use minitwistor::family::{FamilySolver, SolverOptions};
use minitwistor::jacobian::Jacobian;
use minitwistor::pencils::{self, EqualDivision};
use minitwistor::poly::{c, C64};
use minitwistor::projective::Hyperplane3;
use minitwistor::report::Check;
use minitwistor::twistor::{self, ImageComponent, ImageReport};
use minitwistor::verify;
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{self, pair, ClassificationRecord, DivisorEntry, HyperplaneRecord, Pair, PointRecord};
use crate::GlobalOpts;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Numerical(minitwistor::Error),
    #[error("internal: {0}")]
    Internal(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Numerical(_) | CliError::Internal(_) => 1,
        }
    }
}

impl From<minitwistor::Error> for CliError {
    fn from(e: minitwistor::Error) -> Self {
        match e {
            minitwistor::Error::Validation(_) | minitwistor::Error::Index(_) => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

pub fn load_config(g: &GlobalOpts) -> Result<RunConfig, CliError> {
    let mut rc = match &g.config {
        None => RunConfig::default(),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
    };
    if let Some(s) = g.seed {
        rc.seed = s;
    }
    let t = &mut rc.tolerances;
    for (slot, v) in [
        (&mut t.root, g.tol_root),
        (&mut t.newton, g.tol_newton),
        (&mut t.abel, g.tol_abel),
        (&mut t.quadrature, g.tol_quadrature),
    ] {
        if let Some(v) = v {
            *slot = v;
        }
    }
    rc.validate()?;
    Ok(rc)
}

fn target(g: &GlobalOpts, fallback: &Option<String>) -> Option<PathBuf> {
    g.out.clone().or_else(|| fallback.as_ref().map(PathBuf::from))
}

#[derive(Serialize)]
struct SuiteRecord<'a> {
    name: &'a str,
    passed: bool,
    checks: &'a [Check],
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    n: usize,
    branch_points: &'a [f64],
    seed: u64,
    passed: bool,
    suites: Vec<SuiteRecord<'a>>,
}

pub fn verify(rc: &RunConfig, g: &GlobalOpts) -> Result<bool, CliError> {
    let suites = verify::run_suites(rc)?;
    let passed = suites.iter().all(|s| s.passed());
    for s in &suites {
        let failed = s.checks.iter().filter(|c| !c.passed).count();
        eprintln!("{:<11} {:>3} checks, {failed} failed, {:.2} s", s.name, s.checks.len(), s.seconds);
        for c in s.checks.iter().filter(|c| !c.passed) {
            eprintln!("    FAILED {}: {}", c.name, c.detail);
        }
    }
    let report = VerifyReport {
        n: rc.branch_points.len() / 2,
        branch_points: &rc.branch_points,
        seed: rc.seed,
        passed,
        suites: suites
            .iter()
            .map(|s| SuiteRecord {
                name: &s.name,
                passed: s.passed(),
                checks: &s.checks,
            })
            .collect(),
    };
    output::emit(target(g, &rc.outputs.report).as_deref(), &output::json(&report)?)?;
    Ok(passed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Region {
    All,
    Boundary,
    Interior,
}

#[derive(Clone, Copy, Debug)]
enum GridPoint {
    Boundary(f64),
    Interior(C64),
}

#[derive(Serialize)]
struct MemberRecord {
    region: &'static str,
    /// Boundary parameter; `null` for interior points and the point at infinity.
    lambda: Option<f64>,
    q: Option<PointRecord>,
    h: Option<HyperplaneRecord>,
    d_prime: Vec<DivisorEntry>,
    classification: Option<ClassificationRecord>,
    abel_residual: Option<f64>,
    doubling_residual: Option<f64>,
    error: Option<String>,
}

#[derive(Serialize)]
struct FamilyReport<'a> {
    n: usize,
    branch_points: &'a [f64],
    grid: usize,
    failures: usize,
    max_abel_residual: f64,
    max_doubling_residual: f64,
    members: Vec<MemberRecord>,
}

fn family_grid(cfg: &BranchConfig, k: usize, region: Region) -> Vec<GridPoint> {
    let n = cfg.n;
    let mut pts = Vec::new();
    if region != Region::Interior {
        for i in 1..2 * n {
            let (a, b) = (cfg.a(i), cfg.a(i + 1));
            for j in 0..k {
                pts.push(GridPoint::Boundary(a + (b - a) * (j as f64 + 0.5) / k as f64));
            }
        }
        // The unbounded arc, parametrised through infinity.
        let c0 = 0.5 * (cfg.a(1) + cfg.a(2 * n));
        let half = 0.5 * (cfg.a(2 * n) - cfg.a(1));
        for j in 0..k {
            let x = (std::f64::consts::PI * (j as f64 + 0.5) / k as f64).cos();
            if x.abs() > 1e-12 {
                pts.push(GridPoint::Boundary(c0 + half / x));
            }
        }
        pts.push(GridPoint::Boundary(f64::INFINITY));
    }
    if region != Region::Boundary {
        let lo = cfg.a(1) - 1.0;
        let hi = cfg.a(2 * n) + 1.0;
        let top = 0.5 * (hi - lo);
        for r in 0..k {
            for s in 0..k {
                let x = lo + (hi - lo) * (s as f64 + 0.5) / k as f64;
                let y = 0.15 * top + 0.85 * top * (r as f64 + 0.5) / k as f64;
                pts.push(GridPoint::Interior(c(x, y)));
            }
        }
    }
    pts
}

fn solve_point(solver: &FamilySolver, jac: Option<&Jacobian>, gp: GridPoint) -> MemberRecord {
    let cfg = &solver.cfg;
    let (region, lambda, res) = match gp {
        GridPoint::Boundary(l) => (
            "boundary",
            l.is_finite().then_some(l),
            Ok(solver.boundary_member(l)),
        ),
        GridPoint::Interior(z) => ("interior", None, solver.continue_to(z, None)),
    };
    let m = match res {
        Ok(m) => m,
        Err(e) => {
            return MemberRecord {
                region,
                lambda,
                q: None,
                h: None,
                d_prime: Vec::new(),
                classification: None,
                abel_residual: None,
                doubling_residual: None,
                error: Some(e.to_string()),
            }
        }
    };
    let mut error = None;
    let classification = match classifier::classify_member(cfg, &m.h) {
        Ok(c) => Some((&c).into()),
        Err(e) => {
            error = Some(e.to_string());
            None
        }
    };
    let abel = jac.map(|j| verify::abel_residual(j, cfg, &m.h));
    let abel_residual = match abel {
        Some(Ok(r)) => Some(r),
        Some(Err(e)) => {
            error = Some(e.to_string());
            None
        }
        None => None,
    };
    let doubling_residual = match (jac, region, cfg.n > 1) {
        (Some(j), "interior", true) => match verify::doubling_residual(j, &m) {
            Ok(r) => Some(r),
            Err(e) => {
                error = Some(e.to_string());
                None
            }
        },
        _ => None,
    };
    MemberRecord {
        region,
        lambda,
        q: Some((&m.q).into()),
        h: Some((&m.h).into()),
        d_prime: output::divisor(&m.d_prime),
        classification,
        abel_residual,
        doubling_residual,
        error,
    }
}

pub fn family(rc: &RunConfig, g: &GlobalOpts, grid: Option<usize>, region: Region) -> Result<bool, CliError> {
    let cfg = rc.branch_config()?;
    let k = grid.unwrap_or(rc.densities.grid);
    if k < 1 {
        return Err(CliError::Usage("--grid must be at least 1".into()));
    }
    let solver = FamilySolver::new(
        &cfg,
        SolverOptions {
            newton_tol: rc.tolerances.newton,
            ..SolverOptions::default()
        },
    );
    let jac = Jacobian::new(&cfg, verify::jac_options(rc))?;
    let pts = family_grid(&cfg, k, region);
    let members: Vec<MemberRecord> = pts
        .par_iter()
        .map(|&gp| solve_point(&solver, Some(&jac), gp))
        .collect();
    let failures = members.iter().filter(|m| m.error.is_some()).count();
    let max_of = |f: fn(&MemberRecord) -> Option<f64>| members.iter().filter_map(f).fold(0.0, f64::max);
    let max_abel = max_of(|m| m.abel_residual);
    let max_dbl = max_of(|m| m.doubling_residual);
    eprintln!(
        "{} members, {failures} failures, max Abel residual {max_abel:.3e}, max doubling residual {max_dbl:.3e}",
        members.len()
    );
    let tol = rc.tolerances.abel;
    let passed = failures == 0 && max_abel <= tol && max_dbl <= tol;
    let report = FamilyReport {
        n: cfg.n,
        branch_points: &cfg.branch_points,
        grid: k,
        failures,
        max_abel_residual: max_abel,
        max_doubling_residual: max_dbl,
        members,
    };
    output::emit(target(g, &rc.outputs.family).as_deref(), &output::json(&report)?)?;
    Ok(passed)
}

/// One CSV row of a discriminant trace. Grid rows carry a sign and a regime
/// label; critical rows carry the bracket the bisection started from.
#[derive(Serialize)]
struct TraceRow {
    kind: &'static str,
    s: f64,
    disc_sign: Option<i32>,
    regime: Option<String>,
    bracket_lo: Option<f64>,
    bracket_hi: Option<f64>,
}

pub fn trace(
    rc: &RunConfig,
    g: &GlobalOpts,
    division: Option<Vec<usize>>,
    grid: Option<usize>,
) -> Result<bool, CliError> {
    let cfg = rc.branch_config()?;
    let n = cfg.n;
    let div = match division {
        None => EqualDivision::central(n),
        Some(idx) => EqualDivision::new(n, &idx).ok_or_else(|| {
            CliError::Usage(format!("--division needs {n} distinct indices in 1..={}", 2 * n))
        })?,
    };
    let count = grid.unwrap_or(rc.densities.trace_grid);
    if count < 2 {
        return Err(CliError::Usage("--grid must be at least 2".into()));
    }
    let tr = classifier::trace_transitions(&cfg, &div, &classifier::geometric_grid(1e-3, 1e3, count))?;
    let mut rows = Vec::new();
    for (&s, &sg) in tr.grid.iter().zip(&tr.disc_signs) {
        let regime = tr
            .regimes
            .iter()
            .find(|r| s >= r.from && s <= r.to)
            .map(|r| r.label.clone());
        rows.push(TraceRow {
            kind: "grid",
            s,
            disc_sign: Some(sg),
            regime,
            bracket_lo: None,
            bracket_hi: None,
        });
    }
    for cr in &tr.criticals {
        rows.push(TraceRow {
            kind: "critical",
            s: cr.s,
            disc_sign: None,
            regime: None,
            bracket_lo: Some(cr.bracket.0),
            bracket_hi: Some(cr.bracket.1),
        });
    }
    eprintln!(
        "division {:?}: {} criticals {:?}, regimes {}",
        div.i_set,
        tr.criticals.len(),
        tr.criticals.iter().map(|c| c.s).collect::<Vec<_>>(),
        verify::regime_summary(&tr)
    );
    output::emit(target(g, &rc.outputs.trace).as_deref(), &output::csv_bytes(&rows)?)?;
    Ok(tr.consistent)
}

pub struct ImageSelect {
    pub index: usize,
    pub invariant: bool,
    pub lambda: Option<f64>,
    pub modulus: Option<f64>,
    pub param: Option<String>,
}

#[derive(Serialize)]
struct ImageRecord {
    index: usize,
    line: &'static str,
    lambda: Option<f64>,
    modulus: Option<f64>,
    /// Pencil parameter of a central line; `null` means infinity.
    param: Option<f64>,
    components: Vec<ImageComponent>,
    hyperplane: Option<HyperplaneRecord>,
    split: Option<[HyperplaneRecord; 2]>,
    orbifold_order: usize,
    real_hyperplane: bool,
    note: String,
    /// Worst residual of sampled line points against the hyperplane.
    sample_residual: Option<f64>,
}

fn record(index: usize, line: &'static str, rep: &ImageReport) -> ImageRecord {
    ImageRecord {
        index,
        line,
        lambda: None,
        modulus: None,
        param: None,
        components: rep.components.clone(),
        hyperplane: rep.hyperplane.as_ref().map(Into::into),
        split: rep.split.as_ref().map(|(a, b)| [a.into(), b.into()]),
        orbifold_order: rep.orbifold_order,
        real_hyperplane: rep.real_hyperplane,
        note: rep.note.clone(),
        sample_residual: None,
    }
}

fn default_lambda(cfg: &BranchConfig, i: usize) -> f64 {
    let (lo, hi) = twistor::interval(cfg, i);
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (false, _) => hi - 1.0,
        (_, false) => lo + 1.0,
    }
}

pub fn twistor_image(rc: &RunConfig, g: &GlobalOpts, sel: &ImageSelect) -> Result<bool, CliError> {
    let cfg = rc.branch_config()?;
    let n = cfg.n;
    let i = sel.index;
    if i > 2 * n {
        return Err(CliError::Usage(format!("--index must be in 0..={}", 2 * n)));
    }
    let mut passed = true;
    let rec = if sel.invariant {
        record(i, "invariant", &twistor::image_of_invariant_line(&cfg, i)?)
    } else if i == n {
        if sel.lambda.is_some() || sel.modulus.is_some() {
            return Err(CliError::Usage("the central component takes --param, not --lambda".into()));
        }
        let s = match sel.param.as_deref() {
            None => Some(1.0),
            Some("inf") | Some("infinity") => None,
            Some(text) => Some(
                text.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| CliError::Usage(format!("--param: not a number: {text}")))?,
            ),
        };
        let rep = twistor::central_line_image(&cfg, s.map(|s| pencils::pencil_t(n, s)));
        let mut r = record(i, "central", &rep);
        r.param = s;
        r
    } else {
        if sel.param.is_some() {
            return Err(CliError::Usage("--param applies to the central component only".into()));
        }
        let lambda = match (sel.lambda, sel.modulus) {
            (Some(l), _) => l,
            (None, Some(m)) if m > 0.0 && m.is_finite() => twistor::solve_lambda(&cfg, i, m)?,
            (None, Some(m)) => return Err(CliError::Usage(format!("--modulus must be positive, got {m}"))),
            (None, None) => default_lambda(&cfg, i),
        };
        let rep = twistor::image_of_chain_line(&cfg, i, lambda)?;
        let m2 = twistor::chain_modulus_sq(&cfg, i, lambda);
        let line = twistor::chain_line(&cfg, i, c(m2.sqrt(), 0.0))?;
        let h3 = Hyperplane3::pullback(rep.hyperplane.as_ref().expect("chain images are hyperplane sections"));
        let worst = line
            .image_samples(&cfg, 32)?
            .iter()
            .map(|p| h3.eval(p).norm() / p.iter().map(|x| x.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        passed = worst <= 1e-9;
        let mut r = record(i, "chain", &rep);
        r.lambda = Some(lambda);
        r.modulus = Some(m2);
        r.sample_residual = Some(worst);
        r
    };
    output::emit(g.out.as_deref(), &output::json(&rec)?)?;
    Ok(passed)
}

#[derive(Serialize)]
struct JacobianReport {
    g: usize,
    kappa: Pair,
    a_cycles: Vec<Vec<Pair>>,
    b_cycles: Vec<Vec<Pair>>,
    symmetry_defect: f64,
    min_imag_eigenvalue: f64,
    /// Images of the ramification points `r_1 .. r_2n`, reduced mod the lattice.
    ramification_images: Vec<Vec<Pair>>,
    passed: bool,
    checks: Vec<Check>,
}

fn pairs(v: &[C64]) -> Vec<Pair> {
    v.iter().map(|&x| pair(x)).collect()
}

pub fn jacobian(rc: &RunConfig, g: &GlobalOpts) -> Result<bool, CliError> {
    let cfg = rc.branch_config()?;
    let jac = Jacobian::new(&cfg, verify::jac_options(rc))?;
    let lat = &jac.lattice;
    let rr = lat.riemann_relations();
    let mut ram = Vec::new();
    for i in 1..=2 * cfg.n {
        let a = jac.abel_point(&cfg.ramification_point(i))?;
        ram.push(pairs(&lat.reduce(&a)));
    }
    let checks = verify::jacobian_suite(&cfg, &jac, rc);
    let passed = checks.iter().all(|c| c.passed);
    for c in checks.iter().filter(|c| !c.passed) {
        eprintln!("FAILED {}: {}", c.name, c.detail);
    }
    let report = JacobianReport {
        g: lat.g,
        kappa: pair(lat.kappa),
        a_cycles: lat.a_cycles.iter().map(|v| pairs(v)).collect(),
        b_cycles: lat.b_cycles.iter().map(|v| pairs(v)).collect(),
        symmetry_defect: rr.symmetry_defect,
        min_imag_eigenvalue: rr.min_imag_eigenvalue,
        ramification_images: ram,
        passed,
        checks,
    };
    output::emit(g.out.as_deref(), &output::json(&report)?)?;
    Ok(passed)
}

#[derive(Serialize)]
struct CircleRow {
    circle: usize,
    flavor: &'static str,
    theta: f64,
    z_re: f64,
    z_im: f64,
    v_re: f64,
    v_im: f64,
    /// Pencil parameter of the central family through the sample; empty at
    /// the poles of the quotient.
    s_re: Option<f64>,
    s_im: Option<f64>,
}

#[derive(Serialize)]
struct BoundaryRow {
    step: usize,
    infinity: bool,
    z_re: Option<f64>,
    z_im: Option<f64>,
    v_re: Option<f64>,
    v_im: Option<f64>,
}

pub fn plot_data(rc: &RunConfig, g: &GlobalOpts, grid: Option<usize>) -> Result<bool, CliError> {
    let cfg = rc.branch_config()?;
    let dir = target(g, &rc.outputs.plot_dir)
        .ok_or_else(|| CliError::Usage("plot-data needs --out <dir> or outputs.plot_dir".into()))?;
    let samples = grid.unwrap_or(rc.densities.circle_samples);
    if samples < 2 {
        return Err(CliError::Usage("--grid must be at least 2".into()));
    }
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let n = cfg.n;
    let div = EqualDivision::central(n);
    let mut circles = Vec::new();
    for i in 0..2 * n {
        let flavor = match cfg.classify_circle(i).flavor {
            Flavor::Real => "real",
            Flavor::PureImaginary => "imaginary",
        };
        for k in 0..samples {
            let theta = std::f64::consts::TAU * (k as f64 + 0.37) / samples as f64;
            let p = cfg.circle_point(i, theta);
            let (z, v) = match p {
                CurvePoint::Finite { z, v } => (z, v),
                CurvePoint::Infinity(_) => continue,
            };
            let s = pencils::psi_evaluate(&div, &cfg, &p).map(|t| pencils::pencil_s(n, t));
            circles.push(CircleRow {
                circle: i,
                flavor,
                theta,
                z_re: z.re,
                z_im: z.im,
                v_re: v.re,
                v_im: v.im,
                s_re: s.map(|x| x.re),
                s_im: s.map(|x| x.im),
            });
        }
    }
    let solver = FamilySolver::new(&cfg, SolverOptions::default());
    let per_arc = (samples / (2 * n)).max(2);
    let boundary: Vec<BoundaryRow> = solver
        .boundary_trace(per_arc)
        .iter()
        .enumerate()
        .map(|(step, p)| {
            let (z, v) = (p.z(), p.v());
            BoundaryRow {
                step,
                infinity: p.is_infinite(),
                z_re: z.map(|x| x.re),
                z_im: z.map(|x| x.im),
                v_re: v.map(|x| x.re),
                v_im: v.map(|x| x.im),
            }
        })
        .collect();
    for (name, bytes) in [
        ("circles.csv", output::csv_bytes(&circles)?),
        ("boundary.csv", output::csv_bytes(&boundary)?),
    ] {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
    }
    eprintln!("wrote {} circle samples and {} boundary points to {}", circles.len(), boundary.len(), dir.display());
    Ok(true)
}

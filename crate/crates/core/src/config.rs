//! Run configuration shared by the command-line front end and the
//! verification suites.

use serde::{Deserialize, Serialize};

use crate::curve::{make_branch_config, BranchConfig, QuarterSeed};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Cluster radius for multiple roots.
    pub root: f64,
    /// Residual target of the interior Newton solver.
    pub newton: f64,
    /// Acceptance bound for Abel-Jacobi residuals modulo the lattice.
    pub abel: f64,
    /// Increment tolerance of the period quadrature.
    pub quadrature: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            root: 1e-6,
            newton: 1e-13,
            abel: 1e-7,
            quadrature: 1e-12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Densities {
    /// Points per side of the grid over the quarter.
    pub grid: usize,
    /// Samples per circle.
    pub circle_samples: usize,
    /// Random points for the pointwise curve and projective checks.
    pub random_points: usize,
    /// Interior family members used by the Abel and doubling checks.
    pub members: usize,
    /// Grid size of transition traces.
    pub trace_grid: usize,
    /// Phases per slice in the injectivity check.
    pub phases: usize,
}

impl Default for Densities {
    fn default() -> Self {
        Densities {
            grid: 6,
            circle_samples: 256,
            random_points: 2000,
            members: 8,
            trace_grid: 121,
            phases: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    pub report: Option<String>,
    pub family: Option<String>,
    pub trace: Option<String>,
    pub plot_dir: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Optional; must equal half the number of branch points when given.
    #[serde(default)]
    pub n: Option<usize>,
    pub branch_points: Vec<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Seed of the random generator used by randomized checks.
    #[serde(default)]
    pub seed: u64,
    /// Which lift over the upper half plane is the quarter region.
    #[serde(default)]
    pub quarter: QuarterSeed,
    #[serde(default)]
    pub densities: Densities,
    #[serde(default)]
    pub outputs: Outputs,
    /// Overrides the expanded coefficients of `f` (ascending). Only useful
    /// for fault injection: the curve checks must then fail.
    #[serde(default)]
    pub f_coeffs: Option<Vec<f64>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: Some(2),
            branch_points: vec![-3.0, -1.0, 1.0, 3.0],
            tolerances: Tolerances::default(),
            seed: 20240611,
            quarter: QuarterSeed::Plus,
            densities: Densities::default(),
            outputs: Outputs::default(),
            f_coeffs: None,
        }
    }
}

impl RunConfig {
    pub fn for_points(points: &[f64]) -> Self {
        RunConfig {
            n: Some(points.len() / 2),
            branch_points: points.to_vec(),
            ..RunConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        for (name, v) in [
            ("root", t.root),
            ("newton", t.newton),
            ("abel", t.abel),
            ("quadrature", t.quadrature),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Validation(format!("tolerance {name} must be positive, got {v}")));
            }
        }
        let d = &self.densities;
        for (name, v) in [
            ("grid", d.grid),
            ("circle_samples", d.circle_samples),
            ("random_points", d.random_points),
            ("members", d.members),
            ("trace_grid", d.trace_grid),
            ("phases", d.phases),
        ] {
            if v < 2 {
                return Err(Error::Validation(format!("density {name} must be at least 2, got {v}")));
            }
        }
        let cfg = make_branch_config(&self.branch_points)?;
        if let Some(n) = self.n {
            if n != cfg.n {
                return Err(Error::Validation(format!(
                    "n = {n} but {} branch points were given",
                    self.branch_points.len()
                )));
            }
        }
        if let Some(f) = &self.f_coeffs {
            if f.len() != 2 * cfg.n + 1 {
                return Err(Error::Validation(format!(
                    "f_coeffs needs {} entries, got {}",
                    2 * cfg.n + 1,
                    f.len()
                )));
            }
        }
        Ok(())
    }

    pub fn branch_config(&self) -> Result<BranchConfig> {
        self.validate()?;
        let mut cfg = make_branch_config(&self.branch_points)?.with_seed(self.quarter);
        if let Some(f) = &self.f_coeffs {
            cfg.f_coeffs = f.clone();
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_values() {
        let mut rc = RunConfig::default();
        rc.tolerances.abel = 0.0;
        assert!(rc.validate().is_err());
        let mut rc = RunConfig::default();
        rc.densities.grid = 1;
        assert!(rc.validate().is_err());
        let mut rc = RunConfig::default();
        rc.n = Some(3);
        assert!(rc.validate().is_err());
        assert!(RunConfig::default().branch_config().is_ok());
    }
}

use serde::Serialize;

/// Outcome of one named numerical check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    /// Passes when `value <= bound`; NaN always fails.
    pub fn bound(name: impl Into<String>, value: f64, bound: f64) -> Self {
        let ok = value <= bound;
        Check::new(name, ok, format!("value {value:.3e}, bound {bound:.1e}"))
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

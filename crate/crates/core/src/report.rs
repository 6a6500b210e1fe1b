use serde::{Deserialize, Serialize};

/// One verified quantity: what was expected, what was measured, and the
/// tolerance applied (0 for exact integer checks).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub expected: f64,
    pub observed: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn exact(name: impl Into<String>, expected: usize, observed: usize) -> Self {
        Self {
            name: name.into(),
            expected: expected as f64,
            observed: observed as f64,
            tolerance: 0.0,
            pass: expected == observed,
        }
    }

    /// Passes when `observed ≤ bound`.
    pub fn at_most(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self { name: name.into(), expected: 0.0, observed, tolerance: bound, pass: observed <= bound }
    }

    /// Passes when `observed ≥ bound`.
    pub fn at_least(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self { name: name.into(), expected: bound, observed, tolerance: 0.0, pass: observed >= bound }
    }

    pub fn close(name: impl Into<String>, expected: f64, observed: f64, tolerance: f64) -> Self {
        let pass = (expected - observed).abs() <= tolerance;
        Self { name: name.into(), expected, observed, tolerance, pass }
    }
}

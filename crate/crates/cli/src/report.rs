use serde::{Deserialize, Serialize};
use serde_json::Value;

use crstokes::report::CheckRecord;

pub const SCHEMA: &str = "crstokes-report/1";

/// Machine-readable outcome of one invocation. The process exits with 0
/// exactly when `pass` holds, and `pass` is the conjunction of `checks`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: Vec<String>,
    pub seed: Option<u64>,
    pub wall_time_s: f64,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
    /// Per-item results (one per patch, trial or refinement level).
    pub records: Vec<Value>,
}

impl Report {
    pub fn new(command: Vec<String>, seed: Option<u64>, checks: Vec<CheckRecord>, records: Vec<Value>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self { schema: SCHEMA.to_string(), command, seed, wall_time_s: 0.0, pass, checks, records }
    }
}

//! JSON report types shared by the subcommands.

use std::collections::BTreeMap;

use serde::Serialize;

/// How a measured quantity is compared with its tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    /// `measured < tolerance`
    Below,
    /// `measured ≤ tolerance`, used for counts.
    AtMost,
    /// `measured > tolerance`
    Above,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub paper_ref: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        reference: &str,
        measured: f64,
        tolerance: f64,
        bound: Bound,
    ) -> Self {
        let pass = match bound {
            Bound::Below => measured < tolerance,
            Bound::AtMost => measured <= tolerance,
            Bound::Above => measured > tolerance,
        };
        Check {
            name: name.into(),
            paper_ref: reference.to_string(),
            measured,
            tolerance,
            pass,
        }
    }
}

/// Everything that determines a run, echoed into the report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub c: Option<f64>,
    pub kappa: Option<i32>,
    pub seed: u64,
    pub samples: Option<usize>,
    pub threads: Option<usize>,
    pub tolerances: BTreeMap<String, f64>,
}

impl RunConfig {
    pub fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: RunConfig,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn new(suite: &str, config: RunConfig, checks: Vec<Check>) -> Self {
        let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
        SuiteReport {
            suite: suite.to_string(),
            config,
            checks,
            pass,
        }
    }
}

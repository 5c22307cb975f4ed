//! Verification reports shared by the jacobi, borcherds and lift checks.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::scalar::Coefficient;
use crate::series::{Key, TruncationPolicy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    StructuralPass,
    Skipped,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn is_failure(self) -> bool {
        self == Status::Fail
    }
}

/// A mismatching coefficient, or any other labelled observation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub key: String,
    pub left: String,
    pub right: String,
}

impl Witness {
    pub fn new(key: impl Into<String>, left: impl ToString, right: impl ToString) -> Self {
        Witness { key: key.into(), left: left.to_string(), right: right.to_string() }
    }

    pub fn from_difference<C: Coefficient>(d: &(Key, C, C)) -> Self {
        Witness::new(d.0.to_string(), d.1.to_rational(), d.2.to_rational())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub cusp: Option<String>,
    pub policy: Option<TruncationPolicy>,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    pub sign: Option<i64>,
    /// Seconds per named phase.
    pub timings: BTreeMap<String, f64>,
    /// Check-specific values (constants, counts, notes).
    #[serde(default)]
    pub details: BTreeMap<String, String>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            cusp: None,
            policy: None,
            status: Status::Pass,
            witnesses: Vec::new(),
            sign: None,
            timings: BTreeMap::new(),
            details: BTreeMap::new(),
        }
    }

    pub fn with_cusp(mut self, cusp: impl ToString) -> Self {
        self.cusp = Some(cusp.to_string());
        self
    }

    pub fn with_policy(mut self, policy: &TruncationPolicy) -> Self {
        self.policy = Some(policy.clone());
        self
    }

    pub fn detail(&mut self, name: &str, value: impl ToString) {
        self.details.insert(name.to_string(), value.to_string());
    }

    /// Records a failed condition with its witness.
    pub fn fail(&mut self, w: Witness) {
        self.status = Status::Fail;
        self.witnesses.push(w);
    }

    /// Fails unless `ok`; the witness is built lazily.
    pub fn require(&mut self, ok: bool, w: impl FnOnce() -> Witness) {
        if !ok {
            self.fail(w());
        }
    }

    pub fn passed(&self) -> bool {
        !self.status.is_failure()
    }

    /// Runs `f` and stores its wall time under `phase`.
    pub fn timed<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings.insert(phase.to_string(), t.elapsed().as_secs_f64());
        out
    }
}

/// A list of reports with an overall verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub reports: Vec<CheckReport>,
    pub status: Status,
    pub runtime_seconds: f64,
}

impl SuiteReport {
    pub fn new(reports: Vec<CheckReport>, runtime_seconds: f64) -> Self {
        let status = if reports.iter().any(|r| r.status.is_failure()) {
            Status::Fail
        } else if reports.iter().all(|r| r.status == Status::Skipped) {
            Status::Skipped
        } else if reports.iter().any(|r| r.status == Status::StructuralPass) {
            Status::StructuralPass
        } else {
            Status::Pass
        };
        SuiteReport { reports, status, runtime_seconds }
    }
}

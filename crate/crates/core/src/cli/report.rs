use serde::Serialize;

use super::scenario::Scenario;
use crate::policy::{Status, Summary};

pub const ENGINE: &str = "norden-geom";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Hold,
    Indeterminate,
    Fail,
    Error,
}

impl From<Status> for CheckStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Hold => CheckStatus::Hold,
            Status::Indeterminate => CheckStatus::Indeterminate,
            Status::Fail => CheckStatus::Fail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub name: String,
    #[serde(flatten)]
    pub summary: Summary,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Magnitude {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    pub residuals: Vec<Residual>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub magnitudes: Vec<Magnitude>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckReport {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            status: CheckStatus::Hold,
            verdict: None,
            residuals: Vec::new(),
            magnitudes: Vec::new(),
            notes: Vec::new(),
            error: None,
        }
    }

    pub fn residual(&mut self, name: &str, values: impl IntoIterator<Item = f64>) -> f64 {
        let summary = Summary::from_values(values);
        let max = summary.max;
        self.residuals.push(Residual {
            name: name.to_string(),
            summary,
        });
        max
    }

    pub fn magnitude(&mut self, name: &str, value: f64) {
        self.magnitudes.push(Magnitude {
            name: name.to_string(),
            value,
        });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn worsen(&mut self, s: CheckStatus) {
        self.status = self.status.max(s);
    }

    pub fn residual_max(&self, name: &str) -> Option<f64> {
        self.residuals.iter().find(|r| r.name == name).map(|r| r.summary.max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counts {
    pub hold: usize,
    pub indeterminate: usize,
    pub fail: usize,
    pub error: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportSummary {
    pub status: CheckStatus,
    pub exit_code: i32,
    pub counts: Counts,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub engine: &'static str,
    pub version: &'static str,
    pub scope: &'static str,
    pub scenario: Scenario,
    pub checks: Vec<CheckReport>,
    pub summary: ReportSummary,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INDETERMINATE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_ENGINE: i32 = 4;

impl Report {
    pub fn new(scenario: Scenario, checks: Vec<CheckReport>) -> Self {
        let count = |s: CheckStatus| checks.iter().filter(|c| c.status == s).count();
        let counts = Counts {
            hold: count(CheckStatus::Hold),
            indeterminate: count(CheckStatus::Indeterminate),
            fail: count(CheckStatus::Fail),
            error: count(CheckStatus::Error),
        };
        let status = checks.iter().map(|c| c.status).max().unwrap_or(CheckStatus::Hold);
        let exit_code = match status {
            CheckStatus::Hold => EXIT_OK,
            CheckStatus::Fail => EXIT_FAIL,
            CheckStatus::Indeterminate => EXIT_INDETERMINATE,
            CheckStatus::Error => EXIT_ENGINE,
        };
        Self {
            engine: ENGINE,
            version: VERSION,
            scope: "local numerical verdicts at the sampled points",
            scenario,
            checks,
            summary: ReportSummary {
                status,
                exit_code,
                counts,
            },
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

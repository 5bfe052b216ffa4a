use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "ckder-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    fn tag(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub group: String,
    /// The field the check ran over.
    pub field: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
    /// Kept out of the JSON so that reports are byte-stable.
    #[serde(skip)]
    pub wall_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub p: u32,
    pub field: String,
    pub split_field: String,
    pub basis: String,
    pub checks: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub tool_version: String,
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
    pub dims: BTreeMap<String, usize>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let c = &self.config;
        let _ = writeln!(s, "ckder {}  p = {}  field {}  split field {}", self.tool_version, c.p, c.field, c.split_field);
        let width = self.checks.iter().map(|r| r.name.len()).max().unwrap_or(0);
        for r in &self.checks {
            let _ = write!(s, "{}  {:width$}  {:4}  {:>8.3}s", r.status.tag(), r.name, r.field, r.wall_ms as f64 / 1000.0);
            if let Some(d) = &r.detail {
                let _ = write!(s, "  {d}");
            }
            if let Some(w) = &r.witness {
                let _ = write!(s, "  witness {w}");
            }
            s.push('\n');
        }
        if !self.dims.is_empty() {
            s.push_str("dimensions:\n");
            for (k, v) in &self.dims {
                let _ = writeln!(s, "  {k} = {v}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        let _ = writeln!(
            s,
            "{} passed, {} failed, {} skipped",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        );
        s
    }
}

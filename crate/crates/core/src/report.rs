//! Versioned, deterministic run reports.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::engine::AlgebraSpec;
use crate::terms::Generator;
use crate::verify::{CheckResult, PropertyReport};

pub const SCHEMA: &str = "conformal-calc/report/v1";
pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subject {
    pub name: String,
    pub digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyEntry {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
}

/// Wall-clock data; the only part of a report that varies between runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool: Tool,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<Subject>,
    #[serde(default)]
    pub checks: Vec<CheckEntry>,
    #[serde(default)]
    pub properties: Vec<PropertyEntry>,
    #[serde(default)]
    pub results: Vec<String>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            schema: SCHEMA.into(),
            tool: Tool { name: TOOL.into(), version: VERSION.into() },
            command: command.into(),
            subject: None,
            checks: Vec::new(),
            properties: Vec::new(),
            results: Vec::new(),
            summary: Summary::default(),
            timing: None,
        }
    }

    pub fn with_subject(mut self, spec: &AlgebraSpec) -> Self {
        self.subject = Some(Subject { name: spec.name.clone(), digest: crate::algebras::digest(spec) });
        self
    }

    pub fn add_checks(&mut self, checks: &[CheckResult], gens: &[Generator]) {
        for c in checks {
            self.checks.push(CheckEntry { name: c.name.clone(), passed: c.passed(), residual: c.residual.render(gens) });
        }
        self.refresh();
    }

    pub fn add_properties(&mut self, props: &[PropertyReport]) {
        for p in props {
            self.properties.push(PropertyEntry {
                name: p.name.clone(),
                cases: p.cases,
                failures: p.failures.len(),
                first_failure: p.failures.first().cloned(),
            });
        }
        self.refresh();
    }

    fn refresh(&mut self) {
        let checks = self.checks.len() + self.properties.len();
        let passed =
            self.checks.iter().filter(|c| c.passed).count() + self.properties.iter().filter(|p| p.failures == 0).count();
        self.summary = Summary { checks, passed, failed: checks - passed };
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn set_elapsed(&mut self, d: Duration) {
        self.timing = Some(Timing { wall_ms: d.as_millis() as u64 });
    }

    /// The report with timing removed, for byte-stable comparison.
    pub fn stable(&self) -> Report {
        Report { timing: None, ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(s) = &self.subject {
            out.push_str(&format!("{} {} ({})\n", self.command, s.name, &s.digest[..12]));
        } else {
            out.push_str(&format!("{}\n", self.command));
        }
        for c in &self.checks {
            if c.passed {
                out.push_str(&format!("PASS {}\n", c.name));
            } else {
                out.push_str(&format!("FAIL {}: {}\n", c.name, c.residual));
            }
        }
        for p in &self.properties {
            let tag = if p.failures == 0 { "PASS" } else { "FAIL" };
            out.push_str(&format!("{} property {} ({} cases, {} failures)\n", tag, p.name, p.cases, p.failures));
        }
        for r in &self.results {
            out.push_str(r);
            out.push('\n');
        }
        let s = &self.summary;
        if s.checks > 0 {
            out.push_str(&format!("{} checks, {} passed, {} failed\n", s.checks, s.passed, s.failed));
        }
        if let Some(t) = &self.timing {
            out.push_str(&format!("elapsed {} ms\n", t.wall_ms));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::{make, BuiltinId};

    #[test]
    fn json_round_trip() {
        let spec = make(&BuiltinId::RMinusOne { d: 1, delta_e: None }).unwrap();
        let mut r = Report::new("verify").with_subject(&spec);
        r.checks.push(CheckEntry { name: "skew(h,e)".into(), passed: false, residual: "L".into() });
        r.results.push("note".into());
        r.refresh();
        r.set_elapsed(Duration::from_millis(5));
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(!back.all_passed());
        assert!(!r.stable().to_json().contains("wall_ms"));
    }
}

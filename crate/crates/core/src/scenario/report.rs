use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_ok(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        }
    }
}

/// One verified statement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub description: String,
    /// The formula or phrase this check instantiates.
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Status>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl Check {
    pub fn new(id: impl Into<String>, description: impl Into<String>, anchor: &str, status: Status) -> Self {
        Self {
            id: id.into(),
            description: description.into(),
            anchor: anchor.to_string(),
            status,
            expected: None,
            witness: None,
            details: None,
        }
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = Some(details);
        self
    }

    /// Status matches the expectation, `PASS` when none was stated.
    pub fn as_expected(&self) -> bool {
        self.status == self.expected.unwrap_or(Status::Pass)
    }
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    #[serde(skip_serializing_if = "is_zero")]
    pub unexpected: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl Report {
    pub fn new(scenario: Option<String>, checks: Vec<Check>) -> Self {
        let summary = Summary {
            pass: checks.iter().filter(|c| c.status == Status::Pass).count(),
            fail: checks.iter().filter(|c| c.status == Status::Fail).count(),
            unexpected: checks.iter().filter(|c| !c.as_expected()).count(),
        };
        Self { scenario, checks, summary }
    }

    pub fn expectations_met(&self) -> bool {
        self.summary.unexpected == 0
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format \"{other}\", expected text or json")),
        }
    }
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn emit_report(r: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(r).expect("reports serialize"),
        Format::Text => {
            let mut out = String::new();
            if let Some(name) = &r.scenario {
                let _ = writeln!(out, "scenario: {name}");
            }
            let width = r.checks.iter().map(|c| c.id.chars().count()).max().unwrap_or(0);
            for c in &r.checks {
                let _ = writeln!(out, "{}  {:<width$}  {}  [{}]", c.status.label(), c.id, c.description, c.anchor);
                if let Some(e) = c.expected {
                    let verdict = if c.as_expected() { "met" } else { "NOT MET" };
                    let _ = writeln!(out, "      expected {}: {verdict}", e.label());
                }
                if let Some(w) = &c.witness {
                    let _ = writeln!(out, "      witness: {w}");
                }
                if let Some(Value::Object(map)) = &c.details {
                    for (k, v) in map {
                        let _ = writeln!(out, "      {k}: {}", render_value(v));
                    }
                }
            }
            let _ = write!(out, "summary: {} pass, {} fail, {} unexpected", r.summary.pass, r.summary.fail, r.summary.unexpected);
            out
        }
    }
}

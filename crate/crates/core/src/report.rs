//! Structured reports: one record per check with a verdict and an optional
//! machine-checkable witness, plus the overall conjunction.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportCheck {
    pub name: String,
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    pub seeds: Vec<u64>,
    pub checks: Vec<ReportCheck>,
    pub overall: bool,
    /// command-specific structured output (a trace value, a presentation, …)
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub payload: Option<serde_json::Value>,
}

impl Report {
    pub fn new(command: &str, seeds: Vec<u64>) -> Report {
        Report {
            command: command.into(),
            seeds,
            checks: Vec::new(),
            overall: true,
            payload: None,
        }
    }

    pub fn push(&mut self, name: impl Into<String>, verdict: bool, witness: Option<String>) {
        self.overall &= verdict;
        self.checks.push(ReportCheck {
            name: name.into(),
            verdict,
            witness,
        });
    }

    pub fn with_payload(mut self, payload: serde_json::Value) -> Report {
        self.payload = Some(payload);
        self
    }

    /// Canonical JSON: sorted keys, trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = serde_json::to_string_pretty(&value).expect("value prints");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_is_conjunction() {
        let mut r = Report::new("demo", vec![7]);
        r.push("a", true, None);
        assert!(r.overall);
        r.push("b", false, Some("broken".into()));
        assert!(!r.overall);
        r.push("c", true, None);
        assert!(!r.overall);
    }

    #[test]
    fn canonical_json_round_trip() {
        let mut r = Report::new("demo", vec![1, 2]);
        r.push("x", true, None);
        let text = r.to_json();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), text);
    }
}

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Recorded for information; never counts as a failure.
    Report,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub paper_anchor: String,
    pub inputs: Value,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: &str, inputs: Value, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            paper_anchor: anchor.into(),
            inputs,
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        }
    }

    pub fn info(name: impl Into<String>, anchor: &str, inputs: Value, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            paper_anchor: anchor.into(),
            inputs,
            status: Status::Report,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }

    pub fn to_text(&self) -> String {
        let mut lines: Vec<String> = self
            .checks
            .iter()
            .map(|c| {
                let tag = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Report => "INFO",
                };
                format!("{tag}  {}  {}  {}", c.name, c.inputs, c.detail)
            })
            .collect();
        let failed = self.failures().count();
        lines.push(format!(
            "suite {}: {} checks, {} failed",
            self.suite,
            self.checks.len(),
            failed
        ));
        lines.join("\n")
    }
}

//! Run reports: findings plus named pass/fail checks.

use serde_json::{json, Value};

/// One named check with its outcome.
#[derive(Clone, Debug)]
pub struct Check {
    /// Short identifier.
    pub name: String,
    /// Whether the check passed.
    pub pass: bool,
    /// Supporting values.
    pub detail: Value,
}

/// Result of one command.
#[derive(Clone, Debug)]
pub struct RunReport {
    /// Subcommand name.
    pub command: String,
    /// Inputs as given on the command line.
    pub inputs: Value,
    /// Command output.
    pub findings: Value,
    /// Checks in the order they ran.
    pub checks: Vec<Check>,
    /// Lines for the human summary.
    pub summary: Vec<String>,
}

impl RunReport {
    /// Empty report for `command`.
    pub fn new(command: &str, inputs: Value) -> Self {
        Self { command: command.into(), inputs, findings: json!({}), checks: Vec::new(), summary: Vec::new() }
    }

    /// Records a check and returns its outcome.
    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: Value) -> bool {
        self.checks.push(Check { name: name.into(), pass, detail });
        pass
    }

    /// Adds a line to the human summary.
    pub fn note(&mut self, line: impl Into<String>) {
        self.summary.push(line.into());
    }

    /// Number of passed checks.
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.pass).count()
    }

    /// Number of failed checks.
    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }

    /// Machine-readable form. Timing is left out so that reports are
    /// reproducible byte for byte.
    pub fn to_json(&self) -> Value {
        let items: Vec<Value> =
            self.checks.iter().map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail})).collect();
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "findings": self.findings,
            "checks": {"passed": self.passed(), "failed": self.failed(), "items": items},
        })
    }
}

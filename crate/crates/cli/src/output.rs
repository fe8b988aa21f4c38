//! Command output in both human-readable text and a stable structured
//! form. Structured output is deterministic: same bundle, same bytes.

use clap::ValueEnum;
use heapcas::bundle::Bundle;
use heapcas::report::{CheckStatus, VerificationReport};
use serde::Serialize;
use std::io::Write;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Serialize)]
pub struct CommandOutput {
    command: String,
    bundle: String,
    field: String,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    reports: Vec<VerificationReport>,
}

impl CommandOutput {
    pub fn new(command: &str, bundle: &Bundle) -> Self {
        CommandOutput {
            command: command.to_string(),
            bundle: bundle.name.clone(),
            field: bundle.field.name(),
            status: "pass".into(),
            error: None,
            notes: Vec::new(),
            reports: Vec::new(),
        }
    }

    pub fn note(&mut self, line: String) {
        self.notes.push(line);
    }

    pub fn push_report(&mut self, subject: &str, mut report: VerificationReport) {
        report.subject = subject.to_string();
        if !report.passed() {
            self.status = "fail".into();
        }
        self.reports.push(report);
    }

    /// Record a typed rejection against one subject without aborting.
    pub fn push_failure(&mut self, subject: &str, message: &str) {
        self.status = "fail".into();
        self.notes.push(format!("{subject}: {message}"));
    }

    pub fn set_error(&mut self, message: String) {
        self.status = "fail".into();
        self.error = Some(message);
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    pub fn emit(&self, format: Format) {
        let text = self.render(format);
        // a closed pipe on the consumer side is not our error
        let _ = std::io::stdout().write_all(text.as_bytes());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Structured => {
                let mut s =
                    serde_json::to_string_pretty(self).expect("serializable output");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = String::new();
                use std::fmt::Write as _;
                let _ = writeln!(s, "bundle: {} (field {})", self.bundle, self.field);
                let _ = writeln!(s, "command: {}", self.command);
                for report in &self.reports {
                    let _ = writeln!(s);
                    let _ = writeln!(s, "== {} ==", report.subject);
                    for check in &report.checks {
                        match check.status {
                            CheckStatus::Pass => {
                                let _ = writeln!(s, "PASS {} :: {}", check.id, check.law);
                            }
                            CheckStatus::Fail => {
                                let _ = writeln!(s, "FAIL {} :: {}", check.id, check.law);
                                if let Some(w) = &check.witness {
                                    let _ = writeln!(
                                        s,
                                        "     at ({}): lhs = {} ; rhs = {}",
                                        w.tuple.join(", "),
                                        w.lhs,
                                        w.rhs
                                    );
                                }
                            }
                        }
                    }
                }
                if !self.notes.is_empty() {
                    let _ = writeln!(s);
                    for n in &self.notes {
                        let _ = writeln!(s, "note: {n}");
                    }
                }
                if let Some(e) = &self.error {
                    let _ = writeln!(s);
                    let _ = writeln!(s, "error: {e}");
                }
                let _ = writeln!(s);
                let _ = writeln!(s, "status: {}", self.status);
                s
            }
        }
    }
}

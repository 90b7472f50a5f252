//! Command reports: plain text or JSON, exit code determined by the status.

use nalg_core::{NAryAlgebra, Witness};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportStatus {
    Pass,
    Fail,
    Simple,
    NotSimple,
    Undetermined,
    /// Informational commands that computed their result.
    Done,
}

impl ReportStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            ReportStatus::Pass | ReportStatus::Simple | ReportStatus::Done => 0,
            ReportStatus::Fail | ReportStatus::NotSimple => 1,
            ReportStatus::Undetermined => 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ReportStatus::Pass => "pass",
            ReportStatus::Fail => "fail",
            ReportStatus::Simple => "simple",
            ReportStatus::NotSimple => "not-simple",
            ReportStatus::Undetermined => "undetermined",
            ReportStatus::Done => "done",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArgReport {
    pub name: String,
    pub elements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub kind: String,
    pub args: Vec<ArgReport>,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl WitnessReport {
    pub fn new(alg: &NAryAlgebra, w: &Witness) -> Self {
        WitnessReport {
            kind: format!("{:?}", w.kind),
            args: w
                .args
                .iter()
                .map(|g| ArgReport {
                    name: g.name.clone(),
                    elements: g.elements.iter().map(|e| alg.format_element(e)).collect(),
                })
                .collect(),
            lhs: alg.format_element(&w.lhs),
            rhs: alg.format_element(&w.rhs),
            note: w.note.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub status: ReportStatus,
    pub details: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
}

impl Report {
    pub fn new(command: impl Into<String>, status: ReportStatus) -> Self {
        Report {
            command: command.into(),
            status,
            details: Vec::new(),
            witness: None,
        }
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.details.push(text.into());
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            return serde_json::to_string_pretty(self).expect("plain data serializes") + "\n";
        }
        let mut out = format!("command: {}\nstatus: {}\n", self.command, self.status.name());
        for d in &self.details {
            out.push_str(d);
            out.push('\n');
        }
        if let Some(w) = &self.witness {
            out.push_str(&format!("witness ({}):\n", w.kind));
            for a in &w.args {
                out.push_str(&format!("  {} = ({})\n", a.name, a.elements.join(", ")));
            }
            out.push_str(&format!("  LHS = {}\n  RHS = {}\n", w.lhs, w.rhs));
            if let Some(n) = &w.note {
                out.push_str(&format!("  note: {n}\n"));
            }
        }
        out
    }
}

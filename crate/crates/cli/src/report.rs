//! Run reports and their text / JSON rendering.

use std::time::Duration;

use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "ppcomp/1";

/// Outcome class of a run. The discriminant is the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Yes = 0,
    No = 1,
    Usage = 2,
    Budget = 3,
}

#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub verdict: String,
    pub exit: Exit,
    pub witness: Value,
    /// Extra structured data; also rendered line by line in text mode.
    pub details: Map<String, Value>,
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: Map::new(),
            verdict: String::new(),
            exit: Exit::Yes,
            witness: Value::Null,
            details: Map::new(),
            lines: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn detail(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn line(&mut self, text: impl Into<String>) -> &mut Self {
        self.lines.push(text.into());
        self
    }

    /// `yes`/`no` verdict with the matching exit code.
    pub fn decide(&mut self, yes: bool) -> &mut Self {
        self.verdict = if yes { "yes" } else { "no" }.into();
        self.exit = if yes { Exit::Yes } else { Exit::No };
        self
    }

    /// `pass`/`fail` verdict with the matching exit code.
    pub fn check(&mut self, pass: bool) -> &mut Self {
        self.verdict = if pass { "pass" } else { "fail" }.into();
        self.exit = if pass { Exit::Yes } else { Exit::No };
        self
    }

    pub fn to_json(&self, elapsed: Duration) -> Value {
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "inputs": Value::Object(self.inputs.clone()),
            "verdict": self.verdict,
            "witness": self.witness,
            "details": Value::Object(self.details.clone()),
            "timing_ms": elapsed.as_millis() as u64,
        })
    }

    pub fn to_text(&self, show_witness: bool) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        if !self.verdict.is_empty() {
            out.push_str(&format!("{}: {}\n", self.command, self.verdict));
        }
        if show_witness && !self.witness.is_null() {
            out.push_str(&format!("witness: {}\n", render_witness(&self.witness)));
        }
        out
    }
}

fn render_witness(w: &Value) -> String {
    match w.get("assignment") {
        Some(Value::Array(parts)) => {
            let parts: Vec<&str> = parts.iter().filter_map(Value::as_str).collect();
            let mut s = if parts.is_empty() {
                "the empty assignment".to_string()
            } else {
                parts.join(", ")
            };
            if let Some(Value::String(side)) = w.get("satisfies") {
                s.push_str(&format!(" (satisfies only the {side} formula)"));
            }
            for key in ["structure", "lattice"] {
                if let Some(Value::Number(n)) = w.get(key) {
                    s.push_str(&format!(" on {key} {n}"));
                }
            }
            s
        }
        _ => w.to_string(),
    }
}

/// Report for a run that failed before reaching a verdict.
pub fn error_json(command: &str, inputs: &Map<String, Value>, message: &str, elapsed: Duration) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "inputs": Value::Object(inputs.clone()),
        "verdict": "error",
        "witness": Value::Null,
        "error": message,
        "timing_ms": elapsed.as_millis() as u64,
    })
}

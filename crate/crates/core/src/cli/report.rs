//! Structured text reports.
//!
//! ```text
//! liouville-report 1
//! command: classify
//! version: 0.1.0
//! seed: 24301
//! [input]
//! g11: x^2 + 2*y^2
//! [result]
//! dim_J1: 0
//! [trace]
//! I3 = 0: nonzero at (3/2, 5/4): 187/16
//! [json]
//! {"command":"classify",...}
//! ```
//!
//! Sections hold `key: value` lines or free lines. The `[json]` section is
//! last and holds one line of JSON with the same content.

use serde::Serialize;
use serde_json::{json, Value};

pub const REPORT_FORMAT: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub name: String,
    pub lines: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub seed: Option<u64>,
    pub input: Vec<(String, String)>,
    pub result: Vec<(String, String)>,
    pub sections: Vec<Section>,
    /// Extra machine-readable payload.
    pub data: Value,
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed: None,
            input: Vec::new(),
            result: Vec::new(),
            sections: Vec::new(),
            data: Value::Null,
            timing_ms: None,
        }
    }

    pub fn input(&mut self, k: &str, v: impl ToString) {
        self.input.push((k.into(), v.to_string()));
    }

    pub fn result(&mut self, k: &str, v: impl ToString) {
        self.result.push((k.into(), v.to_string()));
    }

    pub fn section(&mut self, name: &str, lines: Vec<String>) {
        self.sections.push(Section {
            name: name.into(),
            lines,
        });
    }

    pub fn to_json(&self) -> Value {
        let pairs = |v: &[(String, String)]| {
            Value::Object(v.iter().map(|(k, s)| (k.clone(), json!(s))).collect())
        };
        let mut o = json!({
            "format": REPORT_FORMAT,
            "command": self.command,
            "version": self.version,
            "seed": self.seed,
            "input": pairs(&self.input),
            "result": pairs(&self.result),
            "sections": self.sections,
            "data": self.data,
        });
        if let Some(t) = self.timing_ms {
            o["timing_ms"] = json!(t);
        }
        o
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "liouville-report {REPORT_FORMAT}\ncommand: {}\nversion: {}\n",
            self.command, self.version
        );
        if let Some(s) = self.seed {
            out += &format!("seed: {s}\n");
        }
        if let Some(t) = self.timing_ms {
            out += &format!("timing_ms: {t:.3}\n");
        }
        for (name, kv) in [("input", &self.input), ("result", &self.result)] {
            if kv.is_empty() {
                continue;
            }
            out += &format!("[{name}]\n");
            for (k, v) in kv {
                out += &format!("{k}: {v}\n");
            }
        }
        for s in &self.sections {
            out += &format!("[{}]\n", s.name);
            for l in &s.lines {
                out += l;
                out.push('\n');
            }
        }
        out += "[json]\n";
        out += &self.to_json().to_string();
        out.push('\n');
        out
    }
}

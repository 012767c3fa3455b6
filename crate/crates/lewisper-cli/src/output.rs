use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use lewisper::{Complex64 as C64, Error, Result};
use serde_json::Value;

/// Rows of a CSV table; numbers are written with `{:e}` so that output is
/// reproducible to the bit.
#[derive(Debug, Default, Clone)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn body(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn num(x: f64) -> String {
    format!("{x:e}")
}

pub fn cnum(z: C64) -> [String; 2] {
    [num(z.re), num(z.im)]
}

/// Everything a command produces.
#[derive(Debug)]
pub struct Outcome {
    pub lines: Vec<String>,
    pub table: Option<Table>,
    pub summary: Value,
    pub pass: bool,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn new(pass: bool, summary: Value) -> Self {
        Self { lines: Vec::new(), table: None, summary, pass, failures: Vec::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Report,
    Csv,
}

fn stamp() -> String {
    format!("# lewisper {} {}", lewisper::VERSION, chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ"))
}

pub fn render(command: &str, config: &Value, out: &Outcome, format: Format) -> String {
    let mut s = stamp();
    s.push('\n');
    match format {
        Format::Csv => {
            s.push_str(&out.table.as_ref().map(Table::body).unwrap_or_default());
        }
        Format::Report => {
            let _ = writeln!(s, "command: {command}");
            let _ = writeln!(s, "config: {config}");
            for l in &out.lines {
                let _ = writeln!(s, "{l}");
            }
            if let Some(t) = &out.table {
                s.push('\n');
                s.push_str(&t.body());
            }
            for f in &out.failures {
                let _ = writeln!(s, "FAILED: {f}");
            }
            let _ = writeln!(s, "status: {}", if out.pass { "pass" } else { "fail" });
            let trailer = serde_json::json!({
                "command": command,
                "version": lewisper::VERSION,
                "config": config,
                "summary": out.summary,
                "pass": out.pass,
            });
            let _ = writeln!(s, "--- machine ---\n{trailer}");
        }
    }
    s
}

pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Input(format!("writing {}: {e}", p.display()))),
        None => {
            let mut o = std::io::stdout().lock();
            o.write_all(text.as_bytes()).map_err(|e| Error::Input(format!("stdout: {e}")))
        }
    }
}

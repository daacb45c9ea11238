//! Run reports shared by every subcommand.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &Path, bytes: &[u8]) -> Self {
        let hash = Sha256::digest(bytes);
        let mut hex = String::with_capacity(64);
        for b in hash {
            let _ = write!(hex, "{b:02x}");
        }
        InputDigest { path: path.display().to_string(), sha256: hex }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Item {
    pub id: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// The computed value, for checks that produce one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl Item {
    pub fn pass(id: impl Into<String>) -> Self {
        Item { id: id.into(), ok: true, reason: None, detail: None, elapsed_ms: None }
    }

    pub fn fail(id: impl Into<String>, reason: impl Into<String>) -> Self {
        Item { id: id.into(), ok: false, reason: Some(reason.into()), detail: None, elapsed_ms: None }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn timed(mut self, d: Duration) -> Self {
        self.elapsed_ms = Some(d.as_secs_f64() * 1e3);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub inputs: Vec<InputDigest>,
    pub items: Vec<Item>,
    /// Text produced by the run, such as a found proof script.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub artifact: Option<String>,
    pub summary: Summary,
}

impl RunReport {
    /// Items are sorted by id and inputs by path, so the report does not
    /// depend on the order work finished in.
    pub fn new(command: &str, mut inputs: Vec<InputDigest>, mut items: Vec<Item>) -> Self {
        inputs.sort_by(|a, b| a.path.cmp(&b.path));
        items.sort_by(|a, b| a.id.cmp(&b.id));
        let passed = items.iter().filter(|i| i.ok).count();
        let summary = Summary { total: items.len(), passed, failed: items.len() - passed };
        RunReport {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs,
            items,
            artifact: None,
            summary,
        }
    }

    pub fn all_ok(&self) -> bool {
        self.summary.failed == 0
    }

    /// Drop timing data unless it was asked for.
    pub fn strip_timings(&mut self) {
        for i in &mut self.items {
            i.elapsed_ms = None;
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("mcg {} {}\n", self.version, self.command);
        for d in &self.inputs {
            let _ = writeln!(out, "input {} sha256:{}", d.path, d.sha256);
        }
        for i in &self.items {
            let mut line = format!("{} {}", if i.ok { "ok  " } else { "FAIL" }, i.id);
            if let Some(d) = &i.detail {
                let _ = write!(line, " = {d}");
            }
            if let Some(r) = &i.reason {
                let _ = write!(line, " : {r}");
            }
            if let Some(ms) = i.elapsed_ms {
                let _ = write!(line, " ({ms:.3} ms)");
            }
            out.push_str(&line);
            out.push('\n');
        }
        if let Some(a) = &self.artifact {
            out.push_str(a);
            if !a.ends_with('\n') {
                out.push('\n');
            }
        }
        let _ = writeln!(
            out,
            "summary: {} items, {} passed, {} failed",
            self.summary.total, self.summary.passed, self.summary.failed
        );
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_order() {
        let r = RunReport::new("t", vec![], vec![Item::fail("b", "x"), Item::pass("a")]);
        assert_eq!(r.items[0].id, "a");
        assert_eq!((r.summary.total, r.summary.passed, r.summary.failed), (2, 1, 1));
        assert!(!r.all_ok());
    }

    #[test]
    fn digest_is_hex_sha256() {
        let d = InputDigest::of(Path::new("f"), b"abc");
        assert_eq!(d.sha256, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}

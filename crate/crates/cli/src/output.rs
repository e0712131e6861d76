//! Delimiter-separated artifacts with a `#`-prefixed metadata block.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::config::{ExperimentConfig, Format, CONFIG_PREFIX};

/// Marker line written when a run stopped early.
pub const TRUNCATION_MARKER: &str = "# TRUNCATED:";

/// An artifact assembled in memory and written in one piece, so a failed run never leaves a
/// half-written file behind.
#[derive(Debug, Clone)]
pub struct Artifact {
    delimiter: char,
    text: String,
}

impl Artifact {
    pub fn new(command: &str, config: Option<&ExperimentConfig>, format: Format, freeze: bool) -> Self {
        let mut a = Artifact {
            delimiter: format.delimiter(),
            text: String::new(),
        };
        a.meta(&format!("jetflow {}", env!("CARGO_PKG_VERSION")));
        a.meta(&format!("command: {command}"));
        if !freeze {
            let secs = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs());
            a.meta(&format!("timestamp: {secs}"));
        }
        if let Some(cfg) = config {
            a.meta(&format!("mu: {:?}", cfg.mu));
            for line in cfg.to_toml().lines() {
                a.text.push_str(CONFIG_PREFIX);
                a.text.push_str(line);
                a.text.push('\n');
            }
        }
        a
    }

    /// A `# `-prefixed metadata line.
    pub fn meta(&mut self, line: &str) {
        writeln!(self.text, "# {line}").unwrap();
    }

    /// Column header; each entry is `name[unit]`.
    pub fn header(&mut self, columns: &[&str]) {
        let d = self.delimiter.to_string();
        writeln!(self.text, "{}", columns.join(&d)).unwrap();
    }

    /// A record of mixed text and numbers, already formatted.
    pub fn record_fields(&mut self, fields: &[String]) {
        let d = self.delimiter.to_string();
        writeln!(self.text, "{}", fields.join(&d)).unwrap();
    }

    /// A record of numbers in round-trip exponent notation.
    pub fn record(&mut self, values: &[f64]) {
        let fields: Vec<String> = values.iter().map(|v| num(*v)).collect();
        self.record_fields(&fields);
    }

    pub fn truncated(&mut self, reason: &str) {
        writeln!(self.text, "{TRUNCATION_MARKER} {reason}").unwrap();
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Write to `path`, or to standard output when no path is given.
    pub fn emit(&self, path: Option<&Path>) -> std::io::Result<()> {
        match path {
            Some(p) => std::fs::write(p, &self.text),
            None => {
                use std::io::Write;
                let mut out = std::io::stdout().lock();
                out.write_all(self.text.as_bytes())?;
                out.flush()
            }
        }
    }
}

/// Shortest exponent form that parses back to the same `f64`.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

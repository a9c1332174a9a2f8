//! Line-oriented `key=value` run records, one block per command.

use std::fmt::Display;
use std::time::Instant;

/// Ordered record of what a command did: parameters, outputs, results.
pub struct Report {
    entries: Vec<(String, String)>,
    started: Instant,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            entries: vec![("command".into(), command.into())],
            started: Instant::now(),
        }
    }

    pub fn push(&mut self, key: &str, value: impl Display) {
        self.entries.push((key.into(), value.to_string()));
    }

    /// Append the wall-clock time since construction and write the record.
    pub fn print(mut self) {
        let elapsed = self.started.elapsed().as_secs_f64() * 1e3;
        self.push("elapsed_ms", format!("{elapsed:.3}"));
        for (k, v) in &self.entries {
            println!("{k}={v}");
        }
    }
}

use std::fmt::Display;
use std::path::Path;

use crate::error::CliError;
use crate::table::{fmt_float, write_atomic};

/// Sidecar recording every parameter and tolerance behind an output file,
/// as `key=value` lines in insertion order.
#[derive(Debug, Clone)]
pub struct Manifest {
    entries: Vec<(String, String)>,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        let mut m = Self {
            entries: Vec::new(),
        };
        m.push("tool", format!("xyc {}", env!("CARGO_PKG_VERSION")));
        m.push("command", command);
        m
    }

    pub fn push(&mut self, key: &str, value: impl Display) {
        self.entries.push((key.to_owned(), value.to_string()));
    }

    pub fn push_f64(&mut self, key: &str, value: f64) {
        self.entries.push((key.to_owned(), fmt_float(value)));
    }

    /// Records the full resolved parameter map of a run configuration.
    pub fn push_config(&mut self, cfg: &crate::config::RunConfig) {
        for (k, v) in cfg.pairs() {
            self.push(k, v);
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push('=');
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        write_atomic(path, &self.render())
    }

    /// FNV-1a fingerprint of the rendered text, used to tie a resumable
    /// output to the configuration that produced it.
    pub fn fingerprint(&self) -> u64 {
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in self.render().as_bytes() {
            hash ^= u64::from(*byte);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
        hash
    }
}

//! Deterministic file output: floats at 17 significant digits, CSV per
//! RFC 4180 (CRLF line endings), JSON as UTF-8.

use anyhow::{Context, Result};
use num_complex::Complex64;
use std::path::Path;

/// 17 significant digits: round-trips every f64 bit pattern.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = String::new();
        buf.push_str(&header.join(","));
        buf.push_str("\r\n");
        Csv { buf }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.buf.push_str(&fields.join(","));
        self.buf.push_str("\r\n");
    }

    pub fn write(self, path: &Path) -> Result<()> {
        std::fs::write(path, self.buf)
            .with_context(|| format!("cannot write {}", path.display()))
    }
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value).context("serialize json")?;
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

pub fn json_c(z: Complex64) -> serde_json::Value {
    serde_json::json!([z.re, z.im])
}

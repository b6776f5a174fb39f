//! `key = value` config files with JSON-compatible values.

use anyhow::{bail, Context, Result};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Default)]
pub struct Config {
    entries: BTreeMap<String, serde_json::Value>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        if let Some(p) = path {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("cannot read config {}", p.display()))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    bail!("{}:{}: expected `key = value`", p.display(), lineno + 1);
                };
                let value: serde_json::Value = serde_json::from_str(value.trim())
                    .with_context(|| {
                        format!("{}:{}: value is not valid JSON", p.display(), lineno + 1)
                    })?;
                entries.insert(key.trim().to_string(), value);
            }
        }
        Ok(Config { entries })
    }

    pub fn f64(&self, key: &str) -> Option<f64> {
        self.entries.get(key).and_then(|v| v.as_f64())
    }

    pub fn usize(&self, key: &str) -> Option<usize> {
        self.entries.get(key).and_then(|v| v.as_u64()).map(|v| v as usize)
    }
}

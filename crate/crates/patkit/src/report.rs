//! Report envelope and emission.
//!
//! Every run emits `{config, result, timing}`. The `config` object is the full resolved
//! configuration; `timing` is the only non-deterministic part and is kept in its own
//! sub-object so golden comparisons can drop it. JSON files are written atomically
//! (temp file + rename). Keys serialize in sorted order.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use patkit_core::Complex64;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone)]
pub struct Report {
    pub config: Value,
    pub result: Value,
    pub elapsed_seconds: f64,
}

impl Report {
    pub fn to_json_value(&self) -> Value {
        json!({
            "config": self.config,
            "result": self.result,
            "timing": { "elapsed_seconds": self.elapsed_seconds },
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("serializable");
        s.push('\n');
        s
    }

    /// CSV rendering: top-level numeric (and boolean) fields of `result`, one header row
    /// and one value row, with the full config JSON embedded as the final column.
    pub fn to_csv_string(&self) -> String {
        let mut headers = Vec::new();
        let mut values = Vec::new();
        if let Value::Object(map) = &self.result {
            for (k, v) in map {
                match v {
                    Value::Number(n) => {
                        headers.push(k.clone());
                        values.push(n.to_string());
                    }
                    Value::Bool(b) => {
                        headers.push(k.clone());
                        values.push(if *b { "1".into() } else { "0".into() });
                    }
                    _ => {}
                }
            }
        }
        headers.push("config".into());
        values.push(csv_quote(&serde_json::to_string(&self.config).expect("serializable")));
        format!("{}\n{}\n", headers.join(","), values.join(","))
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json_string(),
            OutputFormat::Csv => self.to_csv_string(),
        }
    }
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    pub fn label(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

/// Write via a temp file in the target directory, then rename into place.
pub fn write_atomic(path: &Path, body: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into())
    ));
    {
        let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(body.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

pub fn complex_json(v: Complex64) -> Value {
    json!({ "re": v.re, "im": v.im })
}

/// Sorted-key object from key/value pairs (serde_json maps are already sorted; this is
/// just a terse constructor).
pub fn obj(pairs: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in pairs {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

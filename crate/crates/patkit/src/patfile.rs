//! Pattern and subset file formats.
//!
//! Pattern files carry one polynomial in `y` per line (exact text form), `#` comments,
//! and an optional `name:` header. Subset files carry one residue per line.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use patkit_core::patterns::PatternSpec;
use patkit_core::poly::{parse_unipoly, Var};

pub fn parse_pattern_text(body: &str, fallback_name: Option<String>) -> Result<PatternSpec> {
    let mut name = fallback_name;
    let mut polys = Vec::new();
    for (lineno, raw) in body.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("name:") {
            name = Some(rest.trim().to_string());
            continue;
        }
        let poly = parse_unipoly(line, Var::Y)
            .map_err(|e| anyhow::anyhow!("line {}: {e}", lineno + 1))?;
        polys.push(poly);
    }
    if polys.is_empty() {
        bail!("pattern file has no polynomials");
    }
    PatternSpec::new(polys, name).map_err(|e| anyhow::anyhow!("{e}"))
}

pub fn load_pattern(path: &Path) -> Result<PatternSpec> {
    let body = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let fallback = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned());
    parse_pattern_text(&body, fallback)
}

/// One residue per line; `#` comments and blanks ignored.
pub fn load_subset(path: &Path) -> Result<Vec<u64>> {
    let body = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for (lineno, raw) in body.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(
            line.parse::<u64>()
                .with_context(|| format!("{}:{}", path.display(), lineno + 1))?,
        );
    }
    Ok(out)
}

//! Parsers for the CLI mini-languages: test functions on `Z/NZ` and difference measures.
//!
//! Function specs: `const`, `interval:a,b`, `quadphase:c`, `polyphase:c1,c2,...`,
//! `randpm1:seed`, `file:path` (one value per line, real or `re,im`).
//! Measure specs: `point:x`, `uniform:a,b`, `pm:m`, `scaled:q,m`, `list:x1,x2,...`.

use std::fs;

use anyhow::{bail, Context, Result};
use patkit_core::cyclic::{FunctionKind, FunctionSpec};
use patkit_core::measure::FiniteMeasure;
use patkit_core::Complex64;

pub fn parse_function_spec(text: &str, modulus: usize) -> Result<FunctionSpec> {
    let (head, rest) = match text.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (text, None),
    };
    let kind = match (head, rest) {
        ("const", None) => FunctionKind::Constant,
        ("interval", Some(args)) => {
            let (a, b) = pair(args).context("interval:a,b")?;
            FunctionKind::Interval(a, b)
        }
        ("quadphase", Some(c)) => FunctionKind::QuadPhase(c.trim().parse().context("quadphase:c")?),
        ("polyphase", Some(cs)) => FunctionKind::PolyPhase(
            cs.split(',')
                .map(|c| c.trim().parse().context("polyphase coefficient"))
                .collect::<Result<Vec<i64>>>()?,
        ),
        ("randpm1", Some(s)) => FunctionKind::RandPm1(s.trim().parse().context("randpm1:seed")?),
        ("file", Some(path)) => FunctionKind::Values(load_values(path, modulus)?),
        _ => bail!("unknown function spec `{text}`"),
    };
    Ok(FunctionSpec { kind, modulus })
}

fn pair(args: &str) -> Result<(u64, u64)> {
    let parts: Vec<&str> = args.split(',').collect();
    if parts.len() != 2 {
        bail!("expected two comma-separated integers, got `{args}`");
    }
    Ok((parts[0].trim().parse()?, parts[1].trim().parse()?))
}

/// One complex value per line: `re` or `re,im`. Blank lines and `#` comments ignored.
pub fn load_values(path: &str, expected_len: usize) -> Result<Vec<Complex64>> {
    let body = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let mut out = Vec::new();
    for (lineno, raw) in body.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v = match line.split_once(',') {
            Some((re, im)) => Complex64::new(
                re.trim().parse().with_context(|| format!("{path}:{}", lineno + 1))?,
                im.trim().parse().with_context(|| format!("{path}:{}", lineno + 1))?,
            ),
            None => Complex64::new(
                line.parse().with_context(|| format!("{path}:{}", lineno + 1))?,
                0.0,
            ),
        };
        out.push(v);
    }
    if out.len() != expected_len {
        bail!("{path} holds {} values but N = {expected_len}", out.len());
    }
    Ok(out)
}

pub fn parse_measure_spec(text: &str) -> Result<FiniteMeasure> {
    let (head, args) = text
        .split_once(':')
        .with_context(|| format!("measure spec `{text}` needs arguments"))?;
    let m = match head {
        "point" => FiniteMeasure::point_mass(args.trim().parse().context("point:x")?),
        "uniform" => {
            let parts: Vec<&str> = args.split(',').collect();
            if parts.len() != 2 {
                bail!("uniform:a,b");
            }
            let a: i64 = parts[0].trim().parse()?;
            let b: i64 = parts[1].trim().parse()?;
            if a > b {
                bail!("uniform:a,b needs a <= b");
            }
            FiniteMeasure::uniform(a, b)
        }
        "pm" => FiniteMeasure::uniform_pm(args.trim().parse().context("pm:m")?),
        "scaled" => {
            let parts: Vec<&str> = args.split(',').collect();
            if parts.len() != 2 {
                bail!("scaled:q,m");
            }
            FiniteMeasure::uniform_scaled_pm(parts[0].trim().parse()?, parts[1].trim().parse()?)
        }
        "list" => {
            let pts: Vec<i64> = args
                .split(',')
                .map(|p| p.trim().parse().context("list point"))
                .collect::<Result<_>>()?;
            if pts.is_empty() {
                bail!("list needs at least one point");
            }
            let w = 1.0 / pts.len() as f64;
            FiniteMeasure::new(pts.into_iter().map(|x| (x, w)).collect())
                .map_err(|e| anyhow::anyhow!("{e}"))?
        }
        _ => bail!("unknown measure spec `{text}`"),
    };
    Ok(m)
}

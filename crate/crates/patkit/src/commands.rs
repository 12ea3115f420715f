//! Command implementations. Each returns the resolved config object and the result
//! object; the binary wraps them in the report envelope and handles emission.

use std::path::{Path, PathBuf};

use patkit_core::counting::{self, CountOptions, LinearMethod};
use patkit_core::cyclic::{self, CyclicFunction};
use patkit_core::extremal::{self, SearchOptions};
use patkit_core::linalg;
use patkit_core::measure::{self, GpMethod, GpOptions, IntFunction};
use patkit_core::patterns::{self, KernelBasis, PatternSpec};
use patkit_core::poly::{parse_unipoly, rat, UniPoly, Var};
use patkit_core::primes::{is_prime, lcm_up_to};
use patkit_core::wtrick::{self, WtrickError};
use patkit_core::{BigUint, Complex64};
use serde_json::{json, Value};

use crate::fnspec::{parse_function_spec, parse_measure_spec};
use crate::patfile::{load_pattern, load_subset};
use crate::report::{complex_json, OutputFormat};

/// Usage problems exit 2; computational failures exit 1.
#[derive(Debug)]
pub enum CmdError {
    Usage(String),
    Compute(String),
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CmdError::Usage(m) => write!(f, "{m}"),
            CmdError::Compute(m) => write!(f, "{m}"),
        }
    }
}

pub type CmdResult = Result<(Value, Value), CmdError>;

fn usage(e: impl std::fmt::Display) -> CmdError {
    CmdError::Usage(e.to_string())
}

fn compute(e: impl std::fmt::Display) -> CmdError {
    CmdError::Compute(e.to_string())
}

#[derive(Debug, Clone)]
pub struct GlobalOpts {
    pub seed: u64,
    pub workers: u32,
    pub format: OutputFormat,
    /// Enumeration cap (PATKIT_BUDGET).
    pub budget: f64,
}

impl GlobalOpts {
    fn config_fields(&self) -> Vec<(&'static str, Value)> {
        vec![
            ("seed", json!(self.seed)),
            ("workers", json!(self.workers)),
            ("format", json!(self.format.label())),
            ("budget", json!(self.budget)),
        ]
    }
}

fn base_config(command: &str, g: &GlobalOpts, extra: Vec<(&str, Value)>) -> Value {
    let mut pairs: Vec<(&str, Value)> = vec![("command", json!(command))];
    pairs.extend(g.config_fields());
    pairs.extend(extra);
    crate::report::obj(pairs)
}

fn require_prime(n: u64) -> Result<(), CmdError> {
    if is_prime(n) {
        Ok(())
    } else {
        Err(usage(format!("{n} is not prime; this command requires a prime modulus")))
    }
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

pub fn classification_result(p: &PatternSpec, k: u32) -> Value {
    let (kb, cls) = patterns::classify(p, k);
    let lp = patterns::linearize(p);
    let mut fields = vec![
        ("name", json!(p.name.clone().unwrap_or_else(|| "unnamed".into()))),
        ("t", json!(p.len())),
        ("d", json!(lp.d)),
        ("degree_bound", json!(kb.degree_bound)),
        ("graded_dims", json!(kb.graded_dims)),
        ("kernel_dim", json!(kb.dim())),
        ("homogeneous", json!(cls.homogeneous)),
        ("transferable", json!(cls.transferable)),
        (
            "basis",
            json!(kb
                .basis
                .iter()
                .map(|t| t.qs().iter().map(|q| q.display_with("z")).collect::<Vec<_>>())
                .collect::<Vec<_>>()),
        ),
    ];
    if let Some(w) = &cls.witness {
        fields.push((
            "witness",
            json!(w.qs().iter().map(|q| q.display_with("z")).collect::<Vec<_>>()),
        ));
    }
    if let Some(e) = &cls.witness_expansion {
        fields.push(("witness_expansion", json!(e.to_string())));
    }
    crate::report::obj(fields)
}

pub fn run_classify(pattern: &Path, degree_bound: Option<u32>, g: &GlobalOpts) -> CmdResult {
    let p = load_pattern(pattern).map_err(usage)?;
    let k = degree_bound.unwrap_or_else(|| p.default_degree_bound());
    if k < 1 {
        return Err(usage("degree bound must be at least 1"));
    }
    let config = base_config(
        "classify",
        g,
        vec![
            ("pattern_file", json!(pattern.display().to_string())),
            ("degree_bound", json!(k)),
        ],
    );
    Ok((config, classification_result(&p, k)))
}

// ---------------------------------------------------------------------------
// transfer-gap
// ---------------------------------------------------------------------------

fn resolve_functions(
    specs: &[String],
    t: usize,
    n: u64,
    seed: u64,
) -> Result<(Vec<String>, Vec<CyclicFunction>), CmdError> {
    let resolved: Vec<String> = if specs.is_empty() {
        // Independent +-1 functions with per-slot seeds derived from the run seed.
        (0..t)
            .map(|i| format!("randpm1:{}", seed.wrapping_add(i as u64)))
            .collect()
    } else if specs.len() == 1 && t > 1 {
        vec![specs[0].clone(); t]
    } else if specs.len() == t {
        specs.to_vec()
    } else {
        return Err(usage(format!(
            "expected 0, 1 or {t} function specs, got {}",
            specs.len()
        )));
    };
    let fs = resolved
        .iter()
        .map(|s| parse_function_spec(s, n as usize).map(|spec| spec.materialize()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    Ok((resolved, fs))
}

fn parse_method(method: &str) -> Result<LinearMethod, CmdError> {
    match method {
        "auto" => Ok(LinearMethod::Auto),
        "direct" => Ok(LinearMethod::Direct),
        "fourier" => Ok(LinearMethod::Fourier),
        other => Err(usage(format!("unknown method `{other}` (auto|direct|fourier)"))),
    }
}

pub fn run_transfer_gap(
    pattern: &Path,
    n: u64,
    fn_specs: &[String],
    method: &str,
    g: &GlobalOpts,
) -> CmdResult {
    let p = load_pattern(pattern).map_err(usage)?;
    require_prime(n)?;
    let (resolved, fs) = resolve_functions(fn_specs, p.len(), n, g.seed)?;
    let opts = CountOptions {
        method: parse_method(method)?,
        budget: g.budget,
        samples: 200_000,
        seed: g.seed,
    };
    let report = counting::transfer_gap(&p, &fs, n, &opts).map_err(compute)?;
    let config = base_config(
        "transfer-gap",
        g,
        vec![
            ("pattern_file", json!(pattern.display().to_string())),
            ("n", json!(n)),
            ("fns", json!(resolved)),
            ("method", json!(method)),
        ],
    );
    let result = crate::report::obj(vec![
        ("modulus", json!(report.modulus)),
        ("pattern", json!(report.pattern)),
        ("lambda_poly", complex_json(report.lambda_poly)),
        ("lambda_linear", complex_json(report.lambda_linear)),
        ("gap", json!(report.gap)),
        ("method", json!(report.linear_method.label())),
    ]);
    Ok((config, result))
}

// ---------------------------------------------------------------------------
// gowers
// ---------------------------------------------------------------------------

pub fn run_gowers(n: u64, s: u32, fn_spec: &str, mode: &str, g: &GlobalOpts) -> CmdResult {
    let spec = parse_function_spec(fn_spec, n as usize).map_err(usage)?;
    let f = spec.materialize();
    let (norm, detail): (f64, Value) = match mode {
        "cyclic" => {
            let v = cyclic::gowers_norm_cyclic(&f, s, g.budget).map_err(compute)?;
            (v, json!({}))
        }
        "u2-fourier" => {
            if s != 2 {
                return Err(usage("u2-fourier mode requires --s 2"));
            }
            (cyclic::gowers_norm_u2_fourier(&f), json!({}))
        }
        "interval" => {
            let ntilde = patkit_core::primes::next_prime_at_least((1u64 << s) * n + 1);
            let v = cyclic::gowers_norm_interval(f.values(), s, g.budget).map_err(compute)?;
            (v, json!({ "ntilde": ntilde }))
        }
        other => return Err(usage(format!("unknown mode `{other}` (cyclic|interval|u2-fourier)"))),
    };
    let config = base_config(
        "gowers",
        g,
        vec![
            ("n", json!(n)),
            ("s", json!(s)),
            ("fn", json!(fn_spec)),
            ("mode", json!(mode)),
        ],
    );
    let mut fields = vec![
        ("n", json!(n)),
        ("s", json!(s)),
        ("norm", json!(norm)),
        ("one_bounded_input", json!(f.is_one_bounded())),
    ];
    if let Some(nt) = detail.get("ntilde") {
        fields.push(("ntilde", nt.clone()));
    }
    Ok((config, crate::report::obj(fields)))
}

// ---------------------------------------------------------------------------
// gp-norm
// ---------------------------------------------------------------------------

pub fn run_gp_norm(
    n: u64,
    fn_spec: &str,
    measure_specs: &[String],
    samples: u64,
    g: &GlobalOpts,
) -> CmdResult {
    if measure_specs.is_empty() {
        return Err(usage("need at least one --measure"));
    }
    let measures = measure_specs
        .iter()
        .map(|m| parse_measure_spec(m))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    // The function lives on the integer segment [1, N].
    let spec = parse_function_spec(fn_spec, n as usize).map_err(usage)?;
    let cyc = spec.materialize();
    let f = IntFunction::new(1, cyc.values().to_vec());
    let opts = GpOptions { budget: g.budget, samples, seed: g.seed };
    let r = measure::gp_norm(&f, n, &measures, &opts);
    let config = base_config(
        "gp-norm",
        g,
        vec![
            ("n", json!(n)),
            ("fn", json!(fn_spec)),
            ("measures", json!(measure_specs)),
            ("samples", json!(samples)),
        ],
    );
    let method = match r.method {
        GpMethod::Exact => json!("exact"),
        GpMethod::Sampled { samples, stderr } => json!({ "sampled": { "samples": samples, "stderr": stderr } }),
    };
    let result = crate::report::obj(vec![
        ("n", json!(n)),
        ("k", json!(measures.len())),
        ("value", json!(r.value)),
        ("base", json!(r.base)),
        ("method", method),
    ]);
    Ok((config, result))
}

// ---------------------------------------------------------------------------
// hensel-check
// ---------------------------------------------------------------------------

pub fn run_hensel_check(q_text: &str, ref_text: &str, modulus: u64, g: &GlobalOpts) -> CmdResult {
    let q = parse_unipoly(q_text, Var::Y).map_err(usage)?;
    let r = parse_unipoly(ref_text, Var::Y).map_err(usage)?;
    let cap = g.budget.min(u64::MAX as f64) as u64;
    let report = wtrick::verify_hensel(&q, &r, modulus, cap).map_err(compute)?;
    let config = base_config(
        "hensel-check",
        g,
        vec![
            ("q", json!(q_text)),
            ("reference", json!(ref_text)),
            ("modulus", json!(modulus)),
        ],
    );
    Ok((config, hensel_report_json(&report)))
}

fn hensel_report_json(report: &wtrick::HenselReport) -> Value {
    crate::report::obj(vec![
        ("modulus", json!(report.modulus)),
        ("equal", json!(report.equal)),
        ("hypotheses_met", json!(report.hypotheses_met)),
        (
            "per_prime",
            json!(report
                .per_prime
                .iter()
                .map(|p| {
                    json!({
                        "prime": p.prime,
                        "exponent": p.exponent,
                        "hypotheses_met": p.hypotheses_met,
                        "notes": p.notes,
                        "equal": p.equal,
                        "method": p.method,
                        "first_diff": p.first_diff.map(|(r, a, b)| json!({
                            "residue": r, "count_q": a, "count_ref": b
                        })),
                    })
                })
                .collect::<Vec<_>>()),
        ),
    ])
}

// ---------------------------------------------------------------------------
// wtrick
// ---------------------------------------------------------------------------

/// Cap on the number of admissible residues listed in the report.
const ADMISSIBLE_LIST_CAP: usize = 64;

pub fn run_wtrick(poly_file: &Path, w: u64, n: Option<u64>, g: &GlobalOpts) -> CmdResult {
    if w < 2 {
        return Err(usage("w must be at least 2"));
    }
    let body = std::fs::read_to_string(poly_file)
        .map_err(|e| usage(format!("reading {}: {e}", poly_file.display())))?;
    let polys: Vec<UniPoly> = body
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty() && !l.starts_with("name:"))
        .map(|l| parse_unipoly(l, Var::Y))
        .collect::<Result<_, _>>()
        .map_err(usage)?;
    let [poly] = polys.as_slice() else {
        return Err(usage("the polynomial file must hold exactly one polynomial"));
    };
    // The reduction assumes a positive bottom coefficient; negate if needed and record it.
    let bottom = poly.bottom_degree().ok_or_else(|| usage("polynomial must be nonzero"))?;
    let negated = poly.coeff(bottom) < rat(0);
    let oriented = if negated { poly.neg() } else { poly.clone() };
    let ctx = wtrick::WTrickContext::new(&oriented, w).map_err(compute)?;

    let cap = g.budget.min(u64::MAX as f64) as u64;
    let adm_modulus = ctx.big_w.pow(ctx.d - ctx.d_prime);
    let admissible = admissible_json(&ctx, &adm_modulus, cap);
    let hensel: Vec<Value> = patkit_core::primes::primes_up_to(w)
        .into_iter()
        .map(|p| {
            let mut e = 1u32;
            while e < 2 * ctx.d && p.pow(e + 1) <= cap.min(4096) {
                e += 1;
            }
            let q = p.pow(e);
            let reference = UniPoly::monomial(ctx.d_prime, rat(1));
            match wtrick::verify_hensel(&ctx.p_w, &reference, q, cap) {
                Ok(rep) => json!({ "prime": p, "modulus": q, "report": hensel_report_json(&rep) }),
                Err(e) => json!({ "prime": p, "modulus": q, "error": e.to_string() }),
            }
        })
        .collect();

    let mut fields = vec![
        ("d", json!(ctx.d)),
        ("d_prime", json!(ctx.d_prime)),
        ("w", json!(w)),
        ("W", json!(ctx.big_w.to_string())),
        ("lcm_divides_W", json!((&ctx.big_w % lcm_up_to(w)) == BigUint::from(0u32))),
        ("negated_input", json!(negated)),
        ("normalized_p", json!(ctx.p.display_with("y"))),
        ("p_w", json!(ctx.p_w.display_with("y"))),
        ("epsilon", json!(ctx.epsilon)),
        ("scale_substitution", json!(ctx.scale.substitution)),
        ("admissible", admissible),
        ("hensel_checks", json!(hensel)),
        ("z_grid_points", json!(wtrick::Z_GRID_POINTS)),
    ];
    if let Some(n) = n {
        fields.push(("nu_scale", json!(ctx.nu_scale(n))));
        match wtrick::lambda_model_constant_input(&ctx, n) {
            Ok(v) => fields.push((
                "model_ranges",
                json!({
                    "n": n,
                    "y_count": v.y_count,
                    "z_lo": v.z_range.0,
                    "z_hi": v.z_range.1,
                    "nu_mean": v.nu_mean,
                    "nu_sup": v.nu_sup,
                }),
            )),
            Err(WtrickError::EmptyRange(m)) => {
                fields.push(("model_ranges", json!({ "n": n, "empty": m })))
            }
            Err(e) => return Err(compute(e)),
        }
    }
    let config = base_config(
        "wtrick",
        g,
        vec![
            ("poly_file", json!(poly_file.display().to_string())),
            ("w", json!(w)),
            ("n", json!(n)),
        ],
    );
    Ok((config, crate::report::obj(fields)))
}

fn admissible_json(ctx: &wtrick::WTrickContext, modulus: &BigUint, cap: u64) -> Value {
    let modulus_str = modulus.to_string();
    match u64::try_from(modulus).ok() {
        Some(m) if m <= cap => match wtrick::admissible_residues(&ctx.p_w, m.max(1), cap) {
            Ok(res) => {
                let truncated = res.len() > ADMISSIBLE_LIST_CAP;
                json!({
                    "modulus": modulus_str,
                    "count": res.len(),
                    "residues": res.into_iter().take(ADMISSIBLE_LIST_CAP).collect::<Vec<_>>(),
                    "truncated": truncated,
                })
            }
            Err(e) => json!({ "modulus": modulus_str, "skipped": e.to_string() }),
        },
        _ => json!({
            "modulus": modulus_str,
            "skipped": "modulus exceeds the enumeration budget",
        }),
    }
}

// ---------------------------------------------------------------------------
// extremal
// ---------------------------------------------------------------------------

pub fn run_extremal(
    pattern: &Path,
    n: u64,
    greedy_seed: Option<u64>,
    pin_zero: bool,
    check_set: Option<&PathBuf>,
    g: &GlobalOpts,
) -> CmdResult {
    let p = load_pattern(pattern).map_err(usage)?;
    require_prime(n)?;
    if n > extremal::MAX_SEARCH_MODULUS {
        return Err(usage(format!(
            "N = {n} exceeds the search limit {}",
            extremal::MAX_SEARCH_MODULUS
        )));
    }
    let result = if let Some(seed) = greedy_seed {
        extremal::greedy_free(&p, n, seed).map_err(compute)?
    } else {
        let opts = SearchOptions { node_budget: g.budget as u64, pin_zero };
        extremal::max_free_exact(&p, n, &opts).map_err(compute)?
    };
    let mut fields = vec![
        ("modulus", json!(result.modulus)),
        ("pattern", json!(result.pattern)),
        ("r", json!(result.r)),
        ("witness", json!(result.witness)),
        ("nodes_explored", json!(result.nodes_explored)),
        ("exact", json!(result.exact)),
    ];
    if let Some(path) = check_set {
        let a = load_subset(path).map_err(usage)?;
        let counts = counting::count_configs(&p, &a, n).map_err(compute)?;
        fields.push((
            "check_set",
            json!({
                "file": path.display().to_string(),
                "size": a.len(),
                "is_free": counts.nontrivial == 0,
                "total_configs": counts.total,
                "nontrivial_configs": counts.nontrivial,
                "trivial_y_mod": counts.trivial_y_mod,
                "trivial_y_int": counts.trivial_y_int,
            }),
        ));
    }
    let config = base_config(
        "extremal",
        g,
        vec![
            ("pattern_file", json!(pattern.display().to_string())),
            ("n", json!(n)),
            (
                "mode",
                match greedy_seed {
                    Some(s) => json!(format!("greedy:{s}")),
                    None => json!("exact"),
                },
            ),
            ("pin_zero", json!(pin_zero)),
            ("check_set", json!(check_set.map(|p| p.display().to_string()))),
        ],
    );
    Ok((config, crate::report::obj(fields)))
}

// ---------------------------------------------------------------------------
// reproduce
// ---------------------------------------------------------------------------

fn builtin_p1() -> PatternSpec {
    PatternSpec::from_coeffs(&[&[0], &[0, 1], &[0, 2], &[0, 0, 1]], Some("P1".into())).unwrap()
}

fn builtin_p2() -> PatternSpec {
    PatternSpec::from_coeffs(
        &[&[0], &[0, 0, -1], &[0, 0, 1], &[0, 1], &[0, 0, 0, 1], &[0, 1, 0, 1]],
        Some("P2".into()),
    )
    .unwrap()
}

fn kernel_contains(kb: &KernelBasis, p: &PatternSpec, qs: &[&str]) -> Result<(), String> {
    let tuple = patterns::KernelTuple::new(
        p,
        qs.iter()
            .map(|s| parse_unipoly(s, Var::Z).unwrap())
            .collect(),
    )
    .map_err(|e| format!("tuple fails the kernel relation: {e}"))?;
    let k = kb.degree_bound;
    let t = p.len();
    let mut coords = vec![rat(0); t * (k as usize + 1)];
    for (i, q) in tuple.qs().iter().enumerate() {
        for (e, c) in q.terms() {
            coords[e as usize * t + i] = c.clone();
        }
    }
    if linalg::in_span(&kb.coords_matrix(), &coords) {
        Ok(())
    } else {
        Err("tuple is not in the span of the computed basis".into())
    }
}

/// Run the bundled battery of worked examples; one pass/fail line per item.
pub fn run_reproduce(g: &GlobalOpts) -> CmdResult {
    let mut items: Vec<(String, Result<(), String>)> = Vec::new();

    let p_running = PatternSpec::from_coeffs(
        &[&[0, 1], &[0, 2], &[0, 0, 0, 1], &[0, 0, 0, 2]],
        Some("running".into()),
    )
    .unwrap();
    let lp = patterns::linearize(&p_running);
    items.push((
        "linearization of (y, 2y, y^3, 2y^3) reads off coefficient rows".into(),
        {
            let want: Vec<Vec<i64>> = vec![vec![1, 0, 0], vec![2, 0, 0], vec![0, 0, 1], vec![0, 0, 2]];
            let got: Vec<Vec<i64>> = lp
                .coeffs
                .iter()
                .map(|r| r.iter().map(|c| i64::try_from(c).unwrap()).collect())
                .collect();
            if got == want && lp.d == 3 {
                Ok(())
            } else {
                Err(format!("got d = {}, rows {:?}", lp.d, got))
            }
        },
    ));

    let p1 = builtin_p1();
    let (kb1, cls1) = patterns::classify(&p1, 2);
    items.push((
        "kernel of (0, y, 2y, y^2) contains the mixed identity 2x + x^2 - 2(x+y)^2 + (x+2y)^2 = 2(x+y^2)".into(),
        kernel_contains(&kb1, &p1, &["z^2 + 2*z", "-2*z^2", "z^2", "-2*z"]),
    ));
    items.push((
        "(0, y, 2y, y^2) is not homogeneous".into(),
        if !cls1.homogeneous { Ok(()) } else { Err("classified homogeneous".into()) },
    ));
    items.push((
        "classify output for (0, y, 2y, y^2) emits homogeneous = false".into(),
        match classification_result(&p1, 2).get("homogeneous") {
            Some(Value::Bool(false)) => Ok(()),
            other => Err(format!("field was {other:?}")),
        },
    ));

    let p2 = builtin_p2();
    let (_, cls2) = patterns::classify(&p2, 6);
    items.push((
        "(0, -y^2, y^2, y, y^3, y+y^3) is homogeneous but not transferable".into(),
        if cls2.homogeneous && !cls2.transferable {
            Ok(())
        } else {
            Err(format!(
                "homogeneous = {}, transferable = {}",
                cls2.homogeneous, cls2.transferable
            ))
        },
    ));
    items.push((
        "its transfer witness expands to a nonzero multiple of y2^2 - y1*y3".into(),
        match &cls2.witness_expansion {
            Some(e) => {
                let target =
                    patkit_core::poly::parse_multipoly("y2^2 - y1*y3", e.vars().to_vec()).unwrap();
                let c = e.coeff(&[0, 0, 2, 0]);
                if c == rat(0) {
                    Err("no y2^2 term".into())
                } else if *e == target.scale(&c) {
                    Ok(())
                } else {
                    Err(format!("expansion is {e}"))
                }
            }
            None => Err("no witness".into()),
        },
    ));
    items.push((
        "classify output for (0, -y^2, y^2, y, y^3, y+y^3) emits homogeneous = true, transferable = false".into(),
        {
            let v = classification_result(&p2, 6);
            match (v.get("homogeneous"), v.get("transferable")) {
                (Some(Value::Bool(true)), Some(Value::Bool(false))) => Ok(()),
                other => Err(format!("fields were {other:?}")),
            }
        },
    ));

    items.push(("smoothed cutoff is 1 at the center and 0 left of the support".into(), {
        match measure::smoothed_cutoff(0.1, 100) {
            Ok(gd) => {
                if (gd.at(50).re - 1.0).abs() < 1e-15 && gd.at(-11).re == 0.0 {
                    Ok(())
                } else {
                    Err(format!("G(50) = {}, G(-11) = {}", gd.at(50).re, gd.at(-11).re))
                }
            }
            Err(e) => Err(e.to_string()),
        }
    }));

    items.push(("lcm(1..w) divides W for w in {3, 5, 10}".into(), {
        let mut problem = None;
        for (w, d) in [(3u64, 2u32), (5, 3), (10, 4)] {
            match wtrick::compute_w(d, w) {
                Ok(big) => {
                    if (&big % lcm_up_to(w)) != BigUint::from(0u32) {
                        problem = Some(format!("w = {w}, d = {d}"));
                    }
                }
                Err(e) => problem = Some(e.to_string()),
            }
        }
        problem.map_or(Ok(()), Err)
    }));

    items.push(("rescaling y^2 - y^4 gives y^2 - W^2 y^4".into(), {
        let p = parse_unipoly("y^2 - y^4", Var::Y).unwrap();
        match wtrick::WTrickContext::new(&p, 3) {
            Ok(ctx) => {
                let w2 = patkit_core::BigRational::from_integer(
                    patkit_core::BigInt::from(&ctx.big_w * &ctx.big_w),
                );
                let expect = parse_unipoly("y^2", Var::Y)
                    .unwrap()
                    .sub(&UniPoly::monomial(4, w2));
                if ctx.p_w == expect {
                    Ok(())
                } else {
                    Err(format!("P_W = {}", ctx.p_w))
                }
            }
            Err(e) => Err(e.to_string()),
        }
    }));

    items.push(("constant-input model average (the nu mean) lies in (0, 2]".into(), {
        let p = parse_unipoly("y + y^2", Var::Y).unwrap();
        match wtrick::WTrickContext::new(&p, 2)
            .and_then(|ctx| wtrick::lambda_model_constant_input(&ctx, 1 << 20))
        {
            Ok(v) if v.nu_mean > 0.0 && v.nu_mean <= 2.0 => Ok(()),
            Ok(v) => Err(format!("nu mean = {}", v.nu_mean)),
            Err(e) => Err(e.to_string()),
        }
    }));

    let passed = items.iter().filter(|(_, r)| r.is_ok()).count();
    let all_passed = passed == items.len();
    for (name, outcome) in &items {
        match outcome {
            Ok(()) => println!("PASS  {name}"),
            Err(why) => println!("FAIL  {name}: {why}"),
        }
    }
    let result = crate::report::obj(vec![
        ("total", json!(items.len())),
        ("passed", json!(passed)),
        ("all_passed", json!(all_passed)),
        (
            "items",
            json!(items
                .iter()
                .map(|(name, r)| {
                    json!({
                        "name": name,
                        "passed": r.is_ok(),
                        "detail": r.as_ref().err().cloned(),
                    })
                })
                .collect::<Vec<_>>()),
        ),
    ]);
    let config = base_config("reproduce", g, vec![]);
    if all_passed {
        Ok((config, result))
    } else {
        Err(compute(format!("{} of {} items failed", items.len() - passed, items.len())))
    }
}

/// `E_x f_j(x) D_j(x)` used by the stashing checks (exposed for tests).
pub fn pair_against_dual(f: &CyclicFunction, d: &CyclicFunction) -> Complex64 {
    let n = f.modulus();
    (0..n).map(|x| f.get(x) * d.get(x)).sum::<Complex64>() / n as f64
}

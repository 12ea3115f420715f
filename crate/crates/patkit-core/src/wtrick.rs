//! Integer-side machinery for removing small-prime bias from a polynomial `P`:
//! reduction to bottom coefficient 1, the highly divisible modulus `W`, the rescaled
//! polynomial `P_W(y) = W^{-d'} P(W y)`, exact residue-distribution comparisons
//! (Hensel-style), admissible residues, and the weighted counting operators
//! `Lambda_W` and `Lambda_Model`.
//!
//! Conventions fixed here and recorded in reports:
//! - the continuous average `z ~ [1/2, 1]` in `Lambda_W` is a fixed 64-point midpoint grid;
//! - the third factor of `W` uses the integer exponent `ceil(w^{1/3})`;
//! - integer ranges `[A, B]` mean `{floor(A)+1, ..., floor(B)}` and `[X] = {1, ..., floor(X)}`,
//!   with real roots floored.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
// Float supplies f64 math in no_std builds; std's inherent methods shadow it otherwise.
#[allow(unused_imports)]
use num_traits::Float;

use crate::measure::IntFunction;
use crate::poly::{PolyError, UniPoly};
use crate::primes::{factorize, lcm_up_to, primes_up_to};

#[derive(Debug, Clone, PartialEq)]
pub enum WtrickError {
    /// The polynomial must be integral with zero constant term and not identically zero.
    BadPolynomial(String),
    /// `normalize_bottom` requires a positive bottom coefficient (negate the pattern first).
    NonPositiveBottom(BigInt),
    /// The computed `W` fails `lcm(1..w) | W` under the `ceil(w^{1/3})` exponent reading.
    DivisibilityInvariantFailed { w: u64 },
    /// Rescaling produced a non-integer coefficient (caller bug).
    NonIntegralRescale,
    /// Enumeration modulus exceeds the exhaustive budget and no exact certificate applies.
    BudgetExceeded { needed: u64, cap: u64 },
    /// An averaging range came out empty: `N` is too small relative to `W`.
    EmptyRange(String),
    BadInputs(String),
    Poly(PolyError),
}

impl fmt::Display for WtrickError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WtrickError::BadPolynomial(m) => write!(f, "bad polynomial: {m}"),
            WtrickError::NonPositiveBottom(b) => {
                write!(f, "bottom coefficient {b} must be >= 1 (negate the polynomial first)")
            }
            WtrickError::DivisibilityInvariantFailed { w } => {
                write!(f, "lcm(1..{w}) does not divide W under the ceil(w^(1/3)) exponent")
            }
            WtrickError::NonIntegralRescale => write!(f, "rescaled polynomial is not integral"),
            WtrickError::BudgetExceeded { needed, cap } => {
                write!(f, "modulus {needed} exceeds the exhaustive enumeration cap {cap}")
            }
            WtrickError::EmptyRange(m) => write!(f, "empty averaging range: {m}"),
            WtrickError::BadInputs(m) => write!(f, "bad inputs: {m}"),
            WtrickError::Poly(e) => write!(f, "{e}"),
        }
    }
}

impl From<PolyError> for WtrickError {
    fn from(e: PolyError) -> Self {
        WtrickError::Poly(e)
    }
}

/// Record of the bottom-normalization substitution, for report traceability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaleRecord {
    pub bottom_coeff: BigInt,
    pub substitution: String,
}

fn validate_poly(p: &UniPoly) -> Result<(u32, u32), WtrickError> {
    if !p.has_integer_coeffs() {
        return Err(WtrickError::BadPolynomial("coefficients must be integers".into()));
    }
    if p.is_zero() {
        return Err(WtrickError::BadPolynomial("polynomial is zero".into()));
    }
    if !p.coeff(0).is_zero() {
        return Err(WtrickError::BadPolynomial("constant term must vanish".into()));
    }
    Ok((p.degree().unwrap(), p.bottom_degree().unwrap()))
}

/// Replace `P` by `b^{-d'-1} P(b y)` where `b >= 1` is the bottom coefficient; the result
/// is integral with bottom coefficient exactly 1.
pub fn normalize_bottom(p: &UniPoly) -> Result<(UniPoly, ScaleRecord), WtrickError> {
    let (_, d_prime) = validate_poly(p)?;
    let b = p.coeff(d_prime);
    if !b.is_positive() {
        return Err(WtrickError::NonPositiveBottom(b.to_integer()));
    }
    let scaled = p
        .substitute_scaled_var(&b)
        .scale(&pow_rational_inv(&b, d_prime + 1));
    debug_assert!(scaled.has_integer_coeffs());
    debug_assert!(scaled.coeff(d_prime).is_one());
    let record = ScaleRecord {
        bottom_coeff: b.to_integer(),
        substitution: format!(
            "P(y) -> {}^-{} * P({} y)",
            b.to_integer(),
            d_prime + 1,
            b.to_integer()
        ),
    };
    Ok((scaled, record))
}

fn pow_rational_inv(b: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc /= b;
    }
    acc
}

/// Smallest integer `e` with `e^3 >= w` (the integer reading of the exponent `w^{1/3}`).
fn ceil_cbrt(w: u64) -> u32 {
    let mut e = 1u32;
    while (e as u128).pow(3) < w as u128 {
        e += 1;
    }
    e
}

/// The W-trick modulus: product of primes `p <= w` coprime to `d`, times `p^{2d}` over
/// primes `p <= w` dividing `d!` (equivalently `p <= d`), times `p^{ceil(w^{1/3})}` over
/// primes `p <= sqrt(w)`. Verifies `lcm(1..w) | W` before returning.
pub fn compute_w(d: u32, w: u64) -> Result<BigUint, WtrickError> {
    assert!(w > 1, "threshold w must exceed 1");
    assert!(d >= 1);
    let mut acc = BigUint::one();
    for p in primes_up_to(w) {
        if d as u64 % p != 0 {
            acc *= BigUint::from(p);
        }
        // For prime p, gcd(p, d!) != 1 exactly when p <= d.
        if p <= d as u64 {
            acc *= BigUint::from(p).pow(2 * d);
        }
        if p * p <= w {
            acc *= BigUint::from(p).pow(ceil_cbrt(w));
        }
    }
    let l = lcm_up_to(w);
    if (&acc % &l) != BigUint::zero() {
        return Err(WtrickError::DivisibilityInvariantFailed { w });
    }
    Ok(acc)
}

/// `P_W(y) = W^{-d'} P(W y)`; requires bottom coefficient 1, asserts integrality.
pub fn rescale(p: &UniPoly, big_w: &BigUint) -> Result<UniPoly, WtrickError> {
    let (_, d_prime) = validate_poly(p)?;
    if !p.coeff(d_prime).is_one() {
        return Err(WtrickError::BadPolynomial("bottom coefficient must be 1 (normalize first)".into()));
    }
    let w_rat = BigRational::from_integer(BigInt::from(big_w.clone()));
    let out = p
        .substitute_scaled_var(&w_rat)
        .scale(&pow_rational_inv(&w_rat, d_prime));
    if !out.has_integer_coeffs() {
        return Err(WtrickError::NonIntegralRescale);
    }
    Ok(out)
}

/// Everything needed to evaluate the weighted operators for one polynomial `P` and
/// threshold `w`.
#[derive(Debug, Clone)]
pub struct WTrickContext {
    /// Normalized polynomial (bottom coefficient 1).
    pub p: UniPoly,
    pub d: u32,
    pub d_prime: u32,
    pub w: u64,
    pub big_w: BigUint,
    pub p_w: UniPoly,
    /// Sign of the leading coefficient.
    pub epsilon: i8,
    pub scale: ScaleRecord,
}

impl WTrickContext {
    pub fn new(p_raw: &UniPoly, w: u64) -> Result<Self, WtrickError> {
        let (p, scale) = normalize_bottom(p_raw)?;
        let (d, d_prime) = validate_poly(&p)?;
        let big_w = compute_w(d, w)?;
        let p_w = rescale(&p, &big_w)?;
        let epsilon = if p.coeff(d).is_positive() { 1 } else { -1 };
        Ok(WTrickContext { p, d, d_prime, w, big_w, p_w, epsilon, scale })
    }

    /// `|b_d|`, the absolute leading coefficient of the normalized `P`.
    pub fn abs_leading(&self) -> BigUint {
        self.p.coeff(self.d).to_integer().magnitude().clone()
    }

    /// The archimedean weight scale `(d'/d) (N/W^2)^{(d-d')/(2dd')}` for a given `N`.
    pub fn nu_scale(&self, n: u64) -> f64 {
        let d = self.d as f64;
        let dp = self.d_prime as f64;
        let w2 = big_to_f64(&(&self.big_w * &self.big_w));
        (dp / d) * (n as f64 / w2).powf((d - dp) / (2.0 * d * dp))
    }

    /// `nu(y) = nu_scale * y^{-(d-d')/d}`.
    pub fn nu(&self, n: u64, y: u64) -> f64 {
        let d = self.d as f64;
        let dp = self.d_prime as f64;
        self.nu_scale(n) * (y as f64).powf(-(d - dp) / d)
    }
}

fn big_to_f64(b: &BigUint) -> f64 {
    b.to_f64().unwrap_or(f64::INFINITY)
}

// ---------------------------------------------------------------------------
// Residue distributions and Hensel checks
// ---------------------------------------------------------------------------

/// Counts of `Q(y) mod q` over a full period `y in [q]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueDistribution {
    pub modulus: u64,
    pub counts: Vec<u64>,
}

impl ResidueDistribution {
    pub fn is_uniform(&self) -> bool {
        self.counts.iter().all(|&c| c == self.counts[0])
    }
}

pub const DEFAULT_EXHAUSTIVE_BUDGET: u64 = 1 << 22;

/// Exhaustive residue counts of `Q(y) mod q` for `y` over one period.
pub fn distribution_mod(q_poly: &UniPoly, q: u64, cap: u64) -> Result<ResidueDistribution, WtrickError> {
    if q < 1 {
        return Err(WtrickError::BadInputs("modulus must be >= 1".into()));
    }
    if q > cap {
        return Err(WtrickError::BudgetExceeded { needed: q, cap });
    }
    let mut counts = vec![0u64; q as usize];
    for y in 0..q {
        let v = q_poly.eval_mod(y, q)?;
        counts[v as usize] += 1;
    }
    Ok(ResidueDistribution { modulus: q, counts })
}

/// Per-prime-power piece of a Hensel verification.
#[derive(Debug, Clone)]
pub struct HenselPrimeReport {
    pub prime: u64,
    pub exponent: u32,
    pub hypotheses_met: bool,
    pub notes: Vec<String>,
    pub equal: bool,
    /// "exhaustive" or "coefficient-congruence".
    pub method: &'static str,
    /// First differing residue `(residue, count_q, count_ref)` if unequal.
    pub first_diff: Option<(u64, u64, u64)>,
}

/// Outcome of comparing the distributions of `Q` and a reference monomial mod `q`.
#[derive(Debug, Clone)]
pub struct HenselReport {
    pub modulus: u64,
    pub equal: bool,
    pub hypotheses_met: bool,
    pub per_prime: Vec<HenselPrimeReport>,
}

/// Compare the residue distributions of `Q` and `reference` modulo `q`, exactly.
///
/// The hypothesis check (coprime bottom coefficient, divisibility of the higher
/// coefficients, the `p^{2d}` strengthening for small primes, congruence of the reference
/// coefficient) is reported separately; the distribution comparison runs regardless.
/// Equality mod `q` is decided per prime power (the distribution mod `q` is the product
/// of its prime-power marginals); each prime power is enumerated exhaustively when it
/// fits the cap, and otherwise certified by coefficientwise congruence when applicable.
pub fn verify_hensel(
    q_poly: &UniPoly,
    reference: &UniPoly,
    q: u64,
    cap: u64,
) -> Result<HenselReport, WtrickError> {
    if q < 1 {
        return Err(WtrickError::BadInputs("modulus must be >= 1".into()));
    }
    let q_terms = q_poly.int_terms()?;
    let ref_terms = reference.int_terms()?;
    let mut per_prime = Vec::new();
    for (p, k) in factorize(q) {
        let pk = p.pow(k);
        let (hypotheses_met, notes) = check_hensel_hypotheses(&q_terms, &ref_terms, p);
        let (equal, method, first_diff) = if pk <= cap {
            let da = distribution_mod(q_poly, pk, cap)?;
            let db = distribution_mod(reference, pk, cap)?;
            let diff = da
                .counts
                .iter()
                .zip(&db.counts)
                .enumerate()
                .find(|(_, (a, b))| a != b)
                .map(|(r, (&a, &b))| (r as u64, a, b));
            (diff.is_none(), "exhaustive", diff)
        } else if congruent_mod(&q_terms, &ref_terms, pk) {
            (true, "coefficient-congruence", None)
        } else {
            return Err(WtrickError::BudgetExceeded { needed: pk, cap });
        };
        per_prime.push(HenselPrimeReport {
            prime: p,
            exponent: k,
            hypotheses_met,
            notes,
            equal,
            method,
            first_diff,
        });
    }
    Ok(HenselReport {
        modulus: q,
        equal: per_prime.iter().all(|r| r.equal),
        hypotheses_met: per_prime.iter().all(|r| r.hypotheses_met),
        per_prime,
    })
}

/// `Q == reference` coefficientwise mod `m` (an exact certificate of equal distributions).
fn congruent_mod(q_terms: &[(u32, BigInt)], ref_terms: &[(u32, BigInt)], m: u64) -> bool {
    let m = BigInt::from(m);
    let top = q_terms
        .iter()
        .chain(ref_terms)
        .map(|&(e, _)| e)
        .max()
        .unwrap_or(0);
    (0..=top).all(|e| {
        let a = q_terms.iter().find(|&&(t, _)| t == e).map(|(_, c)| c.mod_floor(&m)).unwrap_or_default();
        let b = ref_terms.iter().find(|&&(t, _)| t == e).map(|(_, c)| c.mod_floor(&m)).unwrap_or_default();
        a == b
    })
}

fn check_hensel_hypotheses(
    q_terms: &[(u32, BigInt)],
    ref_terms: &[(u32, BigInt)],
    p: u64,
) -> (bool, Vec<String>) {
    let mut notes = Vec::new();
    let mut ok = true;
    let p_big = BigInt::from(p);

    // Reference must be a single monomial c~ y^r.
    let (r, c_tilde) = match ref_terms {
        [(r, c)] => (*r, c.clone()),
        _ => {
            notes.push("reference is not a single monomial".into());
            return (false, notes);
        }
    };
    let d = q_terms.iter().map(|&(e, _)| e).max().unwrap_or(0);
    let strengthened = p <= d as u64; // gcd(p, d!) != 1 for prime p
    let modulus = if strengthened { p_big.pow(2 * d) } else { p_big.clone() };

    let Some((_, c_r)) = q_terms.iter().find(|&&(e, _)| e == r) else {
        notes.push(format!("Q has no y^{r} term"));
        return (false, notes);
    };
    if q_terms.iter().any(|&(e, _)| e < r) {
        ok = false;
        notes.push(format!("Q has terms below degree {r}"));
    }
    if c_r.gcd(&p_big) != BigInt::one() {
        ok = false;
        notes.push(format!("bottom coefficient {c_r} is divisible by {p}"));
    }
    for (e, c) in q_terms.iter().filter(|&&(e, _)| e > r) {
        if !c.mod_floor(&modulus).is_zero() {
            ok = false;
            notes.push(format!("coefficient of y^{e} is not divisible by {modulus}"));
        }
    }
    if !(c_tilde.clone() - c_r).mod_floor(&modulus).is_zero() {
        ok = false;
        notes.push(format!("reference coefficient {c_tilde} is not congruent to {c_r} mod {modulus}"));
    }
    (ok, notes)
}

/// The set `{ P_W(y) mod m : y in [m] }`, sorted.
pub fn admissible_residues(p_w: &UniPoly, m: u64, cap: u64) -> Result<Vec<u64>, WtrickError> {
    if m < 1 {
        return Err(WtrickError::BadInputs("modulus must be >= 1".into()));
    }
    if m > cap {
        return Err(WtrickError::BudgetExceeded { needed: m, cap });
    }
    let mut seen = vec![false; m as usize];
    for y in 0..m {
        seen[p_w.eval_mod(y, m)? as usize] = true;
    }
    Ok(seen
        .iter()
        .enumerate()
        .filter_map(|(r, &s)| if s { Some(r as u64) } else { None })
        .collect())
}

// ---------------------------------------------------------------------------
// Weighted counting operators
// ---------------------------------------------------------------------------

/// Number of grid points discretizing the continuous `z ~ [1/2, 1]` average.
pub const Z_GRID_POINTS: u32 = 64;

#[derive(Debug, Clone)]
pub struct LambdaWValue {
    pub value: Complex64,
    pub z_grid: u32,
    /// Smallest and largest `y`-range bounds `M_z` over the grid.
    pub m_range: (u64, u64),
}

#[derive(Debug, Clone)]
pub struct LambdaModelValue {
    pub value: Complex64,
    /// Mean and sup of the weight `nu` over the `y` range (the trivial bound on `|value|`
    /// for one-bounded inputs is the mean).
    pub nu_mean: f64,
    pub nu_sup: f64,
    pub y_count: u64,
    pub z_range: (i64, i64),
}

fn check_lambda_inputs(fs: &[IntFunction], a: &[i64]) -> Result<(), WtrickError> {
    if fs.len() != a.len() || fs.is_empty() {
        return Err(WtrickError::BadInputs("need one shift coefficient per function".into()));
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a[i] == a[j] {
                return Err(WtrickError::BadInputs(format!("shift coefficients must be distinct (a[{i}] = a[{j}])")));
            }
        }
    }
    Ok(())
}

/// Largest integer `m >= 0` with `m^d <= v`.
fn floor_root(v: f64, d: u32) -> u64 {
    if v < 1.0 {
        return 0;
    }
    let mut m = v.powf(1.0 / d as f64).floor() as u64;
    while ((m + 1) as f64).powi(d as i32) <= v {
        m += 1;
    }
    while m > 0 && (m as f64).powi(d as i32) > v {
        m -= 1;
    }
    m
}

/// `Lambda_W(f_1..f_t) = E_{z ~ [1/2,1]} E_{x in [N], y in [M_z]} prod_i f_i(x + a_i P_W(y))`
/// with `M_z = floor((z N / (|b_d| W^{d-d'}))^{1/d})`; the `z` average runs over the fixed
/// 64-point midpoint grid.
pub fn lambda_w(
    ctx: &WTrickContext,
    fs: &[IntFunction],
    a: &[i64],
    n: u64,
) -> Result<LambdaWValue, WtrickError> {
    check_lambda_inputs(fs, a)?;
    let denom = big_to_f64(&(self_pow(&ctx.big_w, ctx.d - ctx.d_prime) * ctx.abs_leading()));
    let m_at = |z: f64| floor_root(z * n as f64 / denom, ctx.d);
    let m_max = m_at(1.0);
    let m_min = m_at(0.5 + 0.5 / (2.0 * Z_GRID_POINTS as f64));
    if m_min < 1 {
        return Err(WtrickError::EmptyRange(format!(
            "no y with y^{} <= z N / (|b_d| W^(d-d')) at N = {n}, W = {}; \
             the operators need N to exceed a fixed power of W",
            ctx.d, ctx.big_w
        )));
    }
    // Inner x-sums per y, shared across the z grid.
    let s: Vec<Complex64> = (1..=m_max)
        .map(|y| {
            let shift = eval_bigint(&ctx.p_w, y);
            inner_x_sum(fs, a, n, &shift)
        })
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..Z_GRID_POINTS {
        let z = 0.5 + (2 * j + 1) as f64 * (0.5 / (2.0 * Z_GRID_POINTS as f64));
        let m_z = m_at(z).min(m_max).max(1);
        let sum: Complex64 = s[..m_z as usize].iter().sum();
        acc += sum / (n as f64 * m_z as f64);
    }
    Ok(LambdaWValue {
        value: acc / Z_GRID_POINTS as f64,
        z_grid: Z_GRID_POINTS,
        m_range: (m_min, m_max),
    })
}

fn self_pow(b: &BigUint, e: u32) -> BigUint {
    b.pow(e)
}

fn eval_bigint(p: &UniPoly, y: u64) -> BigInt {
    p.eval_rational(&BigRational::from_integer(BigInt::from(y))).to_integer()
}

/// `sum_{x in [N]} prod_i f_i(x + a_i * shift)`.
fn inner_x_sum(fs: &[IntFunction], a: &[i64], n: u64, shift: &BigInt) -> Complex64 {
    let mut offsets = Vec::with_capacity(fs.len());
    for (f, &ai) in fs.iter().zip(a) {
        let Some((lo, hi)) = f.support() else {
            return Complex64::new(0.0, 0.0);
        };
        let o = shift * BigInt::from(ai);
        match o.to_i64() {
            // Skip when [1, N] + o misses the support entirely.
            Some(v) if v.saturating_add(1) <= hi && v.saturating_add(n as i64) >= lo => {
                offsets.push(v)
            }
            _ => return Complex64::new(0.0, 0.0),
        }
    }
    let mut total = Complex64::new(0.0, 0.0);
    for x in 1..=n as i64 {
        let mut prod = Complex64::new(1.0, 0.0);
        for (f, &o) in fs.iter().zip(&offsets) {
            prod *= f.at(x + o);
            if prod.norm_sqr() == 0.0 {
                break;
            }
        }
        total += prod;
    }
    total
}

/// `Lambda_Model = E_{x in [N], y in [(N/W^2)^{1/(2d')}], z in (sqrt(N)/2, sqrt(N)]}
///   nu(y) prod_i f_i(x + a_i (eps z W + 1) y^{d'})`.
pub fn lambda_model(
    ctx: &WTrickContext,
    fs: &[IntFunction],
    a: &[i64],
    n: u64,
) -> Result<LambdaModelValue, WtrickError> {
    check_lambda_inputs(fs, a)?;
    let w2 = big_to_f64(&(&ctx.big_w * &ctx.big_w));
    let y_max = floor_root(n as f64 / w2, 2 * ctx.d_prime);
    if y_max < 1 {
        return Err(WtrickError::EmptyRange(format!(
            "no y with y^(2d') <= N / W^2 at N = {n}, W = {}; \
             the operators need N to exceed a fixed power of W",
            ctx.big_w
        )));
    }
    let sqrt_n = floor_root(n as f64, 2) as i64;
    let z_lo = floor_root(n as f64 / 4.0, 2) as i64 + 1;
    let z_hi = sqrt_n;
    if z_lo > z_hi {
        return Err(WtrickError::EmptyRange(format!("no z in (sqrt(N)/2, sqrt(N)] at N = {n}")));
    }
    let w_int = BigInt::from(ctx.big_w.clone());

    let mut acc = Complex64::new(0.0, 0.0);
    let mut nu_mean = 0.0;
    let mut nu_sup: f64 = 0.0;
    for y in 1..=y_max {
        let nu = ctx.nu(n, y);
        nu_mean += nu;
        nu_sup = nu_sup.max(nu);
        let y_pow = BigInt::from(y).pow(ctx.d_prime);
        let mut z_acc = Complex64::new(0.0, 0.0);
        for z in z_lo..=z_hi {
            // (eps z W + 1) y^{d'}
            let shift = (&w_int * BigInt::from(ctx.epsilon as i64 * z) + BigInt::one()) * &y_pow;
            z_acc += inner_x_sum(fs, a, n, &shift);
        }
        acc += z_acc * nu;
    }
    let count = n as f64 * y_max as f64 * (z_hi - z_lo + 1) as f64;
    Ok(LambdaModelValue {
        value: acc / count,
        nu_mean: nu_mean / y_max as f64,
        nu_sup,
        y_count: y_max,
        z_range: (z_lo, z_hi),
    })
}

/// `Lambda_Model` specialized to constant inputs `f_i = 1` on all of `Z`:
/// every product is 1, so the value is exactly the empirical mean of `nu` over
/// the `y` range. This is the cheap route to the weight statistics at large `N`.
pub fn lambda_model_constant_input(ctx: &WTrickContext, n: u64) -> Result<LambdaModelValue, WtrickError> {
    let w2 = big_to_f64(&(&ctx.big_w * &ctx.big_w));
    let y_max = floor_root(n as f64 / w2, 2 * ctx.d_prime);
    if y_max < 1 {
        return Err(WtrickError::EmptyRange(format!(
            "no y with y^(2d') <= N / W^2 at N = {n}, W = {}; \
             the operators need N to exceed a fixed power of W",
            ctx.big_w
        )));
    }
    let sqrt_n = floor_root(n as f64, 2) as i64;
    let z_lo = floor_root(n as f64 / 4.0, 2) as i64 + 1;
    if z_lo > sqrt_n {
        return Err(WtrickError::EmptyRange(format!("no z in (sqrt(N)/2, sqrt(N)] at N = {n}")));
    }
    let mut nu_mean = 0.0;
    let mut nu_sup: f64 = 0.0;
    for y in 1..=y_max {
        let nu = ctx.nu(n, y);
        nu_mean += nu;
        nu_sup = nu_sup.max(nu);
    }
    nu_mean /= y_max as f64;
    Ok(LambdaModelValue {
        value: Complex64::new(nu_mean, 0.0),
        nu_mean,
        nu_sup,
        y_count: y_max,
        z_range: (z_lo, sqrt_n),
    })
}

//! Counting operators on `Z/NZ` (`N` prime): the polynomial average
//! `Lambda_P = E_{x,y} prod_i f_i(x + P_i(y))`, its linearized analogue
//! `Lambda_P* = E_{x, y_1..y_d} prod_i f_i(x + P_i*(y_vec))`, the gap between them,
//! dual functions, and exact configuration counts inside subsets.
//!
//! The linear operator has two exact evaluation routes that must agree: direct
//! enumeration of the `(d+1)`-fold average, and a Fourier route summing
//! `prod_i fhat_i(xi_i)` over the annihilator subgroup
//! `{xi : sum_i xi_i = 0, sum_i L[i][j] xi_i = 0 for all j}` enumerated from a
//! nullspace basis over the field of `N` elements.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use num_complex::Complex64;
// Float supplies f64 math in no_std builds; std's inherent methods shadow it otherwise.
#[allow(unused_imports)]
use num_traits::Float;

use crate::cyclic::{dft, CyclicFunction};
use crate::patterns::{linearize, LinearizedPattern, PatternSpec};
use crate::poly::bigint_mod;
use crate::primes::is_prime;
use crate::rng::CounterRng;

#[derive(Debug, Clone, PartialEq)]
pub enum CountError {
    /// The counting operators are defined for prime modulus only.
    NonPrimeModulus(u64),
    ModulusMismatch { expected: u64, got: u64 },
    ArityMismatch { expected: usize, got: usize },
    IndexOutOfRange { index: usize, len: usize },
}

impl fmt::Display for CountError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountError::NonPrimeModulus(n) => {
                write!(f, "modulus {n} is not prime; the counting operators require a prime modulus")
            }
            CountError::ModulusMismatch { expected, got } => {
                write!(f, "function modulus {got} does not match N = {expected}")
            }
            CountError::ArityMismatch { expected, got } => {
                write!(f, "pattern has {expected} polynomials but {got} functions were given")
            }
            CountError::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for {len} functions")
            }
        }
    }
}

/// Requested evaluation strategy for the linear operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearMethod {
    Auto,
    Direct,
    Fourier,
}

/// Strategy actually used.
#[derive(Debug, Clone, PartialEq)]
pub enum MethodUsed {
    Direct,
    FourierNullspace,
    Sampled { samples: u64, stderr: f64 },
}

impl MethodUsed {
    pub fn label(&self) -> String {
        match self {
            MethodUsed::Direct => "direct".into(),
            MethodUsed::FourierNullspace => "fourier-nullspace".into(),
            MethodUsed::Sampled { samples, stderr } => format!("sampled({samples}, {stderr:.3e})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CountOptions {
    pub method: LinearMethod,
    /// Cap on exact enumeration sizes (number of inner terms).
    pub budget: f64,
    /// Monte Carlo size when both exact routes exceed the budget.
    pub samples: u64,
    pub seed: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { method: LinearMethod::Auto, budget: 1e9, samples: 200_000, seed: 0 }
    }
}

/// Outcome of a transfer-gap evaluation.
#[derive(Debug, Clone)]
pub struct CountingReport {
    pub modulus: u64,
    pub pattern: Option<String>,
    pub lambda_poly: Complex64,
    pub lambda_linear: Complex64,
    /// `|lambda_poly - lambda_linear|`.
    pub gap: f64,
    pub linear_method: MethodUsed,
    /// Wall-clock seconds, filled by callers with a clock; 0 here.
    pub elapsed_seconds: f64,
}

fn check_prime(n: u64) -> Result<(), CountError> {
    if is_prime(n) {
        Ok(())
    } else {
        Err(CountError::NonPrimeModulus(n))
    }
}

fn check_functions(t: usize, fs: &[CyclicFunction], n: u64) -> Result<(), CountError> {
    if fs.len() != t {
        return Err(CountError::ArityMismatch { expected: t, got: fs.len() });
    }
    for f in fs {
        if f.modulus() as u64 != n {
            return Err(CountError::ModulusMismatch { expected: n, got: f.modulus() as u64 });
        }
    }
    Ok(())
}

/// `E_{x,y in Z/NZ} prod_i f_i(x + P_i(y))` by exact double enumeration.
pub fn lambda_poly(p: &PatternSpec, fs: &[CyclicFunction], n: u64) -> Result<Complex64, CountError> {
    check_prime(n)?;
    check_functions(p.len(), fs, n)?;
    let nn = n as usize;
    let shifts = poly_shift_table(p, n);
    let mut total = Complex64::new(0.0, 0.0);
    for y in 0..nn {
        for x in 0..nn {
            let mut prod = Complex64::new(1.0, 0.0);
            for (i, f) in fs.iter().enumerate() {
                prod *= f.get(x + shifts[i][y]);
                if prod.norm_sqr() == 0.0 {
                    break;
                }
            }
            total += prod;
        }
    }
    Ok(total / (n as f64 * n as f64))
}

/// `shifts[i][y] = P_i(y) mod N`.
fn poly_shift_table(p: &PatternSpec, n: u64) -> Vec<Vec<usize>> {
    p.polys()
        .iter()
        .map(|poly| {
            (0..n)
                .map(|y| poly.eval_mod(y, n).expect("pattern coefficients are integers") as usize)
                .collect()
        })
        .collect()
}

/// `E_{x, y_1..y_d} prod_i f_i(x + P_i*(y_vec))`, with the method chosen per the options.
pub fn lambda_linear(
    lp: &LinearizedPattern,
    fs: &[CyclicFunction],
    n: u64,
    opts: &CountOptions,
) -> Result<(Complex64, MethodUsed), CountError> {
    check_prime(n)?;
    check_functions(lp.t(), fs, n)?;
    let t = lp.t();
    let d = lp.d as usize;

    // Annihilator subgroup: sum_i xi_i = 0 and sum_i L[i][j] xi_i = 0 for every j.
    let mut constraint: Vec<Vec<u64>> = vec![vec![1; t]];
    for j in 0..d {
        constraint.push((0..t).map(|i| bigint_mod(&lp.coeffs[i][j], n)).collect());
    }
    let null = fp_nullspace(&constraint, t, n);
    let fourier_cost = (n as f64).powi(null.len() as i32) * t as f64;
    let direct_cost = (n as f64).powi(d as i32 + 1) * t as f64;

    let method = match opts.method {
        LinearMethod::Fourier => LinearMethod::Fourier,
        LinearMethod::Direct => LinearMethod::Direct,
        LinearMethod::Auto => {
            if fourier_cost <= opts.budget {
                LinearMethod::Fourier
            } else if direct_cost <= opts.budget {
                LinearMethod::Direct
            } else {
                return Ok(lambda_linear_sampled(lp, fs, n, opts));
            }
        }
    };
    match method {
        LinearMethod::Fourier => {
            let value = lambda_linear_fourier(&null, fs, n);
            Ok((value, MethodUsed::FourierNullspace))
        }
        LinearMethod::Direct => {
            let value = lambda_linear_direct(lp, fs, n);
            Ok((value, MethodUsed::Direct))
        }
        LinearMethod::Auto => unreachable!(),
    }
}

fn lambda_linear_fourier(null: &[Vec<u64>], fs: &[CyclicFunction], n: u64) -> Complex64 {
    let t = fs.len();
    let hats: Vec<CyclicFunction> = fs.iter().map(dft).collect();
    let nu = null.len();
    let mut total = Complex64::new(0.0, 0.0);
    let mut params = vec![0u64; nu];
    loop {
        let mut xi = vec![0u64; t];
        for (b, &c) in null.iter().zip(&params) {
            if c != 0 {
                for (xij, &bj) in xi.iter_mut().zip(b) {
                    *xij = (*xij + c * bj) % n;
                }
            }
        }
        let mut prod = Complex64::new(1.0, 0.0);
        for (hat, &x) in hats.iter().zip(&xi) {
            prod *= hat.get(x as usize);
            if prod.norm_sqr() == 0.0 {
                break;
            }
        }
        total += prod;
        // Odometer over the free parameters.
        let mut i = 0;
        loop {
            if i == nu {
                return total;
            }
            params[i] += 1;
            if params[i] < n {
                break;
            }
            params[i] = 0;
            i += 1;
        }
    }
}

fn lambda_linear_direct(lp: &LinearizedPattern, fs: &[CyclicFunction], n: u64) -> Complex64 {
    let t = lp.t();
    let d = lp.d as usize;
    let nn = n as usize;
    let coeffs: Vec<Vec<u64>> = (0..t)
        .map(|i| (0..d).map(|j| bigint_mod(&lp.coeffs[i][j], n)).collect())
        .collect();
    let mut ys = vec![0u64; d];
    let mut total = Complex64::new(0.0, 0.0);
    loop {
        let args: Vec<usize> = (0..t)
            .map(|i| {
                let mut s = 0u64;
                for (c, &y) in coeffs[i].iter().zip(&ys) {
                    s = (s + c * y) % n;
                }
                s as usize
            })
            .collect();
        for x in 0..nn {
            let mut prod = Complex64::new(1.0, 0.0);
            for (i, f) in fs.iter().enumerate() {
                prod *= f.get(x + args[i]);
                if prod.norm_sqr() == 0.0 {
                    break;
                }
            }
            total += prod;
        }
        let mut i = 0;
        loop {
            if i == d {
                return total / (n as f64).powi(d as i32 + 1);
            }
            ys[i] += 1;
            if ys[i] < n {
                break;
            }
            ys[i] = 0;
            i += 1;
        }
    }
}

fn lambda_linear_sampled(
    lp: &LinearizedPattern,
    fs: &[CyclicFunction],
    n: u64,
    opts: &CountOptions,
) -> (Complex64, MethodUsed) {
    let t = lp.t();
    let d = lp.d as usize;
    let coeffs: Vec<Vec<u64>> = (0..t)
        .map(|i| (0..d).map(|j| bigint_mod(&lp.coeffs[i][j], n)).collect())
        .collect();
    let mut rng = CounterRng::new(opts.seed, 0x4c4e);
    let mut mean = Complex64::new(0.0, 0.0);
    let mut m2 = 0.0;
    for s in 0..opts.samples {
        let x = rng.next_below(n) as usize;
        let ys: Vec<u64> = (0..d).map(|_| rng.next_below(n)).collect();
        let mut prod = Complex64::new(1.0, 0.0);
        for (i, f) in fs.iter().enumerate() {
            let mut a = 0u64;
            for (c, &y) in coeffs[i].iter().zip(&ys) {
                a = (a + c * y) % n;
            }
            prod *= f.get(x + a as usize);
        }
        let delta = prod - mean;
        mean += delta / (s + 1) as f64;
        m2 += delta.norm_sqr() * (s as f64 / (s + 1) as f64);
    }
    let var = if opts.samples > 1 { m2 / (opts.samples - 1) as f64 } else { 0.0 };
    let stderr = (var / opts.samples as f64).sqrt();
    (mean, MethodUsed::Sampled { samples: opts.samples, stderr })
}

/// Run both operators and report the gap.
pub fn transfer_gap(
    p: &PatternSpec,
    fs: &[CyclicFunction],
    n: u64,
    opts: &CountOptions,
) -> Result<CountingReport, CountError> {
    let lp = linearize(p);
    let poly = lambda_poly(p, fs, n)?;
    let (linear, method) = lambda_linear(&lp, fs, n, opts)?;
    Ok(CountingReport {
        modulus: n,
        pattern: p.name.clone(),
        lambda_poly: poly,
        lambda_linear: linear,
        gap: (poly - linear).norm(),
        linear_method: method,
        elapsed_seconds: 0.0,
    })
}

/// Dual function at slot `j`:
/// `D_j(x) = E_y prod_{i != j} f_i(x + P_i(y) - P_j(y))
///          - E_{y_vec} prod_{i != j} f_i(x + P_i*(y_vec) - P_j*(y_vec))`.
pub fn dual_function(
    p: &PatternSpec,
    fs: &[CyclicFunction],
    n: u64,
    j: usize,
    opts: &CountOptions,
) -> Result<CyclicFunction, CountError> {
    check_prime(n)?;
    check_functions(p.len(), fs, n)?;
    let t = p.len();
    if j >= t {
        return Err(CountError::IndexOutOfRange { index: j, len: t });
    }
    let nn = n as usize;
    let shifts = poly_shift_table(p, n);

    // Polynomial side, direct O(N^2 t).
    let mut poly_part = vec![Complex64::new(0.0, 0.0); nn];
    for y in 0..nn {
        let base = shifts[j][y];
        for (x, slot) in poly_part.iter_mut().enumerate() {
            let mut prod = Complex64::new(1.0, 0.0);
            for (i, f) in fs.iter().enumerate() {
                if i == j {
                    continue;
                }
                prod *= f.get(x + shifts[i][y] + nn - base);
                if prod.norm_sqr() == 0.0 {
                    break;
                }
            }
            *slot += prod;
        }
    }
    for v in poly_part.iter_mut() {
        *v /= n as f64;
    }

    // Linear side with the difference forms P_i* - P_j*.
    let lp = linearize(p);
    let d = lp.d as usize;
    let diff_coeffs: Vec<Vec<u64>> = (0..t)
        .filter(|&i| i != j)
        .map(|i| {
            (0..d)
                .map(|m| {
                    let diff = &lp.coeffs[i][m] - &lp.coeffs[j][m];
                    bigint_mod(&diff, n)
                })
                .collect()
        })
        .collect();
    let others: Vec<&CyclicFunction> = fs.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, f)| f).collect();

    let fourier_cost = {
        let null = fp_nullspace(&transpose_rows(&diff_coeffs, d), t - 1, n);
        (n as f64).powi(null.len() as i32) * t as f64
    };
    let linear_part = if matches!(opts.method, LinearMethod::Fourier)
        || (matches!(opts.method, LinearMethod::Auto) && fourier_cost <= opts.budget)
    {
        dual_linear_fourier(&diff_coeffs, &others, n)
    } else {
        dual_linear_direct(&diff_coeffs, &others, n)
    };

    Ok(CyclicFunction::from_fn(nn, |x| poly_part[x] - linear_part[x]))
}

fn transpose_rows(rows: &[Vec<u64>], d: usize) -> Vec<Vec<u64>> {
    (0..d).map(|m| rows.iter().map(|r| r[m]).collect()).collect()
}

fn dual_linear_direct(diff_coeffs: &[Vec<u64>], others: &[&CyclicFunction], n: u64) -> Vec<Complex64> {
    let d = diff_coeffs.first().map_or(0, Vec::len);
    let nn = n as usize;
    let mut out = vec![Complex64::new(0.0, 0.0); nn];
    let mut ys = vec![0u64; d];
    loop {
        let args: Vec<usize> = diff_coeffs
            .iter()
            .map(|coeffs| {
                let mut s = 0u64;
                for (c, &y) in coeffs.iter().zip(&ys) {
                    s = (s + c * y) % n;
                }
                s as usize
            })
            .collect();
        for (x, slot) in out.iter_mut().enumerate() {
            let mut prod = Complex64::new(1.0, 0.0);
            for (f, &a) in others.iter().zip(&args) {
                prod *= f.get(x + a);
                if prod.norm_sqr() == 0.0 {
                    break;
                }
            }
            *slot += prod;
        }
        let mut i = 0;
        loop {
            if i == d {
                let scale = (n as f64).powi(d as i32);
                for v in out.iter_mut() {
                    *v /= scale;
                }
                return out;
            }
            ys[i] += 1;
            if ys[i] < n {
                break;
            }
            ys[i] = 0;
            i += 1;
        }
    }
}

/// Fourier route for the linear side of the dual: accumulate `prod fhat_i(xi_i)` at output
/// frequency `sum xi_i` over the nullspace of the difference-form constraints, then
/// evaluate the resulting trigonometric polynomial.
fn dual_linear_fourier(diff_coeffs: &[Vec<u64>], others: &[&CyclicFunction], n: u64) -> Vec<Complex64> {
    let d = diff_coeffs.first().map_or(0, Vec::len);
    let tm1 = others.len();
    let nn = n as usize;
    let hats: Vec<CyclicFunction> = others.iter().map(|f| dft(f)).collect();
    let constraint = transpose_rows(diff_coeffs, d);
    let null = fp_nullspace(&constraint, tm1, n);
    let nu = null.len();
    let mut freq = vec![Complex64::new(0.0, 0.0); nn];
    let mut params = vec![0u64; nu];
    loop {
        let mut xi = vec![0u64; tm1];
        for (b, &c) in null.iter().zip(&params) {
            if c != 0 {
                for (xij, &bj) in xi.iter_mut().zip(b) {
                    *xij = (*xij + c * bj) % n;
                }
            }
        }
        let mut prod = Complex64::new(1.0, 0.0);
        let mut sigma = 0u64;
        for (hat, &x) in hats.iter().zip(&xi) {
            prod *= hat.get(x as usize);
            sigma = (sigma + x) % n;
        }
        freq[sigma as usize] += prod;
        let mut i = 0;
        loop {
            if i == nu {
                // f(x) = sum_sigma freq[sigma] e(x sigma / N), i.e. the unnormalized inverse.
                return crate::cyclic::idft(&CyclicFunction::new(freq)).values().to_vec();
            }
            params[i] += 1;
            if params[i] < n {
                break;
            }
            params[i] = 0;
            i += 1;
        }
    }
}

/// Exact configuration counts of the pattern inside `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigCount {
    /// All pairs `(x, y)` with every point in `A`.
    pub total: u64,
    /// Pairs whose `y` separates all points mod `N`.
    pub nontrivial: u64,
    /// `y` values for which some `P_i(y) = P_j(y) mod N` (excluded from `nontrivial`).
    pub trivial_y_mod: Vec<u64>,
    /// `y in [0, N)` for which some `P_i(y) = P_j(y)` over the integers.
    pub trivial_y_int: Vec<u64>,
}

/// Count pattern configurations `(x, y)` with `x + P_i(y) in A` for all `i`.
pub fn count_configs(p: &PatternSpec, a: &[u64], n: u64) -> Result<ConfigCount, CountError> {
    check_prime(n)?;
    let nn = n as usize;
    let mut member = vec![false; nn];
    for &r in a {
        member[(r % n) as usize] = true;
    }
    let shifts = poly_shift_table(p, n);
    let t = p.len();
    let trivial_mod: Vec<u64> = (0..nn)
        .filter(|&y| {
            (0..t).any(|i| (i + 1..t).any(|j| shifts[i][y] == shifts[j][y]))
        })
        .map(|y| y as u64)
        .collect();
    let trivial_int: Vec<u64> = (0..n)
        .filter(|&y| {
            let yy = crate::poly::rat(y as i64);
            (0..t).any(|i| {
                (i + 1..t).any(|j| {
                    p.polys()[i].eval_rational(&yy) == p.polys()[j].eval_rational(&yy)
                })
            })
        })
        .collect();
    let mut total = 0u64;
    let mut nontrivial = 0u64;
    for y in 0..nn {
        let is_trivial = trivial_mod.binary_search(&(y as u64)).is_ok();
        for x in 0..nn {
            if (0..t).all(|i| member[(x + shifts[i][y]) % nn]) {
                total += 1;
                if !is_trivial {
                    nontrivial += 1;
                }
            }
        }
    }
    Ok(ConfigCount { total, nontrivial, trivial_y_mod: trivial_mod, trivial_y_int: trivial_int })
}

// ---------------------------------------------------------------------------
// Linear algebra over the prime field of N elements
// ---------------------------------------------------------------------------

/// Nullspace basis of `rows * x = 0` over `F_p` (`p` prime).
pub fn fp_nullspace(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v % p).collect())
        .filter(|r: &Vec<u64>| r.iter().any(|&v| v != 0))
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(src) = (r..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(r, src);
        let inv = crate::poly::pow_mod(m[r][col], p - 2, p);
        for v in m[r].iter_mut() {
            *v = crate::poly::mul_mod(*v, inv, p);
        }
        for i in 0..m.len() {
            if i != r && m[i][col] != 0 {
                let c = m[i][col];
                for k in 0..ncols {
                    let sub = crate::poly::mul_mod(c, m[r][k], p);
                    m[i][k] = (m[i][k] + p - sub) % p;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    let mut pivot_of_col = vec![None; ncols];
    for (row, &c) in pivot_cols.iter().enumerate() {
        pivot_of_col[c] = Some(row);
    }
    (0..ncols)
        .filter(|&c| pivot_of_col[c].is_none())
        .map(|free| {
            let mut x = vec![0u64; ncols];
            x[free] = 1;
            for (row, &pcol) in pivot_cols.iter().enumerate() {
                // RREF row: x[pcol] = -row[free] (mod p).
                x[pcol] = (p - m[row][free] % p) % p;
            }
            x
        })
        .collect()
}

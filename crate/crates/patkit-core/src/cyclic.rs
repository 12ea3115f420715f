//! Functions on `Z/NZ`: discrete Fourier transform, Gowers `U^s` norms (cyclic and
//! interval-normalized), and deterministic test-function generation.
//!
//! Fourier normalization is probabilistic: `fhat(xi) = E_x f(x) e(-x xi / N)`, so the
//! inversion is `f(x) = sum_xi fhat(xi) e(x xi / N)` and Parseval reads
//! `sum_xi |fhat(xi)|^2 = E_x |f(x)|^2`.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
// Float supplies f64 math in no_std builds; std's inherent methods shadow it otherwise.
#[allow(unused_imports)]
use num_traits::Float;

use crate::primes::next_prime_at_least;
use crate::rng::CounterRng;

/// `e(frac) = exp(2 pi i frac)`.
pub fn e_of(frac: f64) -> Complex64 {
    let a = 2.0 * PI * frac;
    Complex64::new(a.cos(), a.sin())
}

/// A complex-valued function on `Z/NZ`, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicFunction {
    modulus: usize,
    values: Vec<Complex64>,
}

impl CyclicFunction {
    pub fn new(values: Vec<Complex64>) -> Self {
        assert!(!values.is_empty(), "modulus must be positive");
        CyclicFunction { modulus: values.len(), values }
    }

    pub fn from_fn(modulus: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        CyclicFunction::new((0..modulus).map(f).collect())
    }

    pub fn constant(modulus: usize, v: Complex64) -> Self {
        CyclicFunction::new(vec![v; modulus])
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Value at `x mod N` for any integer `x`.
    pub fn at(&self, x: i64) -> Complex64 {
        let n = self.modulus as i64;
        self.values[x.rem_euclid(n) as usize]
    }

    pub fn get(&self, x: usize) -> Complex64 {
        self.values[x % self.modulus]
    }

    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.modulus as f64
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `sup |f| <= 1 + 1e-12`.
    pub fn is_one_bounded(&self) -> bool {
        self.sup_norm() <= 1.0 + 1e-12
    }

    /// `x -> f(x + c)`.
    pub fn shifted(&self, c: i64) -> CyclicFunction {
        CyclicFunction::from_fn(self.modulus, |x| self.at(x as i64 + c))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormError {
    /// `N^(s+1)` exceeds the evaluation cap.
    BudgetExceeded { required: f64, cap: f64, hint: String },
    InvalidOrder,
    EmbeddingTooSmall { needed: u64, got: u64 },
}

impl fmt::Display for NormError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormError::BudgetExceeded { required, cap, hint } => write!(
                f,
                "evaluation budget exceeded (needs ~{required:.3e} > cap {cap:.3e}); {hint}"
            ),
            NormError::InvalidOrder => write!(f, "Gowers norm order must be at least 1"),
            NormError::EmbeddingTooSmall { needed, got } => {
                write!(f, "embedding modulus {got} is below the required 2^s * N = {needed}")
            }
        }
    }
}

// ---------------------------------------------------------------------------
// DFT
// ---------------------------------------------------------------------------

/// Below this length the transform is a direct O(N^2) sum.
const DIRECT_DFT_CUTOFF: usize = 256;

/// `fhat(xi) = E_x f(x) e(-x xi / N)`, any modulus (prime lengths via Bluestein).
pub fn dft(f: &CyclicFunction) -> CyclicFunction {
    let n = f.modulus();
    let raw = if n < DIRECT_DFT_CUTOFF {
        dft_direct_raw(f.values(), -1.0)
    } else {
        bluestein_raw(f.values(), -1.0)
    };
    CyclicFunction::new(raw.into_iter().map(|v| v / n as f64).collect())
}

/// Inverse of [`dft`]: `f(x) = sum_xi fhat(xi) e(x xi / N)`.
pub fn idft(fhat: &CyclicFunction) -> CyclicFunction {
    let n = fhat.modulus();
    let raw = if n < DIRECT_DFT_CUTOFF {
        dft_direct_raw(fhat.values(), 1.0)
    } else {
        bluestein_raw(fhat.values(), 1.0)
    };
    CyclicFunction::new(raw)
}

/// Unnormalized direct transform with sign `sgn` in the exponent; O(N^2) oracle path.
pub fn dft_direct_raw(values: &[Complex64], sgn: f64) -> Vec<Complex64> {
    let n = values.len();
    (0..n)
        .map(|xi| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, v) in values.iter().enumerate() {
                // Exact phase reduction: x*xi mod N keeps the angle small.
                let prod = (x as u64 * xi as u64) % n as u64;
                acc += v * e_of(sgn * prod as f64 / n as f64);
            }
            acc
        })
        .collect()
}

/// Unnormalized transform of arbitrary length via the chirp (Bluestein) reduction to a
/// power-of-two cyclic convolution.
fn bluestein_raw(values: &[Complex64], sgn: f64) -> Vec<Complex64> {
    let n = values.len();
    let m = (2 * n - 1).next_power_of_two();
    // chirp(k) = e(sgn * k^2 / 2N) with k^2 reduced mod 2N to keep angles accurate;
    // then X_k = chirp(k) * sum_n [x_n chirp(n)] * conj(chirp(k - n)) recovers
    // sum_n x_n e(sgn * nk / N) via 2nk = k^2 + n^2 - (k - n)^2.
    let two_n = 2 * n as u64;
    let chirp = |k: u64| -> Complex64 {
        let r = (k % two_n) * (k % two_n) % two_n;
        e_of(sgn * r as f64 / two_n as f64)
    };
    let mut a = vec![Complex64::new(0.0, 0.0); m];
    for (x, v) in values.iter().enumerate() {
        a[x] = v * chirp(x as u64);
    }
    let mut b = vec![Complex64::new(0.0, 0.0); m];
    for k in 0..n as i64 {
        let c = chirp(k as u64).conj();
        b[k as usize] = c;
        if k > 0 {
            b[m - k as usize] = c;
        }
    }
    fft_pow2(&mut a, false);
    fft_pow2(&mut b, false);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    fft_pow2(&mut a, true);
    (0..n).map(|k| a[k] * chirp(k as u64)).collect()
}

/// In-place iterative radix-2 FFT (length must be a power of two).
fn fft_pow2(buf: &mut [Complex64], inverse: bool) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());
    // Bit-reversal permutation.
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }
    let sgn = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let ang = sgn * 2.0 * PI / len as f64;
        let wlen = Complex64::new(ang.cos(), ang.sin());
        for chunk in buf.chunks_mut(len) {
            let mut w = Complex64::new(1.0, 0.0);
            let (lo, hi) = chunk.split_at_mut(len / 2);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let t = *v * w;
                *v = *u - t;
                *u += t;
                w *= wlen;
            }
        }
        len <<= 1;
    }
    if inverse {
        let scale = 1.0 / n as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }
}

// ---------------------------------------------------------------------------
// Gowers norms
// ---------------------------------------------------------------------------

/// Default cap on the nominal `N^(s+1)` evaluation count.
pub const DEFAULT_GOWERS_BUDGET: f64 = 1e9;

/// `||f||_{U^s}` on `Z/NZ` by direct summation.
///
/// Evaluated through the recursion `||f||_{U^s}^{2^s} = E_h base(Delta_h f, s-1)` with
/// `base(g, 1) = |E g|^2`, which is the definition with the innermost average collapsed;
/// the inner expectation is real and non-negative by construction.
pub fn gowers_norm_cyclic(f: &CyclicFunction, s: u32, cap: f64) -> Result<f64, NormError> {
    if s < 1 {
        return Err(NormError::InvalidOrder);
    }
    let n = f.modulus() as f64;
    let required = n.powi(s as i32 + 1);
    if required > cap {
        return Err(NormError::BudgetExceeded {
            required,
            cap,
            hint: "for s = 2 use the Fourier path (gowers_norm_u2_fourier); otherwise subsample or raise the cap"
                .into(),
        });
    }
    let base = gowers_base(f.values(), s);
    Ok(base.max(0.0).powf(1.0 / 2f64.powi(s as i32)))
}

fn gowers_base(values: &[Complex64], s: u32) -> f64 {
    let n = values.len();
    if s == 1 {
        let mean = values.iter().sum::<Complex64>() / n as f64;
        return mean.norm_sqr();
    }
    let mut acc = 0.0;
    let mut deriv = vec![Complex64::new(0.0, 0.0); n];
    for h in 0..n {
        for x in 0..n {
            deriv[x] = values[x] * values[(x + h) % n].conj();
        }
        acc += gowers_base(&deriv, s - 1);
    }
    acc / n as f64
}

/// `||f||_{U^2}` via the identity `||f||_{U^2}^4 = sum_xi |fhat(xi)|^4`.
pub fn gowers_norm_u2_fourier(f: &CyclicFunction) -> f64 {
    let fhat = dft(f);
    let s4: f64 = fhat.values().iter().map(|v| v.norm_sqr() * v.norm_sqr()).sum();
    s4.max(0.0).powf(0.25)
}

/// Interval Gowers norm `||f||_{U^s[N]}` of a function given by its values on `[N]`.
///
/// Embeds into `Z/NtildeZ` with the smallest prime `Ntilde >= 2^s N + 1` and normalizes by
/// the interval indicator. The result is independent of any valid choice of `Ntilde`.
pub fn gowers_norm_interval(f: &[Complex64], s: u32, cap: f64) -> Result<f64, NormError> {
    let n = f.len() as u64;
    let ntilde = next_prime_at_least((1u64 << s) * n + 1);
    gowers_norm_interval_with(f, s, ntilde, cap)
}

/// Interval norm with an explicit embedding modulus `ntilde >= 2^s N`.
pub fn gowers_norm_interval_with(
    f: &[Complex64],
    s: u32,
    ntilde: u64,
    cap: f64,
) -> Result<f64, NormError> {
    if s < 1 {
        return Err(NormError::InvalidOrder);
    }
    let n = f.len() as u64;
    let needed = (1u64 << s) * n;
    if ntilde < needed {
        return Err(NormError::EmbeddingTooSmall { needed, got: ntilde });
    }
    // Placement within Z/NtildeZ is immaterial: the norm is shift invariant.
    let mut fv = vec![Complex64::new(0.0, 0.0); ntilde as usize];
    let mut ind = vec![Complex64::new(0.0, 0.0); ntilde as usize];
    for (i, v) in f.iter().enumerate() {
        fv[i] = *v;
        ind[i] = Complex64::new(1.0, 0.0);
    }
    let num = gowers_norm_cyclic(&CyclicFunction::new(fv), s, cap)?;
    let den = gowers_norm_cyclic(&CyclicFunction::new(ind), s, cap)?;
    Ok(num / den)
}

// ---------------------------------------------------------------------------
// Deterministic test functions
// ---------------------------------------------------------------------------

/// A deterministic recipe for a [`CyclicFunction`]: the same spec always materializes
/// to the identical function.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    pub kind: FunctionKind,
    pub modulus: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionKind {
    /// Constant 1.
    Constant,
    /// Indicator of the residues `a..=b` (taken mod N; wraps if `a > b`).
    Interval(u64, u64),
    /// `e(c x^2 / N)`.
    QuadPhase(i64),
    /// `e((c_1 x + c_2 x^2 + ...) / N)`.
    PolyPhase(Vec<i64>),
    /// Independent +-1 values keyed by `(seed, x)`.
    RandPm1(u64),
    /// Explicit values (e.g. loaded from a file); length must equal the modulus.
    Values(Vec<Complex64>),
}

impl FunctionSpec {
    pub fn materialize(&self) -> CyclicFunction {
        let n = self.modulus;
        match &self.kind {
            FunctionKind::Constant => CyclicFunction::constant(n, Complex64::new(1.0, 0.0)),
            FunctionKind::Interval(a, b) => {
                let a = (*a % n as u64) as usize;
                let b = (*b % n as u64) as usize;
                CyclicFunction::from_fn(n, |x| {
                    let inside = if a <= b { x >= a && x <= b } else { x >= a || x <= b };
                    Complex64::new(if inside { 1.0 } else { 0.0 }, 0.0)
                })
            }
            FunctionKind::QuadPhase(c) => phase_fn(n, &[0, 0, *c]),
            FunctionKind::PolyPhase(coeffs) => {
                let mut full = vec![0i64];
                full.extend_from_slice(coeffs);
                phase_fn(n, &full)
            }
            FunctionKind::RandPm1(seed) => CyclicFunction::from_fn(n, |x| {
                Complex64::new(CounterRng::new(*seed, x as u64).next_sign(), 0.0)
            }),
            FunctionKind::Values(v) => {
                assert_eq!(v.len(), n, "value list length must equal the modulus");
                CyclicFunction::new(v.clone())
            }
        }
    }
}

/// `e(P(x)/N)` where `coeffs[j]` multiplies `x^j`; the phase is reduced mod N exactly.
fn phase_fn(n: usize, coeffs: &[i64]) -> CyclicFunction {
    let nn = n as i128;
    CyclicFunction::from_fn(n, |x| {
        let mut acc: i128 = 0;
        let mut pw: i128 = 1;
        for &c in coeffs {
            acc = (acc + c as i128 * pw).rem_euclid(nn);
            pw = pw * x as i128 % nn;
        }
        e_of(acc as f64 / n as f64)
    })
}

/// Canonical description string, recorded in reports.
pub fn spec_description(spec: &FunctionSpec) -> String {
    match &spec.kind {
        FunctionKind::Constant => "const".into(),
        FunctionKind::Interval(a, b) => format!("interval:{a},{b}"),
        FunctionKind::QuadPhase(c) => format!("quadphase:{c}"),
        FunctionKind::PolyPhase(cs) => {
            let parts: Vec<String> = cs.iter().map(|c| format!("{c}")).collect();
            format!("polyphase:{}", parts.join(","))
        }
        FunctionKind::RandPm1(seed) => format!("randpm1:{seed}"),
        FunctionKind::Values(_) => "values".into(),
    }
}

//! Gowers-Peluse norms with explicit difference measures, finitely supported functions
//! on the integers, and the smoothed interval cutoff.
//!
//! The norm of order `k` at scale `N` is
//! `||f||^{2^k} = (1/N) sum_x E_{h_i, h_i' ~ mu_i} D_{(h_1,h_1')} ... D_{(h_k,h_k')} f(x)`
//! with `D_{(h,h')} f(x) = f(x+h) conj(f(x+h'))`. The expansion over measure supports is
//! exact when the support-size product fits the budget, and falls back to a seeded
//! sampling estimator with a reported standard error otherwise.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use num_complex::Complex64;
// Float supplies f64 math in no_std builds; std's inherent methods shadow it otherwise.
#[allow(unused_imports)]
use num_traits::Float;

use crate::cyclic::e_of;
use crate::rng::CounterRng;

/// A finitely supported function on the integers: `values[i]` is the value at `start + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntFunction {
    start: i64,
    values: Vec<Complex64>,
}

impl IntFunction {
    pub fn new(start: i64, values: Vec<Complex64>) -> Self {
        IntFunction { start, values }
    }

    pub fn zero() -> Self {
        IntFunction { start: 0, values: Vec::new() }
    }

    /// Indicator of the integer interval `a..=b`.
    pub fn indicator(a: i64, b: i64) -> Self {
        assert!(a <= b);
        IntFunction::new(a, vec![Complex64::new(1.0, 0.0); (b - a + 1) as usize])
    }

    /// Indicator of `[N] = {1, ..., N}`.
    pub fn indicator_segment(n: u64) -> Self {
        IntFunction::indicator(1, n as i64)
    }

    pub fn from_fn(a: i64, b: i64, mut f: impl FnMut(i64) -> Complex64) -> Self {
        assert!(a <= b);
        IntFunction::new(a, (a..=b).map(&mut f).collect())
    }

    pub fn at(&self, x: i64) -> Complex64 {
        if x < self.start {
            return Complex64::new(0.0, 0.0);
        }
        let idx = (x - self.start) as usize;
        self.values.get(idx).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Support bounds `(lo, hi)` inclusive, or `None` when identically zero.
    pub fn support(&self) -> Option<(i64, i64)> {
        let first = self.values.iter().position(|v| v.norm_sqr() > 0.0)?;
        let last = self.values.iter().rposition(|v| v.norm_sqr() > 0.0)?;
        Some((self.start + first as i64, self.start + last as i64))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_one_bounded(&self) -> bool {
        self.sup_norm() <= 1.0 + 1e-12
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    /// Pointwise modulation `x -> f(x) e(theta x)`.
    pub fn modulated(&self, theta: f64) -> IntFunction {
        IntFunction::new(
            self.start,
            self.values
                .iter()
                .enumerate()
                .map(|(i, v)| v * e_of(theta * (self.start + i as i64) as f64))
                .collect(),
        )
    }

    /// `x -> f(x + h) conj(f(x + h'))`, supported on the shifted-support intersection.
    pub fn pair_derivative(&self, h: i64, hp: i64) -> IntFunction {
        let Some((lo, hi)) = self.support() else {
            return IntFunction::zero();
        };
        let a = (lo - h).max(lo - hp);
        let b = (hi - h).min(hi - hp);
        if a > b {
            return IntFunction::zero();
        }
        IntFunction::from_fn(a, b, |x| self.at(x + h) * self.at(x + hp).conj())
    }

    pub fn values(&self) -> (i64, &[Complex64]) {
        (self.start, &self.values)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureError {
    /// Weights must be non-negative and sum to 1 within 1e-12.
    BadWeights(String),
    EmptySupport,
    /// `smoothed_cutoff` needs `N * delta >= 1` and `delta` in (0, 1/2).
    BadCutoffParameters(String),
}

impl fmt::Display for MeasureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureError::BadWeights(m) => write!(f, "invalid measure: {m}"),
            MeasureError::EmptySupport => write!(f, "measure support is empty"),
            MeasureError::BadCutoffParameters(m) => write!(f, "invalid cutoff parameters: {m}"),
        }
    }
}

/// A probability measure on the integers with finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMeasure {
    support: Vec<(i64, f64)>,
}

impl FiniteMeasure {
    pub fn new(mut support: Vec<(i64, f64)>) -> Result<Self, MeasureError> {
        support.retain(|&(_, w)| w != 0.0);
        if support.is_empty() {
            return Err(MeasureError::EmptySupport);
        }
        support.sort_by_key(|&(x, _)| x);
        // Merge duplicate points.
        let mut merged: Vec<(i64, f64)> = Vec::with_capacity(support.len());
        for (x, w) in support {
            if w < 0.0 {
                return Err(MeasureError::BadWeights(format!("negative weight at {x}")));
            }
            match merged.last_mut() {
                Some((px, pw)) if *px == x => *pw += w,
                _ => merged.push((x, w)),
            }
        }
        let total: f64 = merged.iter().map(|&(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(MeasureError::BadWeights(format!("weights sum to {total}")));
        }
        Ok(FiniteMeasure { support: merged })
    }

    pub fn point_mass(x: i64) -> Self {
        FiniteMeasure { support: vec![(x, 1.0)] }
    }

    /// Uniform on `a..=b`.
    pub fn uniform(a: i64, b: i64) -> Self {
        assert!(a <= b);
        let w = 1.0 / (b - a + 1) as f64;
        FiniteMeasure { support: (a..=b).map(|x| (x, w)).collect() }
    }

    /// Uniform on `[-m, m]`.
    pub fn uniform_pm(m: u64) -> Self {
        FiniteMeasure::uniform(-(m as i64), m as i64)
    }

    /// Uniform on `q * [-m, m]` (the dilated symmetric interval).
    pub fn uniform_scaled_pm(q: i64, m: u64) -> Self {
        assert!(q != 0);
        let w = 1.0 / (2 * m + 1) as f64;
        let mut support: Vec<(i64, f64)> = (-(m as i64)..=m as i64).map(|x| (q * x, w)).collect();
        support.sort_by_key(|&(x, _)| x);
        FiniteMeasure { support }
    }

    pub fn support(&self) -> &[(i64, f64)] {
        &self.support
    }

    pub fn weight_at(&self, x: i64) -> f64 {
        self.support
            .binary_search_by_key(&x, |&(p, _)| p)
            .map(|i| self.support[i].1)
            .unwrap_or(0.0)
    }

    /// Smallest `C` with `self <= C * other` pointwise, or `None` if no such `C` exists.
    pub fn domination_constant(&self, other: &FiniteMeasure) -> Option<f64> {
        let mut c: f64 = 0.0;
        for &(x, w) in &self.support {
            let ow = other.weight_at(x);
            if ow == 0.0 {
                return None;
            }
            c = c.max(w / ow);
        }
        Some(c)
    }

    /// Draw a point according to the weights (inverse CDF over the sorted support).
    fn sample(&self, rng: &mut CounterRng) -> i64 {
        let u = rng.next_f64();
        let mut acc = 0.0;
        for &(x, w) in &self.support {
            acc += w;
            if u < acc {
                return x;
            }
        }
        self.support.last().unwrap().0
    }
}

/// How a Gowers-Peluse value was obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum GpMethod {
    Exact,
    /// Seeded Monte Carlo over the measures; `stderr` is the standard error of the
    /// base (2^k-power) quantity.
    Sampled { samples: u64, stderr: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GpResult {
    pub value: f64,
    /// The un-rooted base quantity `||f||^{2^k}`.
    pub base: f64,
    pub method: GpMethod,
}

#[derive(Debug, Clone)]
pub struct GpOptions {
    /// Cap on the product of squared support sizes before sampling kicks in.
    pub budget: f64,
    pub samples: u64,
    pub seed: u64,
}

impl Default for GpOptions {
    fn default() -> Self {
        GpOptions { budget: 2e8, samples: 20_000, seed: 0 }
    }
}

/// Gowers-Peluse norm of `f` at scale `n_scale` with one measure per difference level.
pub fn gp_norm(
    f: &IntFunction,
    n_scale: u64,
    measures: &[FiniteMeasure],
    opts: &GpOptions,
) -> GpResult {
    assert!(!measures.is_empty(), "need at least one measure");
    assert!(n_scale >= 1);
    let k = measures.len() as u32;
    let cost: f64 = measures
        .iter()
        .map(|m| (m.support().len() as f64).powi(2))
        .product();
    if cost <= opts.budget {
        let total = gp_base_exact(f, measures) / n_scale as f64;
        // Only the full aggregate is guaranteed real (it is a sum of squared means).
        debug_assert!(total.im.abs() < 1e-9 * (1.0 + total.re.abs()));
        let base = total.re;
        GpResult { value: root_2k(base, k), base, method: GpMethod::Exact }
    } else {
        let (base, stderr) = gp_base_sampled(f, n_scale, measures, opts);
        GpResult {
            value: root_2k(base, k),
            base,
            method: GpMethod::Sampled { samples: opts.samples, stderr },
        }
    }
}

fn root_2k(base: f64, k: u32) -> f64 {
    base.max(0.0).powf(1.0 / 2f64.powi(k as i32))
}

/// Exact expansion: recurse over the last measure's support pairs. The derivative
/// operators commute, so peeling from either end computes the same sum.
fn gp_base_exact(f: &IntFunction, measures: &[FiniteMeasure]) -> Complex64 {
    match measures.split_last() {
        None => f.sum(),
        Some((mu, rest)) => {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(h, w) in mu.support() {
                for &(hp, wp) in mu.support() {
                    let d = f.pair_derivative(h, hp);
                    acc += gp_base_exact(&d, rest) * (w * wp);
                }
            }
            acc
        }
    }
}

fn gp_base_sampled(
    f: &IntFunction,
    n_scale: u64,
    measures: &[FiniteMeasure],
    opts: &GpOptions,
) -> (f64, f64) {
    let k = measures.len();
    let mut rng = CounterRng::new(opts.seed, 0x6770);
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 0..opts.samples {
        let shifts: Vec<(i64, i64)> = measures
            .iter()
            .map(|mu| (mu.sample(&mut rng), mu.sample(&mut rng)))
            .collect();
        // One sample: (1/N) sum_x prod_omega C^{|omega|} f(x + omega . h).
        let mut g = f.clone();
        for &(h, hp) in shifts.iter().take(k) {
            g = g.pair_derivative(h, hp);
        }
        let sample = g.sum().re / n_scale as f64;
        let delta = sample - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (sample - mean);
    }
    let var = if opts.samples > 1 { m2 / (opts.samples - 1) as f64 } else { 0.0 };
    (mean, (var / opts.samples as f64).sqrt())
}

/// Smoothed cutoff `G_delta = (1_[N] * 1_[±delta N]) / (2 floor(delta N) + 1)`:
/// 1 on the interior of `[delta N, (1 - delta) N]`, 0 outside `[-delta N, (1 + delta) N]`,
/// values in `[0, 1]`, with linear ramps on the boundary.
pub fn smoothed_cutoff(delta: f64, n: u64) -> Result<IntFunction, MeasureError> {
    if !(0.0..0.5).contains(&delta) || delta <= 0.0 {
        return Err(MeasureError::BadCutoffParameters(format!("delta = {delta} not in (0, 1/2)")));
    }
    if (n as f64) * delta < 1.0 {
        return Err(MeasureError::BadCutoffParameters(format!(
            "N = {n} is below 1/delta = {:.3}",
            1.0 / delta
        )));
    }
    let m = (delta * n as f64).floor() as i64;
    let norm = (2 * m + 1) as f64;
    let n = n as i64;
    Ok(IntFunction::from_fn(1 - m, n + m, |x| {
        // #([N] ∩ [x - m, x + m]) counts the overlap of the sliding window with {1..N}.
        let lo = (x - m).max(1);
        let hi = (x + m).min(n);
        let count = (hi - lo + 1).max(0);
        Complex64::new(count as f64 / norm, 0.0)
    }))
}

/// Grid approximation of the L^1 Fourier mass `int_0^1 |Ghat(theta)| d theta`,
/// reported (not asserted) alongside the structural cutoff properties.
pub fn fourier_l1_mass(f: &IntFunction, grid: usize) -> f64 {
    let (start, values) = f.values();
    let mut total = 0.0;
    for j in 0..grid {
        let theta = j as f64 / grid as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, v) in values.iter().enumerate() {
            acc += v * e_of(-theta * (start + i as i64) as f64);
        }
        total += acc.norm();
    }
    total / grid as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gp_norm_of_zero_is_zero() {
        let f = IntFunction::zero();
        let r = gp_norm(&f, 10, &[FiniteMeasure::point_mass(0)], &GpOptions::default());
        assert_eq!(r.value, 0.0);
        assert_eq!(r.method, GpMethod::Exact);
    }

    #[test]
    fn gp_norm_point_mass_is_mean_square() {
        // Single point mass at 0: D_{(0,0)} f = |f|^2, so the base is (1/N) sum |f|^2 = 1.
        let n = 16;
        let f = IntFunction::indicator_segment(n);
        let r = gp_norm(&f, n, &[FiniteMeasure::point_mass(0)], &GpOptions::default());
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    /// Brute-force quadruple sum oracle for k = 2, independent of the recursion.
    fn gp_base_oracle_k2(f: &IntFunction, n: u64, mu: &FiniteMeasure) -> f64 {
        let (lo, hi) = f.support().unwrap();
        let reach: i64 = mu.support().iter().map(|&(x, _)| x.abs()).max().unwrap();
        let mut total = Complex64::new(0.0, 0.0);
        for &(h1, w1) in mu.support() {
            for &(h1p, w1p) in mu.support() {
                for &(h2, w2) in mu.support() {
                    for &(h2p, w2p) in mu.support() {
                        let w = w1 * w1p * w2 * w2p;
                        for x in lo - 2 * reach..=hi + 2 * reach {
                            let prod = f.at(x + h1 + h2)
                                * f.at(x + h1p + h2).conj()
                                * f.at(x + h1 + h2p).conj()
                                * f.at(x + h1p + h2p);
                            total += prod * w;
                        }
                    }
                }
            }
        }
        assert!(total.im.abs() < 1e-9);
        total.re / n as f64
    }

    #[test]
    fn gp_matches_bruteforce_k2() {
        let n = 12;
        let f = IntFunction::indicator_segment(n);
        let mu = FiniteMeasure::uniform_pm(12);
        let r = gp_norm(&f, n, &[mu.clone(), mu.clone()], &GpOptions::default());
        let base = gp_base_oracle_k2(&f, n, &mu);
        assert!((r.base - base).abs() < 1e-9, "{} vs {}", r.base, base);
        assert!((r.value - base.max(0.0).powf(0.25)).abs() < 1e-12);
    }

    #[test]
    fn modulation_invariance_for_k_at_least_2() {
        let n = 10;
        let mut rng = CounterRng::new(7, 1);
        let f = IntFunction::from_fn(1, n as i64, |_| {
            Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5)
        });
        let mu1 = FiniteMeasure::uniform_pm(3);
        let mu2 = FiniteMeasure::uniform(0, 4);
        let base = gp_norm(&f, n, &[mu1.clone(), mu2.clone()], &GpOptions::default());
        for theta in [0.13, 0.5, 0.789] {
            let g = f.modulated(theta);
            let r = gp_norm(&g, n, &[mu1.clone(), mu2.clone()], &GpOptions::default());
            assert!((r.value - base.value).abs() < 1e-9, "theta = {theta}");
        }
    }

    #[test]
    fn domination_inequality() {
        // mu <= C mu' pointwise implies ||f||_{mu'} >= C^{-s/2^{s-1}} ||f||_{mu}.
        let mut rng = CounterRng::new(2024, 5);
        for trial in 0..20 {
            let len = 3 + (rng.next_below(4) as i64);
            let f = IntFunction::from_fn(0, len, |_| {
                Complex64::new(rng.next_f64() * 2.0 - 1.0, rng.next_f64() * 2.0 - 1.0)
            });
            let pts: Vec<i64> = (-2..=2).collect();
            let raw: Vec<f64> = pts.iter().map(|_| rng.next_f64() + 0.05).collect();
            let tot: f64 = raw.iter().sum();
            let mu_prime =
                FiniteMeasure::new(pts.iter().zip(&raw).map(|(&x, &w)| (x, w / tot)).collect())
                    .unwrap();
            let raw2: Vec<f64> = pts.iter().map(|_| rng.next_f64() + 0.05).collect();
            let tot2: f64 = raw2.iter().sum();
            let mu =
                FiniteMeasure::new(pts.iter().zip(&raw2).map(|(&x, &w)| (x, w / tot2)).collect())
                    .unwrap();
            let c = mu.domination_constant(&mu_prime).unwrap();
            let s = 2u32;
            let lhs = gp_norm(&f, 8, &[mu_prime.clone(), mu_prime.clone()], &GpOptions::default());
            let rhs = gp_norm(&f, 8, &[mu.clone(), mu.clone()], &GpOptions::default());
            let bound = c.powf(-(s as f64) / 2f64.powi(s as i32 - 1)) * rhs.value;
            assert!(lhs.value >= bound - 1e-12, "trial {trial}: {} < {}", lhs.value, bound);
        }
    }

    #[test]
    fn sampling_estimator_converges() {
        let n = 12;
        let f = IntFunction::indicator_segment(n);
        let mu = FiniteMeasure::uniform_pm(6);
        let exact = gp_norm(&f, n, &[mu.clone(), mu.clone()], &GpOptions::default());
        let opts = GpOptions { budget: 1.0, samples: 40_000, seed: 3 };
        let sampled = gp_norm(&f, n, &[mu.clone(), mu], &opts);
        match sampled.method {
            GpMethod::Sampled { stderr, samples } => {
                assert_eq!(samples, 40_000);
                assert!(
                    (sampled.base - exact.base).abs() < 6.0 * stderr + 1e-9,
                    "sampled {} vs exact {} (stderr {})",
                    sampled.base,
                    exact.base,
                    stderr
                );
            }
            GpMethod::Exact => panic!("expected sampling fallback"),
        }
    }

    #[test]
    fn cutoff_structure() {
        let g = smoothed_cutoff(0.1, 100).unwrap();
        assert!((g.at(50).re - 1.0).abs() < 1e-15);
        assert_eq!(g.at(-11).re, 0.0);
        assert_eq!(g.at(111).re, 0.0);
        // 1 on the interior plateau [floor(delta N)+1, N-floor(delta N)].
        for x in 11..=90 {
            assert!((g.at(x).re - 1.0).abs() < 1e-15, "x = {x}");
        }
        for (_, v) in (0..).zip(g.values().1) {
            assert!(v.re >= 0.0 && v.re <= 1.0 + 1e-15);
            assert_eq!(v.im, 0.0);
        }
    }

    #[test]
    fn cutoff_ramp_is_monotone() {
        let g = smoothed_cutoff(0.25, 8).unwrap();
        let m = 2; // floor(0.25 * 8)
        let mut prev = 0.0;
        for x in (1 - m)..=(m + 1) {
            let v = g.at(x).re;
            assert!(v >= prev - 1e-15, "ramp must rise at x = {x}");
            assert!((0.0..=1.0 + 1e-15).contains(&v));
            prev = v;
        }
        let mut prev = 1.0;
        for x in (8 - m)..=(8 + m) {
            let v = g.at(x).re;
            assert!(v <= prev + 1e-15, "ramp must fall at x = {x}");
            prev = v;
        }
    }

    #[test]
    fn cutoff_preconditions() {
        assert!(smoothed_cutoff(0.1, 5).is_err());
        assert!(smoothed_cutoff(0.6, 100).is_err());
        assert!(smoothed_cutoff(0.0, 100).is_err());
    }

    #[test]
    fn cutoff_fourier_mass_is_finite_and_small() {
        // Reported, not asserted against a constant: just sanity that the grid sum behaves.
        let g = smoothed_cutoff(0.1, 100).unwrap();
        let mass = fourier_l1_mass(&g, 512);
        assert!(mass.is_finite());
        assert!(mass > 0.0);
    }
}

//! Sparse exact polynomial arithmetic over arbitrary-precision rationals.
//!
//! [`UniPoly`] is a univariate polynomial keyed by exponent; [`MultiPoly`] is a multivariate
//! polynomial over an explicit, fixed variable universe. Coefficients are `BigRational` and
//! zero coefficients are never stored. The canonical text form is a sum of `c*x^a*y^b` terms
//! ordered graded-lexicographically over the fixed variable order `x, y, y1..yd, z`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A variable in the fixed universe, ordered `x < y < y1 < y2 < ... < z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Y,
    /// Linearization variable `y_i` (1-based).
    Yi(u32),
    Z,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X => write!(f, "x"),
            Var::Y => write!(f, "y"),
            Var::Yi(i) => write!(f, "y{i}"),
            Var::Z => write!(f, "z"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    /// Operands live over different variable universes.
    VarMismatch,
    /// An operation required integer coefficients.
    NonIntegerCoefficient,
    /// Text form could not be parsed.
    Parse(String),
    /// A parsed variable is not part of the expected universe.
    UnknownVar(String),
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::VarMismatch => write!(f, "polynomials have different variable universes"),
            PolyError::NonIntegerCoefficient => write!(f, "polynomial has a non-integer coefficient"),
            PolyError::Parse(msg) => write!(f, "parse error: {msg}"),
            PolyError::UnknownVar(v) => write!(f, "variable `{v}` not allowed here"),
        }
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Univariate polynomial with rational coefficients, sparse by exponent.
///
/// The variable is abstract; context decides whether it reads as `y` or `z`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: BTreeMap<u32, BigRational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: BTreeMap::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = UniPoly::zero();
        p.set(0, c);
        p
    }

    pub fn monomial(exp: u32, c: BigRational) -> Self {
        let mut p = UniPoly::zero();
        p.set(exp, c);
        p
    }

    /// Build from `(exponent, coefficient)` pairs; repeated exponents accumulate.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, BigRational)>) -> Self {
        let mut p = UniPoly::zero();
        for (e, c) in terms {
            let cur = p.coeff(e) + c;
            p.set(e, cur);
        }
        p
    }

    /// Convenience constructor from integer coefficients `coeffs[j]` of `y^j`.
    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        UniPoly::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(j, &c)| (j as u32, rat(c))),
        )
    }

    fn set(&mut self, exp: u32, c: BigRational) {
        if c.is_zero() {
            self.coeffs.remove(&exp);
        } else {
            self.coeffs.insert(exp, c);
        }
    }

    pub fn coeff(&self, exp: u32) -> BigRational {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Smallest exponent with a nonzero coefficient, or `None` for zero.
    pub fn bottom_degree(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            let cur = out.coeff(e) + c;
            out.set(e, cur);
        }
        out
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        let mut out = UniPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                let e = e1 + e2;
                let cur = out.coeff(e) + c1 * c2;
                out.set(e, cur);
            }
        }
        out
    }

    /// `p(a y)` for a rational `a`.
    pub fn substitute_scaled_var(&self, a: &BigRational) -> UniPoly {
        UniPoly {
            coeffs: self
                .coeffs
                .iter()
                .filter_map(|(&e, c)| {
                    let v = c * pow_rat(a, e);
                    if v.is_zero() {
                        None
                    } else {
                        Some((e, v))
                    }
                })
                .collect(),
        }
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        // Horner over the sparse exponent list, high to low.
        let mut acc = BigRational::zero();
        let mut prev_exp: Option<u32> = None;
        for (&e, c) in self.coeffs.iter().rev() {
            if let Some(pe) = prev_exp {
                acc = acc * pow_rat(x, pe - e);
            }
            acc += c;
            prev_exp = Some(e);
        }
        if let Some(e) = prev_exp {
            acc = acc * pow_rat(x, e);
        }
        acc
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    /// Integer coefficients as `(exponent, BigInt)` pairs; errors on a fractional coefficient.
    pub fn int_terms(&self) -> Result<Vec<(u32, BigInt)>, PolyError> {
        self.coeffs
            .iter()
            .map(|(&e, c)| {
                if c.is_integer() {
                    Ok((e, c.to_integer()))
                } else {
                    Err(PolyError::NonIntegerCoefficient)
                }
            })
            .collect()
    }

    /// `p(y) mod n` for an integer-coefficient polynomial, reduced to `[0, n)`.
    pub fn eval_mod(&self, y: u64, n: u64) -> Result<u64, PolyError> {
        assert!(n >= 1, "modulus must be positive");
        let terms = self.int_terms()?;
        let y = y % n;
        // Horner over sparse exponents, exponent gaps bridged by modular powers.
        let mut acc: u64 = 0;
        let mut prev_exp: Option<u32> = None;
        for (e, c) in terms.iter().rev() {
            if let Some(pe) = prev_exp {
                acc = mul_mod(acc, pow_mod(y, (pe - e) as u64, n), n);
            }
            acc = (acc + bigint_mod(c, n)) % n;
            prev_exp = Some(*e);
        }
        if let Some(e) = prev_exp {
            acc = mul_mod(acc, pow_mod(y, e as u64, n), n);
        }
        Ok(acc)
    }

    /// Render with the given variable name in canonical text form.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        // Univariate canonical order: ascending exponent (matches graded-lex in one variable).
        for (i, (&e, c)) in self.coeffs.iter().enumerate() {
            if e == 0 {
                push_term(&mut out, i == 0, c, &[]);
            } else {
                push_term(&mut out, i == 0, c, &[(var, e)]);
            }
        }
        out
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("y"))
    }
}

fn pow_rat(a: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= a;
    }
    acc
}

pub(crate) fn bigint_mod(c: &BigInt, n: u64) -> u64 {
    let m = c.mod_floor(&BigInt::from(n));
    let (_, digits) = m.to_u64_digits();
    *digits.first().unwrap_or(&0)
}

pub(crate) fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Multivariate polynomial over an explicit variable universe.
///
/// Terms map dense exponent vectors (one slot per universe variable) to coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<Var>,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MultiPoly {
    /// Empty (zero) polynomial over the given universe. Variables must be strictly increasing.
    pub fn zero(vars: Vec<Var>) -> Self {
        debug_assert!(vars.windows(2).all(|w| w[0] < w[1]), "universe must be sorted");
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Vec<Var>, c: BigRational) -> Self {
        let mut p = MultiPoly::zero(vars);
        let exps = vec![0; p.vars.len()];
        p.set(exps, c);
        p
    }

    /// The variable `v` as a polynomial over the universe (must contain `v`).
    pub fn var(vars: Vec<Var>, v: Var) -> Self {
        let mut p = MultiPoly::zero(vars);
        let idx = p.vars.iter().position(|&u| u == v).expect("variable not in universe");
        let mut exps = vec![0; p.vars.len()];
        exps[idx] = 1;
        p.set(exps, BigRational::one());
        p
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    fn set(&mut self, exps: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, c);
        }
    }

    fn check_universe(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::VarMismatch)
        }
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_universe(other)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            let cur = out.coeff(e) + c;
            out.set(e.clone(), cur);
        }
        Ok(out)
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.vars.clone());
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_universe(other)?;
        let mut out = MultiPoly::zero(self.vars.clone());
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let cur = out.coeff(&e) + c1 * c2;
                out.set(e, cur);
            }
        }
        Ok(out)
    }

    /// Total degree of the highest term, `None` if zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Embed a univariate polynomial in `v` into the universe.
    pub fn from_unipoly(vars: Vec<Var>, v: Var, p: &UniPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(vars);
        let idx = out.vars.iter().position(|&u| u == v).expect("variable not in universe");
        for (e, c) in p.terms() {
            let mut exps = vec![0; out.vars.len()];
            exps[idx] = e;
            out.set(exps, c.clone());
        }
        out
    }

    /// Graded-lexicographic term order over the fixed variable order; used for serialization.
    fn sorted_terms(&self) -> Vec<(&Vec<u32>, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(e1, _), (e2, _)| {
            let d1: u32 = e1.iter().sum();
            let d2: u32 = e2.iter().sum();
            d1.cmp(&d2).then_with(|| e1.cmp(e2))
        });
        v
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names: Vec<String> = self.vars.iter().map(|v| v.to_string()).collect();
        let mut out = String::new();
        for (i, (exps, c)) in self.sorted_terms().into_iter().enumerate() {
            let vars: Vec<(&str, u32)> = names
                .iter()
                .zip(exps)
                .filter(|(_, &e)| e > 0)
                .map(|(n, &e)| (n.as_str(), e))
                .collect();
            push_term(&mut out, i == 0, c, &vars);
        }
        write!(f, "{out}")
    }
}

fn push_term(out: &mut String, first: bool, c: &BigRational, vars: &[(&str, u32)]) {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            out.push('-');
        }
    } else if neg {
        out.push_str(" - ");
    } else {
        out.push_str(" + ");
    }
    let show_coeff = vars.is_empty() || !abs.is_one();
    if show_coeff {
        out.push_str(&abs.to_string());
    }
    for (i, (name, e)) in vars.iter().enumerate() {
        if show_coeff || i > 0 {
            out.push('*');
        }
        out.push_str(name);
        if *e != 1 {
            out.push_str(&format!("^{e}"));
        }
    }
}

/// Fully expanded composition `q(s)`: substitutes the multivariate `s` into the univariate `q`.
///
/// `compose(z, s) = s` and the map is multiplicative: `compose(q1*q2, s) = compose(q1,s)*compose(q2,s)`.
pub fn compose(q: &UniPoly, s: &MultiPoly) -> MultiPoly {
    let vars = s.vars().to_vec();
    let mut out = MultiPoly::zero(vars.clone());
    let mut power = MultiPoly::constant(vars, BigRational::one());
    let mut cur_exp = 0u32;
    for (e, c) in q.terms() {
        while cur_exp < e {
            power = power.mul(s).expect("same universe");
            cur_exp += 1;
        }
        out = out.add(&power.scale(c)).expect("same universe");
    }
    out
}

// ---------------------------------------------------------------------------
// Text form parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(Var),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

fn lex(input: &str) -> Result<Vec<Tok>, PolyError> {
    let mut toks = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                // `**` is an alias for `^`.
                if i + 1 < bytes.len() && bytes[i + 1] as char == '*' {
                    toks.push(Tok::Caret);
                    i += 2;
                } else {
                    toks.push(Tok::Star);
                    i += 1;
                }
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = input[start..i]
                    .parse()
                    .map_err(|_| PolyError::Parse(format!("bad number `{}`", &input[start..i])))?;
                toks.push(Tok::Num(n));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                i += 1;
                while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] as char == '_') {
                    i += 1;
                }
                let name = &input[start..i];
                toks.push(Tok::Var(parse_var(name)?));
            }
            _ => {
                // Multibyte chars other than the minus sign handled above are rejected.
                let ch_len = input[i..].chars().next().map(|c| c.len_utf8()).unwrap_or(1);
                if &input[i..i + ch_len] == "−" {
                    toks.push(Tok::Minus);
                } else {
                    return Err(PolyError::Parse(format!("unexpected character `{c}`")));
                }
                i += ch_len;
            }
        }
    }
    Ok(toks)
}

fn parse_var(name: &str) -> Result<Var, PolyError> {
    match name {
        "x" => Ok(Var::X),
        "y" => Ok(Var::Y),
        "z" => Ok(Var::Z),
        _ => {
            let rest = name
                .strip_prefix("y_")
                .or_else(|| name.strip_prefix('y'))
                .ok_or_else(|| PolyError::UnknownVar(name.to_string()))?;
            rest.parse::<u32>()
                .map(Var::Yi)
                .map_err(|_| PolyError::UnknownVar(name.to_string()))
        }
    }
}

/// One parsed product term: rational coefficient times variable powers.
#[derive(Debug, Clone)]
struct RawTerm {
    coeff: BigRational,
    powers: Vec<(Var, u32)>,
}

fn parse_terms(input: &str) -> Result<Vec<RawTerm>, PolyError> {
    let toks = lex(input)?;
    let mut terms = Vec::new();
    let mut i = 0;
    // Special case: a bare "0" (or empty input) is the zero polynomial.
    if toks.is_empty() {
        return Err(PolyError::Parse("empty polynomial".to_string()));
    }
    while i < toks.len() {
        let mut sign = BigRational::one();
        let mut saw_sign = false;
        while let Some(t) = toks.get(i) {
            match t {
                Tok::Plus => {
                    i += 1;
                    saw_sign = true;
                }
                Tok::Minus => {
                    sign = -sign;
                    i += 1;
                    saw_sign = true;
                }
                _ => break,
            }
        }
        if i >= toks.len() {
            return Err(PolyError::Parse("dangling sign".to_string()));
        }
        if !terms.is_empty() && !saw_sign {
            return Err(PolyError::Parse("missing `+` or `-` between terms".to_string()));
        }
        let mut coeff = sign;
        let mut powers: Vec<(Var, u32)> = Vec::new();
        let mut expect_factor = true;
        while expect_factor {
            match toks.get(i) {
                Some(Tok::Num(n)) => {
                    i += 1;
                    let mut c = BigRational::from_integer(n.clone());
                    if let Some(Tok::Slash) = toks.get(i) {
                        i += 1;
                        match toks.get(i) {
                            Some(Tok::Num(d)) if !d.is_zero() => {
                                c = BigRational::new(c.to_integer(), d.clone());
                                i += 1;
                            }
                            _ => return Err(PolyError::Parse("bad rational coefficient".to_string())),
                        }
                    }
                    coeff *= c;
                }
                Some(Tok::Var(v)) => {
                    let v = *v;
                    i += 1;
                    let mut exp = 1u32;
                    if let Some(Tok::Caret) = toks.get(i) {
                        i += 1;
                        match toks.get(i) {
                            Some(Tok::Num(n)) => {
                                exp = u32::try_from(n.to_u64_digits().1.first().copied().unwrap_or(0))
                                    .map_err(|_| PolyError::Parse("exponent too large".to_string()))?;
                                if n.is_negative() {
                                    return Err(PolyError::Parse("negative exponent".to_string()));
                                }
                                i += 1;
                            }
                            _ => return Err(PolyError::Parse("missing exponent".to_string())),
                        }
                    }
                    powers.push((v, exp));
                }
                _ => return Err(PolyError::Parse("expected a coefficient or variable".to_string())),
            }
            // A following `*` continues the product.
            if let Some(Tok::Star) = toks.get(i) {
                i += 1;
                expect_factor = true;
            } else {
                expect_factor = false;
            }
        }
        terms.push(RawTerm { coeff, powers });
    }
    Ok(terms)
}

/// Parse the canonical text form into a univariate polynomial in `var`.
pub fn parse_unipoly(input: &str, var: Var) -> Result<UniPoly, PolyError> {
    let terms = parse_terms(input)?;
    let mut p = UniPoly::zero();
    for t in terms {
        let mut exp = 0u32;
        for (v, e) in &t.powers {
            if *v != var {
                return Err(PolyError::UnknownVar(v.to_string()));
            }
            exp += e;
        }
        let cur = p.coeff(exp) + t.coeff;
        p.set(exp, cur);
    }
    Ok(p)
}

/// Parse the canonical text form into a polynomial over the given universe.
pub fn parse_multipoly(input: &str, vars: Vec<Var>) -> Result<MultiPoly, PolyError> {
    let terms = parse_terms(input)?;
    let mut p = MultiPoly::zero(vars);
    for t in terms {
        let mut exps = vec![0u32; p.vars.len()];
        for (v, e) in &t.powers {
            let idx = p
                .vars
                .iter()
                .position(|u| u == v)
                .ok_or_else(|| PolyError::UnknownVar(v.to_string()))?;
            exps[idx] += e;
        }
        let cur = p.coeff(&exps) + t.coeff;
        p.set(exps, cur);
    }
    Ok(p)
}

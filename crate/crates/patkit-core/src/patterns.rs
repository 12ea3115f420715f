//! Polynomial point patterns `x + P_1(y), ..., x + P_t(y)` and their algebraic structure:
//! the kernel system (tuples `(Q_1, ..., Q_t)` with `sum_i Q_i(x + P_i(y)) = 0`), its
//! graded slices, homogeneity, and transferability under the linearization `y^j -> y_j`.
//!
//! All computations here are exact. The kernel basis is canonical: reduced row echelon
//! form over the degree-major coordinate order `(z^0 block, z^1 block, ...)`, with leading
//! coefficient 1 and rows sorted by leading position. Over that order the canonical basis
//! of a degree-decomposable kernel is automatically single-degree per row, so homogeneity
//! failures surface as mixed rows.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::linalg::{self, Row};
use crate::poly::{compose, MultiPoly, PolyError, UniPoly, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternError {
    TooFewPolynomials,
    NonIntegerCoefficients(usize),
    NonzeroConstantTerm(usize),
    DuplicatePolynomials(usize, usize),
    /// A candidate kernel tuple fails the defining relation.
    NotInKernel,
    TupleArityMismatch,
    Poly(PolyError),
}

impl fmt::Display for PatternError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternError::TooFewPolynomials => write!(f, "a pattern needs at least two polynomials"),
            PatternError::NonIntegerCoefficients(i) => {
                write!(f, "pattern polynomial #{} has non-integer coefficients", i + 1)
            }
            PatternError::NonzeroConstantTerm(i) => {
                write!(f, "pattern polynomial #{} must satisfy P({}) = 0 at 0", i + 1, 0)
            }
            PatternError::DuplicatePolynomials(i, j) => {
                write!(f, "pattern polynomials #{} and #{} are identical", i + 1, j + 1)
            }
            PatternError::NotInKernel => write!(f, "tuple does not satisfy the kernel relation"),
            PatternError::TupleArityMismatch => write!(f, "tuple length differs from pattern length"),
            PatternError::Poly(e) => write!(f, "{e}"),
        }
    }
}

impl From<PolyError> for PatternError {
    fn from(e: PolyError) -> Self {
        PatternError::Poly(e)
    }
}

/// The pattern `x + P_1(y), ..., x + P_t(y)`: `t >= 2` distinct integer polynomials
/// with zero constant term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSpec {
    polys: Vec<UniPoly>,
    pub name: Option<String>,
}

impl PatternSpec {
    pub fn new(polys: Vec<UniPoly>, name: Option<String>) -> Result<Self, PatternError> {
        if polys.len() < 2 {
            return Err(PatternError::TooFewPolynomials);
        }
        for (i, p) in polys.iter().enumerate() {
            if !p.has_integer_coeffs() {
                return Err(PatternError::NonIntegerCoefficients(i));
            }
            if !p.coeff(0).is_zero() {
                return Err(PatternError::NonzeroConstantTerm(i));
            }
        }
        for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                if polys[i] == polys[j] {
                    return Err(PatternError::DuplicatePolynomials(i, j));
                }
            }
        }
        Ok(PatternSpec { polys, name })
    }

    /// Parse from integer coefficient lists (`coeffs[j]` is the `y^j` coefficient).
    pub fn from_coeffs(polys: &[&[i64]], name: Option<String>) -> Result<Self, PatternError> {
        PatternSpec::new(polys.iter().map(|c| UniPoly::from_int_coeffs(c)).collect(), name)
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn polys(&self) -> &[UniPoly] {
        &self.polys
    }

    /// Max degree of the `P_i` (0 if all are the zero polynomial, which `new` forbids
    /// for two polynomials since they would coincide).
    pub fn max_degree(&self) -> u32 {
        self.polys.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    /// The shifted point `x + P_i(y)` over the universe `(x, y)`.
    pub fn shifted_point(&self, i: usize) -> MultiPoly {
        let vars = vec![Var::X, Var::Y];
        let x = MultiPoly::var(vars.clone(), Var::X);
        x.add(&MultiPoly::from_unipoly(vars, Var::Y, &self.polys[i]))
            .expect("same universe")
    }

    /// Pattern with the `P_i` reordered by `perm` (used for equivariance checks).
    pub fn permuted(&self, perm: &[usize]) -> PatternSpec {
        PatternSpec {
            polys: perm.iter().map(|&i| self.polys[i].clone()).collect(),
            name: self.name.clone(),
        }
    }

    /// Default kernel degree bound `t * d`.
    pub fn default_degree_bound(&self) -> u32 {
        (self.len() as u32) * self.max_degree().max(1)
    }
}

/// The linearized pattern: `L[i][j-1]` is the `y^j` coefficient of `P_i`, so that
/// `P_i*(y_1, ..., y_d) = sum_j L[i][j-1] y_j` recovers `P_i(y)` under `y_j -> y^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearizedPattern {
    pub d: u32,
    pub coeffs: Vec<Vec<BigInt>>,
}

impl LinearizedPattern {
    pub fn t(&self) -> usize {
        self.coeffs.len()
    }

    /// Universe `(x, y_1, ..., y_d)` of the linearized relation.
    pub fn universe(&self) -> Vec<Var> {
        let mut vars = vec![Var::X];
        vars.extend((1..=self.d).map(Var::Yi));
        vars
    }

    /// The shifted linear point `x + P_i*(y_1, ..., y_d)`.
    pub fn shifted_point(&self, i: usize) -> MultiPoly {
        let vars = self.universe();
        let mut acc = MultiPoly::var(vars.clone(), Var::X);
        for (j, c) in self.coeffs[i].iter().enumerate() {
            if !c.is_zero() {
                let term = MultiPoly::var(vars.clone(), Var::Yi(j as u32 + 1))
                    .scale(&BigRational::from_integer(c.clone()));
                acc = acc.add(&term).expect("same universe");
            }
        }
        acc
    }

    /// `P_i*` alone (no `x` shift), used for difference forms `P_i* - P_j*`.
    pub fn linear_form(&self, i: usize) -> Vec<BigInt> {
        self.coeffs[i].clone()
    }
}

/// Extract the linearized pattern: read off coefficient rows of each `P_i`.
pub fn linearize(p: &PatternSpec) -> LinearizedPattern {
    let d = p.max_degree().max(1);
    let coeffs = p
        .polys()
        .iter()
        .map(|poly| {
            (1..=d)
                .map(|j| {
                    let c = poly.coeff(j);
                    debug_assert!(c.is_integer());
                    c.to_integer()
                })
                .collect()
        })
        .collect();
    LinearizedPattern { d, coeffs }
}

/// A tuple `(Q_1, ..., Q_t)` satisfying `sum_i Q_i(x + P_i(y)) = 0`; the relation is
/// re-verified symbolically on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelTuple {
    qs: Vec<UniPoly>,
}

impl KernelTuple {
    pub fn new(pattern: &PatternSpec, qs: Vec<UniPoly>) -> Result<Self, PatternError> {
        if qs.len() != pattern.len() {
            return Err(PatternError::TupleArityMismatch);
        }
        let tuple = KernelTuple { qs };
        if !tuple.relation_sum(pattern).is_zero() {
            return Err(PatternError::NotInKernel);
        }
        Ok(tuple)
    }

    pub fn qs(&self) -> &[UniPoly] {
        &self.qs
    }

    /// `sum_i Q_i(x + P_i(y))`, fully expanded (zero exactly when the tuple is in the kernel).
    pub fn relation_sum(&self, pattern: &PatternSpec) -> MultiPoly {
        let mut acc = MultiPoly::zero(vec![Var::X, Var::Y]);
        for (q, i) in self.qs.iter().zip(0..) {
            acc = acc.add(&compose(q, &pattern.shifted_point(i))).expect("same universe");
        }
        acc
    }

    /// `sum_i Q_i(x + P_i*(y_1, ..., y_d))`, the transferability substitution.
    pub fn linearized_sum(&self, lp: &LinearizedPattern) -> MultiPoly {
        let mut acc = MultiPoly::zero(lp.universe());
        for (q, i) in self.qs.iter().zip(0..) {
            acc = acc.add(&compose(q, &lp.shifted_point(i))).expect("same universe");
        }
        acc
    }

    /// True when every `Q_i` is a monomial `c_i z^j` of one common degree `j` (or zero).
    pub fn is_single_degree(&self) -> bool {
        let mut degree: Option<u32> = None;
        for q in &self.qs {
            let (Some(top), Some(bot)) = (q.degree(), q.bottom_degree()) else {
                continue;
            };
            if top != bot {
                return false;
            }
            match degree {
                None => degree = Some(top),
                Some(d) if d == top => {}
                _ => return false,
            }
        }
        true
    }

    /// Coefficient vector in the degree-major order `(z^0 block, z^1 block, ...)`.
    fn to_coords(&self, k: u32) -> Row {
        let t = self.qs.len();
        let mut v = vec![BigRational::zero(); t * (k as usize + 1)];
        for (i, q) in self.qs.iter().enumerate() {
            for (e, c) in q.terms() {
                v[e as usize * t + i] = c.clone();
            }
        }
        v
    }

    fn from_coords(v: &[BigRational], t: usize) -> Self {
        let qs = (0..t)
            .map(|i| {
                UniPoly::from_terms(
                    v.iter()
                        .enumerate()
                        .filter(|(idx, c)| idx % t == i && !c.is_zero())
                        .map(|(idx, c)| ((idx / t) as u32, c.clone())),
                )
            })
            .collect();
        KernelTuple { qs }
    }
}

impl fmt::Display for KernelTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.qs.iter().map(|q| q.display_with("z")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Basis of the degree-bounded slice of the kernel system, plus its graded dimensions.
#[derive(Debug, Clone)]
pub struct KernelBasis {
    pub degree_bound: u32,
    pub basis: Vec<KernelTuple>,
    /// `graded_dims[i]` is the dimension of the kernel intersected with the tuples
    /// `(c_1 z^i, ..., c_t z^i)` of single degree `i`, for `i = 0..=degree_bound`.
    pub graded_dims: Vec<usize>,
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coords_matrix(&self) -> Vec<Row> {
        self.basis.iter().map(|b| b.to_coords(self.degree_bound)).collect()
    }
}

/// Exact basis of `{(Q_1, ..., Q_t) : deg Q_i <= k, sum_i Q_i(x + P_i(y)) = 0}`.
///
/// Solved as the integer nullspace of the linear map sending coefficient vectors
/// `(q_{i,l})` to the monomial coefficients of `sum_{i,l} q_{i,l} (x + P_i(y))^l`.
pub fn kernel_system(p: &PatternSpec, k: u32) -> KernelBasis {
    assert!(k >= 1, "degree bound must be at least 1");
    let t = p.len();
    let vars = vec![Var::X, Var::Y];

    // powers[i][l] = (x + P_i(y))^l
    let powers: Vec<Vec<MultiPoly>> = (0..t)
        .map(|i| {
            let s = p.shifted_point(i);
            let mut pw = vec![MultiPoly::constant(vars.clone(), crate::poly::rat(1))];
            for l in 1..=k {
                let next = pw[l as usize - 1].mul(&s).expect("same universe");
                pw.push(next);
            }
            pw
        })
        .collect();

    // Row index per monomial appearing anywhere.
    let mut monomials: Vec<Vec<u32>> = Vec::new();
    for pw in &powers {
        for poly in pw {
            for (e, _) in poly.terms() {
                if !monomials.contains(e) {
                    monomials.push(e.clone());
                }
            }
        }
    }
    monomials.sort();

    let ncols = t * (k as usize + 1);
    let mut matrix: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); ncols]; monomials.len()];
    for (i, pw) in powers.iter().enumerate() {
        for (l, poly) in pw.iter().enumerate() {
            let col = l * t + i;
            for (e, c) in poly.terms() {
                let row = monomials.binary_search(e).expect("indexed monomial");
                debug_assert!(c.is_integer());
                matrix[row][col] = c.to_integer();
            }
        }
    }

    let mut null = linalg::int_nullspace(&matrix, ncols);
    linalg::rref(&mut null);

    let basis = null
        .iter()
        .map(|v| {
            let tuple = KernelTuple::from_coords(v, t);
            debug_assert!(tuple.relation_sum(p).is_zero());
            tuple
        })
        .collect();

    // Graded slices: for each degree l, solve sum_i c_i (x + P_i(y))^l = 0 in the c_i alone.
    let graded_dims = (0..=k)
        .map(|l| {
            let slice_rows: Vec<Row> = monomials
                .iter()
                .map(|e| (0..t).map(|i| powers[i][l as usize].coeff(e)).collect())
                .collect();
            t - linalg::rank(slice_rows)
        })
        .collect();

    KernelBasis { degree_bound: k, basis, graded_dims }
}

/// A pattern is homogeneous when the kernel decomposes as the direct sum of its
/// single-degree slices, i.e. the bounded kernel dimension equals the graded total.
pub fn is_homogeneous(kb: &KernelBasis) -> bool {
    kb.dim() == kb.graded_dims.iter().sum::<usize>()
}

/// Classification outcome for one pattern at one degree bound.
#[derive(Debug, Clone)]
pub struct Classification {
    pub homogeneous: bool,
    pub transferable: bool,
    /// First basis tuple whose linearized substitution fails (absent when transferable).
    pub witness: Option<KernelTuple>,
    /// The nonzero expansion `sum_i Q_i(x + P_i*(y_vec))` of the witness.
    pub witness_expansion: Option<MultiPoly>,
    pub degree_bound: u32,
}

/// Transferability check: every kernel relation must survive the substitution
/// `y^j -> y_j`. Linearity makes checking the basis sufficient.
pub fn is_transferable(p: &PatternSpec, kb: &KernelBasis) -> Classification {
    let lp = linearize(p);
    let homogeneous = is_homogeneous(kb);
    let mut witness = None;
    let mut witness_expansion = None;
    for tuple in &kb.basis {
        let expansion = tuple.linearized_sum(&lp);
        if !expansion.is_zero() {
            witness = Some(tuple.clone());
            witness_expansion = Some(expansion);
            break;
        }
    }
    let transferable = witness.is_none();
    // Transferable patterns are homogeneous; surface a violation instead of
    // returning an impossible classification.
    assert!(
        !transferable || homogeneous,
        "classification inconsistency: transferable but not homogeneous at bound {}",
        kb.degree_bound
    );
    Classification {
        homogeneous,
        transferable,
        witness,
        witness_expansion,
        degree_bound: kb.degree_bound,
    }
}

/// Convenience wrapper: kernel system then transferability at the given bound.
pub fn classify(p: &PatternSpec, k: u32) -> (KernelBasis, Classification) {
    let kb = kernel_system(p, k);
    let cls = is_transferable(p, &kb);
    (kb, cls)
}

/// First basis tuple that is not single-degree (the homogeneity failure witness).
pub fn homogeneity_witness(kb: &KernelBasis) -> Option<&KernelTuple> {
    kb.basis.iter().find(|t| !t.is_single_degree())
}

pub fn format_graded_dims(kb: &KernelBasis) -> String {
    format!("{:?}", kb.graded_dims)
}

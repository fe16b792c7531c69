//! Exact complex-rational operators, plus a double-precision companion layer
//! for spectral quantities (trace norm, entropy) that are irrational in general.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::perm::Permutation;
use crate::util::{fraction_string, nearest_rational, parse_fraction, rational_to_f64};

/// Tolerance for Hermiticity and unit trace in the float layer.
pub const FLOAT_TOL: f64 = 1e-10;
/// Eigenvalues above `-PSD_TOL` count as nonnegative.
pub const PSD_TOL: f64 = 1e-9;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactScalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ExactScalar { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        ExactScalar { re, im: BigRational::zero() }
    }

    pub fn from_integer(value: i64) -> Self {
        Self::real(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ExactScalar { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        ExactScalar { re: &self.re * factor, im: &self.im * factor }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl From<BigRational> for ExactScalar {
    fn from(re: BigRational) -> Self {
        ExactScalar::real(re)
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: ExactScalar) -> ExactScalar {
        ExactScalar { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        if rhs.is_zero() {
            return;
        }
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        if self.is_zero() || rhs.is_zero() {
            return ExactScalar::zero();
        }
        ExactScalar { re: &self.re * &rhs.re - &self.im * &rhs.im, im: &self.re * &rhs.im + &self.im * &rhs.re }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { re: -self.re, im: -self.im }
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    re: String,
    im: String,
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ScalarRepr { re: fraction_string(&self.re), im: fraction_string(&self.im) }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ScalarRepr::deserialize(deserializer)?;
        let re = parse_fraction(&repr.re).map_err(serde::de::Error::custom)?;
        let im = parse_fraction(&repr.im).map_err(serde::de::Error::custom)?;
        Ok(ExactScalar { re, im })
    }
}

/// Dense square matrix over exact complex rationals, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactOperator {
    dim: usize,
    entries: Vec<ExactScalar>,
}

impl ExactOperator {
    pub fn zeros(dim: usize) -> Self {
        ExactOperator { dim, entries: vec![ExactScalar::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out.set(i, i, ExactScalar::one());
        }
        out
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> ExactScalar) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for row in 0..dim {
            for col in 0..dim {
                entries.push(f(row, col));
            }
        }
        ExactOperator { dim, entries }
    }

    /// `|e_row⟩⟨e_col|`.
    pub fn matrix_unit(dim: usize, row: usize, col: usize) -> Self {
        let mut out = Self::zeros(dim);
        out.set(row, col, ExactScalar::one());
        out
    }

    /// Diagonal matrix with the given rational entries.
    pub fn diagonal(values: &[BigRational]) -> Self {
        let mut out = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            out.set(i, i, ExactScalar::real(v.clone()));
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> &ExactScalar {
        &self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: ExactScalar) {
        self.entries[row * self.dim + col] = value;
    }

    #[inline]
    pub(crate) fn add_at(&mut self, row: usize, col: usize, value: &ExactScalar) {
        self.entries[row * self.dim + col] += value;
    }

    fn check_same_dim(&self, other: &ExactOperator) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::dim(format!("operators of dimension {} and {}", self.dim, other.dim)));
        }
        Ok(())
    }

    pub fn add(&self, other: &ExactOperator) -> Result<ExactOperator> {
        self.check_same_dim(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(ExactOperator { dim: self.dim, entries })
    }

    pub fn sub(&self, other: &ExactOperator) -> Result<ExactOperator> {
        self.check_same_dim(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(ExactOperator { dim: self.dim, entries })
    }

    pub fn scale(&self, factor: &BigRational) -> ExactOperator {
        let entries = self.entries.iter().map(|a| a.scale(factor)).collect();
        ExactOperator { dim: self.dim, entries }
    }

    pub fn mul(&self, other: &ExactOperator) -> Result<ExactOperator> {
        self.check_same_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_at(i, j, &(a * b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> ExactOperator {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn transpose(&self) -> ExactOperator {
        Self::from_fn(self.dim, |r, c| self.get(c, r).clone())
    }

    pub fn trace(&self) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for i in 0..self.dim {
            acc += self.get(i, i);
        }
        acc
    }

    pub fn is_hermitian(&self) -> bool {
        (0..self.dim).all(|r| (r..self.dim).all(|c| *self.get(r, c) == self.get(c, r).conj()))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExactScalar::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|r| (0..self.dim).all(|c| r == c || self.get(r, c).is_zero()))
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.entries
    }

    /// `a ⊗ b`, with `a` on the more significant factor.
    pub fn kron(a: &ExactOperator, b: &ExactOperator) -> ExactOperator {
        let db = b.dim;
        ExactOperator::from_fn(a.dim * db, |r, c| a.get(r / db, c / db) * b.get(r % db, c % db))
    }

    /// `U^π A U^π†` by index relabeling: `result[π·x, π·w] = A[x, w]`.
    pub fn conjugate_by_permutation(&self, pi: &Permutation, d: usize) -> Result<ExactOperator> {
        let dim = crate::limits::checked_pow(d, pi.n());
        if dim != Some(self.dim) {
            return Err(Error::dim(format!("operator of dimension {} on (C^{d})^(⊗{})", self.dim, pi.n())));
        }
        let table = pi.basis_action(d);
        Ok(self.relabel(&table))
    }

    /// `result[t[x], t[w]] = self[x, w]` for a bijection `t` of basis indices.
    pub(crate) fn relabel(&self, table: &[usize]) -> ExactOperator {
        let mut out = Self::zeros(self.dim);
        for (x, &tx) in table.iter().enumerate() {
            for (w, &tw) in table.iter().enumerate() {
                out.entries[tx * self.dim + tw] = self.get(x, w).clone();
            }
        }
        out
    }

    pub fn to_float(&self) -> FloatOperator {
        FloatOperator::from_fn(self.dim, |r, c| self.get(r, c).to_complex())
    }

    /// Rounds every entry to the closest rational with denominator at most `max_den`.
    pub fn from_float_nearest(op: &FloatOperator, max_den: u64) -> ExactOperator {
        ExactOperator::from_fn(op.dim(), |r, c| {
            let z = op.get(r, c);
            ExactScalar::new(nearest_rational(z.re, max_den), nearest_rational(z.im, max_den))
        })
    }
}

/// Dense complex double-precision square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatOperator {
    m: DMatrix<Complex64>,
}

impl FloatOperator {
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::dim(format!("{}x{} matrix is not square", m.nrows(), m.ncols())));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("non-finite matrix entry"));
        }
        Ok(FloatOperator { m })
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        FloatOperator { m: DMatrix::from_fn(dim, dim, f) }
    }

    pub fn zeros(dim: usize) -> Self {
        FloatOperator { m: DMatrix::zeros(dim, dim) }
    }

    /// `|v⟩⟨v|`.
    pub fn projector(v: &DVector<Complex64>) -> Self {
        FloatOperator { m: v * v.adjoint() }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let scale = Complex64::new(1.0 / dim as f64, 0.0);
        FloatOperator { m: DMatrix::identity(dim, dim) * scale }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.m
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    pub fn add(&self, other: &FloatOperator) -> Result<FloatOperator> {
        self.check_same_dim(other)?;
        Ok(FloatOperator { m: &self.m + &other.m })
    }

    pub fn sub(&self, other: &FloatOperator) -> Result<FloatOperator> {
        self.check_same_dim(other)?;
        Ok(FloatOperator { m: &self.m - &other.m })
    }

    pub fn scale(&self, factor: f64) -> FloatOperator {
        FloatOperator { m: &self.m * Complex64::new(factor, 0.0) }
    }

    fn check_same_dim(&self, other: &FloatOperator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::dim(format!("operators of dimension {} and {}", self.dim(), other.dim())));
        }
        Ok(())
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &FloatOperator) -> f64 {
        (&self.m - &other.m).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|r| (r..n).all(|c| (self.m[(r, c)] - self.m[(c, r)].conj()).norm() <= tol))
    }

    pub fn kron(a: &FloatOperator, b: &FloatOperator) -> FloatOperator {
        FloatOperator { m: a.m.kronecker(&b.m) }
    }

    fn require_hermitian(&self) -> Result<()> {
        if !self.is_hermitian(FLOAT_TOL) {
            return Err(Error::contract("operator is not Hermitian"));
        }
        Ok(())
    }

    /// Ascending eigenvalues of a Hermitian operator.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.require_hermitian()?;
        let mut values: Vec<f64> = self.m.clone().symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    /// Eigenvalues and orthonormal eigenvectors (as columns) of a Hermitian operator.
    pub fn eigen(&self) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
        self.require_hermitian()?;
        let eig = self.m.clone().symmetric_eigen();
        Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
    }

    /// `‖A‖₁ = Σ|λ|` for Hermitian `A`.
    pub fn trace_norm(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.iter().map(|l| l.abs()).sum())
    }

    /// Checks the density-matrix contract: Hermitian, positive semidefinite,
    /// unit trace.
    pub fn check_density(&self) -> Result<Vec<f64>> {
        let values = self.eigenvalues()?;
        let trace = self.trace();
        if (trace.re - 1.0).abs() > FLOAT_TOL || trace.im.abs() > FLOAT_TOL {
            return Err(Error::contract(format!("trace {trace} is not 1")));
        }
        if values.first().is_some_and(|&l| l < -PSD_TOL) {
            return Err(Error::contract(format!("negative eigenvalue {}", values[0])));
        }
        Ok(values)
    }

    /// `S(ρ) = -Σ λ log₂ λ`, in bits.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        let values = self.check_density()?;
        Ok(crate::util::entropy_bits(values))
    }

    /// Traces out the first factor of `C^{d_a} ⊗ C^{d_b}`.
    pub fn partial_trace_first(&self, d_a: usize, d_b: usize) -> Result<FloatOperator> {
        self.check_bipartite(d_a, d_b)?;
        Ok(FloatOperator::from_fn(d_b, |r, c| (0..d_a).map(|a| self.m[(a * d_b + r, a * d_b + c)]).sum()))
    }

    /// Traces out the second factor of `C^{d_a} ⊗ C^{d_b}`.
    pub fn partial_trace_second(&self, d_a: usize, d_b: usize) -> Result<FloatOperator> {
        self.check_bipartite(d_a, d_b)?;
        Ok(FloatOperator::from_fn(d_a, |r, c| (0..d_b).map(|b| self.m[(r * d_b + b, c * d_b + b)]).sum()))
    }

    fn check_bipartite(&self, d_a: usize, d_b: usize) -> Result<()> {
        if d_a * d_b != self.dim() {
            return Err(Error::dim(format!("{} is not {d_a} x {d_b}", self.dim())));
        }
        Ok(())
    }

    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }
}

/// Projector onto `(1/√D) Σ_x |e_x⟩⊗|e_x⟩` on `C^D ⊗ C^D`.
pub fn maximally_entangled_state(dim: usize, limits: &Limits) -> Result<FloatOperator> {
    Ok(maximally_entangled_exact(dim, limits)?.to_float())
}

/// Exact form of [`maximally_entangled_state`]: entries `1/D` at `(xx, yy)`.
pub fn maximally_entangled_exact(dim: usize, limits: &Limits) -> Result<ExactOperator> {
    if dim == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let doubled = dim.checked_mul(dim).filter(|&dd| dd <= limits.max_dim);
    let doubled = doubled.ok_or_else(|| Error::size(format!("doubled dimension {dim}^2 too large")))?;
    let mut out = ExactOperator::zeros(doubled);
    let weight = ExactScalar::real(crate::util::ratio(1, dim));
    for x in 0..dim {
        for y in 0..dim {
            out.set(x * dim + x, y * dim + y, weight.clone());
        }
    }
    Ok(out)
}

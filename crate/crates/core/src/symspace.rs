//! The symmetric subspace of `(C^d)^{⊗n}`, permutation invariance, and the
//! doubled purification of permutation-invariant states.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{ExactOperator, FloatOperator, PSD_TOL};
use crate::limits::{checked_pow, Limits};
use crate::perm::{enumerate_permutations, Permutation};
use crate::typestat::{enumerate_types, type_class, type_class_size};

/// Tolerance for invariance of the doubled purification.
pub const PURIFICATION_TOL: f64 = 1e-9;

/// Occupation-number basis: for each type, the normalized sum of the basis
/// vectors of its type class. Ordered as [`enumerate_types`].
pub fn sym_basis(d: usize, n: usize, limits: &Limits) -> Result<Vec<DVector<Complex64>>> {
    let dim = limits.check_dim(d, n)?;
    enumerate_types(n, d, limits)?
        .iter()
        .map(|mu| {
            let size = type_class_size(mu);
            let amplitude = 1.0 / size.to_string().parse::<f64>().expect("integer").sqrt();
            let mut v = DVector::zeros(dim);
            for x in type_class(mu) {
                v[x.index().0] = Complex64::new(amplitude, 0.0);
            }
            Ok(v)
        })
        .collect()
}

/// Orthogonal projector onto the symmetric subspace.
pub fn sym_projector(d: usize, n: usize, limits: &Limits) -> Result<FloatOperator> {
    let dim = limits.check_dim(d, n)?;
    let mut m = DMatrix::zeros(dim, dim);
    for v in sym_basis(d, n, limits)? {
        m += &v * v.adjoint();
    }
    FloatOperator::from_matrix(m)
}

/// `n` with `d^n = dim`, if any.
fn tensor_power(dim: usize, d: usize) -> Result<usize> {
    if d >= 2 {
        let mut n = 0;
        while let Some(p) = checked_pow(d, n).filter(|&p| p <= dim) {
            if p == dim {
                return Ok(n);
            }
            n += 1;
        }
    }
    Err(Error::dim(format!("dimension {dim} is not a positive power of {d}")))
}

fn adjacent_transposition(n: usize, i: usize) -> Permutation {
    let mut map: Vec<usize> = (0..n).collect();
    map.swap(i, i + 1);
    Permutation::from_zero_based(map)
}

/// Whether `U^π ρ U^π† = ρ` for every `π`. Adjacent transpositions generate
/// `S_n`, so only those are checked. A 1x1 operator counts as invariant for
/// any `d`.
pub fn is_permutation_invariant(rho: &ExactOperator, d: usize) -> Result<bool> {
    if rho.dim() == 1 {
        return Ok(true);
    }
    let n = tensor_power(rho.dim(), d)?;
    for i in 0..n.saturating_sub(1) {
        if rho.conjugate_by_permutation(&adjacent_transposition(n, i), d)? != *rho {
            return Ok(false);
        }
    }
    Ok(true)
}

/// [`is_permutation_invariant`] checked against every element of `S_n`.
pub fn is_permutation_invariant_exhaustive(rho: &ExactOperator, d: usize, limits: &Limits) -> Result<bool> {
    if rho.dim() == 1 {
        return Ok(true);
    }
    let n = tensor_power(rho.dim(), d)?;
    for perm in enumerate_permutations(n, limits)? {
        if rho.conjugate_by_permutation(&perm, d)? != *rho {
            return Ok(false);
        }
    }
    Ok(true)
}

fn is_float_invariant(rho: &FloatOperator, d: usize, n: usize) -> bool {
    let dim = rho.dim();
    (0..n.saturating_sub(1)).all(|i| {
        let table = adjacent_transposition(n, i).basis_action(d);
        (0..dim).all(|r| (0..dim).all(|c| (rho.get(table[r], table[c]) - rho.get(r, c)).norm() <= PSD_TOL))
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Purification {
    /// `(U^π ⊗ U^π)|ψ⟩ = |ψ⟩` for every `π`, within [`PURIFICATION_TOL`].
    pub invariant: bool,
    /// `|ψ⟩` on `(C^d)^{⊗n} ⊗ (C^d)^{⊗n}`, first factor major.
    pub witness: DVector<Complex64>,
}

/// `|ψ⟩ = Σ √λ_i |ν_i⟩ ⊗ |ν̄_i⟩` from eigenvalues and eigenvector columns.
/// Zero eigenvalues are kept and contribute nothing; tiny negative ones from
/// rounding are treated as zero.
///
/// The conjugate on the second factor makes `|ψ⟩ = (√ρ ⊗ 1) Σ_x |x⟩|x⟩`,
/// independent of the eigenbasis chosen in degenerate eigenspaces. For real
/// eigenvectors it is `Σ √λ_i |ν_i⟩ ⊗ |ν_i⟩`.
pub fn doubled_purification(eigenvalues: &[f64], eigenvectors: &DMatrix<Complex64>) -> Result<DVector<Complex64>> {
    let dim = eigenvectors.nrows();
    if eigenvectors.ncols() != eigenvalues.len() {
        return Err(Error::dim(format!("{} eigenvalues for {} eigenvectors", eigenvalues.len(), eigenvectors.ncols())));
    }
    let mut psi = DVector::zeros(dim * dim);
    for (i, &lambda) in eigenvalues.iter().enumerate() {
        if lambda < -PSD_TOL {
            return Err(Error::contract(format!("negative eigenvalue {lambda}")));
        }
        let amplitude = lambda.max(0.0).sqrt();
        if amplitude == 0.0 {
            continue;
        }
        let v = eigenvectors.column(i);
        for a in 0..dim {
            for b in 0..dim {
                psi[a * dim + b] += v[a] * v[b].conj() * amplitude;
            }
        }
    }
    Ok(psi)
}

/// Whether `(U^π ⊗ U^π)|ψ⟩ = |ψ⟩` for every `π ∈ S_n`, within `tol`.
pub fn is_doubled_invariant(psi: &DVector<Complex64>, d: usize, n: usize, tol: f64, limits: &Limits) -> Result<bool> {
    let dim = limits.check_dim(d, n)?;
    if psi.len() != dim * dim {
        return Err(Error::dim(format!("vector of length {} on a doubled space of {dim}^2", psi.len())));
    }
    for perm in enumerate_permutations(n, limits)? {
        let t = perm.basis_action(d);
        for a in 0..dim {
            for b in 0..dim {
                if (psi[t[a] * dim + t[b]] - psi[a * dim + b]).norm() > tol {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Builds the doubled purification of a permutation-invariant state and checks
/// that it is fixed by the diagonal action `U^π ⊗ U^π`.
pub fn purification_in_doubled_sym(rho: &FloatOperator, d: usize, limits: &Limits) -> Result<Purification> {
    let n = tensor_power(rho.dim(), d)?;
    limits.check_dim(d, 2 * n)?;
    rho.check_density()?;
    if !is_float_invariant(rho, d, n) {
        return Err(Error::Precondition("state is not permutation invariant".into()));
    }
    let (values, vectors) = rho.eigen()?;
    let witness = doubled_purification(&values, &vectors)?;
    let invariant = is_doubled_invariant(&witness, d, n, PURIFICATION_TOL, limits)?;
    Ok(Purification { invariant, witness })
}

/// [`purification_in_doubled_sym`] for an exact state; invariance is checked
/// exactly first.
pub fn purification_in_doubled_sym_exact(rho: &ExactOperator, d: usize, limits: &Limits) -> Result<Purification> {
    if !is_permutation_invariant(rho, d)? {
        return Err(Error::Precondition("state is not permutation invariant".into()));
    }
    purification_in_doubled_sym(&rho.to_float(), d, limits)
}

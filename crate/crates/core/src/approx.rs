//! Approximate designs and channel designs.
//!
//! The distance between the uniform twirl `𝒰̄` and a weighted twirl `𝒰̄_q` in
//! diamond norm is bracketed rather than computed: the upper end is the `ℓ1`
//! distance of `q` from uniform, the lower end the best output trace-norm
//! difference over a family of inputs (one basis state per type, plus the
//! maximally entangled state on the doubled space).
//!
//! Channel designs reduce to state designs through the Choi state
//! `σ_𝒩 = (𝒩 ⊗ id)(|Φ⟩⟨Φ|)`: conjugating a channel by tensor-factor
//! permutations, `𝒰_π ∘ 𝒩 ∘ 𝒱_{π⁻¹}`, conjugates its Choi state by
//! `U^π ⊗ V^π`, which is the permutation action on `(C^{dK·dH})^{⊗n}`.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::bounds::{entropy_rate_lower_approx, DimensionConvention};
use crate::design::{build_constraint_system, verify_design, Verdict, Violation};
use crate::error::{Error, Result};
use crate::exact::{ExactOperator, ExactScalar, FloatOperator, FLOAT_TOL};
use crate::limits::{checked_pow, Limits};
use crate::linalg::{solve, Solution};
use crate::perm::{enumerate_permutations, Permutation};
use crate::twirl::DistributionOverSn;
use crate::typestat::enumerate_types;
use crate::util::{factorial, rational_to_f64};

/// Tolerance for float channel identities.
pub const CHANNEL_TOL: f64 = 1e-9;

/// Largest `n` for which the entangled-input lower bound is evaluated; it
/// diagonalizes an `n! × n!` Gram matrix.
pub const GRAM_MAX_N: usize = 6;

/// Direct float spot checks of a channel design run only when input and output
/// dimensions are at most this.
pub const SPOT_CHECK_DIM: usize = 64;

/// Rectangular exact matrix `C^{in} → C^{out}`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrausOperator {
    out_dim: usize,
    in_dim: usize,
    entries: Vec<ExactScalar>,
}

impl KrausOperator {
    pub fn new(out_dim: usize, in_dim: usize, entries: Vec<ExactScalar>) -> Result<Self> {
        if entries.len() != out_dim * in_dim {
            return Err(Error::dim(format!("{} entries for a {out_dim}x{in_dim} matrix", entries.len())));
        }
        Ok(KrausOperator { out_dim, in_dim, entries })
    }

    pub fn from_fn(out_dim: usize, in_dim: usize, mut f: impl FnMut(usize, usize) -> ExactScalar) -> Self {
        let entries = (0..out_dim).flat_map(|r| (0..in_dim).map(move |c| (r, c))).map(|(r, c)| f(r, c)).collect();
        KrausOperator { out_dim, in_dim, entries }
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn get(&self, row: usize, col: usize) -> &ExactScalar {
        &self.entries[row * self.in_dim + col]
    }

    pub fn to_float(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.out_dim, self.in_dim, |r, c| self.get(r, c).to_complex())
    }
}

/// A channel `L(C^{in}) → L(C^{out})` in Kraus form. Rational channels keep
/// their exact Kraus operators alongside the float ones.
#[derive(Clone, Debug)]
pub struct ChannelRep {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<DMatrix<Complex64>>,
    exact: Option<Vec<KrausOperator>>,
}

impl ChannelRep {
    /// Requires `Σ K†K = 1` exactly.
    pub fn from_exact(in_dim: usize, out_dim: usize, ops: Vec<KrausOperator>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::invalid("channel without Kraus operators"));
        }
        if let Some(k) = ops.iter().find(|k| k.in_dim != in_dim || k.out_dim != out_dim) {
            return Err(Error::dim(format!(
                "{}x{} Kraus operator in a channel {in_dim} -> {out_dim}",
                k.out_dim, k.in_dim
            )));
        }
        for i in 0..in_dim {
            for j in 0..in_dim {
                let mut sum = ExactScalar::zero();
                for k in &ops {
                    for a in 0..out_dim {
                        sum += &(&k.get(a, i).conj() * k.get(a, j));
                    }
                }
                let expected = if i == j { ExactScalar::one() } else { ExactScalar::zero() };
                if sum != expected {
                    return Err(Error::invalid("Kraus operators do not sum to the identity"));
                }
            }
        }
        let kraus = ops.iter().map(KrausOperator::to_float).collect();
        Ok(ChannelRep { in_dim, out_dim, kraus, exact: Some(ops) })
    }

    /// Requires `Σ K†K = 1` within [`FLOAT_TOL`].
    pub fn from_float(in_dim: usize, out_dim: usize, kraus: Vec<DMatrix<Complex64>>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::invalid("channel without Kraus operators"));
        }
        if kraus.iter().any(|k| k.nrows() != out_dim || k.ncols() != in_dim) {
            return Err(Error::dim(format!("Kraus operator shape differs from {out_dim}x{in_dim}")));
        }
        let mut total = DMatrix::<Complex64>::zeros(in_dim, in_dim);
        for k in &kraus {
            total += k.adjoint() * k;
        }
        total -= DMatrix::identity(in_dim, in_dim);
        if total.iter().any(|z| z.norm() > FLOAT_TOL) {
            return Err(Error::invalid("Kraus operators do not sum to the identity"));
        }
        Ok(ChannelRep { in_dim, out_dim, kraus, exact: None })
    }

    pub fn identity(dim: usize) -> Self {
        let id = KrausOperator::from_fn(dim, dim, |r, c| if r == c { ExactScalar::one() } else { ExactScalar::zero() });
        ChannelRep::from_exact(dim, dim, vec![id]).expect("identity is a channel")
    }

    /// `ρ ↦ tr(ρ)·1/D`, with Kraus operators `|a⟩⟨b|/√D`.
    pub fn completely_depolarizing(dim: usize) -> Self {
        let amplitude = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        let kraus = (0..dim * dim)
            .map(|ab| {
                let mut k = DMatrix::zeros(dim, dim);
                k[(ab / dim, ab % dim)] = amplitude;
                k
            })
            .collect();
        ChannelRep { in_dim: dim, out_dim: dim, kraus, exact: None }
    }

    /// Random channel with `num_kraus` real rational Kraus operators, cut from
    /// a rational orthogonal matrix `Q = (1 − S)(1 + S)⁻¹` with `S`
    /// skew-symmetric.
    pub fn random_rational<R: Rng + ?Sized>(
        in_dim: usize,
        out_dim: usize,
        num_kraus: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let m = out_dim * num_kraus;
        if m < in_dim || in_dim == 0 {
            return Err(Error::invalid(format!(
                "{num_kraus} Kraus operators of shape {out_dim}x{in_dim} cannot form a channel"
            )));
        }
        let mut s = vec![vec![BigRational::zero(); m]; m];
        for i in 0..m {
            for j in i + 1..m {
                let num: i64 = rng.random_range(-2..=2);
                let den: i64 = rng.random_range(1..=3);
                s[i][j] = BigRational::new(num.into(), den.into());
                s[j][i] = -s[i][j].clone();
            }
        }
        let one = BigRational::from_integer(1.into());
        let plus: Vec<Vec<BigRational>> =
            (0..m).map(|i| (0..m).map(|j| if i == j { one.clone() } else { s[i][j].clone() }).collect()).collect();
        // column j of Q solves (1 + S) q = (1 − S) e_j
        let mut columns = Vec::with_capacity(in_dim);
        for j in 0..in_dim {
            let rhs: Vec<BigRational> = (0..m).map(|i| if i == j { one.clone() } else { -s[i][j].clone() }).collect();
            match solve(&plus, &rhs, m) {
                Solution::Unique(q) => columns.push(q),
                _ => unreachable!("1 + S is invertible for skew-symmetric S"),
            }
        }
        let ops = (0..num_kraus)
            .map(|k| {
                KrausOperator::from_fn(out_dim, in_dim, |a, x| ExactScalar::real(columns[x][k * out_dim + a].clone()))
            })
            .collect();
        ChannelRep::from_exact(in_dim, out_dim, ops)
    }

    /// Random channel from a Haar-like isometry (QR of a complex Gaussian
    /// matrix) split into `num_kraus` blocks.
    pub fn random_float<R: Rng + ?Sized>(in_dim: usize, out_dim: usize, num_kraus: usize, rng: &mut R) -> Result<Self> {
        let m = out_dim * num_kraus;
        if m < in_dim || in_dim == 0 {
            return Err(Error::invalid(format!(
                "{num_kraus} Kraus operators of shape {out_dim}x{in_dim} cannot form a channel"
            )));
        }
        let g =
            DMatrix::from_fn(m, in_dim, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        let q = g.qr().q();
        let kraus = (0..num_kraus).map(|k| q.rows(k * out_dim, out_dim).into_owned()).collect();
        ChannelRep::from_float(in_dim, out_dim, kraus)
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus(&self) -> &[DMatrix<Complex64>] {
        &self.kraus
    }

    pub fn exact_kraus(&self) -> Option<&[KrausOperator]> {
        self.exact.as_deref()
    }

    pub fn apply(&self, rho: &FloatOperator) -> Result<FloatOperator> {
        if rho.dim() != self.in_dim {
            return Err(Error::dim(format!("input of dimension {} to a channel on {}", rho.dim(), self.in_dim)));
        }
        let mut out = DMatrix::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            out += k * rho.matrix() * k.adjoint();
        }
        FloatOperator::from_matrix(out)
    }

    /// `𝒰_π ∘ 𝒩 ∘ 𝒱_{π⁻¹}` for a channel between `n`-fold tensor powers.
    pub fn conjugated(&self, perm: &Permutation, dh: usize, dk: usize) -> Result<ChannelRep> {
        self.check_tensor_dims(perm.n(), dh, dk)?;
        let t_out = perm.basis_action(dk);
        let s_in = perm.inverse().basis_action(dh);
        let (out_dim, in_dim) = (self.out_dim, self.in_dim);
        let kraus = self
            .kraus
            .iter()
            .map(|k| {
                let mut m = DMatrix::zeros(out_dim, in_dim);
                for a in 0..out_dim {
                    for x in 0..in_dim {
                        m[(t_out[a], x)] = k[(a, s_in[x])];
                    }
                }
                m
            })
            .collect();
        let exact = self.exact.as_ref().map(|ops| {
            ops.iter()
                .map(|k| {
                    let mut entries = vec![ExactScalar::zero(); out_dim * in_dim];
                    for a in 0..out_dim {
                        for x in 0..in_dim {
                            entries[t_out[a] * in_dim + x] = k.get(a, s_in[x]).clone();
                        }
                    }
                    KrausOperator { out_dim, in_dim, entries }
                })
                .collect()
        });
        Ok(ChannelRep { in_dim, out_dim, kraus, exact })
    }

    fn check_tensor_dims(&self, n: usize, dh: usize, dk: usize) -> Result<()> {
        if checked_pow(dh, n) != Some(self.in_dim) || checked_pow(dk, n) != Some(self.out_dim) {
            return Err(Error::dim(format!(
                "channel {} -> {} does not map ({dh})^{n} to ({dk})^{n}",
                self.in_dim, self.out_dim
            )));
        }
        Ok(())
    }
}

fn check_choi_size(n: &ChannelRep, limits: &Limits) -> Result<usize> {
    n.out_dim
        .checked_mul(n.in_dim)
        .filter(|&dim| dim <= limits.max_dim)
        .ok_or_else(|| Error::size(format!("Choi state of dimension {}·{}", n.out_dim, n.in_dim)))
}

/// `σ_𝒩 = (𝒩 ⊗ id)(|Φ⟩⟨Φ|)` with normalized `|Φ⟩`, output factor first:
/// `σ[(a,x),(b,y)] = (1/D_in) Σ_k K[a,x] conj(K[b,y])`.
pub fn channel_choi(n: &ChannelRep, limits: &Limits) -> Result<FloatOperator> {
    check_choi_size(n, limits)?;
    let din = n.in_dim;
    let mut sigma = DMatrix::zeros(n.out_dim * din, n.out_dim * din);
    for k in &n.kraus {
        let v = DVector::from_iterator(
            n.out_dim * din,
            (0..n.out_dim).flat_map(|a| (0..din).map(move |x| (a, x))).map(|(a, x)| k[(a, x)]),
        );
        sigma += &v * v.adjoint();
    }
    FloatOperator::from_matrix(sigma / Complex64::new(din as f64, 0.0))
}

/// Exact [`channel_choi`] for a rational channel.
pub fn channel_choi_exact(n: &ChannelRep, limits: &Limits) -> Result<ExactOperator> {
    let dim = check_choi_size(n, limits)?;
    let ops = n.exact.as_ref().ok_or_else(|| Error::invalid("channel has no exact Kraus form"))?;
    let din = n.in_dim;
    let scale = crate::util::ratio(1, din);
    let mut sigma = ExactOperator::zeros(dim);
    for k in ops {
        let v: Vec<ExactScalar> = k.entries.iter().map(|z| z.scale(&scale)).collect();
        for (i, vi) in k.entries.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if !vj.is_zero() {
                    sigma.add_at(i, j, &(vi * &vj.conj()));
                }
            }
        }
    }
    Ok(sigma)
}

/// Checks `σ_{𝒰_π∘𝒩∘𝒱_{π⁻¹}} = (U^π ⊗ V^π) σ_𝒩 (U^π ⊗ V^π)†`, exactly for
/// rational channels and within [`CHANNEL_TOL`] otherwise.
pub fn covariance_identity_check(
    n: &ChannelRep,
    perm: &Permutation,
    dh: usize,
    dk: usize,
    limits: &Limits,
) -> Result<bool> {
    n.check_tensor_dims(perm.n(), dh, dk)?;
    let conjugated = n.conjugated(perm, dh, dk)?;
    let t_out = perm.basis_action(dk);
    let t_in = perm.basis_action(dh);
    let din = n.in_dim;
    let table: Vec<usize> = (0..n.out_dim * din).map(|i| t_out[i / din] * din + t_in[i % din]).collect();
    if n.exact.is_some() {
        let lhs = channel_choi_exact(&conjugated, limits)?;
        let rhs = channel_choi_exact(n, limits)?.relabel(&table);
        return Ok(lhs == rhs);
    }
    let lhs = channel_choi(&conjugated, limits)?;
    let sigma = channel_choi(n, limits)?;
    let rhs = FloatOperator::from_fn(sigma.dim(), |r, c| {
        // rhs[table[i], table[j]] = σ[i, j]
        sigma.get(inverse_lookup(&table, r), inverse_lookup(&table, c))
    });
    Ok(lhs.distance(&rhs) <= CHANNEL_TOL)
}

fn inverse_lookup(table: &[usize], value: usize) -> usize {
    table.iter().position(|&t| t == value).expect("table is a bijection")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChannelVerdict {
    pub accepted: bool,
    pub violation: Option<Violation>,
    /// Direct float comparisons of the two averaged channels that were run.
    pub spot_checks: usize,
}

/// A distribution is a channel design for `dH → dK` iff it is a state design
/// at local dimension `dK·dH`. Accepted designs are additionally compared
/// with the uniform average directly on `trials` random channels and inputs
/// when the dimensions are at most [`SPOT_CHECK_DIM`]; a disagreement there is
/// a contract violation.
pub fn verify_channel_design(
    candidate: &DistributionOverSn,
    dh: usize,
    dk: usize,
    trials: usize,
    seed: u64,
    limits: &Limits,
) -> Result<ChannelVerdict> {
    if dh == 0 || dk == 0 {
        return Err(Error::invalid("dH and dK must be at least 1"));
    }
    let n = candidate.n();
    let sys = build_constraint_system(dk * dh, n, limits)?;
    let violation = match verify_design(candidate, &sys)? {
        Verdict::Accept => None,
        Verdict::Reject(v) => Some(v),
    };
    let accepted = violation.is_none();
    let (din, dout) = (checked_pow(dh, n), checked_pow(dk, n));
    let small = matches!((din, dout), (Some(i), Some(o)) if i <= SPOT_CHECK_DIM && o <= SPOT_CHECK_DIM);
    let mut spot_checks = 0;
    if accepted && small {
        let (din, dout) = (din.unwrap(), dout.unwrap());
        let uniform = DistributionOverSn::uniform(n, limits)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let channel = ChannelRep::random_float(din, dout, 2, &mut rng)?;
            let rho = crate::sample::density_matrix(din, &mut rng);
            let lhs = averaged_output(&uniform, &channel, &rho, dh, dk)?;
            let rhs = averaged_output(candidate, &channel, &rho, dh, dk)?;
            if lhs.distance(&rhs) > CHANNEL_TOL {
                return Err(Error::contract("accepted channel design disagrees with the uniform average"));
            }
            spot_checks += 1;
        }
    }
    Ok(ChannelVerdict { accepted, violation, spot_checks })
}

/// `Σ_π q(π) (𝒰_π ∘ 𝒩 ∘ 𝒱_{π⁻¹})(ρ)`.
pub fn averaged_output(
    q: &DistributionOverSn,
    channel: &ChannelRep,
    rho: &FloatOperator,
    dh: usize,
    dk: usize,
) -> Result<FloatOperator> {
    channel.check_tensor_dims(q.n(), dh, dk)?;
    let mut out = FloatOperator::zeros(channel.out_dim);
    for (perm, w) in q.iter() {
        let term = channel.conjugated(perm, dh, dk)?.apply(rho)?;
        out = out.add(&term.scale(rational_to_f64(w)))?;
    }
    Ok(out)
}

/// Input attaining the lower end of a [`DiamondBracket`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// `|e_x⟩⟨e_x|` for the one-based word `x`.
    BasisState(Vec<usize>),
    MaximallyEntangled,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiamondBracket {
    pub lower: f64,
    pub upper: f64,
    pub witness: Witness,
}

/// `Σ_π |1/n! − q(π)|` over all of `S_n`.
pub fn diamond_upper_via_l1(q: &DistributionOverSn) -> f64 {
    let order = BigRational::from_integer(factorial(q.n()).into());
    let uniform = order.recip();
    let mut total = BigRational::zero();
    for (_, w) in q.iter() {
        total += (w - &uniform).abs();
    }
    let missing = &order - BigRational::from_integer(q.support_len().into());
    total += missing * uniform;
    rational_to_f64(&total)
}

fn weight_gaps(q: &DistributionOverSn, limits: &Limits) -> Result<Vec<(Permutation, BigRational)>> {
    let perms = enumerate_permutations(q.n(), limits)?;
    let uniform = BigRational::from_integer(perms.len().into()).recip();
    Ok(perms
        .into_iter()
        .map(|p| {
            let gap = &uniform - q.weight(&p);
            (p, gap)
        })
        .collect())
}

/// Exact `‖(𝒰̄ − 𝒰̄_q)(|e_x⟩⟨e_x|)‖₁` for one representative `x` per type,
/// returning the best value and its word.
pub fn basis_state_lower_bound(q: &DistributionOverSn, d: usize, limits: &Limits) -> Result<(f64, Vec<usize>)> {
    let n = q.n();
    limits.check_dim(d, n)?;
    let gaps = weight_gaps(q, limits)?;
    let mut best = (BigRational::zero(), Vec::new());
    for mu in enumerate_types(n, d, limits)? {
        let x = mu.representative();
        // the output is diagonal: word π·x gets Σ gap(π)
        let mut diagonal: HashMap<usize, BigRational> = HashMap::new();
        for (perm, gap) in &gaps {
            *diagonal.entry(perm.act_on_tuple(&x)?.index().0).or_insert_with(BigRational::zero) += gap;
        }
        let norm: BigRational = diagonal.values().map(|v| v.abs()).sum();
        if best.1.is_empty() || norm > best.0 {
            best = (norm, x.letters());
        }
    }
    Ok((rational_to_f64(&best.0), best.1))
}

/// `‖((𝒰̄ − 𝒰̄_q) ⊗ id)(|Φ⟩⟨Φ|)‖₁` through the Gram matrix of the vectors
/// `(U^π ⊗ 1)|Φ⟩`, whose entries are `d^{cycles(σ∘π⁻¹)}/d^n`.
pub fn entangled_input_lower_bound(q: &DistributionOverSn, d: usize, limits: &Limits) -> Result<f64> {
    let n = q.n();
    if n > GRAM_MAX_N {
        return Err(Error::size(format!("entangled-input bound needs n ≤ {GRAM_MAX_N}, got {n}")));
    }
    let gaps = weight_gaps(q, limits)?;
    let inverses: Vec<Permutation> = gaps.iter().map(|(p, _)| p.inverse()).collect();
    let m = gaps.len();
    let scale = (d as f64).powi(n as i32);
    let powers: Vec<f64> = (0..=n).map(|c| (d as f64).powi(c as i32) / scale).collect();
    let mut gram = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let relative = Permutation::compose(&gaps[j].0, &inverses[i])?;
            let g = powers[relative.cycle_count()];
            gram[(i, j)] = g;
            gram[(j, i)] = g;
        }
    }
    // G = F Fᵀ with F = V_r Λ_r^{½} over the numerically nonzero spectrum, so
    // the operator is unitarily equivalent to Fᵀ C F padded with zeros.
    let eig = gram.symmetric_eigen();
    let cutoff = 1e-12 * eig.eigenvalues.amax().max(1.0);
    let kept: Vec<usize> = (0..m).filter(|&i| eig.eigenvalues[i] > cutoff).collect();
    let f = DMatrix::from_fn(m, kept.len(), |r, k| eig.eigenvectors[(r, kept[k])] * eig.eigenvalues[kept[k]].sqrt());
    let c = DVector::from_iterator(m, gaps.iter().map(|(_, gap)| rational_to_f64(gap)));
    let middle = f.transpose() * DMatrix::from_diagonal(&c) * &f;
    let middle = (&middle + middle.transpose()) * 0.5;
    Ok(middle.symmetric_eigenvalues().iter().map(|l| l.abs()).sum())
}

/// [`entangled_input_lower_bound`] computed from the Choi states themselves on
/// `(C^d)^{⊗n} ⊗ (C^d)^{⊗n}`; only for small `d^n`.
pub fn choi_difference_trace_norm(q: &DistributionOverSn, d: usize, limits: &Limits) -> Result<f64> {
    let n = q.n();
    let dim = limits.check_dim(d, n)?;
    let doubled = dim.checked_mul(dim).filter(|&dd| dd <= limits.max_dim);
    let doubled = doubled.ok_or_else(|| Error::size(format!("doubled dimension {dim}^2 too large")))?;
    let mut diff = DMatrix::<Complex64>::zeros(doubled, doubled);
    let amplitude = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
    for (perm, gap) in weight_gaps(q, limits)? {
        if gap.is_zero() {
            continue;
        }
        let t = perm.basis_action(d);
        let mut phi = DVector::<Complex64>::zeros(doubled);
        for x in 0..dim {
            phi[t[x] * dim + x] = amplitude;
        }
        diff += &phi * phi.adjoint() * Complex64::new(rational_to_f64(&gap), 0.0);
    }
    FloatOperator::from_matrix(diff)?.trace_norm()
}

/// Lower end of the bracket and its witness.
pub fn diamond_lower_via_inputs(q: &DistributionOverSn, d: usize, limits: &Limits) -> Result<(f64, Witness)> {
    let (mut lower, word) = basis_state_lower_bound(q, d, limits)?;
    let mut witness = Witness::BasisState(word);
    if q.n() <= GRAM_MAX_N {
        let entangled = entangled_input_lower_bound(q, d, limits)?;
        if entangled > lower {
            lower = entangled;
            witness = Witness::MaximallyEntangled;
        }
    }
    Ok((lower, witness))
}

pub fn diamond_bracket(q: &DistributionOverSn, d: usize, limits: &Limits) -> Result<DiamondBracket> {
    let upper = diamond_upper_via_l1(q);
    let (lower, witness) = diamond_lower_via_inputs(q, d, limits)?;
    Ok(DiamondBracket { lower: lower.clamp(0.0, upper), upper, witness })
}

/// The approximate-design entropy bound evaluated at both ends of the
/// bracket. Since the bound decreases in `ε`, comparing against the value at
/// the upper end is sound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxBoundReport {
    #[serde(rename = "H_rate")]
    pub h_rate: f64,
    pub eps_lower: f64,
    pub eps_upper: f64,
    pub rhs_at_lower: f64,
    pub rhs_at_upper: f64,
    /// The bound at the upper end is negative.
    pub vacuous: bool,
    /// `H_rate ≥ rhs_at_upper`.
    pub holds: bool,
}

pub fn approx_bound_report(
    q: &DistributionOverSn,
    d: usize,
    convention: DimensionConvention,
    limits: &Limits,
) -> Result<ApproxBoundReport> {
    if d < 2 {
        return Err(Error::invalid("the approximate bound needs d ≥ 2"));
    }
    let n = q.n();
    let bracket = diamond_bracket(q, d, limits)?;
    let h_rate = q.entropy_bits() / n as f64;
    let rhs_at_lower = entropy_rate_lower_approx(d, n, bracket.lower, convention)?;
    let rhs_at_upper = entropy_rate_lower_approx(d, n, bracket.upper, convention)?;
    Ok(ApproxBoundReport {
        h_rate,
        eps_lower: bracket.lower,
        eps_upper: bracket.upper,
        rhs_at_lower,
        rhs_at_upper,
        vacuous: rhs_at_upper < 0.0,
        holds: h_rate >= rhs_at_upper - crate::bounds::ENTROPY_SLACK,
    })
}

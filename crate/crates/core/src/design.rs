//! Weighted symmetric designs: the compressed linear constraint system, exact
//! verification, support reduction, and the design file format.
//!
//! A distribution `ω` on `S_n` reproduces the uniform twirl on every operator
//! iff, for all index tuples `w, x, y, z ∈ [d]^n`,
//!
//! ```text
//! Σ_π ω(π) [π·x = w][π·y = z] = (1/n!) Σ_π [π·x = w][π·y = z].
//! ```
//!
//! The pair condition `π·x = w ∧ π·y = z` is the single condition
//! `π·zip(x, y) = zip(w, z)` on words over the `d²` pair symbols, and whether a
//! permutation maps one word to another does not depend on what the symbols
//! are, only on which positions share a symbol. So the constraints are indexed
//! by a canonical pattern (a restricted-growth string with at most `min(d², n)`
//! symbols) and an image of that pattern under `S_n`. Each permutation hits
//! exactly one row per pattern, and a row's target is `1/|orbit|`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ExactOperator;
use crate::limits::{checked_pow, Limits};
use crate::linalg::{kernel_basis, solve, tail_echelon, EchelonBasis, Solution, SparseRow};
use crate::perm::{enumerate_permutations, next_permutation, Permutation};
use crate::twirl::{uniform_twirl, weighted_twirl, DistributionOverSn};
use crate::util::{factorial, fraction_string, parse_fraction, ratio};

/// Largest `d^{4n}` for which raw feature vectors are materialized.
pub const RAW_FEATURE_LIMIT: usize = 4096;

/// Matrix units are swept exhaustively by the operational verifier up to this
/// Hilbert-space dimension.
pub const MATRIX_UNIT_SWEEP_DIM: usize = 16;

/// The exact 0/1 vector `ν_π` with coordinate `(w, x, y, z)` set iff
/// `π·x = w` and `π·y = z` (basis indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureVector {
    pub perm: Permutation,
    pub d: usize,
    coords: Vec<(usize, usize, usize, usize)>,
}

impl FeatureVector {
    /// Nonzero coordinates in increasing order.
    pub fn coordinates(&self) -> &[(usize, usize, usize, usize)] {
        &self.coords
    }

    pub fn nnz(&self) -> usize {
        self.coords.len()
    }
}

pub fn raw_feature_vector(perm: &Permutation, d: usize) -> Result<FeatureVector> {
    let n = perm.n();
    match checked_pow(d, 4 * n) {
        Some(size) if size <= RAW_FEATURE_LIMIT => {}
        _ => return Err(Error::size(format!("raw feature vector of length {d}^(4·{n})"))),
    }
    let table = perm.basis_action(d);
    let mut coords = Vec::with_capacity(table.len() * table.len());
    for (x, &w) in table.iter().enumerate() {
        for (y, &z) in table.iter().enumerate() {
            coords.push((w, x, y, z));
        }
    }
    coords.sort_unstable();
    Ok(FeatureVector { perm: perm.clone(), d, coords })
}

/// Checks `Σ ω(π) ν_π = (1/n!) Σ_π ν_π` coordinate by coordinate, with no
/// compression. Only feasible for tiny instances.
pub fn satisfies_raw_condition(candidate: &DistributionOverSn, d: usize, limits: &Limits) -> Result<bool> {
    let n = candidate.n();
    let perms = enumerate_permutations(n, limits)?;
    let uniform = ratio(1, perms.len());
    let mut balance: BTreeMap<(usize, usize, usize, usize), BigRational> = BTreeMap::new();
    for perm in &perms {
        let delta = candidate.weight(perm) - &uniform;
        if delta.is_zero() {
            continue;
        }
        for &coord in raw_feature_vector(perm, d)?.coordinates() {
            *balance.entry(coord).or_insert_with(BigRational::zero) += &delta;
        }
    }
    Ok(balance.values().all(Zero::is_zero))
}

/// Compressed exact form of the design condition `A·ω = p`.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    d: usize,
    n: usize,
    patterns: Vec<Vec<u8>>,
    /// `(pattern index, image word)` per row; rows of a pattern are contiguous
    /// and images are in lexicographic order.
    rows: Vec<(usize, Vec<u8>)>,
    /// Columns in lexicographic order of the permutations.
    perms: Vec<Permutation>,
    /// `column_rows[c][k]` is the row hit by column `c` in pattern block `k`.
    column_rows: Vec<Vec<usize>>,
    target: Vec<BigRational>,
}

/// Restricted-growth strings of length `n` with at most `max_symbols` symbols,
/// in lexicographic order.
pub fn canonical_patterns(n: usize, max_symbols: usize) -> Vec<Vec<u8>> {
    fn grow(word: &mut Vec<u8>, used: u8, n: usize, max_symbols: usize, out: &mut Vec<Vec<u8>>) {
        if word.len() == n {
            out.push(word.clone());
            return;
        }
        let limit = (used as usize + 1).min(max_symbols);
        for s in 0..limit as u8 {
            word.push(s);
            grow(word, used.max(s + 1), n, max_symbols, out);
            word.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 && max_symbols > 0 {
        grow(&mut Vec::with_capacity(n), 0, n, max_symbols, &mut out);
    }
    out
}

fn pattern_string(word: &[u8]) -> String {
    word.iter().map(|&s| (b'a' + s) as char).collect()
}

pub fn build_constraint_system(d: usize, n: usize, limits: &Limits) -> Result<ConstraintSystem> {
    if d == 0 {
        return Err(Error::invalid("d must be at least 1"));
    }
    limits.check_system_n(n)?;
    let perms = enumerate_permutations(n, limits)?;
    let max_symbols = d.saturating_mul(d).min(n);
    let patterns = canonical_patterns(n, max_symbols);

    let mut rows = Vec::new();
    let mut lookup: Vec<HashMap<Vec<u8>, usize>> = Vec::with_capacity(patterns.len());
    for (k, pattern) in patterns.iter().enumerate() {
        let mut image = pattern.clone();
        image.sort_unstable();
        let mut block = HashMap::new();
        loop {
            block.insert(image.clone(), rows.len());
            rows.push((k, image.clone()));
            if !next_permutation(&mut image) {
                break;
            }
        }
        lookup.push(block);
    }

    let column_rows: Vec<Vec<usize>> = perms
        .iter()
        .map(|perm| patterns.iter().zip(&lookup).map(|(pattern, block)| block[&perm.permute(pattern)]).collect())
        .collect();

    // p = A · uniform
    let mut hits = vec![0usize; rows.len()];
    for col in &column_rows {
        for &r in col {
            hits[r] += 1;
        }
    }
    let target = hits.into_iter().map(|h| ratio(h, perms.len())).collect();

    Ok(ConstraintSystem { d, n, patterns, rows, perms, column_rows, target })
}

impl ConstraintSystem {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Canonical patterns as strings over `a, b, c, …`.
    pub fn patterns(&self) -> Vec<String> {
        self.patterns.iter().map(|p| pattern_string(p)).collect()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.perms.len()
    }

    pub fn permutations(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn target(&self) -> &[BigRational] {
        &self.target
    }

    /// `(pattern, image)` labels of a row.
    pub fn row_label(&self, row: usize) -> (String, String) {
        let (k, image) = &self.rows[row];
        (pattern_string(&self.patterns[*k]), pattern_string(image))
    }

    /// Rows with a one in the column of `perm`, one per pattern.
    pub fn column(&self, perm: &Permutation) -> &[usize] {
        &self.column_rows[perm.lex_rank()]
    }

    pub fn entry(&self, row: usize, col: usize) -> u8 {
        let k = self.rows[row].0;
        u8::from(self.column_rows[col][k] == row)
    }

    pub fn dense_matrix(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.num_cols()]; self.num_rows()];
        for (c, rows) in self.column_rows.iter().enumerate() {
            for &r in rows {
                m[r][c] = 1;
            }
        }
        m
    }

    /// Rows of the system restricted to `cols`, plus the all-ones
    /// normalization row, reduced to an independent set (sparse, indexed by
    /// position in `cols`).
    fn independent_rows(&self, cols: &[usize]) -> (Vec<SparseRow>, Vec<BigRational>) {
        let mut by_row: Vec<SparseRow> = vec![Vec::new(); self.num_rows()];
        for (j, &c) in cols.iter().enumerate() {
            for &r in &self.column_rows[c] {
                by_row[r].push((j, BigRational::one()));
            }
        }
        let ones: SparseRow = (0..cols.len()).map(|j| (j, BigRational::one())).collect();
        let mut basis = EchelonBasis::new();
        let mut kept = Vec::new();
        let mut rhs = Vec::new();
        if basis.insert(ones.clone()) {
            kept.push(ones);
            rhs.push(BigRational::one());
        }
        for (r, row) in by_row.into_iter().enumerate() {
            if basis.insert(row.clone()) {
                kept.push(row);
                rhs.push(self.target[r].clone());
            }
        }
        (kept, rhs)
    }

    /// Rank of the matrix augmented with the all-ones row.
    pub fn augmented_rank(&self) -> usize {
        let cols: Vec<usize> = (0..self.num_cols()).collect();
        self.independent_rows(&cols).0.len()
    }

    /// Largest orbit among the patterns. A design needs at least one support
    /// permutation per image of every pattern, so this bounds support from below.
    pub fn orbit_cover_bound(&self) -> usize {
        let mut sizes = vec![0; self.patterns.len()];
        for (k, _) in &self.rows {
            sizes[*k] += 1;
        }
        sizes.into_iter().max().unwrap_or(1)
    }
}

fn to_dense(rows: &[SparseRow], ncols: usize) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|row| {
            let mut dense = vec![BigRational::zero(); ncols];
            for (j, v) in row {
                dense[*j] = v.clone();
            }
            dense
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(Violation),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub pattern: String,
    pub image: String,
    pub expected: BigRational,
    pub actual: BigRational,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pattern {:?} image {:?}: weight {} where {} is required",
            self.pattern, self.image, self.actual, self.expected
        )
    }
}

/// Exact check of `A·ω = p`.
pub fn verify_design(candidate: &DistributionOverSn, sys: &ConstraintSystem) -> Result<Verdict> {
    if candidate.n() != sys.n {
        return Err(Error::dim(format!(
            "distribution over S_{} checked against a system for S_{}",
            candidate.n(),
            sys.n
        )));
    }
    let mut sums = vec![BigRational::zero(); sys.num_rows()];
    for (perm, w) in candidate.iter() {
        for &r in sys.column(perm) {
            sums[r] += w;
        }
    }
    let violated = sums.iter().zip(&sys.target).position(|(s, t)| s != t);
    Ok(match violated {
        None => Verdict::Accept,
        Some(r) => {
            let (pattern, image) = sys.row_label(r);
            Verdict::Reject(Violation { pattern, image, expected: sys.target[r].clone(), actual: sums[r].clone() })
        }
    })
}

/// Compares the weighted twirl with the uniform twirl directly: on every
/// matrix unit when `d^n ≤ 16`, and on `trials` random rational operators.
pub fn verify_design_operational(
    candidate: &DistributionOverSn,
    d: usize,
    trials: usize,
    seed: u64,
    limits: &Limits,
) -> Result<bool> {
    let n = candidate.n();
    let dim = limits.check_dim(d, n)?;
    let agrees = |a: &ExactOperator| -> Result<bool> {
        Ok(weighted_twirl(candidate, a, d, limits)? == uniform_twirl(a, d, n, limits)?)
    };
    if dim <= MATRIX_UNIT_SWEEP_DIM {
        for r in 0..dim {
            for c in 0..dim {
                if !agrees(&ExactOperator::matrix_unit(dim, r, c))? {
                    return Ok(false);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        if !agrees(&crate::sample::rational_operator(dim, &mut rng))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A distribution on `S_n` that has passed exact verification for local
/// dimension `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedDesign {
    d: usize,
    dist: DistributionOverSn,
}

impl WeightedDesign {
    /// Verifies `dist` against `sys` and wraps it on success.
    pub fn verify(dist: DistributionOverSn, sys: &ConstraintSystem) -> Result<Self> {
        match verify_design(&dist, sys)? {
            Verdict::Accept => Ok(WeightedDesign { d: sys.d, dist }),
            Verdict::Reject(v) => Err(Error::Precondition(format!("not a design: {v}"))),
        }
    }

    pub fn uniform(d: usize, n: usize, limits: &Limits) -> Result<Self> {
        Ok(WeightedDesign { d, dist: DistributionOverSn::uniform(n, limits)? })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.dist.n()
    }

    pub fn distribution(&self) -> &DistributionOverSn {
        &self.dist
    }

    pub fn support_len(&self) -> usize {
        self.dist.support_len()
    }

    pub fn entropy_bits(&self) -> f64 {
        self.dist.entropy_bits()
    }

    pub fn to_file(&self) -> DesignFile {
        DesignFile::from_distribution(self.d, &self.dist)
    }
}

/// Removes support from a verified starting distribution along exact kernel
/// directions until the active columns (with the normalization row) are
/// linearly independent.
///
/// Each step takes the kernel vector of the active columns belonging to the
/// first free column of their reduced echelon form (the first active column
/// that depends on earlier ones), scaled to `1` there, moves along it until
/// some weights reach zero, and drops every permutation whose weight reached
/// zero.
pub fn caratheodory_reduce(start: &DistributionOverSn, sys: &ConstraintSystem) -> Result<WeightedDesign> {
    if let Verdict::Reject(v) = verify_design(start, sys)? {
        return Err(Error::Precondition(format!("start distribution is not a design: {v}")));
    }
    let mut active: Vec<usize> = start.iter().map(|(p, _)| p.lex_rank()).collect();
    let mut weights: Vec<BigRational> = start.iter().map(|(_, w)| w.clone()).collect();

    let (rows, _) = sys.independent_rows(&active);
    let mut kernel = tail_echelon(kernel_basis(&to_dense(&rows, active.len()), active.len()));

    while let Some((_, direction)) = kernel.first() {
        let step = direction
            .iter()
            .zip(&weights)
            .filter(|(v, _)| v.is_negative())
            .map(|(v, w)| w / -v)
            .min()
            .expect("kernel vectors sum to zero, so the pivot's +1 is offset by a negative entry");
        for (w, v) in weights.iter_mut().zip(direction) {
            if !v.is_zero() {
                *w += &step * v;
            }
        }

        let dropped: Vec<usize> = (0..weights.len()).rev().filter(|&j| weights[j].is_zero()).collect();
        let mut vectors: Vec<Vec<BigRational>> = kernel.into_iter().map(|(_, v)| v).collect();
        for &j in &dropped {
            if let Some(pos) = vectors.iter().position(|v| !v[j].is_zero()) {
                let pivot = vectors.swap_remove(pos);
                for v in vectors.iter_mut() {
                    if v[j].is_zero() {
                        continue;
                    }
                    let factor = &v[j] / &pivot[j];
                    for (x, p) in v.iter_mut().zip(&pivot) {
                        if !p.is_zero() {
                            *x -= &factor * p;
                        }
                    }
                }
            }
            for v in vectors.iter_mut() {
                v.remove(j);
            }
            weights.remove(j);
            active.remove(j);
        }
        kernel = tail_echelon(vectors);
    }

    let dist = DistributionOverSn::new(sys.n, active.iter().map(|&c| sys.perms[c].clone()).zip(weights))?;
    let design = WeightedDesign::verify(dist, sys)?;
    Ok(design)
}

/// True iff the uniform distribution is the only solution, i.e. the matrix
/// augmented with the all-ones row has full column rank `n!`.
///
/// When `d² ≥ n` the all-distinct pattern is present and its block alone is
/// a permutation matrix, so the answer is known without elimination.
pub fn is_uniform_forced(sys: &ConstraintSystem) -> bool {
    if sys.d.saturating_mul(sys.d) >= sys.n {
        return true;
    }
    sys.augmented_rank() == sys.num_cols()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinimalSupport {
    Found(WeightedDesign),
    /// The subset budget ran out before a design was found.
    Unknown {
        examined: usize,
        smallest_open_size: usize,
    },
}

/// Largest `n` accepted by [`minimal_support_exhaustive`].
pub const EXHAUSTIVE_MAX_N: usize = 4;

/// Smallest-support design by exhaustive search over subsets of `S_n` in
/// order of increasing size, solving each restricted system exactly.
///
/// Sizes below [`ConstraintSystem::orbit_cover_bound`] are skipped since they
/// cannot cover an orbit. Subsets whose restricted system has a nontrivial
/// kernel are skipped too: any nonnegative solution there could be pushed to a
/// smaller support, which the search has already ruled out.
pub fn minimal_support_exhaustive(sys: &ConstraintSystem, budget: usize) -> Result<MinimalSupport> {
    if sys.n > EXHAUSTIVE_MAX_N {
        return Err(Error::size(format!("exhaustive search needs n ≤ {EXHAUSTIVE_MAX_N}, got {}", sys.n)));
    }
    let total = sys.num_cols();
    let mut examined = 0;
    for size in sys.orbit_cover_bound().max(1)..=total {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            if examined == budget {
                return Ok(MinimalSupport::Unknown { examined, smallest_open_size: size });
            }
            examined += 1;
            if let Some(design) = try_support(sys, &subset)? {
                return Ok(MinimalSupport::Found(design));
            }
            if !next_combination(&mut subset, total) {
                break;
            }
        }
    }
    unreachable!("the full group always carries the uniform design")
}

fn try_support(sys: &ConstraintSystem, cols: &[usize]) -> Result<Option<WeightedDesign>> {
    let mut covered = vec![false; sys.num_rows()];
    for &c in cols {
        for &r in &sys.column_rows[c] {
            covered[r] = true;
        }
    }
    if covered.iter().any(|hit| !hit) {
        return Ok(None);
    }
    let (rows, rhs) = sys.independent_rows(cols);
    let Solution::Unique(x) = solve(&to_dense(&rows, cols.len()), &rhs, cols.len()) else {
        return Ok(None);
    };
    if !x.iter().all(Signed::is_positive) {
        return Ok(None);
    }
    let dist = DistributionOverSn::new(sys.n, cols.iter().map(|&c| sys.perms[c].clone()).zip(x))?;
    Ok(Some(WeightedDesign::verify(dist, sys)?))
}

fn next_combination(subset: &mut [usize], total: usize) -> bool {
    let k = subset.len();
    for i in (0..k).rev() {
        if subset[i] < total - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// On-disk design: `{"d":…, "n":…, "weights":[{"perm":[…], "w":"p/q"}, …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignFile {
    pub d: usize,
    pub n: usize,
    pub weights: Vec<WeightEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightEntry {
    pub perm: Vec<usize>,
    pub w: String,
}

impl DesignFile {
    pub fn from_distribution(d: usize, dist: &DistributionOverSn) -> Self {
        DesignFile {
            d,
            n: dist.n(),
            weights: dist.iter().map(|(p, w)| WeightEntry { perm: p.one_line(), w: fraction_string(w) }).collect(),
        }
    }

    /// Parses weights and checks the distribution invariants (positive, sum
    /// one, valid permutations of `n` letters). Does not verify the design.
    pub fn to_distribution(&self) -> Result<DistributionOverSn> {
        if self.d == 0 || self.n == 0 {
            return Err(Error::invalid("d and n must be at least 1"));
        }
        let entries = self
            .weights
            .iter()
            .map(|e| Ok((Permutation::from_one_line(&e.perm)?, parse_fraction(&e.w)?)))
            .collect::<Result<Vec<_>>>()?;
        DistributionOverSn::new(self.n, entries)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("plain data");
        text.push('\n');
        text
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_json())?)
    }
}

/// `n!` as a `BigRational`, for callers comparing against `1/n!` weights.
pub fn group_order(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(factorial(n)))
}

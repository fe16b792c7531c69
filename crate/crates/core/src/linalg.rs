//! Exact linear algebra over `BigRational`: sparse incremental echelon bases,
//! dense reduced row echelon form, kernels and unique solves.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type SparseRow = Vec<(usize, BigRational)>;

/// Row-echelon basis built one row at a time. Rows are stored sparsely with a
/// unit leading coefficient.
#[derive(Debug, Default, Clone)]
pub struct EchelonBasis {
    rows: BTreeMap<usize, SparseRow>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `row` if it is independent of the rows so far; returns whether it was.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut row: SparseRow = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        row.sort_by_key(|(c, _)| *c);
        while let Some((lead, coeff)) = row.first().cloned() {
            match self.rows.get(&lead) {
                Some(pivot_row) => row = axpy(&row, &-coeff, pivot_row),
                None => {
                    let inv = coeff.recip();
                    let normalized = row.into_iter().map(|(c, v)| (c, v * &inv)).collect();
                    self.rows.insert(lead, normalized);
                    return true;
                }
            }
        }
        false
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }
}

/// `x + a * y` for sorted sparse rows, dropping cancellations.
fn axpy(x: &SparseRow, a: &BigRational, y: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            out.push((y[j].0, a * &y[j].1));
            j += 1;
        } else {
            let v = &x[i].1 + a * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Reduces `m` (rows of equal length `ncols`) in place to reduced row echelon
/// form, drops zero rows, and returns the pivot columns.
pub fn rref(m: &mut Vec<Vec<BigRational>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..ncols {
        let Some(found) = (next_row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(next_row, found);
        let inv = m[next_row][col].recip();
        if !inv.is_one() {
            for v in m[next_row][col..].iter_mut() {
                *v *= &inv;
            }
        }
        let pivot_row = m[next_row].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == next_row || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (c, p) in pivot_row.iter().enumerate().skip(col) {
                if !p.is_zero() {
                    row[c] -= &factor * p;
                }
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == m.len() {
            break;
        }
    }
    m.truncate(next_row);
    pivots
}

pub fn rank(rows: &[Vec<BigRational>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Kernel basis of the matrix with the given rows, one vector per free column
/// of the reduced echelon form (in increasing column order), each with a `1`
/// at its free column.
pub fn kernel_basis(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![BigRational::zero(); ncols];
            v[free] = BigRational::one();
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// Brings a spanning set of a subspace into tail-echelon form: each returned
/// vector has a distinct last nonzero coordinate (its pivot), equal to one,
/// and every other vector vanishes at that coordinate. Sorted by pivot.
pub fn tail_echelon(mut vectors: Vec<Vec<BigRational>>) -> Vec<(usize, Vec<BigRational>)> {
    let len = vectors.first().map_or(0, Vec::len);
    let mut pivoted: Vec<(usize, Vec<BigRational>)> = Vec::new();
    for col in (0..len).rev() {
        let Some(found) = vectors.iter().position(|v| !v[col].is_zero()) else {
            continue;
        };
        let mut pivot = vectors.swap_remove(found);
        let inv = pivot[col].recip();
        for x in pivot.iter_mut() {
            *x *= &inv;
        }
        for other in vectors.iter_mut().chain(pivoted.iter_mut().map(|(_, v)| v)) {
            if other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (o, p) in other.iter_mut().zip(&pivot) {
                if !p.is_zero() {
                    *o -= &factor * p;
                }
            }
        }
        pivoted.push((col, pivot));
    }
    pivoted.sort_by_key(|(p, _)| *p);
    pivoted
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<BigRational>),
    Inconsistent,
    Underdetermined,
}

/// Solves `A x = b` exactly, classifying the solution set.
pub fn solve(rows: &[Vec<BigRational>], rhs: &[BigRational], ncols: usize) -> Solution {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return Solution::Inconsistent;
    }
    if pivots.len() < ncols {
        return Solution::Underdetermined;
    }
    Solution::Unique(m.into_iter().map(|row| row[ncols].clone()).collect())
}

pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a, 3), 2);
        let ker = kernel_basis(&a, 3);
        assert_eq!(ker.len(), 1);
        for row in &a {
            assert!(dot(row, &ker[0]).is_zero());
        }
        assert_eq!(ker[0][2], q(1));
        assert_eq!(kernel_basis(&mat(&[&[1, 0], &[0, 1]]), 2).len(), 0);
    }

    #[test]
    fn echelon_basis_detects_dependence() {
        let mut basis = EchelonBasis::new();
        assert!(basis.insert(vec![(0, q(1)), (2, q(1))]));
        assert!(basis.insert(vec![(1, q(2)), (2, q(2))]));
        assert!(!basis.insert(vec![(0, q(3)), (1, q(1)), (2, q(4))]));
        assert!(!basis.insert(vec![]));
        assert!(basis.insert(vec![(2, q(5))]));
        assert_eq!(basis.rank(), 3);
    }

    #[test]
    fn tail_echelon_pivots_are_last_nonzeros() {
        let vs = mat(&[&[1, -1, 0, 0], &[1, 0, -1, 1], &[0, 1, 1, 0]]);
        let te = tail_echelon(vs);
        assert_eq!(te.iter().map(|(p, _)| *p).collect::<Vec<_>>(), vec![1, 2, 3]);
        for (p, v) in &te {
            assert!(v[*p + 1..].iter().all(Zero::is_zero));
            assert!(v[*p].is_one());
            for (p2, v2) in &te {
                if p2 != p {
                    assert!(v2[*p].is_zero());
                }
            }
        }
    }

    #[test]
    fn solves() {
        let a = mat(&[&[1, 1], &[1, -1]]);
        assert_eq!(solve(&a, &[q(2), q(0)], 2), Solution::Unique(vec![q(1), q(1)]));
        let b = mat(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve(&b, &[q(1), q(3)], 2), Solution::Inconsistent);
        assert_eq!(solve(&b, &[q(1), q(2)], 2), Solution::Underdetermined);
    }
}

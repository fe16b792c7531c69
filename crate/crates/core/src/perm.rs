//! Permutations of `n` letters and their action on `[d]^n`.
//!
//! Letters and tuple entries are one-based at the API boundary (one-line
//! notation `[2, 1, 3]`, tuples like `(1, 2, 2)`) and zero-based internally.
//!
//! The action follows the tensor-factor rule `U^π x_1⊗…⊗x_n = x_{π(1)}⊗…⊗x_{π(n)}`
//! verbatim: component `i` of the image carries `x_{π(i)}`. As a consequence
//! the action composes contravariantly,
//! `act(σ, act(π, x)) = act(compose(π, σ), x)`, i.e. `U^σ U^π = U^{π∘σ}`.
//! Averages over all of `S_n` are unaffected.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{ExactOperator, ExactScalar};
use crate::limits::{checked_pow, Limits};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    // map[i] = π(i), zero-based
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { map: (0..n).collect() }
    }

    /// From one-line notation with one-based images.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::invalid("permutation of zero letters"));
        }
        let mut seen = vec![false; n];
        let mut map = Vec::with_capacity(n);
        for &image in images {
            if image == 0 || image > n || seen[image - 1] {
                return Err(Error::invalid(format!("{images:?} is not a bijection of 1..={n}")));
            }
            seen[image - 1] = true;
            map.push(image - 1);
        }
        Ok(Permutation { map })
    }

    pub(crate) fn from_zero_based(map: Vec<usize>) -> Self {
        debug_assert!({
            let mut sorted = map.clone();
            sorted.sort_unstable();
            sorted.iter().enumerate().all(|(i, &v)| i == v)
        });
        Permutation { map }
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    /// One-line notation, one-based.
    pub fn one_line(&self) -> Vec<usize> {
        self.map.iter().map(|&v| v + 1).collect()
    }

    /// Zero-based image of zero-based letter `i`.
    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `result(i) = outer(inner(i))`.
    pub fn compose(outer: &Permutation, inner: &Permutation) -> Result<Permutation> {
        if outer.n() != inner.n() {
            return Err(Error::dim(format!("cannot compose permutations of {} and {} letters", outer.n(), inner.n())));
        }
        Ok(Permutation { map: inner.map.iter().map(|&i| outer.map[i]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut map = vec![0; self.n()];
        for (i, &v) in self.map.iter().enumerate() {
            map[v] = i;
        }
        Permutation { map }
    }

    pub fn sign(&self) -> i32 {
        if (self.n() - self.cycle_count()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.n()];
        let mut cycles = 0;
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.map[i];
            }
        }
        cycles
    }

    /// Position of this permutation in the lexicographic order of `S_n`.
    pub fn lex_rank(&self) -> usize {
        let n = self.n();
        let mut rank = 0;
        for i in 0..n {
            let smaller_later = self.map[i + 1..].iter().filter(|&&v| v < self.map[i]).count();
            rank = rank * (n - i) + smaller_later;
        }
        rank
    }

    /// Applies the tensor-factor rule to any sequence: `out[i] = xs[π(i)]`.
    pub fn permute<T: Clone>(&self, xs: &[T]) -> Vec<T> {
        debug_assert_eq!(xs.len(), self.n());
        self.map.iter().map(|&j| xs[j].clone()).collect()
    }

    /// `result.entries[i] = x.entries[π(i)]`.
    pub fn act_on_tuple(&self, x: &IndexTuple) -> Result<IndexTuple> {
        if x.n() != self.n() {
            return Err(Error::dim(format!(
                "permutation of {} letters acting on a tuple of length {}",
                self.n(),
                x.n()
            )));
        }
        Ok(IndexTuple { d: x.d, digits: self.permute(&x.digits) })
    }

    /// `table[x] = π·x` on basis indices of `(C^d)^{⊗n}`.
    pub fn basis_action(&self, d: usize) -> Vec<usize> {
        let n = self.n();
        let dim = checked_pow(d, n).expect("dimension overflow");
        let mut digits = vec![0; n];
        let mut permuted = vec![0; n];
        (0..dim)
            .map(|x| {
                decode_into(x, d, &mut digits);
                for (slot, &j) in permuted.iter_mut().zip(&self.map) {
                    *slot = digits[j];
                }
                encode(&permuted, d)
            })
            .collect()
    }

    /// The 0/1 matrix `U^π` with `⟨e_y|U^π|e_x⟩ = 1` iff `π·x = y`.
    pub fn matrix(&self, d: usize, limits: &Limits) -> Result<ExactOperator> {
        let dim = limits.check_dim(d, self.n())?;
        let mut out = ExactOperator::zeros(dim);
        for (x, y) in self.basis_action(d).into_iter().enumerate() {
            out.set(y, x, ExactScalar::one());
        }
        Ok(out)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.one_line().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_line().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(deserializer)?;
        Permutation::from_one_line(&images).map_err(serde::de::Error::custom)
    }
}

/// All `n!` permutations in lexicographic order of their one-line notation.
pub fn enumerate_permutations(n: usize, limits: &Limits) -> Result<Vec<Permutation>> {
    limits.check_n(n)?;
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![Permutation { map: current.clone() }];
    while next_permutation(&mut current) {
        out.push(Permutation { map: current.clone() });
    }
    Ok(out)
}

/// Advances `xs` to the next lexicographic arrangement (multisets allowed).
pub(crate) fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// A word in `[d]^n`, stored zero-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IndexTuple {
    d: usize,
    digits: Vec<usize>,
}

impl IndexTuple {
    /// From one-based letters in `1..=d`.
    pub fn from_letters(d: usize, letters: &[usize]) -> Result<Self> {
        if letters.iter().any(|&x| x == 0 || x > d) {
            return Err(Error::invalid(format!("tuple {letters:?} has entries outside 1..={d}")));
        }
        Ok(IndexTuple { d, digits: letters.iter().map(|&x| x - 1).collect() })
    }

    pub(crate) fn from_digits(d: usize, digits: Vec<usize>) -> Self {
        debug_assert!(digits.iter().all(|&x| x < d));
        IndexTuple { d, digits }
    }

    pub fn from_index(d: usize, n: usize, index: BasisIndex) -> Self {
        let mut digits = vec![0; n];
        decode_into(index.0, d, &mut digits);
        IndexTuple { d, digits }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.digits.len()
    }

    pub fn letters(&self) -> Vec<usize> {
        self.digits.iter().map(|&x| x + 1).collect()
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    /// Mixed-radix, first entry most significant.
    pub fn index(&self) -> BasisIndex {
        BasisIndex(encode(&self.digits, self.d))
    }

    /// Letter counts `N(a|x)` for `a = 1..=d`.
    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.d];
        for &x in &self.digits {
            counts[x] += 1;
        }
        counts
    }
}

/// Position of a product basis vector `e_x` in `(C^d)^{⊗n}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BasisIndex(pub usize);

pub(crate) fn encode(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

pub(crate) fn decode_into(mut index: usize, d: usize, digits: &mut [usize]) {
    for slot in digits.iter_mut().rev() {
        *slot = index % d;
        index /= d;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(images: &[usize]) -> Permutation {
        Permutation::from_one_line(images).unwrap()
    }

    fn t(d: usize, letters: &[usize]) -> IndexTuple {
        IndexTuple::from_letters(d, letters).unwrap()
    }

    #[test]
    fn enumeration_counts_and_order() {
        let lim = Limits::DEFAULT;
        assert_eq!(enumerate_permutations(1, &lim).unwrap(), vec![p(&[1])]);
        let s3 = enumerate_permutations(3, &lim).unwrap();
        assert_eq!(s3.len(), 6);
        assert_eq!(s3[0], p(&[1, 2, 3]));
        assert_eq!(s3[5], p(&[3, 2, 1]));
        let s5 = enumerate_permutations(5, &lim).unwrap();
        assert_eq!(s5.len(), 120);
        assert!(s5.windows(2).all(|w| w[0] < w[1]));
        for (rank, perm) in s5.iter().enumerate() {
            assert_eq!(perm.lex_rank(), rank);
        }
        assert!(matches!(enumerate_permutations(9, &lim), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_one_line(&[1, 1]).is_err());
        assert!(Permutation::from_one_line(&[0, 1]).is_err());
        assert!(Permutation::from_one_line(&[3, 1]).is_err());
        assert!(Permutation::from_one_line(&[]).is_err());
    }

    #[test]
    fn composition_and_inverse() {
        let id = Permutation::identity(3);
        let pi = p(&[3, 1, 2]);
        assert_eq!(Permutation::compose(&id, &pi).unwrap(), pi);
        assert_eq!(Permutation::compose(&p(&[2, 1, 3]), &p(&[2, 1, 3])).unwrap(), id);
        assert_eq!(Permutation::compose(&p(&[2, 3, 1]), &p(&[2, 3, 1])).unwrap(), p(&[3, 1, 2]));
        assert!(matches!(Permutation::compose(&id, &Permutation::identity(2)), Err(Error::Dimension(_))));

        assert_eq!(id.inverse(), id);
        assert_eq!(p(&[2, 1, 3]).inverse(), p(&[2, 1, 3]));
        assert_eq!(p(&[2, 3, 1]).inverse(), p(&[3, 1, 2]));
    }

    #[test]
    fn action_on_tuples() {
        let x = t(2, &[1, 2, 2]);
        assert_eq!(Permutation::identity(3).act_on_tuple(&x).unwrap(), x);
        // (a, b, c) -> (b, a, c)
        let abc = t(3, &[1, 2, 3]);
        assert_eq!(p(&[2, 1, 3]).act_on_tuple(&abc).unwrap().letters(), vec![2, 1, 3]);
        assert_eq!(p(&[2, 3, 1]).act_on_tuple(&t(2, &[1, 1, 2])).unwrap().letters(), vec![1, 2, 1]);
        assert!(p(&[2, 1]).act_on_tuple(&x).is_err());
    }

    #[test]
    fn basis_index_is_big_endian() {
        let x = t(2, &[2, 1, 1]);
        assert_eq!(x.index(), BasisIndex(4));
        assert_eq!(IndexTuple::from_index(2, 3, BasisIndex(4)), x);
        assert!(IndexTuple::from_letters(2, &[3]).is_err());
    }

    #[test]
    fn matrices() {
        let lim = Limits::DEFAULT;
        assert_eq!(Permutation::identity(3).matrix(2, &lim).unwrap(), ExactOperator::identity(8));

        let swap = p(&[2, 1]).matrix(2, &lim).unwrap();
        let e = |letters: &[usize]| t(2, letters).index().0;
        for x in 0..4 {
            for y in 0..4 {
                let expected = match (IndexTuple::from_index(2, 2, BasisIndex(x)).letters().as_slice(), y) {
                    ([1, 2], y) => y == e(&[2, 1]),
                    ([2, 1], y) => y == e(&[1, 2]),
                    (_, y) => y == x,
                };
                assert_eq!(swap.get(y, x).is_one(), expected);
            }
        }
    }

    #[test]
    fn action_composes_contravariantly_exhaustive() {
        let lim = Limits::DEFAULT;
        for n in 1..=4 {
            let perms = enumerate_permutations(n, &lim).unwrap();
            for sigma in &perms {
                for pi in &perms {
                    let composed = Permutation::compose(pi, sigma).unwrap();
                    for x in 0..(1 << n) {
                        let x = IndexTuple::from_index(2, n, BasisIndex(x));
                        let lhs = sigma.act_on_tuple(&pi.act_on_tuple(&x).unwrap()).unwrap();
                        assert_eq!(lhs, composed.act_on_tuple(&x).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn action_is_bijective_on_words() {
        let lim = Limits::DEFAULT;
        for n in 1..=4 {
            for pi in enumerate_permutations(n, &lim).unwrap() {
                let mut images = pi.basis_action(2);
                images.sort_unstable();
                assert!(images.iter().enumerate().all(|(i, &y)| i == y));
            }
        }
    }

    #[test]
    fn inverse_matrix_is_transpose() {
        let lim = Limits::DEFAULT;
        for pi in enumerate_permutations(3, &lim).unwrap() {
            let m = pi.matrix(2, &lim).unwrap();
            assert_eq!(pi.inverse().matrix(2, &lim).unwrap(), m.transpose());
        }
    }

    #[test]
    fn signs() {
        assert_eq!(p(&[5, 4, 3, 2, 1]).sign(), 1);
        assert_eq!(p(&[2, 1, 3]).sign(), -1);
        assert_eq!(p(&[2, 3, 1]).sign(), 1);
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(Permutation::from_zero_based)
    }

    proptest! {
        #[test]
        fn group_laws(a in arb_perm(6), b in arb_perm(6), c in arb_perm(6)) {
            let ab_c = Permutation::compose(&Permutation::compose(&a, &b).unwrap(), &c).unwrap();
            let a_bc = Permutation::compose(&a, &Permutation::compose(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            prop_assert!(Permutation::compose(&a, &a.inverse()).unwrap().is_identity());
            prop_assert_eq!(Permutation::from_one_line(&a.one_line()).unwrap(), a.clone());
        }

        #[test]
        fn action_preserves_content(pi in arb_perm(4), x in proptest::collection::vec(1usize..=3, 4)) {
            let x = IndexTuple::from_letters(3, &x).unwrap();
            prop_assert_eq!(pi.act_on_tuple(&x).unwrap().counts(), x.counts());
        }

        #[test]
        fn permutation_matrix_columns_sum_to_one(pi in arb_perm(4)) {
            let m = pi.matrix(2, &Limits::DEFAULT).unwrap();
            for col in 0..16 {
                let ones = (0..16).filter(|&row| m.get(row, col).is_one()).count();
                let zeros = (0..16).filter(|&row| m.get(row, col).is_zero()).count();
                prop_assert_eq!((ones, zeros), (1, 15));
            }
        }
    }
}

//! Row and column permutations stored as transposition vectors.
//!
//! A [`Permutation`] `v` of length `len` stands for the sequence of swaps
//! `(0, v[0]), (1, v[1]), ..., (len-1, v[len-1])`, which is how every
//! elimination routine here records its pivoting: step `i` exchanged position
//! `i` with position `v[i] >= i`.
//!
//! [`Permutation::apply_rows`] replays the swaps in recording order
//! (ascending). [`Permutation::apply_rows_inverse`] undoes them (descending).
//! For a decomposition `A = P L S`, `P` is the matrix of the *inverse* replay:
//! replaying the pivot swaps on `A` yields `L S`, so [`Permutation::to_matrix`]
//! materialises the descending application.

use std::fmt;
use std::str::FromStr;

use crate::bitmat::{BitMatrix, MatrixWindowMut};
use crate::error::{Error, Result};
use crate::par;
use crate::row::ColSwap;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Permutation {
    v: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { v: (0..n).collect() }
    }

    /// Validates `v[i] >= i` and `v[i] < len`.
    pub fn from_vec(v: Vec<usize>) -> Result<Self> {
        let n = v.len();
        if let Some((i, &x)) = v.iter().enumerate().find(|&(i, &x)| x < i || x >= n) {
            return Err(Error::InvalidPermutation(format!("entry {i} = {x} (length {n})")));
        }
        Ok(Permutation { v })
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.v
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [usize] {
        &mut self.v
    }

    pub fn get(&self, i: usize) -> usize {
        self.v[i]
    }

    pub fn is_identity(&self) -> bool {
        self.v.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn apply_rows(&self, a: &mut BitMatrix) {
        self.apply_rows_window(&mut a.as_window_mut());
    }

    pub fn apply_rows_inverse(&self, a: &mut BitMatrix) {
        self.apply_rows_inverse_window(&mut a.as_window_mut());
    }

    /// Swaps window rows `i` and `v[i]` for `i = 0..len` ascending.
    pub fn apply_rows_window(&self, w: &mut MatrixWindowMut<'_>) {
        assert!(self.len() <= w.nrows(), "permutation longer than the window");
        apply_row_swaps(w, &self.v, false);
    }

    /// Undoes [`Self::apply_rows_window`]: the same swaps in descending order.
    pub fn apply_rows_inverse_window(&self, w: &mut MatrixWindowMut<'_>) {
        assert!(self.len() <= w.nrows(), "permutation longer than the window");
        apply_row_swaps(w, &self.v, true);
    }

    /// The `n x n` permutation matrix `P` with `P * X == apply_rows_inverse(X)`,
    /// i.e. the `P` of `A = P L S`.
    pub fn to_matrix(&self, n: usize) -> BitMatrix {
        assert!(n >= self.len());
        let mut m = BitMatrix::identity(n);
        self.apply_rows_inverse(&mut m);
        m
    }

    /// The inverse (and transpose) of [`Self::to_matrix`]; multiplying by it
    /// replays the swaps.
    pub fn to_matrix_inverse(&self, n: usize) -> BitMatrix {
        assert!(n >= self.len());
        let mut m = BitMatrix::identity(n);
        self.apply_rows(&mut m);
        m
    }
}

pub(crate) fn apply_row_swaps(w: &mut MatrixWindowMut<'_>, v: &[usize], descending: bool) {
    let step = |w: &mut MatrixWindowMut<'_>, i: usize| {
        if v[i] != i {
            w.row_swap(i, v[i]);
        }
    };
    if descending {
        (0..v.len()).rev().for_each(|i| step(w, i));
    } else {
        (0..v.len()).for_each(|i| step(w, i));
    }
}

/// Column compression of an in-place PLS result: for `j = 0..rank`
/// ascending, swap window columns `j` and `q[j]` in rows `j..`.
///
/// Runs row by row: row `i` receives exactly the swaps `j <= i`, in order.
pub fn compress_columns(w: &mut MatrixWindowMut<'_>, rank: usize, q: &[usize]) {
    assert!(rank <= w.nrows().min(q.len()));
    let (mat, rect) = w.parts();
    let swaps: Vec<(usize, ColSwap)> = (0..rank)
        .filter(|&j| q[j] != j)
        .map(|j| (j, ColSwap::new(rect.col0 + j, rect.col0 + q[j])))
        .collect();
    if swaps.is_empty() {
        return;
    }
    let stride = mat.stride();
    par::rows_for_each(mat.words_mut(), stride, rect.row0..rect.row1, swaps.len() / 4, |i, r| {
        let local = i - rect.row0;
        for (_, op) in swaps.iter().take_while(|(j, _)| *j <= local) {
            op.apply(r);
        }
    });
}

/// Undoes [`compress_columns`] on rows `0..rank` after the entries below the
/// diagonal have been cleared: row `i` receives the swaps `j <= i` in
/// descending order.
pub(crate) fn uncompress_upper(w: &mut MatrixWindowMut<'_>, rank: usize, q: &[usize]) {
    let (mat, rect) = w.parts();
    let swaps: Vec<(usize, ColSwap)> = (0..rank)
        .filter(|&j| q[j] != j)
        .map(|j| (j, ColSwap::new(rect.col0 + j, rect.col0 + q[j])))
        .collect();
    if swaps.is_empty() {
        return;
    }
    let stride = mat.stride();
    par::rows_for_each(mat.words_mut(), stride, rect.row0..rect.row0 + rank, swaps.len() / 4, |i, r| {
        let local = i - rect.row0;
        let upto = swaps.partition_point(|(j, _)| *j <= local);
        for (_, op) in swaps[..upto].iter().rev() {
            op.apply(r);
        }
    });
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.v.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{self}]")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v = s
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|e| Error::InvalidPermutation(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_vec(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mul::mul_naive;

    fn m(s: &str) -> BitMatrix {
        s.parse().unwrap()
    }

    #[test]
    fn identity_examples() {
        assert_eq!(Permutation::identity(3).as_slice(), &[0, 1, 2]);
        assert!(Permutation::identity(0).is_empty());
        let a = BitMatrix::random(5, 5, 0.5, 1);
        let mut b = a.clone();
        Permutation::identity(5).apply_rows(&mut b);
        assert_eq!(a, b);
    }

    #[test]
    fn from_vec_validates() {
        assert!(Permutation::from_vec(vec![1, 1]).is_ok());
        assert!(Permutation::from_vec(vec![0, 0]).is_err());
        assert!(Permutation::from_vec(vec![2, 1]).is_err());
        assert!("1 1".parse::<Permutation>().is_ok());
        assert!("1 x".parse::<Permutation>().is_err());
    }

    #[test]
    fn apply_rows_example() {
        let p = Permutation::from_vec(vec![1, 1]).unwrap();
        let mut a = m("01;10");
        p.apply_rows(&mut a);
        assert_eq!(a, m("10;01"));
        assert_eq!(p.to_matrix(2), m("01;10"));
    }

    #[test]
    fn inverse_undoes_forward() {
        let a = BitMatrix::random(8, 8, 0.5, 3);
        let p = Permutation::from_vec(vec![3, 5, 2, 7, 4, 6, 7, 7]).unwrap();
        let mut b = a.clone();
        p.apply_rows(&mut b);
        assert_ne!(a, b);
        p.apply_rows_inverse(&mut b);
        assert_eq!(a, b);
    }

    #[test]
    fn matrices_are_inverse() {
        let p = Permutation::from_vec(vec![2, 2, 3, 3]).unwrap();
        let prod = mul_naive(&p.to_matrix(5), &p.to_matrix_inverse(5)).unwrap();
        assert_eq!(prod, BitMatrix::identity(5));
        assert_eq!(Permutation::identity(3).to_matrix(3), BitMatrix::identity(3));
    }

    #[test]
    fn compress_examples() {
        let mut a = m("01;01");
        compress_columns(&mut a.as_window_mut(), 1, &[1, 1]);
        assert_eq!(a, m("10;10"));
        let b0 = BitMatrix::random(6, 6, 0.5, 4);
        let mut b = b0.clone();
        compress_columns(&mut b.as_window_mut(), 3, &[0, 1, 2, 3, 4, 5]);
        assert_eq!(b, b0);
    }

    #[test]
    fn compress_matches_column_swaps() {
        let a0 = BitMatrix::random(20, 130, 0.5, 8);
        let q = [3, 64, 65, 100, 129];
        let mut by_rows = a0.clone();
        compress_columns(&mut by_rows.as_window_mut(), q.len(), &q);
        let mut by_cols = a0.clone();
        for (j, &qj) in q.iter().enumerate() {
            by_cols.col_swap(j, qj, j);
        }
        assert_eq!(by_rows, by_cols);
    }
}

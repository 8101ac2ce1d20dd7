//! Cubic reference elimination: plain Gauss-Jordan RREF and Gaussian PLS.
//!
//! Both are deliberately simple and serve as oracles for the table-based and
//! recursive algorithms.

use crate::bitmat::BitMatrix;
use crate::error::{Error, Result};
use crate::mul::mul_naive;
use crate::perm::{self, Permutation};
use crate::row;

/// Reduces `a` to reduced row echelon form in place and returns its rank.
pub fn gauss_rref(a: &mut BitMatrix) -> usize {
    let (m, n) = (a.nrows(), a.ncols());
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| a.get(i, c)) else {
            continue;
        };
        a.row_swap(r, p);
        for i in 0..m {
            if i != r && a.get(i, c) {
                a.row_add(i, r, c);
            }
        }
        r += 1;
    }
    r
}

/// In-place PLS decomposition by Gaussian elimination.
///
/// On return the first `rank` entries of `p` and `q` hold the pivot rows and
/// columns (as transpositions) and the rest are identity. The matrix holds
/// `L` strictly below the diagonal in columns `0..rank` and `S`, column
/// compressed, on and above it.
pub fn gauss_pls(a: &mut BitMatrix, p: &mut Permutation, q: &mut Permutation) -> Result<usize> {
    let (m, n) = (a.nrows(), a.ncols());
    check_perm_lengths(m, n, p, q)?;
    let (pv, qv) = (p.as_mut_slice(), q.as_mut_slice());
    let mut r = 0;
    let mut c = 0;
    while r < m && c < n {
        let Some((i, j)) = (c..n).find_map(|j| (r..m).find(|&i| a.get(i, j)).map(|i| (i, j))) else {
            break;
        };
        pv[r] = i;
        qv[r] = j;
        a.row_swap(r, i);
        for l in r + 1..m {
            if a.get(l, j) {
                a.row_add(l, r, j + 1);
            }
        }
        r += 1;
        c = j + 1;
    }
    finish_perms(pv, qv, r);
    perm::compress_columns(&mut a.as_window_mut(), r, qv);
    Ok(r)
}

pub(crate) fn check_perm_lengths(m: usize, n: usize, p: &Permutation, q: &Permutation) -> Result<()> {
    if p.len() != m || q.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "permutations of length {} and {} for a {m}x{n} matrix",
            p.len(),
            q.len()
        )));
    }
    Ok(())
}

pub(crate) fn finish_perms(p: &mut [usize], q: &mut [usize], rank: usize) {
    for (i, x) in p.iter_mut().enumerate().skip(rank) {
        *x = i;
    }
    for (i, x) in q.iter_mut().enumerate().skip(rank) {
        *x = i;
    }
}

/// A packed PLS decomposition together with its permutations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlsResult {
    pub matrix: BitMatrix,
    pub rank: usize,
    pub p: Permutation,
    pub q: Permutation,
}

impl PlsResult {
    /// Runs [`gauss_pls`] on a copy of `a`.
    pub fn gauss(a: &BitMatrix) -> PlsResult {
        let mut matrix = a.clone();
        let mut p = Permutation::identity(a.nrows());
        let mut q = Permutation::identity(a.ncols());
        let rank = gauss_pls(&mut matrix, &mut p, &mut q).expect("lengths match");
        PlsResult { matrix, rank, p, q }
    }

    /// The `m x rank` unit lower triangular factor.
    pub fn l(&self) -> BitMatrix {
        let m = self.matrix.nrows();
        let mut l = BitMatrix::new(m, self.rank);
        for i in 0..m {
            let width = i.min(self.rank);
            let bits = self.matrix.row(i);
            let dst = l.row_mut(i);
            for c in (0..width).step_by(row::WORD) {
                let len = (width - c).min(row::WORD);
                row::put_bits(dst, c, len, row::get_bits(bits, c, len));
            }
            if i < self.rank {
                row::set_bit(dst, i, true);
            }
        }
        l
    }

    /// The `rank x n` factor in row echelon form, pivots in their original
    /// columns.
    pub fn s(&self) -> BitMatrix {
        let n = self.matrix.ncols();
        let mut s = BitMatrix::new(self.rank, n);
        for i in 0..self.rank {
            s.row_mut(i).copy_from_slice(self.matrix.row(i));
            row::clear_range(s.row_mut(i), 0, i);
        }
        perm::uncompress_upper(&mut s.as_window_mut(), self.rank, self.q.as_slice());
        s
    }

    /// `P * L * S`, which equals the decomposed matrix.
    pub fn reconstruct(&self) -> BitMatrix {
        let ls = mul_naive(&self.l(), &self.s()).expect("shapes agree");
        mul_naive(&self.p.to_matrix(self.matrix.nrows()), &ls).expect("shapes agree")
    }

    /// Pivot column of each row of `S`.
    pub fn pivot_columns(&self) -> &[usize] {
        &self.q.as_slice()[..self.rank]
    }
}

/// Checks the reduced row echelon form structurally: leading ones strictly
/// move right, each pivot column is a unit vector, zero rows come last.
pub fn is_rref(a: &BitMatrix) -> bool {
    let mut last: Option<usize> = None;
    let mut seen_zero = false;
    for i in 0..a.nrows() {
        let lead = (0..a.ncols()).find(|&j| a.get(i, j));
        match lead {
            None => seen_zero = true,
            Some(j) => {
                if seen_zero || last.is_some_and(|l| j <= l) {
                    return false;
                }
                if (0..a.nrows()).any(|x| x != i && a.get(x, j)) {
                    return false;
                }
                last = Some(j);
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> BitMatrix {
        s.parse().unwrap()
    }

    #[test]
    fn rref_examples() {
        let mut a = m("11;01");
        assert_eq!(gauss_rref(&mut a), 2);
        assert_eq!(a, m("10;01"));
        let mut z = BitMatrix::new(3, 4);
        assert_eq!(gauss_rref(&mut z), 0);
        assert!(z.is_zero());
        let mut b = m("11;11");
        assert_eq!(gauss_rref(&mut b), 1);
        assert_eq!(b, m("11;00"));
    }

    #[test]
    fn rref_is_fixpoint_and_structured() {
        for seed in 0..20 {
            let mut a = BitMatrix::random(17, 23, 0.3, seed);
            let r = gauss_rref(&mut a);
            assert!(is_rref(&a));
            let once = a.clone();
            assert_eq!(gauss_rref(&mut a), r);
            assert_eq!(a, once);
        }
    }

    #[test]
    fn pls_identity() {
        let res = PlsResult::gauss(&BitMatrix::identity(5));
        assert_eq!(res.rank, 5);
        assert!(res.p.is_identity() && res.q.is_identity());
        assert_eq!(res.l(), BitMatrix::identity(5));
        assert_eq!(res.s(), BitMatrix::identity(5));
    }

    #[test]
    fn pls_swap_example() {
        let a = m("01;10");
        let res = PlsResult::gauss(&a);
        assert_eq!(res.rank, 2);
        assert_eq!(res.p.as_slice(), &[1, 1]);
        assert_eq!(res.s(), BitMatrix::identity(2));
        assert_eq!(res.reconstruct(), a);
    }

    #[test]
    fn pls_factor_example() {
        let a = m("11;10");
        let res = PlsResult::gauss(&a);
        assert_eq!(res.rank, 2);
        assert_eq!(res.matrix, m("11;11"));
        assert_eq!(res.l(), m("10;11"));
        assert_eq!(res.s(), m("11;01"));
        assert!(res.p.is_identity() && res.q.is_identity());
        assert_eq!(res.reconstruct(), a);
    }

    #[test]
    fn pls_rejects_bad_lengths() {
        let mut a = BitMatrix::new(2, 3);
        let mut p = Permutation::identity(2);
        let mut q = Permutation::identity(2);
        assert!(gauss_pls(&mut a, &mut p, &mut q).is_err());
    }

    #[test]
    fn is_rref_rejects() {
        assert!(!is_rref(&m("01;10")));
        assert!(!is_rref(&m("11;01")));
        assert!(!is_rref(&m("00;10")));
        assert!(is_rref(&m("101;010;000")));
    }
}

//! MMPF: in-place PLS decomposition with Gray-code tables.
//!
//! Like M4RI, but a pivot block is only made upper triangular, the
//! elimination multipliers are left in place as the `L` factor, and the
//! tables are corrected so that a table addition writes those multipliers
//! instead of clearing them.

use crate::bitmat::{BitMatrix, MatrixWindowMut, Rect};
use crate::error::Result;
use crate::gauss::{check_perm_lengths, finish_perms};
use crate::m4ri::{apply_table, masked_rows, table_from_rows, GrayTable};
use crate::mul::auto_k;
use crate::perm::{self, Permutation};
use crate::row::{self, WORD};

/// Largest block handled by one table.
const MAX_K: usize = 16;

/// Finds up to `k` pivots in consecutive columns from `(s_r, s_c)`, leaving
/// an upper triangular pivot block with the multipliers below it.
///
/// Returns `(kbar, d_r)`: the number of pivots and the last row that has
/// already been reduced against them. Rows past `d_r` are untouched.
pub fn pls_submatrix(
    a: &mut MatrixWindowMut<'_>,
    s_r: usize,
    s_c: usize,
    k: usize,
    p: &mut Permutation,
    q: &mut Permutation,
) -> Result<(usize, usize)> {
    check_perm_lengths(a.nrows(), a.ncols(), p, q)?;
    assert!(s_r < a.nrows() && s_c < a.ncols() && k <= WORD);
    let k = k.min(a.ncols() - s_c);
    let (mat, rect) = a.parts();
    Ok(submatrix(mat, rect, s_r, s_c, k, p.as_mut_slice(), q.as_mut_slice()))
}

fn submatrix(mat: &mut BitMatrix, rect: Rect, s_r: usize, s_c: usize, k: usize, p: &mut [usize], q: &mut [usize]) -> (usize, usize) {
    let m = rect.nrows();
    let (r0, c0, c_end) = (rect.row0, rect.col0 + s_c, rect.col1);
    let mut done = [0usize; WORD];
    let mut kbar = 0;
    while kbar < k {
        let mut found = None;
        for i in s_r + kbar..m {
            if row::get_bits(mat.row(r0 + i), c0, kbar + 1) == 0 {
                continue;
            }
            // clear before
            for l in 0..kbar {
                if done[l] < i {
                    if row::get_bit(mat.row(r0 + i), c0 + l) {
                        let (d, s) = mat.row_pair(r0 + i, r0 + s_r + l);
                        row::xor_range(d, s, c0 + l + 1, c_end);
                    }
                    done[l] = i;
                }
            }
            if row::get_bit(mat.row(r0 + i), c0 + kbar) {
                found = Some(i);
                break;
            }
        }
        let Some(i) = found else { break };
        p[s_r + kbar] = i;
        q[s_r + kbar] = s_c + kbar;
        mat.window_mut_unchecked(rect).row_swap(i, s_r + kbar);
        done[kbar] = i;
        kbar += 1;
    }
    if kbar == 0 {
        return (0, s_r);
    }
    // finish submatrix
    let d_r = done[..kbar].iter().copied().max().unwrap_or(s_r);
    for c2 in 0..kbar {
        for r2 in done[c2] + 1..=d_r {
            if row::get_bit(mat.row(r0 + r2), c0 + c2) {
                let (d, s) = mat.row_pair(r0 + r2, r0 + s_r + c2);
                row::xor_range(d, s, c0 + c2 + 1, c_end);
            }
        }
    }
    (kbar, d_r)
}

/// Table over the upper triangular rows of `u` with the leading `kbar` bits
/// at `c_start` corrected, so that adding the row looked up by a row's
/// prefix clears everything past the block and leaves the multipliers in it.
pub fn make_table1(u: &BitMatrix, c_start: usize, kbar: usize) -> GrayTable {
    table_from_rows(u, 0, c_start, kbar, true)
}

/// In-place PLS decomposition of `a`; see [`crate::gauss::gauss_pls`] for
/// the output layout. `k = 0` picks the table size automatically.
pub fn mmpf_pls(a: &mut BitMatrix, p: &mut Permutation, q: &mut Permutation, k: usize) -> Result<usize> {
    mmpf_pls_window(&mut a.as_window_mut(), p, q, k)
}

pub fn mmpf_pls_window(a: &mut MatrixWindowMut<'_>, p: &mut Permutation, q: &mut Permutation, k: usize) -> Result<usize> {
    check_perm_lengths(a.nrows(), a.ncols(), p, q)?;
    let (mat, rect) = a.parts();
    Ok(mmpf_kernel(mat, rect, p.as_mut_slice(), q.as_mut_slice(), k))
}

pub(crate) fn mmpf_kernel(mat: &mut BitMatrix, rect: Rect, p: &mut [usize], q: &mut [usize], k: usize) -> usize {
    let (m, n) = (rect.nrows(), rect.ncols());
    debug_assert!(p.len() == m && q.len() == n);
    let k = if k == 0 { auto_k(m.min(n)) } else { k.min(MAX_K) };
    let (mut r, mut c) = (0, 0);
    while r < m && c < n {
        let kk = k.min(n - c);
        let (kbar, d_r) = submatrix(mat, rect, r, c, kk, p, q);
        if kbar == 0 {
            c += 1;
            continue;
        }
        let rows: Vec<usize> = (0..kbar).map(|j| rect.row0 + r + j).collect();
        let starts: Vec<usize> = (0..kbar).map(|j| rect.col0 + c + j).collect();
        let (u, w0) = masked_rows(mat, &rows, &starts, rect.col0 + c, rect.col1);
        let tbl = table_from_rows(&u, w0, rect.col0 + c - w0 * WORD, kbar, true);
        apply_table(mat, rect.row0 + d_r + 1..rect.row1, rect.col0 + c, &tbl);
        r += kbar;
        c += kbar;
    }
    finish_perms(p, q, r);
    perm::compress_columns(&mut mat.window_mut_unchecked(rect), r, q);
    r
}

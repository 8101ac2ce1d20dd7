//! M4RI: reduced row echelon form with Gray-code tables.
//!
//! Each outer step brings a `k`-column block into reduced form on `k` pivot
//! rows, tabulates all `2^k` combinations of those rows, and then clears the
//! block from every other row with a single table lookup and row addition.

use std::ops::Range;

use crate::bitmat::BitMatrix;
use crate::instrument::{self, Scratch, ScratchGuard};
use crate::mul::auto_k;
use crate::par;
use crate::row::{self, WORD};

/// All `2^k` linear combinations of `k` rows, indexed by their leading bits.
///
/// `T` only stores whole words from word `word0` on, so a table row can
/// be XORed onto a matrix row word by word.
#[derive(Clone, Debug)]
pub struct GrayTable {
    t: BitMatrix,
    l: Vec<usize>,
    k: usize,
    word0: usize,
    _scratch: ScratchGuard,
}

impl GrayTable {
    pub fn k(&self) -> usize {
        self.k
    }

    /// The combination rows, in Gray-code order of construction.
    pub fn rows(&self) -> &BitMatrix {
        &self.t
    }

    /// Maps a `k`-bit big-endian prefix to the row of `T` to add.
    pub fn lookup(&self) -> &[usize] {
        &self.l
    }

    /// Column of the source matrix that column 0 of `T` corresponds to.
    pub fn col_offset(&self) -> usize {
        self.word0 * WORD
    }

    fn entry(&self, id: usize) -> &[u64] {
        self.t.row(self.l[id])
    }
}

/// Builds the table over the rows of `u`, whose column 0 sits at word
/// `word0` of the target matrix. Gray bit `b` selects row `k - 1 - b`, so the
/// combination built at step `i` is `i ^ (i >> 1)` read big-endian.
///
/// With `correct` set, the leading `k` bits of every row are XORed with that
/// combination id after the lookup has been recorded.
pub(crate) fn table_from_rows(u: &BitMatrix, word0: usize, c_start: usize, k: usize, correct: bool) -> GrayTable {
    assert!((1..=WORD).contains(&k) && k <= 16 && u.nrows() >= k && c_start + k <= u.ncols());
    let size = 1usize << k;
    let mut t = BitMatrix::new(size, u.ncols());
    let mut l = vec![0usize; size];
    let scratch = ScratchGuard::new(Scratch::Table, (t.words().len() + u.words().len() + size) * 8);
    for i in 1..size {
        let src = k - 1 - i.trailing_zeros() as usize;
        let (dst, prev) = t.row_pair(i, i - 1);
        dst.copy_from_slice(prev);
        row::xor_words(dst, u.row(src));
        let prefix = row::read_bits_be(t.row(i), c_start, k);
        l[prefix] = i;
    }
    instrument::table_built(size as u64 - 1);
    if correct {
        for i in 1..size {
            let gray = (i ^ (i >> 1)) as u64;
            let le = gray.reverse_bits() >> (WORD - k);
            let r = t.row_mut(i);
            let cur = row::get_bits(r, c_start, k);
            row::put_bits(r, c_start, k, cur ^ le);
        }
    }
    GrayTable { t, l, k, word0, _scratch: scratch }
}

/// Copies rows `rows[j]` of `a`, keeping only columns `starts[j]..c_end`,
/// into a fresh matrix aligned to word `c_start / 64`.
pub(crate) fn masked_rows(a: &BitMatrix, rows: &[usize], starts: &[usize], c_start: usize, c_end: usize) -> (BitMatrix, usize) {
    let w0 = c_start / WORD;
    let w1 = row::words_for(c_end);
    let mut u = BitMatrix::new(rows.len(), (w1 - w0) * WORD);
    for (j, (&r, &s)) in rows.iter().zip(starts).enumerate() {
        let dst = u.row_mut(j);
        dst.copy_from_slice(&a.row(r)[w0..w1]);
        row::clear_range(dst, 0, s - w0 * WORD);
        row::clear_range(dst, c_end - w0 * WORD, (w1 - w0) * WORD);
    }
    (u, w0)
}

/// Table over the `k` pivot rows `r_start..r_start + k`, indexed by the `k`
/// bits at `c_start`. Costs exactly `2^k - 1` row additions.
pub fn make_table(a: &BitMatrix, r_start: usize, c_start: usize, k: usize) -> GrayTable {
    assert!(r_start + k <= a.nrows() && c_start + k <= a.ncols());
    let rows: Vec<usize> = (r_start..r_start + k).collect();
    let starts = vec![c_start; k];
    let (u, w0) = masked_rows(a, &rows, &starts, c_start, a.ncols());
    table_from_rows(&u, w0, c_start - w0 * WORD, k, false)
}

/// For each row in `r_start..r_end`, adds the table row selected by the `k`
/// bits at `c_start`.
pub fn add_rows_from_table(a: &mut BitMatrix, r_start: usize, r_end: usize, c_start: usize, k: usize, tbl: &GrayTable) {
    assert_eq!(k, tbl.k, "table built for a different k");
    assert!(r_start <= r_end && r_end <= a.nrows());
    assert!(tbl.word0 * WORD <= c_start && tbl.word0 + tbl.t.stride() <= a.stride());
    apply_table(a, r_start..r_end, c_start, tbl);
}

pub(crate) fn apply_table(a: &mut BitMatrix, rows: Range<usize>, c_start: usize, tbl: &GrayTable) {
    let stride = a.stride();
    let (w0, w1) = (tbl.word0, tbl.word0 + tbl.t.stride());
    let k = tbl.k;
    let adds = par::rows_sum(a.words_mut(), stride, rows, w1 - w0, |_, r| {
        let id = row::read_bits_be(r, c_start, k);
        if id == 0 {
            return 0;
        }
        row::xor_words(&mut r[w0..w1], tbl.entry(id));
        1
    });
    instrument::row_additions(adds);
}

/// Brings the block starting at `(r, c)` into reduced form on up to `k`
/// pivot rows, searching rows `r..r_end` for pivots in consecutive columns.
/// Returns the number of pivots found; the block at `(r, c)` is then the
/// identity of that size.
pub fn gauss_submatrix(a: &mut BitMatrix, r: usize, c: usize, k: usize, r_end: usize) -> usize {
    assert!(r <= r_end && r_end <= a.nrows() && c + k <= a.ncols());
    let mut start_row = r;
    for j in c..c + k {
        let mut found = false;
        for i in start_row..r_end {
            for l in 0..j - c {
                if a.get(i, c + l) {
                    a.row_add(i, r + l, c + l);
                }
            }
            if a.get(i, j) {
                a.row_swap(i, start_row);
                for l in r..start_row {
                    if a.get(l, j) {
                        a.row_add(l, start_row, j);
                    }
                }
                start_row += 1;
                found = true;
                break;
            }
        }
        if !found {
            return j - c;
        }
    }
    k
}

/// Reduced row echelon form by M4RI with `k`-bit tables (`k = 0`: automatic).
/// Returns the rank.
pub fn m4ri_rref(a: &mut BitMatrix, k: usize) -> usize {
    m4ri_rref_with(a, k, true)
}

/// With `full = false` rows above each pivot block are left alone and the
/// result is only in row echelon form.
pub fn m4ri_rref_with(a: &mut BitMatrix, k: usize, full: bool) -> usize {
    m4ri_steps(a, k, full, |_, _, _| false).rank
}

pub(crate) struct M4riStop {
    pub rank: usize,
    pub col: usize,
    pub stopped: bool,
}

/// The M4RI outer loop. `stop(a, r, c)` is consulted before every step; when
/// it returns true the loop ends with rows `0..r` reduced on columns `0..c`
/// and rows `r..` zero there.
pub(crate) fn m4ri_steps<F>(a: &mut BitMatrix, k: usize, full: bool, mut stop: F) -> M4riStop
where
    F: FnMut(&BitMatrix, usize, usize) -> bool,
{
    let (m, n) = (a.nrows(), a.ncols());
    let mut k = if k == 0 { auto_k(m.min(n)) } else { k.min(16) };
    let (mut r, mut c) = (0, 0);
    while c < n && r < m {
        if stop(a, r, c) {
            return M4riStop { rank: r, col: c, stopped: true };
        }
        if c + k > n {
            k = n - c;
        }
        let kbar = gauss_submatrix(a, r, c, k, m);
        if kbar > 0 {
            let tbl = make_table(a, r, c, kbar);
            if full {
                apply_table(a, 0..r, c, &tbl);
            }
            apply_table(a, r + kbar..m, c, &tbl);
        }
        r += kbar;
        c += kbar;
        if kbar != k {
            c += 1;
        }
    }
    M4riStop { rank: r, col: c.min(n), stopped: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::gauss_rref;
    use std::collections::HashSet;

    fn m(s: &str) -> BitMatrix {
        s.parse().unwrap()
    }

    #[test]
    fn table_single_row() {
        let a = m("110");
        let t = make_table(&a, 0, 0, 1);
        assert_eq!(t.rows().nrows(), 2);
        assert!(row::get_bits(t.rows().row(0), 0, 3) == 0);
        assert_eq!(row::get_bits(t.rows().row(1), 0, 3), 0b011);
        assert_eq!(t.lookup(), &[0, 1]);
    }

    #[test]
    fn table_two_rows_spans() {
        let a = m("10;01");
        let t = make_table(&a, 0, 0, 2);
        let span: HashSet<u64> = (0..4).map(|i| row::get_bits(t.rows().row(i), 0, 2)).collect();
        assert_eq!(span.len(), 4);
        for id in 0..4 {
            assert_eq!(t.rows().read_bits(t.lookup()[id], 0, 2), id);
        }
    }

    #[test]
    fn table_prefix_lookup_k3() {
        let mut a = m("10011;01010;00111");
        assert_eq!(gauss_submatrix(&mut a, 0, 0, 3, 3), 3);
        let t = make_table(&a, 0, 0, 3);
        let id = 0b110;
        assert_eq!(t.rows().read_bits(t.lookup()[id], 0, 3), id);
        let mut x = m("10011;01010;00111;11001");
        gauss_submatrix(&mut x, 0, 0, 3, 3);
        let t = make_table(&x, 0, 0, 3);
        add_rows_from_table(&mut x, 3, 4, 0, 3, &t);
        assert_eq!(x.read_bits(3, 0, 3), 0);
    }

    #[test]
    fn table_counts_additions() {
        for k in 1..=6 {
            let mut a = BitMatrix::identity(8);
            instrument::reset();
            let _ = make_table(&a, 0, 0, k);
            assert_eq!(instrument::snapshot().table_row_additions, (1 << k) - 1);
            add_rows_from_table(&mut a, 0, 0, 0, k, &make_table(&BitMatrix::identity(8), 0, 0, k));
        }
    }

    #[test]
    fn add_rows_noop_cases() {
        let mut a = m("10;01;00");
        let t = make_table(&a, 0, 0, 2);
        add_rows_from_table(&mut a, 2, 3, 0, 2, &t);
        assert_eq!(a, m("10;01;00"));
    }

    #[test]
    fn gauss_submatrix_examples() {
        let mut a = m("10;11");
        assert_eq!(gauss_submatrix(&mut a, 0, 0, 2, 2), 2);
        assert_eq!(a, BitMatrix::identity(2));
        let mut z = BitMatrix::new(3, 3);
        assert_eq!(gauss_submatrix(&mut z, 0, 0, 2, 3), 0);
        let mut b = m("01;01");
        assert_eq!(gauss_submatrix(&mut b, 0, 0, 2, 2), 0);
    }

    #[test]
    fn m4ri_matches_gauss() {
        for seed in 0..100 {
            let a = BitMatrix::random(50, 70, 0.5, seed);
            let mut g = a.clone();
            let mut x = a.clone();
            assert_eq!(m4ri_rref(&mut x, 0), gauss_rref(&mut g));
            assert_eq!(x, g, "seed {seed}");
        }
    }

    #[test]
    fn m4ri_examples_and_k_independence() {
        let mut i = BitMatrix::identity(9);
        assert_eq!(m4ri_rref(&mut i, 3), 9);
        assert_eq!(i, BitMatrix::identity(9));
        let mut d = m("1011;1011;0110");
        let mut dg = d.clone();
        assert_eq!(m4ri_rref(&mut d, 2), gauss_rref(&mut dg));
        assert_eq!(d, dg);
        let a = BitMatrix::random(40, 90, 0.3, 5);
        let mut g = a.clone();
        gauss_rref(&mut g);
        for k in 1..=8 {
            let mut x = a.clone();
            m4ri_rref(&mut x, k);
            assert_eq!(x, g, "k = {k}");
        }
    }

    #[test]
    fn echelon_only_leaves_rows_above() {
        let a = BitMatrix::random(30, 40, 0.5, 9);
        let mut e = a.clone();
        let r = m4ri_rref_with(&mut e, 4, false);
        let mut g = a.clone();
        assert_eq!(r, gauss_rref(&mut g));
        let mut full = e.clone();
        gauss_rref(&mut full);
        assert_eq!(full, g);
    }
}

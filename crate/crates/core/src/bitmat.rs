//! Bit-packed dense matrices over GF(2) and rectangular views into them.
//!
//! Storage is row-major with a fixed number of 64-bit words per row. The bit
//! for column `j` of a row lives in word `j / 64` at bit position `j % 64`,
//! least significant bit first. Bits past `ncols` in the last word of a row
//! are always zero.

use std::fmt;
use std::str::FromStr;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::row::{self, WORD};

/// Default number of rows sampled by [`BitMatrix::density`] callers that
/// only need an estimate.
pub const DEFAULT_DENSITY_SAMPLES: usize = 64;

/// Half-open rectangle `[row0, row1) x [col0, col1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rect {
    pub row0: usize,
    pub col0: usize,
    pub row1: usize,
    pub col1: usize,
}

impl Rect {
    pub fn new(row0: usize, col0: usize, row1: usize, col1: usize) -> Self {
        Rect { row0, col0, row1, col1 }
    }

    pub fn nrows(&self) -> usize {
        self.row1 - self.row0
    }

    pub fn ncols(&self) -> usize {
        self.col1 - self.col0
    }

    pub fn is_empty(&self) -> bool {
        self.row0 == self.row1 || self.col0 == self.col1
    }

    pub fn overlaps(&self, other: &Rect) -> bool {
        !self.is_empty()
            && !other.is_empty()
            && self.row0 < other.row1
            && other.row0 < self.row1
            && self.col0 < other.col1
            && other.col0 < self.col1
    }

    /// Sub-rectangle given in coordinates relative to `self`.
    pub fn sub(&self, row0: usize, col0: usize, row1: usize, col1: usize) -> Rect {
        debug_assert!(row0 <= row1 && row1 <= self.nrows() && col0 <= col1 && col1 <= self.ncols());
        Rect {
            row0: self.row0 + row0,
            col0: self.col0 + col0,
            row1: self.row0 + row1,
            col1: self.col0 + col1,
        }
    }

    fn check_within(&self, row0: usize, col0: usize, row1: usize, col1: usize) -> Result<()> {
        if row0 <= row1 && row1 <= self.nrows() && col0 <= col1 && col1 <= self.ncols() {
            Ok(())
        } else {
            Err(Error::WindowOutOfBounds {
                row0,
                col0,
                row1,
                col1,
                nrows: self.nrows(),
                ncols: self.ncols(),
            })
        }
    }
}

/// Dense `nrows x ncols` matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    nrows: usize,
    ncols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        let stride = row::words_for(ncols);
        let len = nrows.checked_mul(stride).expect("matrix size overflows usize");
        BitMatrix { nrows, ncols, stride, words: vec![0; len] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::new(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Matrix with i.i.d. entries, see [`BitMatrix::randomize`].
    pub fn random(nrows: usize, ncols: usize, density: f64, seed: u64) -> Self {
        let mut m = BitMatrix::new(nrows, ncols);
        m.randomize(density, seed);
        m
    }

    /// Builds a matrix from packed row-major words. Fails if the length is
    /// wrong or a padding bit is set.
    pub fn from_words(nrows: usize, ncols: usize, words: Vec<u64>) -> Result<Self> {
        let stride = row::words_for(ncols);
        if nrows.checked_mul(stride) != Some(words.len()) {
            return Err(Error::DimensionMismatch(format!(
                "{} words for a {nrows}x{ncols} matrix",
                words.len()
            )));
        }
        let m = BitMatrix { nrows, ncols, stride, words };
        if !m.padding_is_zero() {
            return Err(Error::Format("padding bits set".into()));
        }
        Ok(m)
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Words per row.
    #[inline]
    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.words[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.words[i * self.stride..(i + 1) * self.stride]
    }

    /// Mutable `dst` row and shared `src` row, `dst != src`.
    #[inline]
    pub(crate) fn row_pair(&mut self, dst: usize, src: usize) -> (&mut [u64], &[u64]) {
        let (a, b) = self.two_rows_mut(dst, src);
        (a, b)
    }

    #[inline]
    pub(crate) fn two_rows_mut(&mut self, i: usize, j: usize) -> (&mut [u64], &mut [u64]) {
        assert_ne!(i, j);
        let s = self.stride;
        if i < j {
            let (lo, hi) = self.words.split_at_mut(j * s);
            (&mut lo[i * s..(i + 1) * s], &mut hi[..s])
        } else {
            let (lo, hi) = self.words.split_at_mut(i * s);
            (&mut hi[..s], &mut lo[j * s..(j + 1) * s])
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.nrows && j < self.ncols, "({i}, {j}) out of bounds");
        row::get_bit(self.row(i), j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        debug_assert!(i < self.nrows && j < self.ncols, "({i}, {j}) out of bounds");
        row::set_bit(self.row_mut(i), j, v)
    }

    pub fn full_rect(&self) -> Rect {
        Rect::new(0, 0, self.nrows, self.ncols)
    }

    /// `A[dst, j] ^= A[src, j]` for `j >= start_col`.
    pub fn row_add(&mut self, dst: usize, src: usize, start_col: usize) {
        self.as_window_mut().row_add(dst, src, start_col)
    }

    pub fn row_swap(&mut self, i: usize, j: usize) {
        if i != j {
            let (a, b) = self.two_rows_mut(i, j);
            a.swap_with_slice(b);
        }
    }

    /// Exchanges columns `a` and `b` in rows `start_row..`.
    pub fn col_swap(&mut self, a: usize, b: usize, start_row: usize) {
        self.as_window_mut().col_swap(a, b, start_row)
    }

    /// The `k` bits of row `i` starting at column `c` read as a big-endian
    /// integer: column `c + j` has weight `2^(k-1-j)`.
    pub fn read_bits(&self, i: usize, c: usize, k: usize) -> usize {
        assert!((1..=WORD).contains(&k) && c + k <= self.ncols);
        row::read_bits_be(self.row(i), c, k)
    }

    /// Fraction of set entries, estimated on `sample_rows` evenly spaced rows
    /// (exact when `sample_rows >= nrows`).
    pub fn density(&self, sample_rows: usize) -> f64 {
        self.as_window().density(sample_rows)
    }

    /// Overwrites every entry with an independent Bernoulli(`density`) bit.
    ///
    /// The generator is SplitMix64 seeded with `seed`. Entries are drawn row by
    /// row, column by column, one 64-bit output each; the entry is 1 iff
    /// `(x >> 11) < floor(density * 2^53)`.
    pub fn randomize(&mut self, density: f64, seed: u64) {
        assert!((0.0..=1.0).contains(&density), "density {density} not in [0, 1]");
        let threshold = (density * (1u64 << 53) as f64) as u64;
        let mut rng = SplitMix64::seed_from_u64(seed);
        let ncols = self.ncols;
        for i in 0..self.nrows {
            let r = self.row_mut(i);
            r.fill(0);
            for j in 0..ncols {
                if (rng.next_u64() >> 11) < threshold {
                    r[j / WORD] |= 1u64 << (j % WORD);
                }
            }
        }
    }

    pub fn window(&self, row0: usize, col0: usize, row1: usize, col1: usize) -> Result<MatrixWindow<'_>> {
        self.as_window().window(row0, col0, row1, col1)
    }

    pub fn window_mut(&mut self, row0: usize, col0: usize, row1: usize, col1: usize) -> Result<MatrixWindowMut<'_>> {
        self.full_rect().check_within(row0, col0, row1, col1)?;
        Ok(MatrixWindowMut { mat: self, rect: Rect::new(row0, col0, row1, col1) })
    }

    pub fn as_window(&self) -> MatrixWindow<'_> {
        MatrixWindow { mat: self, rect: self.full_rect() }
    }

    pub fn as_window_mut(&mut self) -> MatrixWindowMut<'_> {
        let rect = self.full_rect();
        MatrixWindowMut { mat: self, rect }
    }

    pub(crate) fn window_mut_unchecked(&mut self, rect: Rect) -> MatrixWindowMut<'_> {
        debug_assert!(rect.row1 <= self.nrows && rect.col1 <= self.ncols);
        MatrixWindowMut { mat: self, rect }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn padding_is_zero(&self) -> bool {
        if self.ncols.is_multiple_of(WORD) || self.stride == 0 {
            return true;
        }
        let pad = !row::bit_range_mask(0, self.ncols % WORD);
        (0..self.nrows).all(|i| self.row(i)[self.stride - 1] & pad == 0)
    }

    /// Copies the entries of `rect` into a fresh matrix.
    pub fn copy_rect(&self, rect: Rect) -> BitMatrix {
        let mut out = BitMatrix::new(rect.nrows(), rect.ncols());
        let w = rect.ncols();
        for i in 0..rect.nrows() {
            let src = self.row(rect.row0 + i);
            let dst = out.row_mut(i);
            if rect.col0.is_multiple_of(WORD) {
                let w0 = rect.col0 / WORD;
                let n = dst.len();
                dst.copy_from_slice(&src[w0..w0 + n]);
                row::clear_range(dst, w, n * WORD);
            } else {
                let mut o = 0;
                while o < w {
                    let l = (w - o).min(WORD);
                    row::put_bits(dst, o, l, row::get_bits(src, rect.col0 + o, l));
                    o += l;
                }
            }
        }
        out
    }

    /// Writes `src` into this matrix with its top-left corner at `(row0, col0)`.
    pub fn paste(&mut self, row0: usize, col0: usize, src: &BitMatrix) {
        assert!(row0 + src.nrows <= self.nrows && col0 + src.ncols <= self.ncols);
        for i in 0..src.nrows {
            let s = src.row(i);
            let d = self.row_mut(row0 + i);
            let mut o = 0;
            while o < src.ncols {
                let l = (src.ncols - o).min(WORD);
                row::put_bits(d, col0 + o, l, row::get_bits(s, o, l));
                o += l;
            }
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::new(self.ncols, self.nrows);
        for i in 0..self.nrows {
            let r = self.row(i);
            for (w, &word) in r.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let j = w * WORD + bits.trailing_zeros() as usize;
                    t.set(j, i, true);
                    bits &= bits - 1;
                }
            }
        }
        t
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.nrows {
            if i > 0 {
                writeln!(f)?;
            }
            for j in 0..self.ncols {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix {}x{}", self.nrows, self.ncols)?;
        if self.nrows <= 32 && self.ncols <= 128 {
            write!(f, " [")?;
            for i in 0..self.nrows {
                if i > 0 {
                    write!(f, ";")?;
                }
                for j in 0..self.ncols {
                    write!(f, "{}", self.get(i, j) as u8)?;
                }
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// Parses rows of `0`/`1` separated by `;` or newlines, e.g. `"101;011"`.
impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows: Vec<&str> = s
            .split([';', '\n'])
            .map(str::trim)
            .filter(|r| !r.is_empty())
            .collect();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = BitMatrix::new(rows.len(), ncols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != ncols {
                return Err(Error::Format(format!("row {i} has {} entries, expected {ncols}", r.len())));
            }
            for (j, ch) in r.bytes().enumerate() {
                match ch {
                    b'0' => {}
                    b'1' => m.set(i, j, true),
                    _ => return Err(Error::Format(format!("unexpected {:?} in row {i}", ch as char))),
                }
            }
        }
        Ok(m)
    }
}

/// Read-only view of a rectangle of a [`BitMatrix`].
#[derive(Clone, Copy)]
pub struct MatrixWindow<'a> {
    mat: &'a BitMatrix,
    rect: Rect,
}

impl<'a> MatrixWindow<'a> {
    pub fn nrows(&self) -> usize {
        self.rect.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.rect.ncols()
    }

    /// Bounds in parent coordinates.
    pub fn rect(&self) -> Rect {
        self.rect
    }

    pub fn parent(&self) -> &'a BitMatrix {
        self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.nrows() && j < self.ncols());
        self.mat.get(self.rect.row0 + i, self.rect.col0 + j)
    }

    pub fn window(&self, row0: usize, col0: usize, row1: usize, col1: usize) -> Result<MatrixWindow<'a>> {
        self.rect.check_within(row0, col0, row1, col1)?;
        Ok(MatrixWindow { mat: self.mat, rect: self.rect.sub(row0, col0, row1, col1) })
    }

    pub fn to_matrix(&self) -> BitMatrix {
        self.mat.copy_rect(self.rect)
    }

    pub fn density(&self, sample_rows: usize) -> f64 {
        let (m, n) = (self.nrows(), self.ncols());
        if m == 0 || n == 0 {
            return 0.0;
        }
        let s = sample_rows.max(1).min(m);
        let ones: u64 = (0..s)
            .map(|t| {
                let i = self.rect.row0 + t * m / s;
                row::count_range(self.mat.row(i), self.rect.col0, self.rect.col1)
            })
            .sum();
        ones as f64 / (s as f64 * n as f64)
    }
}

/// Mutable view of a rectangle of a [`BitMatrix`]. Writes through the view
/// land in the parent and never touch entries outside the rectangle.
pub struct MatrixWindowMut<'a> {
    mat: &'a mut BitMatrix,
    rect: Rect,
}

impl<'a> MatrixWindowMut<'a> {
    pub fn nrows(&self) -> usize {
        self.rect.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.rect.ncols()
    }

    pub fn rect(&self) -> Rect {
        self.rect
    }

    pub fn as_window(&self) -> MatrixWindow<'_> {
        MatrixWindow { mat: self.mat, rect: self.rect }
    }

    pub fn reborrow(&mut self) -> MatrixWindowMut<'_> {
        MatrixWindowMut { mat: self.mat, rect: self.rect }
    }

    /// Parent matrix and bounds, for kernels working in parent coordinates.
    pub(crate) fn parts(&mut self) -> (&mut BitMatrix, Rect) {
        (self.mat, self.rect)
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.nrows() && j < self.ncols());
        self.mat.get(self.rect.row0 + i, self.rect.col0 + j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        debug_assert!(i < self.nrows() && j < self.ncols());
        self.mat.set(self.rect.row0 + i, self.rect.col0 + j, v)
    }

    pub fn window_mut(&mut self, row0: usize, col0: usize, row1: usize, col1: usize) -> Result<MatrixWindowMut<'_>> {
        self.rect.check_within(row0, col0, row1, col1)?;
        Ok(MatrixWindowMut { mat: self.mat, rect: self.rect.sub(row0, col0, row1, col1) })
    }

    pub fn to_matrix(&self) -> BitMatrix {
        self.mat.copy_rect(self.rect)
    }

    /// Window row `dst` ^= window row `src` on window columns `start_col..`.
    pub fn row_add(&mut self, dst: usize, src: usize, start_col: usize) {
        assert!(dst < self.nrows() && src < self.nrows() && start_col <= self.ncols());
        let (c0, c1) = (self.rect.col0 + start_col, self.rect.col1);
        if dst == src {
            row::clear_range(self.mat.row_mut(self.rect.row0 + dst), c0, c1);
            return;
        }
        let (d, s) = self.mat.row_pair(self.rect.row0 + dst, self.rect.row0 + src);
        row::xor_range(d, s, c0, c1);
    }

    /// Swaps window rows `i` and `j` on the window's columns.
    pub fn row_swap(&mut self, i: usize, j: usize) {
        assert!(i < self.nrows() && j < self.nrows());
        if i == j {
            return;
        }
        let full = self.rect.col0 == 0 && self.rect.col1 == self.mat.ncols;
        let (c0, c1) = (self.rect.col0, self.rect.col1);
        let (a, b) = self.mat.two_rows_mut(self.rect.row0 + i, self.rect.row0 + j);
        if full {
            a.swap_with_slice(b);
        } else {
            row::swap_range(a, b, c0, c1);
        }
    }

    /// Exchanges window columns `a` and `b` in window rows `start_row..`.
    pub fn col_swap(&mut self, a: usize, b: usize, start_row: usize) {
        assert!(a < self.ncols() && b < self.ncols());
        if a == b {
            return;
        }
        let op = row::ColSwap::new(self.rect.col0 + a, self.rect.col0 + b);
        for i in self.rect.row0 + start_row..self.rect.row1 {
            op.apply(self.mat.row_mut(i));
        }
    }

    pub fn read_bits(&self, i: usize, c: usize, k: usize) -> usize {
        assert!((1..=WORD).contains(&k) && c + k <= self.ncols());
        row::read_bits_be(self.mat.row(self.rect.row0 + i), self.rect.col0 + c, k)
    }

    pub fn density(&self, sample_rows: usize) -> f64 {
        self.as_window().density(sample_rows)
    }

    /// Clears every entry of the window.
    pub fn clear(&mut self) {
        let (c0, c1) = (self.rect.col0, self.rect.col1);
        for i in self.rect.row0..self.rect.row1 {
            row::clear_range(self.mat.row_mut(i), c0, c1);
        }
    }

    /// Overwrites the window with `src`, which must have the same shape.
    pub fn copy_from(&mut self, src: &BitMatrix) -> Result<()> {
        if src.nrows() != self.nrows() || src.ncols() != self.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} source for a {}x{} window",
                src.nrows(),
                src.ncols(),
                self.nrows(),
                self.ncols()
            )));
        }
        self.mat.paste(self.rect.row0, self.rect.col0, src);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> BitMatrix {
        s.parse().unwrap()
    }

    #[test]
    fn new_shapes() {
        assert_eq!(BitMatrix::new(2, 2), m("00;00"));
        let e = BitMatrix::new(0, 5);
        assert_eq!((e.nrows(), e.ncols()), (0, 5));
        let w = BitMatrix::new(1, 65);
        assert_eq!(w.stride(), 2);
        assert!(w.is_zero());
        assert!(!BitMatrix::new(3, 3).get(2, 2));
    }

    #[test]
    fn set_get_packing() {
        let mut a = BitMatrix::new(1, 65);
        a.set(0, 64, true);
        assert_eq!(a.words(), &[0, 1]);
        a.set(0, 0, true);
        assert!(a.get(0, 0));
        a.set(0, 0, false);
        assert_eq!(a.words(), &[0, 1]);
    }

    #[test]
    fn row_add_examples() {
        let mut a = m("101;011");
        a.row_add(1, 0, 0);
        assert_eq!(a, m("101;110"));
        let mut a = m("101;011");
        a.row_add(1, 0, 1);
        assert_eq!(a, m("101;010"));
        a.row_add(1, 0, 1);
        assert_eq!(a, m("101;011"));
    }

    #[test]
    fn row_swap_examples() {
        let mut a = m("10;01");
        a.row_swap(0, 1);
        assert_eq!(a, m("01;10"));
        a.row_swap(1, 1);
        assert_eq!(a, m("01;10"));
        a.row_swap(0, 1);
        assert_eq!(a, m("10;01"));
    }

    #[test]
    fn col_swap_examples() {
        let mut a = m("10;10");
        a.col_swap(0, 1, 0);
        assert_eq!(a, m("01;01"));
        a.col_swap(0, 1, 0);
        assert_eq!(a, m("10;10"));
        let mut b = m("10;10;10");
        b.col_swap(1, 0, 1);
        assert_eq!(b, m("10;01;01"));
    }

    #[test]
    fn read_bits_examples() {
        assert_eq!(m("101").read_bits(0, 0, 3), 5);
        assert_eq!(m("110").read_bits(0, 0, 3), 6);
        assert_eq!(m("000110").read_bits(0, 0, 3), 0);
    }

    #[test]
    fn window_aliases_parent() {
        let mut a = BitMatrix::new(3, 3);
        {
            let mut w = a.window_mut(1, 1, 2, 2).unwrap();
            w.set(0, 0, true);
        }
        assert_eq!(a, m("000;010;000"));
        let full = a.window(0, 0, 3, 3).unwrap();
        assert!(full.get(1, 1) && !full.get(0, 0));
        let inner = a.window(1, 1, 3, 3).unwrap().window(0, 0, 1, 1).unwrap();
        assert_eq!(inner.rect(), Rect::new(1, 1, 2, 2));
        assert!(inner.get(0, 0));
        assert!(a.window(0, 0, 4, 1).is_err());
        assert!(a.window(2, 0, 1, 1).is_err());
    }

    #[test]
    fn window_mutation_stays_inside() {
        let mut a = BitMatrix::random(5, 140, 0.5, 9);
        let before = a.clone();
        {
            let mut w = a.window_mut(1, 3, 4, 130).unwrap();
            w.row_add(0, 2, 0);
            w.row_swap(1, 2);
            w.col_swap(0, 126, 0);
        }
        for i in 0..5 {
            for j in 0..140 {
                if !(1..4).contains(&i) || !(3..130).contains(&j) {
                    assert_eq!(a.get(i, j), before.get(i, j), "({i},{j}) changed");
                }
            }
        }
        assert!(a.padding_is_zero());
    }

    #[test]
    fn density_examples() {
        assert_eq!(m("10;01").density(64), 0.5);
        assert_eq!(BitMatrix::new(4, 4).density(64), 0.0);
        assert_eq!(BitMatrix::identity(64).density(64), 1.0 / 64.0);
        assert_eq!(BitMatrix::new(0, 0).density(64), 0.0);
    }

    #[test]
    fn randomize_endpoints_and_determinism() {
        assert!(BitMatrix::random(7, 70, 0.0, 1).is_zero());
        let ones = BitMatrix::random(7, 70, 1.0, 1);
        assert_eq!(ones.count_ones(), 7 * 70);
        assert!(ones.padding_is_zero());
        assert_eq!(BitMatrix::random(9, 100, 0.3, 5), BitMatrix::random(9, 100, 0.3, 5));
        assert_ne!(BitMatrix::random(9, 100, 0.3, 5), BitMatrix::random(9, 100, 0.3, 6));
    }

    #[test]
    fn splitmix_reference_stream() {
        // Published SplitMix64 outputs for seed 0.
        let mut rng = SplitMix64::seed_from_u64(0);
        assert_eq!(rng.next_u64(), 0xe220_a839_7b1d_cdaf);
        assert_eq!(rng.next_u64(), 0x6e78_9e6a_a1b9_65f4);
    }

    #[test]
    fn parse_and_display() {
        let a = m("0110;1001");
        assert_eq!(a.to_string(), "0110\n1001");
        assert!("01;1".parse::<BitMatrix>().is_err());
        assert!("0x".parse::<BitMatrix>().is_err());
    }

    #[test]
    fn copy_and_paste_rect() {
        let a = BitMatrix::random(6, 150, 0.5, 2);
        for rect in [Rect::new(1, 0, 5, 150), Rect::new(0, 3, 6, 140), Rect::new(2, 64, 3, 129)] {
            let c = a.copy_rect(rect);
            for i in 0..rect.nrows() {
                for j in 0..rect.ncols() {
                    assert_eq!(c.get(i, j), a.get(rect.row0 + i, rect.col0 + j));
                }
            }
            assert!(c.padding_is_zero());
            let mut b = BitMatrix::new(6, 150);
            b.paste(rect.row0, rect.col0, &c);
            assert_eq!(b.copy_rect(rect), c);
        }
    }

    #[test]
    fn transpose_involution() {
        let a = BitMatrix::random(13, 77, 0.4, 3);
        let t = a.transpose();
        assert_eq!(t.get(5, 2), a.get(2, 5));
        assert_eq!(t.transpose(), a);
    }
}

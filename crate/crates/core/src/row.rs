//! Word-slice kernels on a single packed row.
//!
//! Column `j` lives in word `j / 64` at bit `j % 64`. All ranges are
//! half-open column intervals `[c0, c1)` in the coordinates of the slice.

pub(crate) const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(ncols: usize) -> usize {
    ncols.div_ceil(WORD)
}

/// Mask with bits `lo..hi` set, `lo <= hi <= 64`.
#[inline]
pub(crate) fn bit_range_mask(lo: usize, hi: usize) -> u64 {
    debug_assert!(lo <= hi && hi <= WORD);
    if lo == hi {
        return 0;
    }
    (!0u64 >> (WORD - (hi - lo))) << lo
}

#[inline]
fn low_mask(len: usize) -> u64 {
    if len >= WORD {
        !0
    } else {
        (1u64 << len) - 1
    }
}

#[inline]
pub(crate) fn get_bit(row: &[u64], j: usize) -> bool {
    (row[j / WORD] >> (j % WORD)) & 1 == 1
}

#[inline]
pub(crate) fn set_bit(row: &mut [u64], j: usize, v: bool) {
    let m = 1u64 << (j % WORD);
    if v {
        row[j / WORD] |= m;
    } else {
        row[j / WORD] &= !m;
    }
}

/// Reads `len <= 64` bits starting at `col`; bit `b` of the result is column `col + b`.
#[inline]
pub(crate) fn get_bits(row: &[u64], col: usize, len: usize) -> u64 {
    if len == 0 {
        return 0;
    }
    let w = col / WORD;
    let b = col % WORD;
    let mut v = row[w] >> b;
    if b + len > WORD {
        v |= row[w + 1] << (WORD - b);
    }
    v & low_mask(len)
}

/// Writes the low `len <= 64` bits of `value` at `col`.
#[inline]
pub(crate) fn put_bits(row: &mut [u64], col: usize, len: usize, value: u64) {
    if len == 0 {
        return;
    }
    let value = value & low_mask(len);
    let w = col / WORD;
    let b = col % WORD;
    let first = len.min(WORD - b);
    let m = bit_range_mask(b, b + first);
    row[w] = (row[w] & !m) | ((value << b) & m);
    if first < len {
        let rest = len - first;
        let m = low_mask(rest);
        row[w + 1] = (row[w + 1] & !m) | ((value >> first) & m);
    }
}

/// Big-endian read: the bit at `col` has weight `2^(k-1)`.
#[inline]
pub(crate) fn read_bits_be(row: &[u64], col: usize, k: usize) -> usize {
    debug_assert!((1..=WORD).contains(&k));
    (get_bits(row, col, k).reverse_bits() >> (WORD - k)) as usize
}

#[inline]
pub(crate) fn xor_words(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// `dst ^= src` restricted to columns `[c0, c1)`.
#[inline]
pub(crate) fn xor_range(dst: &mut [u64], src: &[u64], c0: usize, c1: usize) {
    if c0 >= c1 {
        return;
    }
    let w0 = c0 / WORD;
    let w1 = (c1 - 1) / WORD;
    let m0 = !0u64 << (c0 % WORD);
    let m1 = !0u64 >> (WORD - 1 - (c1 - 1) % WORD);
    if w0 == w1 {
        dst[w0] ^= src[w0] & m0 & m1;
        return;
    }
    dst[w0] ^= src[w0] & m0;
    xor_words(&mut dst[w0 + 1..w1], &src[w0 + 1..w1]);
    dst[w1] ^= src[w1] & m1;
}

pub(crate) fn clear_range(row: &mut [u64], c0: usize, c1: usize) {
    if c0 >= c1 {
        return;
    }
    let w0 = c0 / WORD;
    let w1 = (c1 - 1) / WORD;
    let m0 = !0u64 << (c0 % WORD);
    let m1 = !0u64 >> (WORD - 1 - (c1 - 1) % WORD);
    if w0 == w1 {
        row[w0] &= !(m0 & m1);
        return;
    }
    row[w0] &= !m0;
    row[w0 + 1..w1].fill(0);
    row[w1] &= !m1;
}

pub(crate) fn swap_range(a: &mut [u64], b: &mut [u64], c0: usize, c1: usize) {
    if c0 >= c1 {
        return;
    }
    let w0 = c0 / WORD;
    let w1 = (c1 - 1) / WORD;
    let m0 = !0u64 << (c0 % WORD);
    let m1 = !0u64 >> (WORD - 1 - (c1 - 1) % WORD);
    let mut swap_masked = |w: usize, m: u64| {
        let t = (a[w] ^ b[w]) & m;
        a[w] ^= t;
        b[w] ^= t;
    };
    if w0 == w1 {
        swap_masked(w0, m0 & m1);
        return;
    }
    swap_masked(w0, m0);
    swap_masked(w1, m1);
    a[w0 + 1..w1].swap_with_slice(&mut b[w0 + 1..w1]);
}

pub(crate) fn count_range(row: &[u64], c0: usize, c1: usize) -> u64 {
    if c0 >= c1 {
        return 0;
    }
    let w0 = c0 / WORD;
    let w1 = (c1 - 1) / WORD;
    let m0 = !0u64 << (c0 % WORD);
    let m1 = !0u64 >> (WORD - 1 - (c1 - 1) % WORD);
    if w0 == w1 {
        return (row[w0] & m0 & m1).count_ones() as u64;
    }
    let inner: u64 = row[w0 + 1..w1].iter().map(|w| w.count_ones() as u64).sum();
    inner + (row[w0] & m0).count_ones() as u64 + (row[w1] & m1).count_ones() as u64
}

/// Precomputed word/mask layout for swapping two columns with three masked
/// XORs per row and no branch in the per-row step.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ColSwap {
    hi_word: usize,
    lo_word: usize,
    hi_mask: u64,
    lo_mask: u64,
    delta: u32,
}

impl ColSwap {
    /// Orders the operands so the first has the larger in-word bit position.
    pub(crate) fn new(a: usize, b: usize) -> Self {
        let (hi, lo) = if a % WORD >= b % WORD { (a, b) } else { (b, a) };
        ColSwap {
            hi_word: hi / WORD,
            lo_word: lo / WORD,
            hi_mask: 1u64 << (hi % WORD),
            lo_mask: 1u64 << (lo % WORD),
            delta: (hi % WORD - lo % WORD) as u32,
        }
    }

    #[inline]
    pub(crate) fn apply(&self, row: &mut [u64]) {
        let d = self.delta;
        row[self.hi_word] ^= (row[self.lo_word] & self.lo_mask) << d;
        row[self.lo_word] ^= (row[self.hi_word] & self.hi_mask) >> d;
        row[self.hi_word] ^= (row[self.lo_word] & self.lo_mask) << d;
    }
}

/// Moves `len` bits from `src` down to `dst < src`, then clears the part of
/// the source range not covered by the destination.
pub(crate) fn move_bits_down(row: &mut [u64], src: usize, dst: usize, len: usize) {
    debug_assert!(dst < src);
    let mut o = 0;
    while o < len {
        let l = (len - o).min(WORD);
        let v = get_bits(row, src + o, l);
        put_bits(row, dst + o, l, v);
        o += l;
    }
    clear_range(row, (dst + len).max(src), src + len);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masks() {
        assert_eq!(bit_range_mask(0, 64), !0);
        assert_eq!(bit_range_mask(3, 3), 0);
        assert_eq!(bit_range_mask(1, 3), 0b110);
    }

    #[test]
    fn get_put_across_words() {
        let mut row = vec![0u64; 3];
        put_bits(&mut row, 60, 10, 0b11_0110_1011);
        assert_eq!(get_bits(&row, 60, 10), 0b11_0110_1011);
        assert_eq!(get_bits(&row, 60, 4), 0b1011);
        assert_eq!(get_bits(&row, 64, 6), 0b11_0110);
        put_bits(&mut row, 0, 64, !0);
        assert_eq!(row[0], !0);
        assert_eq!(get_bits(&row, 61, 5), 0b10111);
    }

    #[test]
    fn big_endian_read() {
        let mut row = vec![0u64; 1];
        // columns 0,2 set: bits 101
        set_bit(&mut row, 0, true);
        set_bit(&mut row, 2, true);
        assert_eq!(read_bits_be(&row, 0, 3), 5);
        assert_eq!(read_bits_be(&row, 0, 1), 1);
        assert_eq!(read_bits_be(&row, 1, 2), 1);
    }

    #[test]
    fn col_swap_same_word_and_cross_word() {
        for (a, b) in [(3, 9), (9, 3), (3, 129), (129, 3), (70, 5), (5, 70), (63, 64)] {
            let mut row = vec![0u64; 3];
            set_bit(&mut row, a, true);
            ColSwap::new(a, b).apply(&mut row);
            assert!(!get_bit(&row, a));
            assert!(get_bit(&row, b));
            ColSwap::new(a, b).apply(&mut row);
            assert!(get_bit(&row, a) && !get_bit(&row, b));
        }
    }

    #[test]
    fn move_down_overlapping() {
        let mut row = vec![0u64; 4];
        for j in [100, 101, 150, 199] {
            set_bit(&mut row, j, true);
        }
        move_bits_down(&mut row, 100, 70, 100);
        let ones: Vec<usize> = (0..256).filter(|&j| get_bit(&row, j)).collect();
        assert_eq!(ones, vec![70, 71, 120, 169]);
    }
}

//! Multiplication and unit lower triangular solve over GF(2).
//!
//! [`mul_naive`] is the reference product. Everything else goes through the
//! Four Russians kernel in [`addmul_kernel`]: for each stripe of `k` columns
//! of `A` it tabulates all `2^k` combinations of the matching `k` rows of `B`
//! in Gray-code order, then adds one table row per row of `C`. Several
//! stripes are tabulated at once and `C` is processed in column chunks so the
//! tables stay cache resident.

use crate::bitmat::{BitMatrix, MatrixWindow, MatrixWindowMut, Rect};
use crate::error::{Error, Result};
use crate::instrument::{self, Scratch, ScratchGuard};
use crate::par;
use crate::row::{self, WORD};

/// Tables built per pass over `C`.
const TABLES_PER_PASS: usize = 8;
/// Bytes of table storage per pass; fixes the width of a `C` column chunk.
const TABLE_BUDGET: usize = 1 << 20;
/// Range of table sizes picked internally.
const INTERNAL_K_MIN: usize = 3;
const INTERNAL_K_MAX: usize = 6;
/// Largest system solved by plain forward substitution.
const TRSM_BASE: usize = 64;

/// Table size used when the caller passes `k = 0`:
/// `max(1, min(8, floor(log2(common)) - 2))`.
pub fn auto_k(common: usize) -> usize {
    if common < 2 {
        return 1;
    }
    let lg = (usize::BITS - 1 - common.leading_zeros()) as usize;
    lg.saturating_sub(2).clamp(1, 8)
}

/// Internal choice: table construction is weighed against the number of
/// destination rows that read it.
pub(crate) fn auto_k_rows(rows: usize, common: usize) -> usize {
    let lg = (usize::BITS - 1 - rows.max(1).leading_zeros()) as usize;
    auto_k(common).min(lg.saturating_sub(4).clamp(INTERNAL_K_MIN, INTERNAL_K_MAX))
}

/// Reference product: row `i` of `C` is the XOR of the rows of `B` selected
/// by the set bits of row `i` of `A`.
pub fn mul_naive(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
    check_product(a.nrows(), a.ncols(), b.nrows(), b.ncols())?;
    let mut c = BitMatrix::new(a.nrows(), b.ncols());
    for i in 0..a.nrows() {
        for l in 0..a.ncols() {
            if a.get(i, l) {
                row::xor_words(c.row_mut(i), b.row(l));
            }
        }
    }
    Ok(c)
}

/// Four Russians product with `k`-bit tables (`k = 0` picks [`auto_k`]).
pub fn mul_m4rm(a: &BitMatrix, b: &BitMatrix, k: usize) -> Result<BitMatrix> {
    check_product(a.nrows(), a.ncols(), b.nrows(), b.ncols())?;
    let k = if k == 0 { auto_k(a.ncols()) } else { k };
    let mut c = BitMatrix::new(a.nrows(), b.ncols());
    let rect = c.full_rect();
    addmul_kernel(
        &mut c,
        rect,
        Operand::External(a, a.full_rect()),
        Operand::External(b, b.full_rect()),
        k,
    );
    Ok(c)
}

/// `C += A * B` for windows of distinct matrices.
pub fn addmul(c: &mut MatrixWindowMut<'_>, a: &MatrixWindow<'_>, b: &MatrixWindow<'_>) -> Result<()> {
    addmul_k(c, a, b, 0)
}

pub fn addmul_k(c: &mut MatrixWindowMut<'_>, a: &MatrixWindow<'_>, b: &MatrixWindow<'_>, k: usize) -> Result<()> {
    check_product(a.nrows(), a.ncols(), b.nrows(), b.ncols())?;
    check_dest(c.nrows(), c.ncols(), a.nrows(), b.ncols())?;
    let k = if k == 0 { auto_k_rows(c.nrows(), a.ncols()) } else { k };
    let (mat, rect) = c.parts();
    addmul_kernel(
        mat,
        rect,
        Operand::External(a.parent(), a.rect()),
        Operand::External(b.parent(), b.rect()),
        k,
    );
    Ok(())
}

/// `C += A * B` where all three are rectangles of `mat`. `C` must not
/// overlap `A` or `B`.
pub fn addmul_within(mat: &mut BitMatrix, c: Rect, a: Rect, b: Rect) -> Result<()> {
    let full = mat.full_rect();
    for r in [c, a, b] {
        mat.window(r.row0, r.col0, r.row1, r.col1)?;
        debug_assert!(r.row1 <= full.row1);
    }
    check_product(a.nrows(), a.ncols(), b.nrows(), b.ncols())?;
    check_dest(c.nrows(), c.ncols(), a.nrows(), b.ncols())?;
    if c.overlaps(&a) || c.overlaps(&b) {
        return Err(Error::Aliasing);
    }
    let k = auto_k_rows(c.nrows(), a.ncols());
    addmul_local(mat, c, a, Operand::Local(b), k);
    Ok(())
}

/// Solves `L X = B` in place of `B`, reading `L` as unit lower triangular:
/// its diagonal and everything above it are ignored.
pub fn trsm_lower_left_unit(l: &MatrixWindow<'_>, b: &mut MatrixWindowMut<'_>) -> Result<()> {
    if l.nrows() != l.ncols() || l.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "L is {}x{}, B is {}x{}",
            l.nrows(),
            l.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let (mat, rect) = b.parts();
    trsm_kernel(mat, Operand::External(l.parent(), l.rect()), rect);
    Ok(())
}

fn check_product(am: usize, an: usize, bm: usize, bn: usize) -> Result<()> {
    if an != bm {
        return Err(Error::DimensionMismatch(format!("{am}x{an} times {bm}x{bn}")));
    }
    Ok(())
}

fn check_dest(cm: usize, cn: usize, m: usize, n: usize) -> Result<()> {
    if (cm, cn) != (m, n) {
        return Err(Error::DimensionMismatch(format!("{cm}x{cn} destination for a {m}x{n} product")));
    }
    Ok(())
}

/// Where an operand lives relative to the destination matrix.
#[derive(Clone, Copy)]
pub(crate) enum Operand<'a> {
    /// A rectangle of the destination matrix itself.
    Local(Rect),
    External(&'a BitMatrix, Rect),
}

impl<'a> Operand<'a> {
    fn rect(&self) -> Rect {
        match self {
            Operand::Local(r) | Operand::External(_, r) => *r,
        }
    }

    fn with_rect(self, rect: Rect) -> Operand<'a> {
        match self {
            Operand::Local(_) => Operand::Local(rect),
            Operand::External(m, _) => Operand::External(m, rect),
        }
    }
}

/// `addmul` with the left operand a rectangle of `mat`. Rows of `a` that are
/// not the rows of `c` are copied out first.
pub(crate) fn addmul_local(mat: &mut BitMatrix, c: Rect, a: Rect, b: Operand<'_>, k: usize) {
    if a.row0 == c.row0 {
        addmul_kernel(mat, c, Operand::Local(a), b, k);
    } else {
        let copy = mat.copy_rect(a);
        let _g = ScratchGuard::new(Scratch::Multiply, copy.words().len() * 8);
        addmul_kernel(mat, c, Operand::External(&copy, copy.full_rect()), b, k);
    }
}

/// Fills `out` with the words `w_lo..w_hi` (destination coordinates) of a
/// row whose columns `src_col0..src_col0 + width` are placed at
/// `dst_col0..dst_col0 + width`. Bits outside that range are zero.
fn load_aligned(src: &[u64], src_col0: usize, dst_col0: usize, width: usize, w_lo: usize, out: &mut [u64]) {
    let dst_col1 = dst_col0 + width;
    for (o, slot) in out.iter_mut().enumerate() {
        let w = w_lo + o;
        let lo = (w * WORD).max(dst_col0);
        let hi = ((w + 1) * WORD).min(dst_col1);
        *slot = if lo >= hi {
            0
        } else if src_col0 % WORD == dst_col0 % WORD {
            // same in-word alignment: the word lines up directly
            let sw = (lo - dst_col0 + src_col0) / WORD;
            src[sw] & row::bit_range_mask(lo % WORD, hi - w * WORD)
        } else {
            row::get_bits(src, lo - dst_col0 + src_col0, hi - lo) << (lo % WORD)
        };
    }
}

/// `C += A * B` with `A`'s rows either equal to `C`'s rows (`Local`) or
/// external. `B` may be local provided it does not overlap `C`.
pub(crate) fn addmul_kernel(mat: &mut BitMatrix, c: Rect, a: Operand<'_>, b: Operand<'_>, k: usize) {
    let inner = a.rect().ncols();
    debug_assert_eq!(inner, b.rect().nrows());
    debug_assert_eq!(a.rect().nrows(), c.nrows());
    if inner == 0 || c.is_empty() {
        return;
    }
    if let Operand::Local(ar) = a {
        assert_eq!(ar.row0, c.row0, "local left operand must share the destination rows");
        debug_assert!(!ar.overlaps(&c));
    }
    if let Operand::Local(br) = b {
        debug_assert!(!br.overlaps(&c));
    }
    let k = k.clamp(1, 8);
    let group = k * TABLES_PER_PASS;
    let cw0 = c.col0 / WORD;
    let cw1 = (c.col1 - 1) / WORD + 1;
    let tsize = 1usize << k;
    let chunk_words = (TABLE_BUDGET / (TABLES_PER_PASS * tsize * 8)).max(8);
    let chunk_cap = chunk_words.min(cw1 - cw0);
    let mut tables = vec![0u64; TABLES_PER_PASS * tsize * chunk_cap];
    let _g = ScratchGuard::new(Scratch::Multiply, tables.len() * 8);
    let mut brow = vec![0u64; chunk_cap];
    let stride = mat.stride();

    let mut adds = 0u64;
    let mut chunk = cw0;
    while chunk < cw1 {
        let chunk_end = (chunk + chunk_words).min(cw1);
        let cw = chunk_end - chunk;
        let mut g0 = 0;
        while g0 < inner {
            let glen = group.min(inner - g0);
            let ntab = glen.div_ceil(k);
            // tabulate
            for t in 0..ntab {
                let kt = k.min(glen - t * k);
                let base_row = g0 + t * k;
                let tbl = &mut tables[t * tsize * cw..(t + 1) * tsize * cw];
                tbl[..cw].fill(0);
                for i in 1..(1usize << kt) {
                    let gray = i ^ (i >> 1);
                    let prev = (i - 1) ^ ((i - 1) >> 1);
                    let bit = i.trailing_zeros() as usize;
                    let (src_mat, br) = match b {
                        Operand::Local(r) => (&*mat, r),
                        Operand::External(m, r) => (m, r),
                    };
                    load_aligned(
                        src_mat.row(br.row0 + base_row + bit),
                        br.col0,
                        c.col0,
                        c.ncols(),
                        chunk,
                        &mut brow[..cw],
                    );
                    let (dst, src) = if gray > prev {
                        let (lo, hi) = tbl.split_at_mut(gray * cw);
                        (&mut hi[..cw], &lo[prev * cw..(prev + 1) * cw])
                    } else {
                        let (lo, hi) = tbl.split_at_mut(prev * cw);
                        (&mut lo[gray * cw..(gray + 1) * cw], &hi[..cw])
                    };
                    for ((d, s), x) in dst.iter_mut().zip(src).zip(&brow[..cw]) {
                        *d = s ^ x;
                    }
                }
            }
            let tables_ref = &tables[..ntab * tsize * cw];
            let kmask = (1u64 << k) - 1;
            let read_lhs = |i: usize, r: &[u64]| -> u64 {
                match a {
                    Operand::Local(ar) => row::get_bits(r, ar.col0 + g0, glen),
                    Operand::External(m, ar) => row::get_bits(m.row(ar.row0 + i - c.row0), ar.col0 + g0, glen),
                }
            };
            adds += par::rows_sum(mat.words_mut(), stride, c.row0..c.row1, cw * ntab, |i, r| {
                let bits = read_lhs(i, r);
                if bits == 0 {
                    return 0;
                }
                let dst = &mut r[chunk..chunk_end];
                if ntab == TABLES_PER_PASS {
                    let rows: [&[u64]; TABLES_PER_PASS] = std::array::from_fn(|t| {
                        let idx = ((bits >> (t * k)) & kmask) as usize;
                        let off = (t * tsize + idx) * cw;
                        &tables_ref[off..off + cw]
                    });
                    xor8(dst, &rows);
                    ntab as u64
                } else {
                    let mut n = 0;
                    for t in 0..ntab {
                        let idx = ((bits >> (t * k)) & kmask) as usize;
                        if idx != 0 {
                            let off = (t * tsize + idx) * cw;
                            row::xor_words(dst, &tables_ref[off..off + cw]);
                            n += 1;
                        }
                    }
                    n
                }
            });
            g0 += glen;
        }
        chunk = chunk_end;
    }
    instrument::row_additions(adds);
}

#[inline]
fn xor8(dst: &mut [u64], rows: &[&[u64]; TABLES_PER_PASS]) {
    let n = dst.len();
    let [r0, r1, r2, r3, r4, r5, r6, r7] = rows.map(|r| &r[..n]);
    for w in 0..n {
        dst[w] ^= r0[w] ^ r1[w] ^ r2[w] ^ r3[w] ^ r4[w] ^ r5[w] ^ r6[w] ^ r7[w];
    }
}

/// Blocked forward substitution: `B <- L^{-1} B` with `L` unit lower
/// triangular. Splits `L` in halves, solving the top, updating the bottom
/// with one `addmul`, then solving the bottom.
pub(crate) fn trsm_kernel(mat: &mut BitMatrix, l: Operand<'_>, b: Rect) {
    let r = b.nrows();
    if r <= 1 || b.ncols() == 0 {
        return;
    }
    let lr = l.rect();
    if r <= TRSM_BASE {
        for i in 1..r {
            let bits = match l {
                Operand::Local(lr) => row::get_bits(mat.row(lr.row0 + i), lr.col0, i),
                Operand::External(m, lr) => row::get_bits(m.row(lr.row0 + i), lr.col0, i),
            };
            let mut bits = bits;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let (d, s) = mat.row_pair(b.row0 + i, b.row0 + j);
                row::xor_range(d, s, b.col0, b.col1);
            }
        }
        return;
    }
    let r1 = (r / 2).next_multiple_of(WORD).min(r - 1);
    trsm_kernel(mat, l.with_rect(lr.sub(0, 0, r1, r1)), b.sub(0, 0, r1, b.ncols()));
    let l21 = lr.sub(r1, 0, r, r1);
    let b_top = b.sub(0, 0, r1, b.ncols());
    let b_bot = b.sub(r1, 0, r, b.ncols());
    let k = auto_k_rows(r - r1, r1);
    match l {
        Operand::Local(_) => addmul_local(mat, b_bot, l21, Operand::Local(b_top), k),
        Operand::External(m, _) => addmul_kernel(mat, b_bot, Operand::External(m, l21), Operand::Local(b_top), k),
    }
    trsm_kernel(mat, l.with_rect(lr.sub(r1, r1, r, r)), b_bot);
}

/// Backward substitution: `B <- U^{-1} B` with `U` unit upper triangular,
/// entries on and below its diagonal ignored. `U` and `B` share rows.
pub(crate) fn trsm_upper_kernel(mat: &mut BitMatrix, u: Rect, b: Rect) {
    let r = b.nrows();
    debug_assert!(u.nrows() == r && u.ncols() == r && u.row0 == b.row0);
    if r <= 1 || b.ncols() == 0 {
        return;
    }
    if r <= TRSM_BASE {
        for i in (0..r - 1).rev() {
            let mut bits = row::get_bits(mat.row(u.row0 + i), u.col0 + i + 1, r - i - 1);
            while bits != 0 {
                let j = i + 1 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let (d, s) = mat.row_pair(b.row0 + i, b.row0 + j);
                row::xor_range(d, s, b.col0, b.col1);
            }
        }
        return;
    }
    let r1 = (r / 2).next_multiple_of(WORD).min(r - 1);
    let b_top = b.sub(0, 0, r1, b.ncols());
    let b_bot = b.sub(r1, 0, r, b.ncols());
    trsm_upper_kernel(mat, u.sub(r1, r1, r, r), b_bot);
    let k = auto_k_rows(r1, r - r1);
    addmul_kernel(mat, b_top, Operand::Local(u.sub(0, r1, r1, r)), Operand::Local(b_bot), k);
    trsm_upper_kernel(mat, u.sub(0, 0, r1, r1), b_top);
}

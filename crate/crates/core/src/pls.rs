//! Recursive block PLS, RREF recovery and the M4RI/PLS hybrid.
//!
//! [`pls_recursive`] splits the columns in two word-aligned halves,
//! decomposes the left half, updates the right half with one triangular solve
//! and one multiplication, and decomposes what is left of the right half.
//! Blocks that fit in `cutoff_bytes` are handed to MMPF.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use crate::bitmat::{BitMatrix, MatrixWindowMut, Rect, DEFAULT_DENSITY_SAMPLES};
use crate::error::{Error, Result};
use crate::gauss::{check_perm_lengths, finish_perms, gauss_pls, gauss_rref, PlsResult};
use crate::instrument::{self, Scratch, ScratchGuard};
use crate::m4ri::{m4ri_rref, m4ri_steps};
use crate::mmpf::{mmpf_kernel, mmpf_pls};
use crate::mul::{addmul_kernel, auto_k_rows, trsm_kernel, trsm_upper_kernel, Operand};
use crate::par;
use crate::perm::{apply_row_swaps, Permutation};
use crate::row::{self, ColSwap, WORD};

pub const DEFAULT_HYBRID_THRESHOLD: f64 = 0.15;
pub const ALT_HYBRID_THRESHOLD: f64 = 0.20;
/// Upper bound on the recursion cutoff.
pub const MAX_CUTOFF_BYTES: usize = 4 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Gauss,
    M4ri,
    Mmpf,
    Pls,
    Hybrid,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [Algorithm::Gauss, Algorithm::M4ri, Algorithm::Mmpf, Algorithm::Pls, Algorithm::Hybrid];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Gauss => "gauss",
            Algorithm::M4ri => "m4ri",
            Algorithm::Mmpf => "mmpf",
            Algorithm::Pls => "pls",
            Algorithm::Hybrid => "hybrid",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EliminationConfig {
    /// Table bits; 0 chooses from the matrix size.
    pub k: usize,
    /// Blocks of at most this many bytes are decomposed without recursing.
    pub cutoff_bytes: usize,
    /// Trailing density at which the hybrid switches from M4RI to PLS.
    pub hybrid_threshold: f64,
    pub algorithm: Algorithm,
}

impl Default for EliminationConfig {
    fn default() -> Self {
        EliminationConfig {
            k: 0,
            cutoff_bytes: default_cutoff_bytes(),
            hybrid_threshold: DEFAULT_HYBRID_THRESHOLD,
            algorithm: Algorithm::Pls,
        }
    }
}

impl EliminationConfig {
    pub fn with_algorithm(algorithm: Algorithm) -> Self {
        EliminationConfig { algorithm, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.cutoff_bytes == 0 {
            return Err(Error::InvalidConfig("cutoff_bytes must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.hybrid_threshold) {
            return Err(Error::InvalidConfig(format!(
                "hybrid threshold {} not in [0, 1]",
                self.hybrid_threshold
            )));
        }
        if self.k > 16 {
            return Err(Error::InvalidConfig(format!("k = {} exceeds 16", self.k)));
        }
        Ok(())
    }
}

/// Parses a byte count such as `2097152`, `2048K` or `2M`.
pub fn parse_size(s: &str) -> Option<usize> {
    let s = s.trim();
    let (digits, mult) = match s.chars().last()? {
        'k' | 'K' => (&s[..s.len() - 1], 1 << 10),
        'm' | 'M' => (&s[..s.len() - 1], 1 << 20),
        'g' | 'G' => (&s[..s.len() - 1], 1 << 30),
        _ => (s, 1),
    };
    digits.trim().parse::<usize>().ok()?.checked_mul(mult)
}

/// L2 size from `F2_L2_BYTES`, else from sysfs.
pub fn l2_cache_bytes() -> Option<usize> {
    if let Ok(v) = std::env::var("F2_L2_BYTES") {
        if let Some(n) = parse_size(&v).filter(|&n| n > 0) {
            return Some(n);
        }
    }
    let s = std::fs::read_to_string("/sys/devices/system/cpu/cpu0/cache/index2/size").ok()?;
    parse_size(&s).filter(|&n| n > 0)
}

/// `min(4 MiB, L2)`, or 4 MiB when the L2 size is unknown.
pub fn default_cutoff_bytes() -> usize {
    l2_cache_bytes().map_or(MAX_CUTOFF_BYTES, |l2| l2.min(MAX_CUTOFF_BYTES))
}

/// In-place recursive PLS decomposition with the same output layout as
/// [`gauss_pls`].
pub fn pls_recursive(a: &mut BitMatrix, p: &mut Permutation, q: &mut Permutation, cfg: &EliminationConfig) -> Result<usize> {
    pls_recursive_window(&mut a.as_window_mut(), p, q, cfg)
}

pub fn pls_recursive_window(
    a: &mut MatrixWindowMut<'_>,
    p: &mut Permutation,
    q: &mut Permutation,
    cfg: &EliminationConfig,
) -> Result<usize> {
    cfg.validate()?;
    check_perm_lengths(a.nrows(), a.ncols(), p, q)?;
    let (mat, rect) = a.parts();
    Ok(pls_rec(mat, rect, p.as_mut_slice(), q.as_mut_slice(), cfg))
}

/// Column split: about half, on a word boundary of the parent matrix.
fn split_point(rect: Rect) -> usize {
    let n = rect.ncols();
    let mid = rect.col0 + n / 2;
    let aligned = ((mid + WORD / 2) / WORD * WORD).max(rect.col0 + WORD - rect.col0 % WORD);
    (aligned - rect.col0).clamp(1, n - 1)
}

fn pls_rec(mat: &mut BitMatrix, rect: Rect, p: &mut [usize], q: &mut [usize], cfg: &EliminationConfig) -> usize {
    let (m, n) = (rect.nrows(), rect.ncols());
    if m == 0 || n == 0 {
        finish_perms(p, q, 0);
        return 0;
    }
    let words = row::words_for(rect.col1) - rect.col0 / WORD;
    if n <= WORD || m.saturating_mul(words * 8) <= cfg.cutoff_bytes {
        return mmpf_kernel(mat, rect, p, q, cfg.k);
    }
    let n0 = split_point(rect);
    instrument::column_cut(n, rect.col0 + n0);

    let r0 = pls_rec(mat, rect.sub(0, 0, m, n0), p, &mut q[..n0], cfg);
    if r0 > 0 {
        apply_row_swaps(&mut mat.window_mut_unchecked(rect.sub(0, n0, m, n)), &p[..r0], false);
        trsm_kernel(mat, Operand::Local(rect.sub(0, 0, r0, r0)), rect.sub(0, n0, r0, n));
        if r0 < m {
            let k = auto_k_rows(m - r0, r0);
            addmul_kernel(
                mat,
                rect.sub(r0, n0, m, n),
                Operand::Local(rect.sub(r0, 0, m, r0)),
                Operand::Local(rect.sub(0, n0, r0, n)),
                k,
            );
        }
    }
    let r1 = if r0 < m { pls_rec(mat, rect.sub(r0, n0, m, n), &mut p[r0..], &mut q[n0..], cfg) } else { 0 };
    if r1 > 0 {
        if r0 > 0 {
            apply_row_swaps(&mut mat.window_mut_unchecked(rect.sub(r0, 0, m, r0)), &p[r0..r0 + r1], false);
        }
        for i in 0..r1 {
            p[r0 + i] += r0;
            q[n0 + i] += n0;
            q[r0 + i] = q[n0 + i];
        }
        if r0 < n0 {
            // move the second block's L (and pivots) next to the first block's
            let (src, dst) = (rect.col0 + n0, rect.col0 + r0);
            let stride = mat.stride();
            let first = rect.row0 + r0;
            par::rows_for_each(mat.words_mut(), stride, first..rect.row1, r1 / WORD + 1, |x, r| {
                let t = r1.min(x - first + 1);
                row::move_bits_down(r, src, dst, t);
            });
        }
    }
    finish_perms(p, q, r0 + r1);
    r0 + r1
}

/// Turns an in-place PLS result into the reduced row echelon form of the
/// original matrix.
pub fn rref_from_pls(a: &mut BitMatrix, rank: usize, p: &Permutation, q: &Permutation) -> Result<()> {
    rref_from_pls_window(&mut a.as_window_mut(), rank, p, q)
}

pub fn rref_from_pls_window(a: &mut MatrixWindowMut<'_>, rank: usize, p: &Permutation, q: &Permutation) -> Result<()> {
    check_perm_lengths(a.nrows(), a.ncols(), p, q)?;
    if rank > a.nrows().min(a.ncols()) {
        return Err(Error::InconsistentDecomposition(format!(
            "rank {rank} exceeds the dimensions {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let piv = &q.as_slice()[..rank];
    if let Some(i) = (1..rank).find(|&i| piv[i] <= piv[i - 1]) {
        return Err(Error::InconsistentDecomposition(format!("pivot columns not increasing at {i}")));
    }
    let (mat, rect) = a.parts();
    rref_kernel(mat, rect, rank, q.as_slice())
}

/// Works in fully compressed coordinates, where the first `rank` rows read
/// `[U | B]` with `U` unit upper triangular: the reduced form there is
/// `[I | U^{-1} B]`, and undoing the column swaps returns it to the original
/// columns.
fn rref_kernel(mat: &mut BitMatrix, rect: Rect, rank: usize, q: &[usize]) -> Result<()> {
    let swaps: Vec<(usize, ColSwap)> = (0..rank)
        .filter(|&j| q[j] != j)
        .map(|j| (j, ColSwap::new(rect.col0 + j, rect.col0 + q[j])))
        .collect();
    let stride = mat.stride();
    let first = rect.row0;
    // clear L and rows past the rank; finish the column swaps on U rows
    let missing = par::rows_sum(mat.words_mut(), stride, rect.row0..rect.row1, swaps.len() / 4 + 1, |i, r| {
        let local = i - first;
        if local >= rank {
            row::clear_range(r, rect.col0, rect.col1);
            return 0;
        }
        row::clear_range(r, rect.col0, rect.col0 + local);
        let from = swaps.partition_point(|(j, _)| *j <= local);
        for (_, op) in &swaps[from..] {
            op.apply(r);
        }
        u64::from(!row::get_bit(r, rect.col0 + local))
    });
    if missing > 0 {
        return Err(Error::InconsistentDecomposition(format!("{missing} pivot rows without a unit diagonal")));
    }
    if rank == 0 {
        return Ok(());
    }
    trsm_upper_kernel(mat, rect.sub(0, 0, rank, rank), rect.sub(0, rank, rank, rect.ncols()));
    par::rows_for_each(mat.words_mut(), stride, rect.row0..rect.row0 + rank, swaps.len() / 4 + 1, |i, r| {
        let local = i - first;
        row::clear_range(r, rect.col0, rect.col0 + rank);
        row::set_bit(r, rect.col0 + local, true);
        for (_, op) in swaps.iter().rev() {
            op.apply(r);
        }
    });
    Ok(())
}

/// Copies the given columns of `rows` into a fresh `rows.len() x cols.len()`
/// matrix, reading runs of consecutive columns a word at a time.
pub(crate) fn gather_columns(mat: &BitMatrix, rows: Range<usize>, cols: &[usize]) -> BitMatrix {
    let runs = column_runs(cols);
    let mut out = BitMatrix::new(rows.len(), cols.len());
    let stride = out.stride();
    let first = rows.start;
    par::rows_for_each(out.words_mut(), stride, 0..rows.len(), runs.len(), |i, dst| {
        let src = mat.row(first + i);
        for &(at, c, len) in &runs {
            row::put_bits(dst, at, len, row::get_bits(src, c, len));
        }
    });
    out
}

/// `(position, column, length)` runs of consecutive columns, at most a word long.
fn column_runs(cols: &[usize]) -> Vec<(usize, usize, usize)> {
    let mut runs = Vec::new();
    let mut j = 0;
    while j < cols.len() {
        let mut len = 1;
        while j + len < cols.len() && len < WORD && cols[j + len] == cols[j] + len {
            len += 1;
        }
        runs.push((j, cols[j], len));
        j += len;
    }
    runs
}

/// Clears the pivot columns of `rows` and XORs `y` into the free columns.
fn scatter_columns(mat: &mut BitMatrix, rows: Range<usize>, pivots: &[usize], free: &[usize], y: Option<&BitMatrix>) {
    let (piv_runs, free_runs) = (column_runs(pivots), column_runs(free));
    let stride = mat.stride();
    let first = rows.start;
    par::rows_for_each(mat.words_mut(), stride, rows, piv_runs.len() + free_runs.len(), |i, dst| {
        for &(_, c, len) in &piv_runs {
            row::put_bits(dst, c, len, 0);
        }
        if let Some(y) = y {
            let src = y.row(i - first);
            for &(at, c, len) in &free_runs {
                row::put_bits(dst, c, len, row::get_bits(dst, c, len) ^ row::get_bits(src, at, len));
            }
        }
    });
}

/// What [`hybrid_rref_report`] did.
#[derive(Clone, Debug, PartialEq)]
pub struct HybridReport {
    pub rank: usize,
    /// `(row, col)` of the M4RI state when the trailing block was handed to
    /// PLS, if that happened.
    pub switched_at: Option<(usize, usize)>,
    /// Estimated trailing density that triggered the switch.
    pub switch_density: Option<f64>,
}

/// Reduced row echelon form by M4RI until the untouched trailing block
/// becomes dense, then by PLS. Returns the rank.
pub fn hybrid_rref(a: &mut BitMatrix, cfg: &EliminationConfig) -> Result<usize> {
    hybrid_rref_report(a, cfg).map(|r| r.rank)
}

pub fn hybrid_rref_report(a: &mut BitMatrix, cfg: &EliminationConfig) -> Result<HybridReport> {
    cfg.validate()?;
    let (m, n) = (a.nrows(), a.ncols());
    let th = cfg.hybrid_threshold;
    let mut seen = None;
    let st = m4ri_steps(a, cfg.k, true, |a, r, c| {
        if th >= 1.0 {
            return false;
        }
        let d = a.window(r, c, m, n).map_or(0.0, |w| w.density(DEFAULT_DENSITY_SAMPLES));
        if d >= th {
            seen = Some(d);
            return true;
        }
        false
    });
    if !st.stopped {
        return Ok(HybridReport { rank: st.rank, switched_at: None, switch_density: None });
    }
    let (r, c) = (st.rank, st.col);
    let rect = Rect::new(r, c, m, n);
    let mut p = vec![0usize; m - r];
    let mut q = vec![0usize; n - c];
    let _g = ScratchGuard::new(Scratch::Index, (p.len() + q.len()) * std::mem::size_of::<usize>());
    let r2 = pls_rec(a, rect, &mut p, &mut q, cfg);
    rref_kernel(a, rect, r2, &q)?;
    if r > 0 && r2 > 0 {
        // pivot columns of the trailing rows form an identity
        let pivots: Vec<usize> = q[..r2].iter().map(|&j| c + j).collect();
        let mut is_pivot = vec![false; n - c];
        for &j in &q[..r2] {
            is_pivot[j] = true;
        }
        let free: Vec<usize> = (c..n).filter(|&j| !is_pivot[j - c]).collect();
        let x = gather_columns(a, 0..r, &pivots);
        let y = (!free.is_empty()).then(|| {
            let b = gather_columns(a, r..r + r2, &free);
            let mut y = BitMatrix::new(r, free.len());
            let _g = ScratchGuard::new(Scratch::Multiply, (x.words().len() + b.words().len() + y.words().len()) * 8);
            let rect = y.full_rect();
            addmul_kernel(&mut y, rect, Operand::External(&x, x.full_rect()), Operand::External(&b, b.full_rect()), auto_k_rows(r, r2));
            y
        });
        scatter_columns(a, 0..r, &pivots, &free, y.as_ref());
    }
    Ok(HybridReport { rank: r + r2, switched_at: Some((r, c)), switch_density: seen })
}

/// Reduced row echelon form with the algorithm selected in `cfg`.
pub fn rref(a: &mut BitMatrix, cfg: &EliminationConfig) -> Result<usize> {
    cfg.validate()?;
    match cfg.algorithm {
        Algorithm::Gauss => Ok(gauss_rref(a)),
        Algorithm::M4ri => Ok(m4ri_rref(a, cfg.k)),
        Algorithm::Hybrid => hybrid_rref(a, cfg),
        Algorithm::Mmpf | Algorithm::Pls => {
            let res = decompose_in_place(a, cfg)?;
            rref_from_pls(a, res.0, &res.1, &res.2)?;
            Ok(res.0)
        }
    }
}

fn decompose_in_place(a: &mut BitMatrix, cfg: &EliminationConfig) -> Result<(usize, Permutation, Permutation)> {
    let mut p = Permutation::identity(a.nrows());
    let mut q = Permutation::identity(a.ncols());
    let _g = ScratchGuard::new(Scratch::Index, (p.len() + q.len()) * std::mem::size_of::<usize>());
    let rank = match cfg.algorithm {
        Algorithm::Gauss => gauss_pls(a, &mut p, &mut q)?,
        Algorithm::Mmpf => mmpf_pls(a, &mut p, &mut q, cfg.k)?,
        Algorithm::Pls => pls_recursive(a, &mut p, &mut q, cfg)?,
        other => return Err(Error::InvalidConfig(format!("{other} does not produce a PLS decomposition"))),
    };
    Ok((rank, p, q))
}

/// PLS decomposition of a copy of `a` by `gauss`, `mmpf` or `pls`.
pub fn pls_decompose(a: &BitMatrix, cfg: &EliminationConfig) -> Result<PlsResult> {
    cfg.validate()?;
    let mut matrix = a.clone();
    let (rank, p, q) = decompose_in_place(&mut matrix, cfg)?;
    Ok(PlsResult { matrix, rank, p, q })
}

/// Rank of `a`, computed on a working copy.
pub fn rank(a: &BitMatrix, cfg: &EliminationConfig) -> Result<usize> {
    cfg.validate()?;
    let mut w = a.clone();
    match cfg.algorithm {
        Algorithm::Mmpf | Algorithm::Pls => decompose_in_place(&mut w, cfg).map(|r| r.0),
        _ => rref(&mut w, cfg),
    }
}

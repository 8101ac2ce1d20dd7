//! Row-parallel loops.
//!
//! Every bulk update in this crate is a loop over independent rows of one
//! matrix. With the `parallel` feature those loops run on the rayon pool once
//! the touched region is large enough; otherwise, or after
//! [`set_parallel`]`(false)`, they run sequentially on the calling thread.
//! Results are identical either way.

use std::ops::Range;
use std::sync::atomic::{AtomicBool, Ordering};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

static ENABLED: AtomicBool = AtomicBool::new(true);

/// Minimum number of words a loop must touch before it is split across threads.
const PAR_MIN_WORDS: usize = 1 << 14;
#[cfg(feature = "parallel")]
const PAR_MIN_ROWS: usize = 32;

/// Enables or disables the rayon path at runtime. No effect without the
/// `parallel` feature.
pub fn set_parallel(enabled: bool) {
    ENABLED.store(enabled, Ordering::Relaxed);
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel") && ENABLED.load(Ordering::Relaxed)
}

/// Runs `f(row_index, row_words)` for every row in `rows` and returns the sum
/// of the results.
pub(crate) fn rows_sum<F>(words: &mut [u64], stride: usize, rows: Range<usize>, work_words: usize, f: F) -> u64
where
    F: Fn(usize, &mut [u64]) -> u64 + Sync + Send,
{
    if rows.is_empty() || stride == 0 {
        return 0;
    }
    let start = rows.start;
    let slice = &mut words[rows.start * stride..rows.end * stride];
    let heavy = parallel_enabled() && rows.len().saturating_mul(work_words.max(1)) >= PAR_MIN_WORDS;
    #[cfg(feature = "parallel")]
    if heavy {
        return slice
            .par_chunks_mut(stride)
            .with_min_len(PAR_MIN_ROWS)
            .enumerate()
            .map(|(k, row)| f(start + k, row))
            .sum();
    }
    let _ = heavy;
    slice
        .chunks_mut(stride)
        .enumerate()
        .map(|(k, row)| f(start + k, row))
        .sum()
}

pub(crate) fn rows_for_each<F>(words: &mut [u64], stride: usize, rows: Range<usize>, work_words: usize, f: F)
where
    F: Fn(usize, &mut [u64]) + Sync + Send,
{
    rows_sum(words, stride, rows, work_words, |i, row| {
        f(i, row);
        0
    });
}

/// Maps `f` over `0..n` in parallel when enabled, collecting in order.
pub fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() {
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

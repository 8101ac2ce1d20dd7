//! Per-thread operation counters.
//!
//! Counters are only ever bumped from the thread that called into the
//! library, so a test can `reset`, run one algorithm and read a `snapshot`
//! without interference from other test threads.

use std::cell::RefCell;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    /// Row additions performed by elimination, table application and
    /// multiplication.
    pub row_additions: u64,
    /// Row additions spent building Gray-code tables.
    pub table_row_additions: u64,
    /// Number of tables built.
    pub tables_built: u64,
    /// `(window_cols, cut_column)` for every column split of the recursive
    /// PLS, the cut given in parent columns.
    pub column_cuts: Vec<(usize, usize)>,
    /// Peak bytes of index scratch (pivot bookkeeping).
    pub index_bytes_peak: usize,
    /// Peak bytes of elimination-table scratch.
    pub table_bytes_peak: usize,
    /// Peak bytes of multiplication scratch (tables and gathered operands).
    pub multiply_bytes_peak: usize,
    index_bytes_live: usize,
    table_bytes_live: usize,
    multiply_bytes_live: usize,
}

thread_local! {
    static COUNTERS: RefCell<Counters> = RefCell::new(Counters::default());
}

pub fn reset() {
    COUNTERS.with(|c| *c.borrow_mut() = Counters::default());
}

pub fn snapshot() -> Counters {
    COUNTERS.with(|c| c.borrow().clone())
}

pub(crate) fn row_additions(n: u64) {
    COUNTERS.with(|c| c.borrow_mut().row_additions += n);
}

pub(crate) fn table_built(row_adds: u64) {
    COUNTERS.with(|c| {
        let mut c = c.borrow_mut();
        c.table_row_additions += row_adds;
        c.tables_built += 1;
    });
}

pub(crate) fn column_cut(cols: usize, cut: usize) {
    COUNTERS.with(|c| c.borrow_mut().column_cuts.push((cols, cut)));
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Scratch {
    Index,
    Table,
    Multiply,
}

/// Accounts `bytes` of scratch memory for as long as it is alive.
#[derive(Debug)]
pub(crate) struct ScratchGuard {
    kind: Scratch,
    bytes: usize,
}

impl ScratchGuard {
    pub(crate) fn new(kind: Scratch, bytes: usize) -> Self {
        COUNTERS.with(|c| {
            let c = &mut *c.borrow_mut();
            let (live, peak) = match kind {
                Scratch::Index => (&mut c.index_bytes_live, &mut c.index_bytes_peak),
                Scratch::Table => (&mut c.table_bytes_live, &mut c.table_bytes_peak),
                Scratch::Multiply => (&mut c.multiply_bytes_live, &mut c.multiply_bytes_peak),
            };
            *live += bytes;
            *peak = (*peak).max(*live);
        });
        ScratchGuard { kind, bytes }
    }
}

impl Clone for ScratchGuard {
    fn clone(&self) -> Self {
        ScratchGuard::new(self.kind, self.bytes)
    }
}

impl Drop for ScratchGuard {
    fn drop(&mut self) {
        COUNTERS.with(|c| {
            let mut c = c.borrow_mut();
            let live = match self.kind {
                Scratch::Index => &mut c.index_bytes_live,
                Scratch::Table => &mut c.table_bytes_live,
                Scratch::Multiply => &mut c.multiply_bytes_live,
            };
            *live -= self.bytes;
        });
    }
}

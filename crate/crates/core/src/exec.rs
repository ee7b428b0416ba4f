//! Enumeration limits and the parallel/sequential execution switch.
//!
//! Every data-parallel loop in the crate goes through the helpers here. With the
//! `parallel` feature they run on rayon; without it, or when
//! [`Execution::Sequential`] is requested, they run as plain iterators. Both paths
//! return identical results: order-sensitive helpers preserve index order.

use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

pub const DEFAULT_SUPPORT_CAP: u64 = 1_000_000;
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Maximum support atoms (before merging) a mechanism may enumerate.
    pub support_cap: u64,
    /// Maximum allocations or report profiles an oracle may enumerate.
    pub enumeration_cap: u64,
    pub execution: Execution,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            support_cap: DEFAULT_SUPPORT_CAP,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            execution: Execution::default(),
        }
    }
}

impl Limits {
    pub fn sequential() -> Self {
        Self {
            execution: Execution::Sequential,
            ..Self::default()
        }
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    #[cfg(feature = "parallel")]
    fn parallel(&self) -> bool {
        self.execution == Execution::Parallel
    }
}

/// `f(0), .., f(len - 1)` in index order.
pub fn map_range<R, F>(limits: &Limits, len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if limits.parallel() {
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = limits;
    (0..len).map(f).collect()
}

/// The `Some` result with the smallest index, if any.
pub fn find_first<R, F>(limits: &Limits, len: usize, f: F) -> Option<R>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if limits.parallel() {
        return (0..len).into_par_iter().find_map_first(f);
    }
    let _ = limits;
    (0..len).find_map(f)
}

/// Applies `f` to contiguous chunks of `0..len` and returns the per-chunk results
/// in chunk order.
pub fn map_chunks<R, F>(limits: &Limits, len: usize, chunk: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(std::ops::Range<usize>) -> R + Sync + Send,
{
    let chunk = chunk.max(1);
    let n_chunks = len.div_ceil(chunk);
    map_range(limits, n_chunks, |c| {
        let start = c * chunk;
        f(start..(start + chunk).min(len))
    })
}

/// True iff `pred` holds for every index.
pub fn all<F>(limits: &Limits, len: usize, pred: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    find_first(limits, len, |i| if pred(i) { None } else { Some(()) }).is_none()
}

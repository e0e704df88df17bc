//! Worker-count control for query-parallel classification.
//!
//! All parallel paths are order-preserving maps over immutable data, so the
//! output is byte-identical for any worker count. Without the `parallel`
//! feature every mode degrades to the sequential loop.

use serde::{Deserialize, Serialize};

/// How to distribute independent per-query work.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Parallelism {
    /// 1 = sequential, 0 = one worker per core, n = fixed pool of n threads.
    workers: usize,
}

impl Parallelism {
    /// Single-threaded execution (the default; used for timing comparability).
    pub fn sequential() -> Self {
        Self { workers: 1 }
    }

    /// One worker per available core.
    pub fn auto() -> Self {
        Self { workers: 0 }
    }

    /// A fixed worker count; `workers(1)` is sequential, `workers(0)` is auto.
    pub fn workers(workers: usize) -> Self {
        Self { workers }
    }

    pub fn worker_count(&self) -> usize {
        self.workers
    }

    pub fn is_sequential(&self) -> bool {
        self.workers == 1 || !cfg!(feature = "parallel")
    }
}

impl Default for Parallelism {
    fn default() -> Self {
        Self::sequential()
    }
}

/// Order-preserving map over `items`, sequential or on a rayon pool.
#[cfg(feature = "parallel")]
pub(crate) fn map_slice<T, R, F>(par: Parallelism, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;

    match par.worker_count() {
        1 => items.iter().map(f).collect(),
        0 => items.par_iter().map(f).collect(),
        n => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("failed to build worker pool");
            pool.install(|| items.par_iter().map(f).collect())
        }
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_slice<T, R, F>(_par: Parallelism, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

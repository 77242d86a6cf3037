//! Data-parallel helpers with a sequential fallback.
//!
//! Work is split into a fixed list of items whose results are combined in
//! item order, so outputs never depend on scheduling or thread count.

/// How a data-parallel loop is executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Parallel on the given number of worker threads. Falls back to
    /// sequential execution when built without the `parallel` feature.
    Parallel { threads: usize },
}

impl Execution {
    pub fn with_threads(threads: usize) -> Self {
        if threads <= 1 {
            Execution::Sequential
        } else {
            Execution::Parallel { threads }
        }
    }

    pub fn threads(&self) -> usize {
        match self {
            Execution::Sequential => 1,
            Execution::Parallel { threads } => *threads,
        }
    }
}

/// Maps `f` over `items` and returns the results in input order.
pub fn map_ordered<T, R, F>(items: &[T], execution: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match execution {
        Execution::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel { threads } => {
            use rayon::prelude::*;
            match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
                Err(_) => items.iter().map(f).collect(),
            }
        }
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel { .. } => items.iter().map(f).collect(),
    }
}

/// Splits `0..len` into contiguous ranges of at most `chunk` elements.
pub fn chunk_ranges(len: usize, chunk: usize) -> Vec<std::ops::Range<usize>> {
    let chunk = chunk.max(1);
    (0..len)
        .step_by(chunk)
        .map(|start| start..(start + chunk).min(len))
        .collect()
}

//! Execution strategy for the data-parallel loops.
//!
//! Work is always split into fixed-size chunks whose partial results are
//! combined in chunk order, so the sequential and parallel strategies give
//! bit-identical results for any worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Items per work chunk.
pub const CHUNK: usize = 64;

/// How the heavy loops are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Strategy {
    /// Apply `f` to each chunk `[lo, hi)` of `0..len` and collect the
    /// results in chunk order.
    pub fn map_chunks<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize, usize) -> T + Sync + Send,
    {
        let n_chunks = len.div_ceil(CHUNK);
        let bounds = move |c: usize| (c * CHUNK, ((c + 1) * CHUNK).min(len));
        match self {
            Strategy::Sequential => (0..n_chunks)
                .map(|c| {
                    let (lo, hi) = bounds(c);
                    f(lo, hi)
                })
                .collect(),
            #[cfg(feature = "parallel")]
            Strategy::Parallel => (0..n_chunks)
                .into_par_iter()
                .map(|c| {
                    let (lo, hi) = bounds(c);
                    f(lo, hi)
                })
                .collect(),
        }
    }

    /// Apply `f` to every element of `items` in place.
    pub fn for_each_mut<T, F>(self, items: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize, &mut T) + Sync + Send,
    {
        match self {
            Strategy::Sequential => items.iter_mut().enumerate().for_each(|(i, x)| f(i, x)),
            #[cfg(feature = "parallel")]
            Strategy::Parallel => items
                .par_iter_mut()
                .with_min_len(CHUNK)
                .enumerate()
                .for_each(|(i, x)| f(i, x)),
        }
    }
}

/// Run `f` on a pool with exactly `workers` threads. Without the
/// `parallel` feature this simply calls `f`.
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        f()
    }
}

/// Threads the default strategy would use.
pub fn available_workers() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

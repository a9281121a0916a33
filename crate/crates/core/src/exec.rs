//! Data-parallel execution with a sequential fallback.
//!
//! With the `parallel` feature, [`Execution::Parallel`] maps over items on a
//! rayon pool; without it every mode runs sequentially. Results always come
//! back in input order, so outputs do not depend on the thread count.

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "FUJITA_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// `threads = None` uses rayon's global pool.
    #[default]
    Parallel,
    ParallelWith { threads: usize },
}

impl Execution {
    /// Parallel, capped by `FUJITA_THREADS` when it holds a positive integer.
    pub fn from_env() -> Self {
        match std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse::<usize>().ok()) {
            Some(0) | None => Execution::Parallel,
            Some(1) => Execution::Sequential,
            Some(threads) => Execution::ParallelWith { threads },
        }
    }

    pub fn threads(threads: usize) -> Self {
        match threads {
            0 => Execution::Parallel,
            1 => Execution::Sequential,
            threads => Execution::ParallelWith { threads },
        }
    }

    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match *self {
            Execution::Sequential => items.iter().map(f).collect(),
            Execution::Parallel => par_map(items, f),
            Execution::ParallelWith { threads } => par_map_with(items, f, threads),
        }
    }

    /// Deterministic minimum of `f` over `items` (NaN propagates).
    pub fn min_by_key<T, F>(&self, items: &[T], f: F) -> f64
    where
        T: Sync,
        F: Fn(&T) -> f64 + Sync + Send,
    {
        self.map(items, f).into_iter().fold(f64::INFINITY, |a, b| {
            if a.is_nan() || b.is_nan() {
                f64::NAN
            } else {
                a.min(b)
            }
        })
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
fn par_map_with<T, R, F>(items: &[T], f: F, threads: usize) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| par_map(items, f)),
        Err(_) => par_map(items, f),
    }
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map_with<T, R, F>(items: &[T], f: F, _threads: usize) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

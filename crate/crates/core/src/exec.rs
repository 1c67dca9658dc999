//! Data-parallel execution over chunked index ranges.
//!
//! Every harness splits its work into a fixed number of chunks that do not
//! depend on the worker count, maps each chunk independently and merges the
//! partial results with an associative, commutative reduction. The result is
//! therefore identical under [`Exec::Sequential`] and [`Exec::Parallel`].

/// How chunked work is scheduled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Runs on the rayon pool. Without the `parallel` feature this falls back
    /// to sequential execution.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Maps `chunk` over `0..chunks` and folds the results with `merge`.
    pub fn map_reduce<T, M, I, R>(self, chunks: u64, map: M, identity: I, merge: R) -> T
    where
        T: Send,
        M: Fn(u64) -> T + Sync + Send,
        I: Fn() -> T + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..chunks)
                    .into_par_iter()
                    .map(map)
                    .reduce(identity, merge)
            }
            _ => (0..chunks).map(map).fold(identity(), merge),
        }
    }
}

/// Runs `f` on a rayon pool capped at `jobs` workers (`None` keeps the global
/// pool).
#[cfg(feature = "parallel")]
pub fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_jobs<R: Send>(_jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    f()
}

//! Thread-pool executor for the core's job fan-out.

use rayon::prelude::*;
use rcmlab_core::Executor;

pub const THREADS_VAR: &str = "RCMLAB_THREADS";

/// Runs jobs on a rayon pool; results come back in job order, so aggregation
/// does not depend on scheduling.
pub struct Parallel {
    pool: rayon::ThreadPool,
}

impl Parallel {
    /// `threads == 0` lets rayon pick.
    pub fn new(threads: usize) -> Parallel {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
        Parallel { pool }
    }

    /// Worker count from `RCMLAB_THREADS` (unset, empty or 0 = automatic).
    pub fn from_env() -> Parallel {
        let threads = std::env::var(THREADS_VAR).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(0);
        Parallel::new(threads)
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for Parallel {
    fn map<T: Send, F: Fn(usize) -> T + Sync + Send>(&self, n: usize, f: F) -> Vec<T> {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }
}

//! Solver restarts on a rayon pool.

use kq_core::solver::RestartExecutor;
use rayon::prelude::*;

/// Runs restarts in parallel but always returns the lowest-index success,
/// so results match [`kq_core::solver::Sequential`].
pub struct RayonExecutor {
    pool: rayon::ThreadPool,
}

impl RayonExecutor {
    /// `threads == 0` lets rayon pick.
    pub fn new(threads: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()?;
        Ok(RayonExecutor { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl RestartExecutor for RayonExecutor {
    fn find_map_first<T, F>(&self, n: usize, f: F) -> Option<T>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        self.pool
            .install(|| (0..n).into_par_iter().find_map_first(f))
    }
}

//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) [`Schedule::Parallel`] fans
//! work out over rayon's pool. Without it, both schedules run sequentially,
//! so every caller keeps a single code path.

/// How independent work items are executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Schedule {
    Sequential,
    #[default]
    Parallel,
}

impl Schedule {
    /// Whether this schedule actually runs on more than one thread.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Schedule::Parallel
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(schedule: Schedule, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if schedule == Schedule::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = schedule;
    items.iter().map(f).collect()
}

/// Number of worker threads a parallel schedule would use.
pub fn num_threads() -> usize {
    #[cfg(feature = "parallel")]
    return rayon::current_num_threads();

    #[cfg(not(feature = "parallel"))]
    return 1;
}

//! Index-parallel map over independent jobs.
//!
//! With the `parallel` feature the jobs run on a rayon pool; without it, or
//! when a single worker is requested, they run in order on the caller's
//! thread. Output order always follows the job index.

#[cfg(feature = "parallel")]
pub fn is_parallel_available() -> bool {
    true
}

#[cfg(not(feature = "parallel"))]
pub fn is_parallel_available() -> bool {
    false
}

/// `workers = None` lets the pool use every core.
#[cfg(feature = "parallel")]
pub fn map_indexed<U, F>(count: usize, workers: Option<usize>, job: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    use rayon::prelude::*;

    if workers == Some(1) || count <= 1 {
        return (0..count).map(job).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build();
    match pool {
        Ok(pool) => pool.install(|| (0..count).into_par_iter().map(&job).collect()),
        Err(_) => (0..count).map(job).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<U, F>(count: usize, _workers: Option<usize>, job: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..count).map(job).collect()
}

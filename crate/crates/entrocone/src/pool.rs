//! Indexed parallel map. Results come back in index order, so output does
//! not depend on the thread count.

use rayon::prelude::*;

/// Maps `f` over `0..count` on `jobs` threads (all cores when `None`).
pub fn map_indexed<T, F>(jobs: Option<usize>, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let run = || (0..count).into_par_iter().map(&f).collect();
    match jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(run),
            Err(_) => (0..count).map(&f).collect(),
        },
        None => run(),
    }
}

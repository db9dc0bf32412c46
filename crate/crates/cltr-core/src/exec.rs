//! Execution helpers for data-parallel inner loops.
//!
//! With the `parallel` feature (default) the indexed maps run on rayon;
//! without it they fall back to plain sequential iteration. Results are
//! always collected in index order and reduced sequentially afterwards,
//! so outputs are byte-identical regardless of thread count.
//!
//! `CLTR_LAB_THREADS` caps the worker count. `CLTR_LAB_THREADS=1` forces
//! the sequential path even when the feature is enabled.

#[cfg(feature = "parallel")]
use std::sync::OnceLock;

#[cfg(feature = "parallel")]
fn thread_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("CLTR_LAB_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .unwrap_or(0)
    })
}

#[cfg(feature = "parallel")]
fn pool() -> Option<&'static rayon::ThreadPool> {
    static POOL: OnceLock<Option<rayon::ThreadPool>> = OnceLock::new();
    POOL.get_or_init(|| {
        let cap = thread_cap();
        if cap <= 1 {
            None
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(cap)
                .build()
                .ok()
        }
    })
    .as_ref()
}

/// Map `f` over `0..n`, collecting results in index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if thread_cap() != 1 {
            return match pool() {
                Some(p) => p.install(|| (0..n).into_par_iter().map(&f).collect()),
                None => (0..n).into_par_iter().map(&f).collect(),
            };
        }
    }
    map_indexed_seq(n, f)
}

/// Sequential variant of [`map_indexed`], always available.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

//! Index-ordered parallel map over scoped threads.

use std::num::NonZeroUsize;
use std::thread;

/// Worker count from `OLK_THREADS`; unset, unparseable or 0 means one per
/// available core.
pub fn worker_count() -> usize {
    let requested = std::env::var("OLK_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .unwrap_or(0);
    if requested > 0 {
        requested
    } else {
        thread::available_parallelism().map_or(1, NonZeroUsize::get)
    }
}

/// `(0..n).map(f)` split over `workers` threads in contiguous blocks. The
/// result is in index order whatever the worker count.
pub fn map_indexed<T, F>(n: u64, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    let workers = (workers.max(1) as u64).min(n.max(1));
    if workers == 1 {
        return (0..n).map(f).collect();
    }
    let block = n.div_ceil(workers);
    let f = &f;
    thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let lo = w * block;
                let hi = ((w + 1) * block).min(n);
                s.spawn(move || (lo..hi).map(f).collect::<Vec<T>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

//! Recursive partition sort over a worker pool.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use rayon::{ThreadPool, ThreadPoolBuilder};

use super::adaptive::{self, Counts};
use super::record::{KeyRecord, SortStats};
use crate::error::{Error, Result};

/// Slices at or below this length are handed to the single-threaded sort.
pub const DEFAULT_GRAIN: usize = 8192;

/// Returns a shared pool with exactly `workers` threads.
///
/// Pools are cached per size so that timed calls do not pay for thread
/// start-up.
pub fn worker_pool(workers: usize) -> Result<Arc<ThreadPool>> {
    if workers == 0 {
        return Err(Error::invalid("workers must be at least 1"));
    }
    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<ThreadPool>>>> = OnceLock::new();
    let mut pools = POOLS
        .get_or_init(Default::default)
        .lock()
        .unwrap_or_else(|e| e.into_inner());
    if let Some(pool) = pools.get(&workers) {
        return Ok(pool.clone());
    }
    let pool = ThreadPoolBuilder::new()
        .num_threads(workers)
        .thread_name(move |i| format!("sortmc-{workers}-{i}"))
        .build()
        .map_err(|e| Error::invalid(format!("cannot build a pool of {workers} workers: {e}")))?;
    let pool = Arc::new(pool);
    pools.insert(workers, pool.clone());
    Ok(pool)
}

/// Default worker count: the machine's available parallelism.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Sorts `records` by `(key, payload)` with `workers` threads.
///
/// The result does not depend on `workers`: the order is total, so every
/// schedule produces the same sequence.
pub fn sort_parallel(records: &mut [KeyRecord], workers: usize) -> Result<SortStats> {
    sort_parallel_with_grain(records, workers, DEFAULT_GRAIN)
}

pub fn sort_parallel_with_grain(records: &mut [KeyRecord], workers: usize, grain: usize) -> Result<SortStats> {
    let pool = worker_pool(workers)?;
    let grain = grain.max(adaptive::INSERTION_THRESHOLD);
    let start = Instant::now();
    let limit = adaptive::depth_limit(records.len());
    let counts = pool.install(|| quicksort(records, grain, limit));
    Ok(SortStats {
        comparisons: counts.comparisons,
        swaps: counts.swaps,
        stages: 0,
        wall_nanos: start.elapsed().as_nanos() as u64,
        threads_used: workers,
    })
}

fn quicksort(v: &mut [KeyRecord], grain: usize, limit: u32) -> Counts {
    let len = v.len();
    if len <= grain || limit == 0 {
        return adaptive::introsort(v);
    }
    let mut counts = Counts::default();
    let pivot = adaptive::median_of_three(v, 0, len / 2, len - 1, &mut counts);
    v.swap(0, pivot);
    let (mid, _) = adaptive::partition(v, &mut counts);
    let (left, rest) = v.split_at_mut(mid);
    let right = &mut rest[1..];
    let (a, b) = rayon::join(
        || quicksort(left, grain, limit - 1),
        || quicksort(right, grain, limit - 1),
    );
    counts.merge(a).merge(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{bounded, draw};
    use crate::sort::record::{is_sorted, records_from_keys};

    #[test]
    fn zero_workers_rejected() {
        let mut v = records_from_keys(&[2, 1]);
        assert!(matches!(sort_parallel(&mut v, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn single_worker() {
        let mut v = records_from_keys(&[5, 1, 4, 2]);
        let stats = sort_parallel(&mut v, 1).unwrap();
        assert_eq!(v.iter().map(|r| r.key).collect::<Vec<_>>(), [1, 2, 4, 5]);
        assert_eq!(stats.threads_used, 1);
    }

    #[test]
    fn small_grain_exercises_fork_join() {
        let keys: Vec<u64> = (0..20_000).map(|i| bounded(draw(3, i), 500)).collect();
        let mut a = records_from_keys(&keys);
        let mut b = a.clone();
        sort_parallel_with_grain(&mut a, 1, 16).unwrap();
        sort_parallel_with_grain(&mut b, 4, 16).unwrap();
        assert!(is_sorted(&a));
        assert_eq!(a, b);
    }

    #[test]
    fn pools_are_cached() {
        let a = worker_pool(3).unwrap();
        let b = worker_pool(3).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(a.current_num_threads(), 3);
    }
}

//! Bitonic sorting network.
//!
//! The network for `n = 2^k` has `k(k+1)/2` stages of `n/2` disjoint
//! comparators each. The comparator pattern depends on `n` only. The executor
//! runs one stage at a time across a worker pool; the end of each parallel
//! pass is the barrier between stages.

use std::time::Instant;

use rayon::prelude::*;

use super::parallel::{default_workers, worker_pool};
use super::record::{pad_to_power_of_two, KeyRecord, SortStats};
use crate::error::{Error, Result};

/// One compare-exchange: afterwards `lo` holds the smaller record when
/// `ascending`, the larger otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Comparator {
    pub lo: usize,
    pub hi: usize,
    pub ascending: bool,
}

/// One stage of the network: comparators `(i, i + distance)` for every `i`
/// with the `distance` bit clear, ascending where the `block` bit of `i` is
/// clear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Stage {
    pub n: usize,
    pub block: usize,
    pub distance: usize,
}

impl Stage {
    pub fn comparators(&self) -> impl Iterator<Item = Comparator> + '_ {
        (0..self.n)
            .filter(move |i| i & self.distance == 0)
            .map(move |i| Comparator {
                lo: i,
                hi: i + self.distance,
                ascending: i & self.block == 0,
            })
    }

    pub fn comparator_count(&self) -> usize {
        self.n / 2
    }
}

/// Number of stages for a padded length `n`: `k(k+1)/2` with `n = 2^k`.
pub fn stage_count(n_pow2: usize) -> u64 {
    let k = n_pow2.max(1).ilog2() as u64;
    k * (k + 1) / 2
}

/// Total comparators the network executes on a padded length `n`.
pub fn comparator_total(n_pow2: usize) -> u64 {
    stage_count(n_pow2) * (n_pow2 as u64 / 2)
}

/// Comparators executed when sorting `len` genuine records (after padding).
pub fn comparators_for_len(len: usize) -> u64 {
    comparator_total(len.max(1).next_power_of_two())
}

/// The full stage schedule for `n_pow2` inputs.
pub fn bitonic_stage_schedule(n_pow2: usize) -> Result<Vec<Stage>> {
    if n_pow2 < 2 || !n_pow2.is_power_of_two() {
        return Err(Error::invalid(format!(
            "bitonic schedule needs a power of two >= 2, got {n_pow2}"
        )));
    }
    Ok(schedule_unchecked(n_pow2))
}

fn schedule_unchecked(n: usize) -> Vec<Stage> {
    let mut stages = Vec::new();
    let mut block = 2;
    while block <= n {
        let mut distance = block / 2;
        while distance > 0 {
            stages.push(Stage { n, block, distance });
            distance /= 2;
        }
        block *= 2;
    }
    stages
}

/// Applies a schedule comparator by comparator. Reference semantics for the
/// parallel executor.
pub fn apply_schedule<T: Ord>(stages: &[Stage], values: &mut [T]) {
    for stage in stages {
        for c in stage.comparators() {
            let out_of_order = if c.ascending {
                values[c.lo] > values[c.hi]
            } else {
                values[c.lo] < values[c.hi]
            };
            if out_of_order {
                values.swap(c.lo, c.hi);
            }
        }
    }
}

/// Sorts `records` through the bitonic network using the default pool size.
pub fn sort_bitonic(records: &mut Vec<KeyRecord>) -> SortStats {
    sort_bitonic_with(records, default_workers()).expect("default pool size is nonzero")
}

/// Sorts `records` through the bitonic network on `workers` threads.
///
/// Input of non-power-of-two length is padded with [`KeyRecord::PADDING`];
/// the padding is removed again before returning.
pub fn sort_bitonic_with(records: &mut Vec<KeyRecord>, workers: usize) -> Result<SortStats> {
    let pool = worker_pool(workers)?;
    let start = Instant::now();
    let genuine = records.len();
    let mut padded = pad_to_power_of_two(std::mem::take(records));
    let n = padded.len();
    let stages = if n >= 2 { schedule_unchecked(n) } else { Vec::new() };
    let swaps = pool.install(|| stages.iter().map(|stage| run_stage(&mut padded, stage)).sum::<u64>());
    padded.truncate(genuine);
    *records = padded;
    Ok(SortStats {
        comparisons: stages.len() as u64 * (n as u64 / 2),
        swaps,
        stages: stages.len() as u64,
        wall_nanos: start.elapsed().as_nanos() as u64,
        threads_used: workers,
    })
}

/// Records per parallel task within one stage.
const TASK_LEN: usize = 1 << 13;

fn run_stage(data: &mut [KeyRecord], stage: &Stage) -> u64 {
    let span = 2 * stage.distance;
    let task = span.max(TASK_LEN).min(data.len());
    data.par_chunks_mut(task)
        .enumerate()
        .map(|(t, chunk)| {
            let base = t * task;
            chunk
                .chunks_mut(span)
                .enumerate()
                .map(|(s, pair)| {
                    let ascending = (base + s * span) & stage.block == 0;
                    let (lo, hi) = pair.split_at_mut(stage.distance);
                    if ascending {
                        compare_exchange(lo, hi, false)
                    } else {
                        compare_exchange(lo, hi, true)
                    }
                })
                .sum::<u64>()
        })
        .sum()
}

/// Branch-free compare-exchange of `lo[i]` against `hi[i]`. Returns the number
/// of exchanges. The work done is independent of the data.
#[inline(always)]
fn compare_exchange(lo: &mut [KeyRecord], hi: &mut [KeyRecord], descending: bool) -> u64 {
    let mut swapped = 0u64;
    for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
        let (x, y) = (*a, *b);
        let gt = (x.key > y.key) | ((x.key == y.key) & (x.payload > y.payload));
        let exchange = gt ^ descending;
        let mask = 0u64.wrapping_sub(exchange as u64);
        let dk = (x.key ^ y.key) & mask;
        let dp = (x.payload ^ y.payload) & mask;
        a.key = x.key ^ dk;
        a.payload = x.payload ^ dp;
        b.key = y.key ^ dk;
        b.payload = y.payload ^ dp;
        swapped += exchange as u64;
    }
    swapped
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sort::record::{is_sorted, records_from_keys};

    #[test]
    fn minimal_network() {
        let s = bitonic_stage_schedule(2).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(
            s[0].comparators().collect::<Vec<_>>(),
            [Comparator {
                lo: 0,
                hi: 1,
                ascending: true
            }]
        );
        let mut v = records_from_keys(&[2, 1]);
        let stats = sort_bitonic_with(&mut v, 1).unwrap();
        assert_eq!(v.iter().map(|r| r.key).collect::<Vec<_>>(), [1, 2]);
        assert_eq!(stats.comparisons, 1);
    }

    #[test]
    fn stage_counts() {
        assert_eq!(bitonic_stage_schedule(4).unwrap().len(), 3);
        assert_eq!(bitonic_stage_schedule(8).unwrap().len(), 6);
        assert_eq!(stage_count(1 << 23), 276);
        assert_eq!(stage_count(1 << 20), 210);
    }

    #[test]
    fn rejects_non_powers() {
        for n in [0, 1, 3, 6, 1000] {
            assert!(bitonic_stage_schedule(n).is_err(), "{n}");
        }
    }

    #[test]
    fn stages_are_disjoint_and_cover_half() {
        for stage in bitonic_stage_schedule(16).unwrap() {
            let mut seen = [false; 16];
            for c in stage.comparators() {
                assert!(!seen[c.lo] && !seen[c.hi]);
                seen[c.lo] = true;
                seen[c.hi] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn padding_from_five() {
        let mut v = records_from_keys(&[9, 3, 7, 1, 5]);
        let stats = sort_bitonic_with(&mut v, 2).unwrap();
        assert_eq!(v.len(), 5);
        assert!(is_sorted(&v));
        assert_eq!(stats.stages, 6);
        assert_eq!(stats.comparisons, 6 * 4);
    }

    #[test]
    fn empty_input() {
        let mut v = Vec::new();
        let stats = sort_bitonic_with(&mut v, 1).unwrap();
        assert!(v.is_empty());
        assert_eq!(stats.stages, 0);
    }

    #[test]
    fn executor_matches_reference_schedule() {
        let n = 1 << 15;
        let keys: Vec<u64> = (0..n as u64).map(|i| crate::rng::draw(11, i) % 1000).collect();
        let mut reference = records_from_keys(&keys);
        apply_schedule(&bitonic_stage_schedule(n).unwrap(), &mut reference);
        let mut v = records_from_keys(&keys);
        sort_bitonic_with(&mut v, 3).unwrap();
        assert_eq!(v, reference);
    }
}

//! Introspective sort with presortedness shortcuts.
//!
//! Quicksort recursion (median-of-three pivot, Hoare-style partition) with a
//! heapsort fallback once the depth budget `2 * floor(log2 n)` runs out and
//! insertion sort on slices of at most [`INSERTION_THRESHOLD`] records.
//! Two shortcuts make nearly-sorted input cheap: a leading sortedness scan,
//! and a bounded partial insertion sort whenever a partition step finds its
//! slice already partitioned.

use std::time::Instant;

use super::record::{KeyRecord, SortStats};

pub const INSERTION_THRESHOLD: usize = 16;

/// Misplaced adjacent pairs a partial insertion sort may fix before giving up.
const PARTIAL_INSERTION_STEPS: usize = 5;
/// Below this length the partial insertion sort does not attempt shifting.
const SHORTEST_SHIFTING: usize = 50;

/// Counters threaded through the recursion.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Counts {
    pub comparisons: u64,
    pub swaps: u64,
}

impl Counts {
    #[inline(always)]
    fn less(&mut self, a: &KeyRecord, b: &KeyRecord) -> bool {
        self.comparisons += 1;
        a < b
    }

    #[inline(always)]
    fn swap(&mut self, v: &mut [KeyRecord], i: usize, j: usize) {
        self.swaps += 1;
        v.swap(i, j);
    }

    pub fn merge(self, other: Counts) -> Counts {
        Counts {
            comparisons: self.comparisons + other.comparisons,
            swaps: self.swaps + other.swaps,
        }
    }
}

/// Sorts `records` in place by `(key, payload)` on the calling thread.
pub fn sort_adaptive(records: &mut [KeyRecord]) -> SortStats {
    let start = Instant::now();
    let counts = introsort(records);
    SortStats {
        comparisons: counts.comparisons,
        swaps: counts.swaps,
        stages: 0,
        wall_nanos: start.elapsed().as_nanos() as u64,
        threads_used: 1,
    }
}

pub(crate) fn depth_limit(len: usize) -> u32 {
    2 * len.max(1).ilog2()
}

pub(crate) fn introsort(v: &mut [KeyRecord]) -> Counts {
    let mut counts = Counts::default();
    if v.len() < 2 {
        return counts;
    }
    // One scan settles fully sorted input in n - 1 comparisons.
    if (1..v.len()).all(|i| !counts.less(&v[i], &v[i - 1])) {
        return counts;
    }
    recurse(v, depth_limit(v.len()), &mut counts);
    counts
}

fn recurse(mut v: &mut [KeyRecord], mut limit: u32, counts: &mut Counts) {
    loop {
        let len = v.len();
        if len <= INSERTION_THRESHOLD {
            insertion_sort(v, counts);
            return;
        }
        if limit == 0 {
            heapsort(v, counts);
            return;
        }
        limit -= 1;

        let pivot = median_of_three(v, 0, len / 2, len - 1, counts);
        counts.swap(v, 0, pivot);
        let (mid, was_partitioned) = partition(v, counts);

        if was_partitioned && partial_insertion_sort(v, counts) {
            return;
        }

        let (left, rest) = v.split_at_mut(mid);
        let right = &mut rest[1..];
        // Recurse into the shorter side, loop on the longer.
        if left.len() < right.len() {
            recurse(left, limit, counts);
            v = right;
        } else {
            recurse(right, limit, counts);
            v = left;
        }
    }
}

pub(crate) fn median_of_three(v: &[KeyRecord], a: usize, b: usize, c: usize, counts: &mut Counts) -> usize {
    let (lo, hi) = if counts.less(&v[b], &v[a]) { (b, a) } else { (a, b) };
    if counts.less(&v[c], &v[lo]) {
        lo
    } else if counts.less(&v[hi], &v[c]) {
        hi
    } else {
        c
    }
}

/// Partitions around `v[0]`. Returns the pivot's final index and whether the
/// slice needed no exchanges.
pub(crate) fn partition(v: &mut [KeyRecord], counts: &mut Counts) -> (usize, bool) {
    let pivot = v[0];
    let len = v.len();
    let mut l = 1;
    let mut r = len;
    while l < r && counts.less(&v[l], &pivot) {
        l += 1;
    }
    while l < r && !counts.less(&v[r - 1], &pivot) {
        r -= 1;
    }
    let was_partitioned = l >= r;
    while l < r {
        // v[l] >= pivot and v[r - 1] < pivot
        r -= 1;
        counts.swap(v, l, r);
        l += 1;
        while l < r && counts.less(&v[l], &pivot) {
            l += 1;
        }
        while l < r && !counts.less(&v[r - 1], &pivot) {
            r -= 1;
        }
    }
    let mid = l - 1;
    if mid != 0 {
        counts.swap(v, 0, mid);
    }
    (mid, was_partitioned)
}

pub(crate) fn insertion_sort(v: &mut [KeyRecord], counts: &mut Counts) {
    for i in 1..v.len() {
        shift_tail(&mut v[..=i], counts);
    }
}

/// Moves the last element left until it is in order.
fn shift_tail(v: &mut [KeyRecord], counts: &mut Counts) {
    let mut j = v.len() - 1;
    while j > 0 && counts.less(&v[j], &v[j - 1]) {
        counts.swap(v, j, j - 1);
        j -= 1;
    }
}

/// Moves the first element right until it is in order.
fn shift_head(v: &mut [KeyRecord], counts: &mut Counts) {
    let mut j = 0;
    while j + 1 < v.len() && counts.less(&v[j + 1], &v[j]) {
        counts.swap(v, j, j + 1);
        j += 1;
    }
}

/// Tries to finish a mostly sorted slice by fixing a few misplaced pairs.
/// Returns `true` if the slice ends up sorted.
fn partial_insertion_sort(v: &mut [KeyRecord], counts: &mut Counts) -> bool {
    let len = v.len();
    let mut i = 1;
    for _ in 0..PARTIAL_INSERTION_STEPS {
        while i < len && !counts.less(&v[i], &v[i - 1]) {
            i += 1;
        }
        if i == len {
            return true;
        }
        if len < SHORTEST_SHIFTING {
            return false;
        }
        counts.swap(v, i - 1, i);
        shift_tail(&mut v[..i], counts);
        shift_head(&mut v[i..], counts);
    }
    false
}

pub(crate) fn heapsort(v: &mut [KeyRecord], counts: &mut Counts) {
    fn sift_down(v: &mut [KeyRecord], mut node: usize, end: usize, counts: &mut Counts) {
        loop {
            let mut child = 2 * node + 1;
            if child >= end {
                return;
            }
            if child + 1 < end && counts.less(&v[child], &v[child + 1]) {
                child += 1;
            }
            if !counts.less(&v[node], &v[child]) {
                return;
            }
            counts.swap(v, node, child);
            node = child;
        }
    }

    let len = v.len();
    for i in (0..len / 2).rev() {
        sift_down(v, i, len, counts);
    }
    for end in (1..len).rev() {
        counts.swap(v, 0, end);
        sift_down(v, 0, end, counts);
    }
}

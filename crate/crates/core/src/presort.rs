//! Input generators for sorting experiments and presortedness measures.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{bounded, draw, stream_key};
use crate::sort::KeyRecord;

const UNIFORM_DOMAIN: u64 = 0x756e_6966;
const SWAP_DOMAIN: u64 = 0x7377_6170;

/// Parameters of a partially sorted array: `floor(n * r)` random pair swaps
/// applied to the identity permutation of length `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    n: usize,
    r: f64,
    seed: u64,
}

impl GenSpec {
    pub fn new(n: usize, r: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::invalid(format!("swap ratio must lie in [0, 1], got {r}")));
        }
        Ok(Self { n, r, seed })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `floor(n * r)`.
    pub fn swap_count(&self) -> usize {
        (self.n as f64 * self.r).floor() as usize
    }
}

/// `n` records with keys drawn independently and uniformly from `[0, n - 1]`;
/// payload is the position.
pub fn gen_uniform_random(n: usize, seed: u64) -> Vec<KeyRecord> {
    let key = stream_key(&[seed, UNIFORM_DOMAIN]);
    (0..n as u64)
        .into_par_iter()
        .map(|i| KeyRecord::new(bounded(draw(key, i), n as u64), i))
        .collect()
}

/// The index pairs swapped by [`gen_partially_sorted`], in application order.
/// Pairs are drawn with replacement; `i == j` is a valid (no-op) swap.
pub fn swap_pairs(spec: &GenSpec) -> Vec<(usize, usize)> {
    let key = stream_key(&[spec.seed, SWAP_DOMAIN]);
    let n = spec.n as u64;
    (0..spec.swap_count() as u64)
        .map(|s| {
            let i = bounded(draw(key, 2 * s), n) as usize;
            let j = bounded(draw(key, 2 * s + 1), n) as usize;
            (i, j)
        })
        .collect()
}

/// The identity array `0, 1, ..., n - 1` after `floor(n * r)` random swaps.
pub fn gen_partially_sorted(spec: &GenSpec) -> Vec<KeyRecord> {
    let mut keys: Vec<u64> = (0..spec.n as u64).collect();
    for (i, j) in swap_pairs(spec) {
        keys.swap(i, j);
    }
    keys.into_iter()
        .enumerate()
        .map(|(i, k)| KeyRecord::new(k, i as u64))
        .collect()
}

/// Disorder measures of a key sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PresortReport {
    pub n: usize,
    /// Pairs `i < j` with `key[i] > key[j]`.
    pub inversions: u64,
    /// `inversions / (n(n-1)/2)`; zero when `n < 2`.
    pub inversion_fraction: f64,
    /// Maximal non-decreasing runs; zero for an empty sequence.
    pub sorted_runs: usize,
    /// Fraction of elements not at their index in the stably sorted order.
    pub displaced_fraction: f64,
}

/// Measures the presortedness of `records` by key.
pub fn presort_report(records: &[KeyRecord]) -> PresortReport {
    let keys: Vec<u64> = records.iter().map(|r| r.key).collect();
    presort_report_keys(&keys)
}

pub fn presort_report_keys(keys: &[u64]) -> PresortReport {
    let n = keys.len();
    let inversions = count_inversions(keys);
    let pairs = n as f64 * (n as f64 - 1.0) / 2.0;
    let sorted_runs = if n == 0 {
        0
    } else {
        1 + keys.windows(2).filter(|w| w[1] < w[0]).count()
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| keys[i]);
    let displaced = order.iter().enumerate().filter(|&(pos, &i)| pos != i).count();
    PresortReport {
        n,
        inversions,
        inversion_fraction: if n < 2 { 0.0 } else { inversions as f64 / pairs },
        sorted_runs,
        displaced_fraction: if n == 0 { 0.0 } else { displaced as f64 / n as f64 },
    }
}

/// Counts strict inversions with a bottom-up merge sort in `O(n log n)`.
pub fn count_inversions(keys: &[u64]) -> u64 {
    let n = keys.len();
    let mut src = keys.to_vec();
    let mut dst = vec![0u64; n];
    let mut inversions = 0u64;
    let mut width = 1;
    while width < n {
        for lo in (0..n).step_by(2 * width) {
            let mid = (lo + width).min(n);
            let hi = (lo + 2 * width).min(n);
            let (mut i, mut j, mut k) = (lo, mid, lo);
            while i < mid && j < hi {
                if src[j] < src[i] {
                    // src[j] precedes every remaining left element
                    inversions += (mid - i) as u64;
                    dst[k] = src[j];
                    j += 1;
                } else {
                    dst[k] = src[i];
                    i += 1;
                }
                k += 1;
            }
            dst[k..k + (mid - i)].copy_from_slice(&src[i..mid]);
            k += mid - i;
            dst[k..k + (hi - j)].copy_from_slice(&src[j..hi]);
        }
        std::mem::swap(&mut src, &mut dst);
        width *= 2;
    }
    inversions
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keys(v: &[KeyRecord]) -> Vec<u64> {
        v.iter().map(|r| r.key).collect()
    }

    #[test]
    fn uniform_empty_and_deterministic() {
        assert!(gen_uniform_random(0, 5).is_empty());
        assert_eq!(gen_uniform_random(100, 1), gen_uniform_random(100, 1));
        assert_ne!(gen_uniform_random(100, 1), gen_uniform_random(100, 2));
    }

    #[test]
    fn uniform_payload_is_position() {
        let v = gen_uniform_random(50, 9);
        assert!(v.iter().enumerate().all(|(i, r)| r.payload == i as u64 && r.key < 50));
    }

    #[test]
    fn invalid_ratio() {
        assert!(GenSpec::new(10, -0.1, 0).is_err());
        assert!(GenSpec::new(10, 1.5, 0).is_err());
        assert!(GenSpec::new(10, f64::NAN, 0).is_err());
    }

    #[test]
    fn eight_by_quarter_is_two_swaps() {
        let spec = GenSpec::new(8, 0.25, 3).unwrap();
        assert_eq!(spec.swap_count(), 2);
        let pairs = swap_pairs(&spec);
        assert_eq!(pairs.len(), 2);
        let mut expect: Vec<u64> = (0..8).collect();
        for (i, j) in pairs {
            expect.swap(i, j);
        }
        assert_eq!(keys(&gen_partially_sorted(&spec)), expect);
    }

    #[test]
    fn tiny_ratio_floors_to_identity() {
        let spec = GenSpec::new(1 << 23, 1e-7, 1).unwrap();
        assert_eq!(spec.swap_count(), 0);
        let v = gen_partially_sorted(&spec);
        assert!(v.iter().enumerate().all(|(i, r)| r.key == i as u64));
    }

    #[test]
    fn hand_counted_reports() {
        let r = presort_report_keys(&[0, 1, 2, 3]);
        assert_eq!((r.inversions, r.sorted_runs), (0, 1));
        assert_eq!(r.inversion_fraction, 0.0);
        let r = presort_report_keys(&[1, 0, 3, 2]);
        assert_eq!(r.inversions, 2);
        assert!((r.inversion_fraction - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.sorted_runs, 3); // [1] [0, 3] [2]
        assert_eq!(r.displaced_fraction, 1.0);
    }

    #[test]
    fn degenerate_reports() {
        let r = presort_report_keys(&[]);
        assert_eq!((r.inversions, r.sorted_runs), (0, 0));
        let r = presort_report_keys(&[5, 5, 5]);
        assert_eq!((r.inversions, r.sorted_runs), (0, 1));
        assert_eq!(r.displaced_fraction, 0.0);
        let r = presort_report_keys(&[3, 2, 1, 0]);
        assert_eq!(r.inversion_fraction, 1.0);
    }
}

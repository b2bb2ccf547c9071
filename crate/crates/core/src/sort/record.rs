use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A sortable `(key, payload)` pair.
///
/// Ordering is lexicographic on `(key, payload)`, which is the tie-break every
/// algorithm in this crate uses. The payload indexes an external record bank
/// and is unique within one array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct KeyRecord {
    pub key: u64,
    pub payload: u64,
}

impl KeyRecord {
    /// Payload value carried by padding records.
    pub const SENTINEL_PAYLOAD: u64 = u64::MAX;

    /// Padding record. Sorts after every genuine record, since genuine keys are
    /// required to be strictly below `u64::MAX`.
    pub const PADDING: KeyRecord = KeyRecord {
        key: u64::MAX,
        payload: Self::SENTINEL_PAYLOAD,
    };

    pub const fn new(key: u64, payload: u64) -> Self {
        Self { key, payload }
    }

    pub fn is_padding(&self) -> bool {
        *self == Self::PADDING
    }
}

/// Builds records from bare keys, using the position as payload.
pub fn records_from_keys(keys: &[u64]) -> Vec<KeyRecord> {
    keys.iter()
        .enumerate()
        .map(|(i, &k)| KeyRecord::new(k, i as u64))
        .collect()
}

/// Instrumented cost of one sort call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SortStats {
    pub comparisons: u64,
    pub swaps: u64,
    /// Comparator stages of the bitonic network; zero for comparison sorts.
    pub stages: u64,
    pub wall_nanos: u64,
    pub threads_used: usize,
}

/// The three sorting algorithms under study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmId {
    /// Single-threaded introspective sort.
    AdaptiveSingleThread,
    /// Multi-threaded recursive partition sort.
    PartitionMultiThread,
    /// Data-oblivious bitonic network, executed stage by stage.
    BitonicNetwork,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 3] = [
        AlgorithmId::AdaptiveSingleThread,
        AlgorithmId::PartitionMultiThread,
        AlgorithmId::BitonicNetwork,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            AlgorithmId::AdaptiveSingleThread => "adaptive-single-thread",
            AlgorithmId::PartitionMultiThread => "partition-multi-thread",
            AlgorithmId::BitonicNetwork => "bitonic-network",
        }
    }

    /// Sorts `records` in place with this algorithm.
    ///
    /// `workers` sizes the pool for the two parallel algorithms and is ignored
    /// by the single-threaded one.
    pub fn sort(&self, records: &mut Vec<KeyRecord>, workers: usize) -> crate::Result<SortStats> {
        match self {
            AlgorithmId::AdaptiveSingleThread => Ok(super::sort_adaptive(records)),
            AlgorithmId::PartitionMultiThread => super::sort_parallel(records, workers),
            AlgorithmId::BitonicNetwork => super::sort_bitonic_with(records, workers),
        }
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgorithmId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AlgorithmId::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown algorithm `{s}`")))
    }
}

/// Extends `records` with padding to the smallest power-of-two length.
///
/// An empty input yields a single padding record.
pub fn pad_to_power_of_two(mut records: Vec<KeyRecord>) -> Vec<KeyRecord> {
    let target = records.len().max(1).next_power_of_two();
    records.resize(target, KeyRecord::PADDING);
    records
}

/// Whether `records` is non-decreasing under the `(key, payload)` order.
pub fn is_sorted(records: &[KeyRecord]) -> bool {
    records.windows(2).all(|w| w[0] <= w[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pad_lengths() {
        assert_eq!(pad_to_power_of_two(vec![KeyRecord::default(); 5]).len(), 8);
        assert_eq!(pad_to_power_of_two(vec![KeyRecord::default(); 1024]).len(), 1024);
        let empty = pad_to_power_of_two(Vec::new());
        assert_eq!(empty, vec![KeyRecord::PADDING]);
    }

    #[test]
    fn pad_is_identity_on_powers() {
        let v = records_from_keys(&[3, 1, 2, 0]);
        assert_eq!(pad_to_power_of_two(v.clone()), v);
    }

    #[test]
    fn padding_sorts_last() {
        let genuine = KeyRecord::new(u64::MAX - 1, 0);
        assert!(genuine < KeyRecord::PADDING);
        assert!(KeyRecord::new(u64::MAX, 3) < KeyRecord::PADDING);
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in AlgorithmId::ALL {
            assert_eq!(a.as_str().parse::<AlgorithmId>().unwrap(), a);
        }
        assert!("quick".parse::<AlgorithmId>().is_err());
    }
}

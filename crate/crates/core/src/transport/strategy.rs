//! Inter-event particle sorting strategies.

use serde::{Deserialize, Serialize};

use super::particle::Particle;
use crate::error::{Error, Result};
use crate::presort::{presort_report, PresortReport};
use crate::sort::{sort_adaptive, sort_bitonic_with, KeyRecord, SortStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SortMode {
    /// Measure presortedness at each generation start, never permute.
    None,
    AdaptiveEachGeneration,
    BitonicEachGeneration,
    AdaptiveEveryKEvents,
    BitonicEveryKEvents,
}

impl SortMode {
    pub const ALL: [SortMode; 5] = [
        SortMode::None,
        SortMode::AdaptiveEachGeneration,
        SortMode::BitonicEachGeneration,
        SortMode::AdaptiveEveryKEvents,
        SortMode::BitonicEveryKEvents,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KeyScheme {
    Group,
    Cell,
    /// `cell * G + group`.
    CellThenGroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SortStrategy {
    pub mode: SortMode,
    /// Event passes between sorts in the every-k modes.
    #[serde(default = "one")]
    pub k_events: usize,
    #[serde(default = "default_scheme")]
    pub key_scheme: KeyScheme,
}

fn one() -> usize {
    1
}

fn default_scheme() -> KeyScheme {
    KeyScheme::CellThenGroup
}

impl Default for SortStrategy {
    fn default() -> Self {
        Self {
            mode: SortMode::AdaptiveEachGeneration,
            k_events: 1,
            key_scheme: KeyScheme::CellThenGroup,
        }
    }
}

impl SortStrategy {
    pub fn new(mode: SortMode, k_events: usize, key_scheme: KeyScheme) -> Result<Self> {
        let s = Self {
            mode,
            k_events,
            key_scheme,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_events == 0 {
            return Err(Error::Config("k_events must be at least 1".into()));
        }
        Ok(())
    }

    /// Whether [`sort_bank`] runs before event pass `pass` of a generation.
    pub fn sorts_before_pass(&self, pass: usize) -> bool {
        match self.mode {
            SortMode::None | SortMode::AdaptiveEachGeneration | SortMode::BitonicEachGeneration => pass == 0,
            SortMode::AdaptiveEveryKEvents | SortMode::BitonicEveryKEvents => pass.is_multiple_of(self.k_events),
        }
    }

    pub fn key(&self, p: &Particle, groups: usize) -> u64 {
        match self.key_scheme {
            KeyScheme::Group => p.group as u64,
            KeyScheme::Cell => p.cell as u64,
            KeyScheme::CellThenGroup => (p.cell * groups + p.group) as u64,
        }
    }
}

/// Sorts the bank by the strategy's key.
///
/// Presortedness is measured before sorting. Records carry the bank position
/// as payload, so equal keys keep their relative order. Mode `None` only
/// measures.
pub fn sort_bank(
    bank: &mut Vec<Particle>,
    strategy: &SortStrategy,
    groups: usize,
    workers: usize,
) -> Result<(SortStats, PresortReport)> {
    let mut records: Vec<KeyRecord> = bank
        .iter()
        .enumerate()
        .map(|(i, p)| KeyRecord::new(strategy.key(p, groups), i as u64))
        .collect();
    let report = presort_report(&records);
    let stats = match strategy.mode {
        SortMode::None => return Ok((SortStats::default(), report)),
        SortMode::AdaptiveEachGeneration | SortMode::AdaptiveEveryKEvents => sort_adaptive(&mut records),
        SortMode::BitonicEachGeneration | SortMode::BitonicEveryKEvents => sort_bitonic_with(&mut records, workers)?,
    };
    let permuted: Vec<Particle> = records.iter().map(|r| bank[r.payload as usize]).collect();
    *bank = permuted;
    Ok((stats, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transport::geometry::Vec3;

    fn bank(keys: &[(usize, usize)]) -> Vec<Particle> {
        keys.iter()
            .enumerate()
            .map(|(i, &(cell, group))| Particle {
                id: i as u64,
                position: Vec3::default(),
                direction: Vec3::new(0.0, 0.0, 1.0),
                group,
                weight: 1.0,
                cell,
                alive: true,
                event_counter: 0,
            })
            .collect()
    }

    fn strategy(mode: SortMode) -> SortStrategy {
        SortStrategy::new(mode, 1, KeyScheme::CellThenGroup).unwrap()
    }

    #[test]
    fn none_keeps_order() {
        let mut b = bank(&[(1, 0), (0, 1), (0, 0)]);
        let before = b.clone();
        let (stats, report) = sort_bank(&mut b, &strategy(SortMode::None), 2, 1).unwrap();
        assert_eq!(b, before);
        assert_eq!(stats, SortStats::default());
        assert!(report.inversion_fraction > 0.0);
    }

    #[test]
    fn sorted_bank_is_cheap() {
        let keys: Vec<(usize, usize)> = (0..4000).map(|i| (i / 1000, (i / 500) % 2)).collect();
        let mut b = bank(&keys);
        let (stats, report) = sort_bank(&mut b, &strategy(SortMode::AdaptiveEachGeneration), 2, 1).unwrap();
        assert_eq!(report.inversion_fraction, 0.0);
        assert!(stats.comparisons < 2 * 4000);
    }

    #[test]
    fn both_algorithms_give_same_permutation() {
        let keys: Vec<(usize, usize)> = (0..777).map(|i| ((i * 31) % 3, (i * 17) % 2)).collect();
        let mut a = bank(&keys);
        let mut b = bank(&keys);
        sort_bank(&mut a, &strategy(SortMode::AdaptiveEveryKEvents), 2, 1).unwrap();
        sort_bank(&mut b, &strategy(SortMode::BitonicEachGeneration), 2, 2).unwrap();
        assert_eq!(a, b);
        let keys: Vec<u64> = a.iter().map(|p| (p.cell * 2 + p.group) as u64).collect();
        assert!(keys.windows(2).all(|w| w[0] <= w[1]));
        let mut ids: Vec<u64> = a.iter().map(|p| p.id).collect();
        ids.sort_unstable();
        assert_eq!(ids, (0..777).collect::<Vec<_>>());
    }

    #[test]
    fn schedule_of_sorts() {
        let every3 = SortStrategy::new(SortMode::BitonicEveryKEvents, 3, KeyScheme::Group).unwrap();
        let passes: Vec<usize> = (0..10).filter(|&p| every3.sorts_before_pass(p)).collect();
        assert_eq!(passes, [0, 3, 6, 9]);
        assert!(strategy(SortMode::AdaptiveEachGeneration).sorts_before_pass(0));
        assert!(!strategy(SortMode::AdaptiveEachGeneration).sorts_before_pass(1));
        assert!(SortStrategy::new(SortMode::AdaptiveEveryKEvents, 0, KeyScheme::Cell).is_err());
    }
}

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presort::{gen_partially_sorted, gen_uniform_random, GenSpec};
use crate::rng::stream_key;
use crate::sort::{default_workers, is_sorted, AlgorithmId, KeyRecord, SortStats};

/// Parameters of a size sweep or a swap-ratio sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub algorithms: Vec<AlgorithmId>,
    /// Array sizes of the size sweep, strictly increasing.
    pub sizes: Vec<usize>,
    /// Swap ratios of the ratio sweep, strictly increasing in `[0, 1]`.
    pub ratios: Vec<f64>,
    /// Array size of the ratio sweep.
    pub fixed_n: usize,
    pub repetitions: usize,
    pub warmup: usize,
    pub workers: usize,
    pub seed: u64,
    /// Rows whose working set would exceed this many bytes are skipped.
    pub memory_cap_bytes: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            algorithms: AlgorithmId::ALL.to_vec(),
            sizes: (9..=20).map(|k| 1usize << k).collect(),
            ratios: vec![1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0],
            fixed_n: 1 << 20,
            repetitions: 9,
            warmup: 1,
            workers: default_workers(),
            seed: 0,
            memory_cap_bytes: 4 << 30,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("algorithms must not be empty".into()));
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("sizes must be strictly increasing".into()));
        }
        if self
            .ratios
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::Config("ratios must be strictly increasing".into()));
        }
        if let Some(r) = self.ratios.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return Err(Error::Config(format!("ratio {r} outside [0, 1]")));
        }
        Ok(())
    }
}

/// One measured `(algorithm, n, r)` row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub algorithm: AlgorithmId,
    pub n: usize,
    /// Swap ratio for ratio-sweep rows; `None` for size-sweep rows.
    pub r: Option<f64>,
    pub median_nanos: u64,
    pub min_nanos: u64,
    /// Median comparison count over the timed repetitions.
    pub comparisons: u64,
    pub stages: u64,
    pub repetitions: usize,
    /// Set when the row was not measured; holds the reason.
    #[serde(skip)]
    pub skipped: Option<String>,
}

impl BenchRecord {
    fn skipped(algorithm: AlgorithmId, n: usize, r: Option<f64>, reason: String) -> Self {
        Self {
            algorithm,
            n,
            r,
            median_nanos: 0,
            min_nanos: 0,
            comparisons: 0,
            stages: 0,
            repetitions: 0,
            skipped: Some(reason),
        }
    }

    pub fn is_measured(&self) -> bool {
        self.skipped.is_none()
    }
}

/// Peak bytes for sorting `n` records: input plus padded bitonic buffer.
fn working_set_bytes(n: usize) -> u64 {
    let rec = std::mem::size_of::<KeyRecord>() as u64;
    rec * (n as u64 + n.max(1).next_power_of_two() as u64)
}

/// Times `algorithm` on fresh inputs from `make_input`.
fn measure(
    cfg: &SweepConfig,
    algorithm: AlgorithmId,
    n: usize,
    r: Option<f64>,
    mut make_input: impl FnMut(u64) -> Vec<KeyRecord>,
) -> Result<BenchRecord> {
    if working_set_bytes(n) > cfg.memory_cap_bytes {
        let reason = format!(
            "working set of {} bytes exceeds memory cap of {} bytes",
            working_set_bytes(n),
            cfg.memory_cap_bytes
        );
        log::warn!("skipping {algorithm} n={n}: {reason}");
        return Ok(BenchRecord::skipped(algorithm, n, r, reason));
    }
    let run = |rep: u64, input: &mut dyn FnMut(u64) -> Vec<KeyRecord>| -> Result<(u64, SortStats)> {
        let mut v = input(rep);
        let start = Instant::now();
        let stats = algorithm.sort(&mut v, cfg.workers)?;
        let nanos = start.elapsed().as_nanos() as u64;
        if v.len() != n || !is_sorted(&v) {
            return Err(Error::Verification(format!(
                "{algorithm} at n={n}, r={r:?}, repetition {rep}"
            )));
        }
        Ok((nanos, stats))
    };
    for w in 0..cfg.warmup {
        run(u64::MAX - w as u64, &mut make_input)?;
    }
    let mut times = Vec::with_capacity(cfg.repetitions);
    let mut comparisons = Vec::with_capacity(cfg.repetitions);
    let mut stages = 0;
    for rep in 0..cfg.repetitions as u64 {
        let (nanos, stats) = run(rep, &mut make_input)?;
        times.push(nanos);
        comparisons.push(stats.comparisons);
        stages = stats.stages;
    }
    Ok(BenchRecord {
        algorithm,
        n,
        r,
        median_nanos: median(&mut times),
        min_nanos: *times.iter().min().expect("repetitions >= 1"),
        comparisons: median(&mut comparisons),
        stages,
        repetitions: cfg.repetitions,
        skipped: None,
    })
}

/// Lower median.
fn median(v: &mut [u64]) -> u64 {
    v.sort_unstable();
    v[(v.len() - 1) / 2]
}

fn rep_seed(cfg: &SweepConfig, n: usize, r: f64, rep: u64) -> u64 {
    stream_key(&[cfg.seed, n as u64, r.to_bits(), rep])
}

/// Times every algorithm on uniform random arrays of every configured size.
pub fn run_size_sweep(cfg: &SweepConfig) -> Result<Vec<BenchRecord>> {
    cfg.validate()?;
    let mut records = Vec::new();
    for &algorithm in &cfg.algorithms {
        for &n in &cfg.sizes {
            log::info!("size sweep: {algorithm} n={n}");
            records.push(measure(cfg, algorithm, n, None, |rep| {
                gen_uniform_random(n, rep_seed(cfg, n, -1.0, rep))
            })?);
        }
    }
    Ok(records)
}

/// Times every algorithm on partially sorted arrays of `fixed_n` records for
/// every configured swap ratio.
pub fn run_ratio_sweep(cfg: &SweepConfig) -> Result<Vec<BenchRecord>> {
    cfg.validate()?;
    let n = cfg.fixed_n;
    let mut records = Vec::new();
    for &algorithm in &cfg.algorithms {
        for &r in &cfg.ratios {
            log::info!("ratio sweep: {algorithm} n={n} r={r}");
            records.push(measure(cfg, algorithm, n, Some(r), |rep| {
                let spec = GenSpec::new(n, r, rep_seed(cfg, n, r, rep)).expect("ratio validated");
                gen_partially_sorted(&spec)
            })?);
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SweepConfig {
        SweepConfig {
            sizes: vec![64, 256, 1024],
            ratios: vec![0.0, 0.1, 1.0],
            fixed_n: 1000,
            repetitions: 3,
            warmup: 0,
            workers: 2,
            seed: 5,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn validation() {
        let mut cfg = small();
        cfg.repetitions = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = small();
        cfg.sizes = vec![10, 10];
        assert!(cfg.validate().is_err());
        let mut cfg = small();
        cfg.ratios = vec![0.5, 0.1];
        assert!(cfg.validate().is_err());
        assert!(small().validate().is_ok());
    }

    #[test]
    fn cardinality_and_min_le_median() {
        let recs = run_size_sweep(&small()).unwrap();
        assert_eq!(recs.len(), 9);
        assert!(recs.iter().all(|r| r.min_nanos <= r.median_nanos && r.r.is_none()));
        let recs = run_ratio_sweep(&small()).unwrap();
        assert_eq!(recs.len(), 9);
        assert!(recs.iter().all(|r| r.r.is_some() && r.n == 1000));
    }

    #[test]
    fn memory_cap_skips_rows() {
        let mut cfg = small();
        cfg.memory_cap_bytes = working_set_bytes(256);
        let recs = run_size_sweep(&cfg).unwrap();
        assert_eq!(recs.len(), 9);
        let skipped: Vec<_> = recs.iter().filter(|r| !r.is_measured()).map(|r| r.n).collect();
        assert_eq!(skipped, [1024, 1024, 1024]);
    }

    #[test]
    fn counts_are_reproducible() {
        let a = run_ratio_sweep(&small()).unwrap();
        let b = run_ratio_sweep(&small()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!((x.comparisons, x.stages), (y.comparisons, y.stages));
        }
    }

    #[test]
    fn lower_median() {
        assert_eq!(median(&mut [5, 1, 3]), 3);
        assert_eq!(median(&mut [4, 1, 3, 2]), 2);
    }
}

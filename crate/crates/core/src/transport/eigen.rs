//! k-eigenvalue power iteration.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::bank::sample_fission_bank;
use super::event::{transport_event_iteration, CycleTally, EventContext};
use super::geometry::Vec3;
use super::particle::{FissionSite, Particle};
use super::problem::Problem;
use super::strategy::{sort_bank, SortStrategy};
use crate::error::{Error, Result};
use crate::rng::CounterRng;
use crate::sort::{comparators_for_len, worker_pool};

const SOURCE_DOMAIN: u64 = 0x736f_7572_6365;
const RESAMPLE_DOMAIN: u64 = 0x636f_6d62;
const LOST_FRACTION_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleConfig {
    pub particles_per_cycle: usize,
    pub inactive_cycles: usize,
    pub total_cycles: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for CycleConfig {
    fn default() -> Self {
        Self {
            particles_per_cycle: 10_000,
            inactive_cycles: 20,
            total_cycles: 100,
            seed: 1,
        }
    }
}

impl CycleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.particles_per_cycle == 0 {
            return Err(Error::Config("particles_per_cycle must be at least 1".into()));
        }
        if self.total_cycles <= self.inactive_cycles {
            return Err(Error::Config(format!(
                "total_cycles ({}) must be greater than inactive_cycles ({})",
                self.total_cycles, self.inactive_cycles
            )));
        }
        Ok(())
    }

    pub fn active_cycles(&self) -> usize {
        self.total_cycles - self.inactive_cycles
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub workers: usize,
    /// Record a [`TraceRow`] for every bank sort.
    pub trace: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            workers: 1,
            trace: true,
        }
    }
}

/// Presortedness of the bank seen by one `sort_bank` call.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub cycle: usize,
    pub event_pass: usize,
    pub inversion_fraction: f64,
    pub sorted_runs: usize,
    pub n: usize,
    /// Comparisons spent by the strategy's sort (0 in mode `none`).
    pub comparisons: u64,
    /// Comparators a bitonic network needs for this bank.
    pub bitonic_comparators: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TallySet {
    pub cells: usize,
    pub groups: usize,
    /// Mean track-length flux per source particle, indexed `cell * groups + group`.
    pub flux: Vec<f64>,
    /// Relative standard error of each flux entry (0 where the flux is 0).
    pub flux_rel_err: Vec<f64>,
    /// Per-cell fission rate, normalized to sum to 1.
    pub fission_power: Vec<f64>,
    /// Collision estimate of k for every cycle, inactive ones included.
    pub keff_cycle: Vec<f64>,
    pub keff_mean: f64,
    /// Standard error of `keff_mean`.
    pub keff_std: f64,
}

impl TallySet {
    pub fn flux_at(&self, cell: usize, group: usize) -> f64 {
        self.flux[cell * self.groups + group]
    }

    pub fn keff_display(&self) -> String {
        format_with_uncertainty(self.keff_mean, self.keff_std)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub tallies: TallySet,
    pub trace: Vec<TraceRow>,
    pub config: CycleConfig,
    pub histories: u64,
    pub lost: u64,
    pub event_passes: u64,
    pub sort_nanos: u128,
    pub transport_nanos: u128,
}

/// `1.68728 (5)`: the mean rounded at the first significant digit of `std`,
/// with that digit in parentheses.
pub fn format_with_uncertainty(mean: f64, std: f64) -> String {
    if !std.is_finite() || std <= 0.0 {
        return format!("{mean:.5} (0)");
    }
    let mut decimals = (-std.log10().floor()).max(0.0) as usize;
    let mut digit = (std * 10f64.powi(decimals as i32)).round() as u64;
    if digit >= 10 && decimals > 0 {
        decimals -= 1;
        digit = (std * 10f64.powi(decimals as i32)).round() as u64;
    }
    format!("{mean:.decimals$} ({digit})")
}

/// Mean and standard error of the mean.
fn mean_and_sem(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Running mean and standard error over the active prefix of `keff_cycle`.
pub fn running_statistics(keff_cycle: &[f64], inactive: usize) -> Vec<Option<(f64, f64)>> {
    (0..keff_cycle.len())
        .map(|c| (c >= inactive).then(|| mean_and_sem(&keff_cycle[inactive..=c])))
        .collect()
}

fn initial_source(problem: &Problem, cfg: &CycleConfig) -> Vec<Particle> {
    let fissile: Vec<bool> = (0..problem.cells())
        .map(|c| problem.material_in(c).is_fissile())
        .collect();
    let any_fissile = fissile.iter().any(|&f| f);
    (0..cfg.particles_per_cycle as u64)
        .map(|id| {
            let mut rng = CounterRng::from_words(&[cfg.seed, 0, id, SOURCE_DOMAIN]);
            let (position, cell) = loop {
                let p = problem.geometry.sample_point(&mut rng);
                if let Some(c) = problem.geometry.locate(p) {
                    if fissile[c] || !any_fissile {
                        break (p, c);
                    }
                }
            };
            let chi = &problem.material_in(cell).chi;
            let group = if chi.iter().sum::<f64>() > 0.0 {
                super::event::sample_spectrum(chi, &mut rng)
            } else {
                0
            };
            Particle {
                id,
                position,
                direction: Vec3::isotropic(&mut rng),
                group,
                weight: 1.0,
                cell,
                alive: true,
                event_counter: 0,
            }
        })
        .collect()
}

fn source_from_sites(sites: &[FissionSite], seed: u64, cycle: usize) -> Vec<Particle> {
    sites
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let id = i as u64;
            let mut rng = CounterRng::from_words(&[seed, cycle as u64, id, SOURCE_DOMAIN]);
            Particle {
                id,
                position: s.position,
                direction: Vec3::isotropic(&mut rng),
                group: s.group,
                weight: s.weight,
                cell: s.cell,
                alive: true,
                event_counter: 0,
            }
        })
        .collect()
}

/// Runs `cfg.total_cycles` cycles of power iteration on `problem`, sorting the
/// particle bank according to `strategy`.
///
/// `keff_cycle` and all tallies depend only on `(problem, cfg)`, not on the
/// strategy or the worker count.
pub fn run_eigenvalue(
    problem: &Problem,
    cfg: &CycleConfig,
    strategy: &SortStrategy,
    opts: &RunOptions,
) -> Result<RunResult> {
    cfg.validate()?;
    strategy.validate()?;
    let pool = worker_pool(opts.workers)?;
    pool.install(|| run_cycles(problem, cfg, strategy, opts))
}

fn run_cycles(problem: &Problem, cfg: &CycleConfig, strategy: &SortStrategy, opts: &RunOptions) -> Result<RunResult> {
    let groups = problem.groups();
    let cells = problem.cells();
    let n = cfg.particles_per_cycle;
    let active = cfg.active_cycles() as f64;

    let mut bank = initial_source(problem, cfg);
    let mut k_norm = 1.0;
    let mut keff_cycle = Vec::with_capacity(cfg.total_cycles);
    let mut flux_sum = vec![0.0; cells * groups];
    let mut flux_sq = vec![0.0; cells * groups];
    let mut fission_sum = vec![0.0; cells];
    let mut trace = Vec::new();
    let (mut histories, mut lost, mut event_passes) = (0u64, 0u64, 0u64);
    let (mut sort_nanos, mut transport_nanos) = (0u128, 0u128);

    for cycle in 0..cfg.total_cycles {
        let ctx = EventContext {
            problem,
            seed: cfg.seed,
            cycle,
            k_norm,
        };
        let mut tally = CycleTally::new(cells, groups);
        let mut sites: Vec<FissionSite> = Vec::new();
        histories += bank.len() as u64;
        let mut pass = 0;
        while !bank.is_empty() {
            if strategy.sorts_before_pass(pass) {
                let t = Instant::now();
                let (stats, report) = sort_bank(&mut bank, strategy, groups, opts.workers)?;
                sort_nanos += t.elapsed().as_nanos();
                if opts.trace {
                    trace.push(TraceRow {
                        cycle,
                        event_pass: pass,
                        inversion_fraction: report.inversion_fraction,
                        sorted_runs: report.sorted_runs,
                        n: report.n,
                        comparisons: stats.comparisons,
                        bitonic_comparators: comparators_for_len(report.n),
                    });
                }
            }
            let t = Instant::now();
            let summary = transport_event_iteration(&mut bank, &ctx, &mut tally, &mut sites);
            transport_nanos += t.elapsed().as_nanos();
            lost += summary.lost;
            pass += 1;
            event_passes += 1;
        }
        if lost as f64 > LOST_FRACTION_LIMIT * histories as f64 {
            return Err(Error::TooManyLostParticles { lost, histories });
        }
        if lost > 0 {
            log::warn!("cycle {cycle}: {lost} lost histories so far");
        }

        let k = tally.k.value() / n as f64;
        keff_cycle.push(k);
        log::debug!("cycle {cycle}: k = {k:.6}, {} sites", sites.len());
        if cycle >= cfg.inactive_cycles {
            for (i, f) in tally.flux.iter().enumerate() {
                let v = f.value() / n as f64;
                flux_sum[i] += v;
                flux_sq[i] += v * v;
            }
            for (i, f) in tally.fission.iter().enumerate() {
                fission_sum[i] += f.value() / n as f64;
            }
        }
        if sites.is_empty() {
            return Err(Error::Extinction { cycle });
        }
        if cycle + 1 == cfg.total_cycles {
            break;
        }
        sites.sort_unstable_by_key(FissionSite::order_key);
        let mut rng = CounterRng::from_words(&[cfg.seed, cycle as u64, RESAMPLE_DOMAIN]);
        let next = sample_fission_bank(&sites, n, &mut rng)?;
        bank = source_from_sites(&next, cfg.seed, cycle + 1);
        if k > 0.0 {
            k_norm = k;
        }
    }

    let (keff_mean, keff_std) = mean_and_sem(&keff_cycle[cfg.inactive_cycles..]);
    let flux: Vec<f64> = flux_sum.iter().map(|s| s / active).collect();
    let flux_rel_err = flux
        .iter()
        .zip(&flux_sq)
        .map(|(&m, &sq)| {
            if m <= 0.0 || active < 2.0 {
                return 0.0;
            }
            let var = ((sq / active - m * m) * active / (active - 1.0)).max(0.0);
            (var / active).sqrt() / m
        })
        .collect();
    let fission_total: f64 = fission_sum.iter().sum();
    let fission_power = fission_sum
        .iter()
        .map(|&f| if fission_total > 0.0 { f / fission_total } else { 0.0 })
        .collect();

    Ok(RunResult {
        tallies: TallySet {
            cells,
            groups,
            flux,
            flux_rel_err,
            fission_power,
            keff_cycle,
            keff_mean,
            keff_std,
        },
        trace,
        config: *cfg,
        histories,
        lost,
        event_passes,
        sort_nanos,
        transport_nanos,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uncertainty_format() {
        assert_eq!(format_with_uncertainty(1.687_281, 0.000_05), "1.68728 (5)");
        assert_eq!(format_with_uncertainty(1.25, 0.0123), "1.25 (1)");
        assert_eq!(format_with_uncertainty(1.25, 0.0), "1.25000 (0)");
        assert_eq!(format_with_uncertainty(1.2345, 0.0096), "1.23 (1)");
    }

    #[test]
    fn cycle_validation_names_field() {
        let cfg = CycleConfig {
            particles_per_cycle: 10,
            inactive_cycles: 5,
            total_cycles: 5,
            seed: 0,
        };
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("total_cycles"), "{msg}");
    }

    #[test]
    fn running_stats_start_at_first_active_cycle() {
        let r = running_statistics(&[9.0, 1.0, 3.0], 1);
        assert_eq!(r[0], None);
        assert_eq!(r[1], Some((1.0, 0.0)));
        assert_eq!(r[2].unwrap().0, 2.0);
    }
}

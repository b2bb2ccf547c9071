//! Same pebble problem under every bank-sorting strategy: identical physics,
//! different sorting cost.

use sortmc::transport::{run_eigenvalue, test_2g, CycleConfig, KeyScheme, Problem, RunOptions, SortMode, SortStrategy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let problem = Problem::pebble(&test_2g())?;
    let cfg = CycleConfig {
        particles_per_cycle: 20_000,
        inactive_cycles: 5,
        total_cycles: 25,
        seed: 7,
    };
    let opts = RunOptions {
        workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        trace: true,
    };
    println!(
        "{:<28} {:>12} {:>6} {:>14} {:>14} {:>10}",
        "strategy", "keff", "sorts", "comparisons", "median inv.", "sort ms"
    );
    let mut reference = None;
    for mode in SortMode::ALL {
        let strategy = SortStrategy::new(mode, 4, KeyScheme::CellThenGroup)?;
        let r = run_eigenvalue(&problem, &cfg, &strategy, &opts)?;
        let mut inv: Vec<f64> = r.trace.iter().map(|t| t.inversion_fraction).collect();
        inv.sort_by(f64::total_cmp);
        let comparisons: u64 = r.trace.iter().map(|t| t.comparisons).sum();
        println!(
            "{:<28} {:>12} {:>6} {:>14} {:>14.4e} {:>10.1}",
            format!("{mode:?}"),
            r.tallies.keff_display(),
            r.trace.len(),
            comparisons,
            inv[inv.len() / 2],
            r.sort_nanos as f64 * 1e-6
        );
        match &reference {
            None => reference = Some(r.tallies.keff_cycle.clone()),
            Some(k) => assert_eq!(k, &r.tallies.keff_cycle, "results must not depend on the strategy"),
        }
    }
    Ok(())
}

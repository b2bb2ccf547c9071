//! Size and swap-ratio sweeps with CSV and log-log SVG output.
//!
//! ```text
//! cargo run --release --example benchmark_sweeps -- [out_dir]
//! ```

use std::path::PathBuf;

use sortmc::bench::{loglog_fit, render_loglog_svg, run_ratio_sweep, run_size_sweep, write_csv, SweepConfig, XAxis};
use sortmc::sort::AlgorithmId;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map_or_else(|| PathBuf::from("results"), PathBuf::from);
    std::fs::create_dir_all(&out)?;

    // smaller than the defaults so the example finishes quickly
    let cfg = SweepConfig {
        sizes: (10..=18).map(|k| 1 << k).collect(),
        fixed_n: 1 << 18,
        repetitions: 5,
        ..SweepConfig::default()
    };

    let sizes = run_size_sweep(&cfg)?;
    write_csv(&sizes, &out.join("size_sweep.csv"))?;
    render_loglog_svg(&sizes, XAxis::N, &out.join("size_sweep.svg"))?;
    for alg in AlgorithmId::ALL {
        let pts: Vec<(f64, f64)> = sizes
            .iter()
            .filter(|r| r.algorithm == alg)
            .map(|r| (r.n as f64, r.median_nanos as f64))
            .collect();
        if let Some(fit) = loglog_fit(&pts) {
            println!("{alg:<24} slope {:.3}  R^2 {:.4}", fit.slope, fit.r_squared);
        }
    }

    let ratios = run_ratio_sweep(&cfg)?;
    write_csv(&ratios, &out.join("ratio_sweep.csv"))?;
    render_loglog_svg(&ratios, XAxis::R, &out.join("ratio_sweep.svg"))?;
    for rec in &ratios {
        println!(
            "{:<24} r={:<8.0e} median {:>9.3} ms  comparisons {}",
            rec.algorithm.as_str(),
            rec.r.unwrap_or_default(),
            rec.median_nanos as f64 * 1e-6,
            rec.comparisons
        );
    }
    println!("wrote sweeps to {}", out.display());
    Ok(())
}

//! k-eigenvalue of the reflected HTR-10 fuel pebble with a 2-group library.
//!
//! ```text
//! cargo run --release --example pebble_eigenvalue -- [particles] [out_dir]
//! ```

use std::path::PathBuf;

use sortmc::transport::{run_eigenvalue, test_2g, write_run_outputs, CycleConfig, Problem, RunOptions, SortStrategy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let particles = args.next().map(|s| s.parse()).transpose()?.unwrap_or(10_000);
    let out = args.next().map(PathBuf::from);

    let problem = Problem::pebble(&test_2g())?;
    for (name, mat) in problem.material_names.iter().zip(&problem.materials) {
        println!("{name:<22} sigma_t = {:?}", mat.sigma_t);
    }
    let cfg = CycleConfig {
        particles_per_cycle: particles,
        inactive_cycles: 20,
        total_cycles: 100,
        seed: 42,
    };
    let opts = RunOptions {
        workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        trace: true,
    };
    let result = run_eigenvalue(&problem, &cfg, &SortStrategy::default(), &opts)?;
    let t = &result.tallies;
    println!("keff            {}", t.keff_display());
    println!("histories       {}", result.histories);
    println!("event passes    {}", result.event_passes);
    println!("fission power   {:?}", t.fission_power);
    for cell in 0..t.cells {
        let flux: Vec<String> = (0..t.groups).map(|g| format!("{:.4}", t.flux_at(cell, g))).collect();
        println!("flux cell {cell}     {}", flux.join(" "));
    }
    println!(
        "time: transport {:.2} s, sorting {:.3} s",
        result.transport_nanos as f64 * 1e-9,
        result.sort_nanos as f64 * 1e-9
    );
    if let Some(dir) = out {
        write_run_outputs(&result, &dir)?;
        println!("wrote {}", dir.display());
    }
    Ok(())
}

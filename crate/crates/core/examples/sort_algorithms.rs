//! Sorts one array with each algorithm and prints the instrumented counts.
//!
//! ```text
//! cargo run --release --example sort_algorithms -- [n] [workers]
//! ```

use sortmc::presort::gen_uniform_random;
use sortmc::sort::{is_sorted, AlgorithmId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1 << 20);
    let workers: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(4);

    let input = gen_uniform_random(n, 1);
    println!("n = {n}, workers = {workers}");
    println!(
        "{:<24} {:>14} {:>14} {:>7} {:>10}",
        "algorithm", "comparisons", "swaps", "stages", "ms"
    );
    for alg in AlgorithmId::ALL {
        let mut v = input.clone();
        let stats = alg.sort(&mut v, workers)?;
        assert!(is_sorted(&v));
        println!(
            "{:<24} {:>14} {:>14} {:>7} {:>10.2}",
            alg.as_str(),
            stats.comparisons,
            stats.swaps,
            stats.stages,
            stats.wall_nanos as f64 * 1e-6
        );
    }
    Ok(())
}

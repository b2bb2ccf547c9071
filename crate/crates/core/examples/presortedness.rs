//! Partially sorted inputs and how disorder grows with the swap ratio.

use sortmc::presort::{gen_partially_sorted, presort_report, GenSpec};
use sortmc::sort::{sort_adaptive, sort_bitonic};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 1 << 16;
    println!(
        "{:>8} {:>7} {:>12} {:>6} {:>10} {:>12} {:>12}",
        "r", "swaps", "inv. frac", "runs", "displaced", "adaptive cmp", "bitonic cmp"
    );
    for r in [0.0, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0] {
        let spec = GenSpec::new(n, r, 3)?;
        let v = gen_partially_sorted(&spec);
        let report = presort_report(&v);
        let adaptive = sort_adaptive(&mut v.clone());
        let bitonic = sort_bitonic(&mut v.clone());
        println!(
            "{:>8.0e} {:>7} {:>12.3e} {:>6} {:>10.4} {:>12} {:>12}",
            r,
            spec.swap_count(),
            report.inversion_fraction,
            report.sorted_runs,
            report.displaced_fraction,
            adaptive.comparisons,
            bitonic.comparisons
        );
    }
    Ok(())
}

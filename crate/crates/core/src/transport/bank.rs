//! Population control between cycles.

use super::particle::FissionSite;
use crate::error::{Error, Result};
use crate::rng::CounterRng;

/// Systematic (comb) resampling of `sites` to exactly `target` sites with
/// unit weight.
///
/// Teeth are spaced `W / target` apart from a single random offset, where
/// `W` is the total site weight, so every site is selected either
/// `floor(target w / W)` or `ceil(target w / W)` times.
pub fn sample_fission_bank(sites: &[FissionSite], target: usize, rng: &mut CounterRng) -> Result<Vec<FissionSite>> {
    if target == 0 {
        return Err(Error::invalid("resampling target must be at least 1"));
    }
    if sites.is_empty() {
        return Err(Error::invalid(
            "no fission sites to resample; increase particles_per_cycle",
        ));
    }
    let total: f64 = sites.iter().map(|s| s.weight).sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::invalid("fission sites carry no weight"));
    }
    let spacing = total / target as f64;
    let offset = rng.next_f64() * spacing;
    let mut out = Vec::with_capacity(target);
    let mut idx = 0;
    let mut upper = sites[0].weight;
    for tooth in 0..target {
        let pos = offset + tooth as f64 * spacing;
        while pos >= upper && idx + 1 < sites.len() {
            idx += 1;
            upper += sites[idx].weight;
        }
        out.push(FissionSite {
            weight: 1.0,
            ..sites[idx]
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transport::geometry::Vec3;

    fn sites(weights: &[f64]) -> Vec<FissionSite> {
        weights
            .iter()
            .enumerate()
            .map(|(i, &w)| FissionSite {
                parent: i as u64,
                event: 0,
                index: 0,
                position: Vec3::default(),
                group: 0,
                cell: 0,
                weight: w,
            })
            .collect()
    }

    fn counts(out: &[FissionSite], n: usize) -> Vec<usize> {
        let mut c = vec![0; n];
        out.iter().for_each(|s| c[s.parent as usize] += 1);
        c
    }

    #[test]
    fn equal_weights_select_each_once() {
        for seed in 0..20 {
            let out = sample_fission_bank(&sites(&[1.0; 100]), 100, &mut CounterRng::new(seed, 0)).unwrap();
            assert_eq!(counts(&out, 100), vec![1; 100]);
        }
    }

    #[test]
    fn weighted_comb() {
        for seed in 0..20 {
            let out = sample_fission_bank(&sites(&[2.0, 1.0, 1.0]), 4, &mut CounterRng::new(seed, 0)).unwrap();
            assert_eq!(counts(&out, 3), [2, 1, 1]);
            assert!(out.iter().all(|s| s.weight == 1.0));
        }
    }

    #[test]
    fn degenerate_inputs() {
        let mut rng = CounterRng::new(0, 0);
        assert!(sample_fission_bank(&sites(&[1.0]), 0, &mut rng).is_err());
        assert!(sample_fission_bank(&[], 10, &mut rng).is_err());
    }

    #[test]
    fn counts_are_floor_or_ceil() {
        let w = [0.3, 2.2, 0.9, 1.6, 0.05, 3.1];
        let total: f64 = w.iter().sum();
        let target = 37;
        for seed in 0..50 {
            let out = sample_fission_bank(&sites(&w), target, &mut CounterRng::new(seed, 1)).unwrap();
            assert_eq!(out.len(), target);
            for (i, c) in counts(&out, w.len()).into_iter().enumerate() {
                let expect = target as f64 * w[i] / total;
                assert!(
                    c as f64 >= expect.floor() && c as f64 <= expect.ceil(),
                    "site {i}: {c} vs {expect}"
                );
            }
        }
    }
}

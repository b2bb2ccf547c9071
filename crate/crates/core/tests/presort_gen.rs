use sortmc::presort::{
    count_inversions, gen_partially_sorted, gen_uniform_random, presort_report, presort_report_keys, swap_pairs,
    GenSpec,
};
use sortmc::rng::CounterRng;

fn brute_inversions(keys: &[u64]) -> u64 {
    let mut c = 0;
    for i in 0..keys.len() {
        for j in i + 1..keys.len() {
            c += (keys[i] > keys[j]) as u64;
        }
    }
    c
}

/// Upper-tail chi-square quantile by the Wilson-Hilferty approximation.
fn chi_square_quantile(dof: f64, z: f64) -> f64 {
    let a = 2.0 / (9.0 * dof);
    dof * (1.0 - a + z * a.sqrt()).powi(3)
}

#[test]
fn uniform_keys_pass_chi_square() {
    let n = 1usize << 16;
    // z for an upper tail of 1e-6
    let critical = chi_square_quantile(255.0, 4.753_424);
    for seed in [0, 1, 12345] {
        let v = gen_uniform_random(n, seed);
        assert!(v.iter().all(|r| r.key < n as u64));
        let mut bins = [0u64; 256];
        for r in &v {
            bins[(r.key * 256 / n as u64) as usize] += 1;
        }
        let expected = n as f64 / 256.0;
        let stat: f64 = bins.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
        assert!(stat < critical, "seed {seed}: chi-square {stat} >= {critical}");
    }
    assert_eq!(gen_uniform_random(100, 1), gen_uniform_random(100, 1));
}

#[test]
fn partially_sorted_is_permutation_with_exact_swap_count() {
    for (n, r, seed) in [(1000, 0.1, 1), (8, 0.25, 2), (4096, 1.0, 3), (1, 1.0, 4), (0, 0.5, 5)] {
        let spec = GenSpec::new(n, r, seed).unwrap();
        assert_eq!(spec.swap_count(), (n as f64 * r).floor() as usize);
        assert_eq!(swap_pairs(&spec).len(), spec.swap_count());
        let v = gen_partially_sorted(&spec);
        let mut keys: Vec<u64> = v.iter().map(|r| r.key).collect();
        keys.sort_unstable();
        assert_eq!(keys, (0..n as u64).collect::<Vec<_>>());
    }
    for n in [0, 1, 17, 1000] {
        let v = gen_partially_sorted(&GenSpec::new(n, 0.0, 9).unwrap());
        assert!(v.iter().enumerate().all(|(i, r)| r.key == i as u64));
    }
}

#[test]
fn full_swapping_is_far_from_sorted() {
    let v = gen_partially_sorted(&GenSpec::new(1 << 20, 1.0, 7).unwrap());
    let report = presort_report(&v);
    assert!(report.inversion_fraction > 0.1, "{report:?}");
}

#[test]
fn disorder_grows_with_ratio() {
    let n = 2048;
    let ratios = [0.0, 1e-3, 1e-2, 1e-1, 1.0];
    let means: Vec<f64> = ratios
        .iter()
        .map(|&r| {
            (0..32)
                .map(|seed| {
                    presort_report(&gen_partially_sorted(&GenSpec::new(n, r, seed).unwrap())).inversion_fraction
                })
                .sum::<f64>()
                / 32.0
        })
        .collect();
    assert!(means.windows(2).all(|w| w[0] <= w[1]), "{means:?}");
}

#[test]
fn merge_count_matches_brute_force() {
    let mut rng = CounterRng::new(77, 0);
    let keys: Vec<u64> = (0..1024).map(|_| rng.next_u64()).collect();
    assert_eq!(count_inversions(&keys), brute_inversions(&keys));
    let ties: Vec<u64> = (0..1024).map(|_| rng.next_below(5)).collect();
    assert_eq!(count_inversions(&ties), brute_inversions(&ties));
}

#[test]
fn report_bounds() {
    let mut rng = CounterRng::new(5, 0);
    for _ in 0..50 {
        let n = rng.next_below(300) as usize;
        let keys: Vec<u64> = (0..n).map(|_| rng.next_below(20)).collect();
        let r = presort_report_keys(&keys);
        assert!((0.0..=1.0).contains(&r.inversion_fraction));
        assert!((0.0..=1.0).contains(&r.displaced_fraction));
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        let s = presort_report_keys(&sorted);
        assert_eq!(s.inversion_fraction, 0.0);
        assert_eq!(s.sorted_runs, usize::from(n > 0));
    }
}

//! Deterministic infinite-medium solutions used to check transport.
//!
//! In an infinite homogeneous medium the multi-group balance is
//!
//! ```text
//! sigma_t[g] phi[g] = sum_h sigma_s[h -> g] phi[h] + chi[g] / k * sum_h nu_sigma_f[h] phi[h]
//! ```
//!
//! Fission enters with rank one, so `k = nu_sigma_f . A^-1 chi` where
//! `A = diag(sigma_t) - S^T`.

use nalgebra::{DMatrix, DVector};

use super::xs::MaterialMG;
use crate::error::{Error, Result};

fn balance_matrix(mat: &MaterialMG) -> DMatrix<f64> {
    let g = mat.groups();
    DMatrix::from_fn(g, g, |row, col| {
        let diag = if row == col { mat.sigma_t[row] } else { 0.0 };
        // S^T: inscatter into `row` from `col`
        diag - mat.sigma_s[col * g + row]
    })
}

/// Flux shape `A^-1 chi`, unnormalized.
fn direct_flux(mat: &MaterialMG) -> Result<DVector<f64>> {
    let a = balance_matrix(mat);
    let chi = DVector::from_column_slice(&mat.chi);
    a.lu()
        .solve(&chi)
        .ok_or_else(|| Error::invalid("balance matrix is singular (no absorption in some group chain)"))
}

/// k-infinity by a direct linear solve. Zero for non-multiplying material.
pub fn analytic_kinf_oracle(mat: &MaterialMG) -> Result<f64> {
    if !mat.is_fissile() {
        return Ok(0.0);
    }
    let phi = direct_flux(mat)?;
    Ok(mat.nu_sigma_f.iter().zip(phi.iter()).map(|(f, p)| f * p).sum())
}

/// Normalized (sum one) infinite-medium group flux spectrum.
pub fn infinite_medium_spectrum(mat: &MaterialMG) -> Result<Vec<f64>> {
    if !mat.is_fissile() {
        return Err(Error::invalid("spectrum needs a fission source"));
    }
    let phi = direct_flux(mat)?;
    let sum: f64 = phi.iter().sum();
    Ok(phi.iter().map(|p| p / sum).collect())
}

/// k-infinity by power iteration on the fission source with Gauss-Seidel
/// scattering sweeps. Independent of [`analytic_kinf_oracle`].
pub fn fixed_point_kinf(mat: &MaterialMG, tolerance: f64) -> Result<f64> {
    if !mat.is_fissile() {
        return Ok(0.0);
    }
    let g = mat.groups();
    let mut phi = vec![1.0; g];
    let mut k = 1.0;
    let production = |phi: &[f64]| -> f64 { mat.nu_sigma_f.iter().zip(phi).map(|(f, p)| f * p).sum() };
    for _ in 0..10_000 {
        let source = production(&phi) / k;
        let mut next = phi.clone();
        for _ in 0..100_000 {
            let mut change: f64 = 0.0;
            for grp in 0..g {
                let inscatter: f64 = (0..g)
                    .filter(|&h| h != grp)
                    .map(|h| mat.sigma_s[h * g + grp] * next[h])
                    .sum();
                let removal = mat.sigma_t[grp] - mat.sigma_s[grp * g + grp];
                if removal <= 0.0 {
                    return Err(Error::invalid(format!("group {grp} has no removal")));
                }
                let value = (inscatter + mat.chi[grp] * source) / removal;
                change = change.max((value - next[grp]).abs() / value.abs().max(f64::MIN_POSITIVE));
                next[grp] = value;
            }
            if change < tolerance * 1e-3 {
                break;
            }
        }
        let k_next = k * production(&next) / production(&phi);
        let done = (k_next - k).abs() < tolerance * k_next;
        k = k_next;
        phi = next;
        if done {
            return Ok(k);
        }
    }
    Err(Error::invalid("fixed-point iteration did not converge"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transport::library::{synthetic_23g, test_2g};
    use crate::transport::materials::htr10_materials;
    use crate::transport::xs::macro_xs_build;

    #[test]
    fn one_group_closed_form() {
        let m = MaterialMG::one_group(1.0, 0.6, 0.5).unwrap();
        assert!((analytic_kinf_oracle(&m).unwrap() - 1.25).abs() < 1e-14);
    }

    #[test]
    fn non_multiplying_is_zero() {
        let m = MaterialMG::one_group(1.0, 0.6, 0.0).unwrap();
        assert_eq!(analytic_kinf_oracle(&m).unwrap(), 0.0);
        assert_eq!(fixed_point_kinf(&m, 1e-12).unwrap(), 0.0);
    }

    fn two_group_set() -> Vec<MaterialMG> {
        let hand = MaterialMG::from_parts(
            vec![0.30, 1.20],
            vec![0.20, 0.05, 0.0, 0.90],
            vec![0.005, 0.10],
            vec![0.013, 0.25],
            vec![1.0, 0.0],
        )
        .unwrap();
        let upscatter = MaterialMG::from_parts(
            vec![0.5, 0.9],
            vec![0.3, 0.1, 0.02, 0.7],
            vec![0.01, 0.05],
            vec![0.025, 0.12],
            vec![0.9, 0.1],
        )
        .unwrap();
        let mats = htr10_materials();
        let fuel = macro_xs_build(&mats[1].nuclides, &test_2g()).unwrap();
        vec![hand, upscatter, fuel]
    }

    #[test]
    fn two_routes_agree_two_group() {
        for m in two_group_set() {
            let a = analytic_kinf_oracle(&m).unwrap();
            let b = fixed_point_kinf(&m, 1e-14).unwrap();
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn hand_two_group_value() {
        // A = [[0.30-0.20, 0], [-0.05, 1.20-0.90]], chi = (1, 0)
        // phi0 = 10, phi1 = 0.05 * 10 / 0.30
        let m = &two_group_set()[0];
        let phi1 = 0.5 / 0.30;
        let expect = 0.013 * 10.0 + 0.25 * phi1;
        assert!((analytic_kinf_oracle(m).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn two_routes_agree_23_group() {
        let lib = synthetic_23g();
        let mats = htr10_materials();
        let mut fuel = mats[1].nuclides.clone();
        fuel.extend(mats[0].nuclides.iter().cloned().map(|mut n| {
            n.density *= 3.0;
            n
        }));
        let m = macro_xs_build(&fuel, &lib).unwrap();
        let a = analytic_kinf_oracle(&m).unwrap();
        let b = fixed_point_kinf(&m, 1e-14).unwrap();
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn spectrum_sums_to_one() {
        let s = infinite_medium_spectrum(&two_group_set()[0]).unwrap();
        assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(s.iter().all(|&p| p > 0.0));
    }
}

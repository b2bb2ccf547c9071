//! Macroscopic multi-group cross sections.

use super::library::MicroLibrary;
use super::materials::NuclideDensity;
use crate::error::{Error, Result};

/// Macroscopic cross sections of one material, in cm^-1.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialMG {
    pub sigma_t: Vec<f64>,
    /// Row-major `G x G`: `sigma_s[g * G + h]` is the `g -> h` transfer.
    pub sigma_s: Vec<f64>,
    pub sigma_f: Vec<f64>,
    pub nu_sigma_f: Vec<f64>,
    /// Fission spectrum, normalized; all zero for non-multiplying material.
    pub chi: Vec<f64>,
}

impl MaterialMG {
    pub fn zero(groups: usize) -> Self {
        Self {
            sigma_t: vec![0.0; groups],
            sigma_s: vec![0.0; groups * groups],
            sigma_f: vec![0.0; groups],
            nu_sigma_f: vec![0.0; groups],
            chi: vec![0.0; groups],
        }
    }

    /// Builds a material from explicit macroscopic data, checking
    /// `sigma_t >= scatter-out + sigma_f` and non-negativity.
    pub fn from_parts(
        sigma_t: Vec<f64>,
        sigma_s: Vec<f64>,
        sigma_f: Vec<f64>,
        nu_sigma_f: Vec<f64>,
        chi: Vec<f64>,
    ) -> Result<Self> {
        let g = sigma_t.len();
        if sigma_s.len() != g * g || sigma_f.len() != g || nu_sigma_f.len() != g || chi.len() != g {
            return Err(Error::invalid("inconsistent cross-section vector lengths"));
        }
        let m = Self {
            sigma_t,
            sigma_s,
            sigma_f,
            nu_sigma_f,
            chi,
        };
        m.check()?;
        Ok(m)
    }

    /// One-group material with the given total, scattering and production
    /// cross sections; fission carries 2.5 neutrons on average.
    pub fn one_group(sigma_t: f64, sigma_s: f64, nu_sigma_f: f64) -> Result<Self> {
        const NU: f64 = 2.5;
        let fissile = nu_sigma_f > 0.0;
        Self::from_parts(
            vec![sigma_t],
            vec![sigma_s],
            vec![nu_sigma_f / NU],
            vec![nu_sigma_f],
            vec![if fissile { 1.0 } else { 0.0 }],
        )
    }

    fn check(&self) -> Result<()> {
        let fields = [&self.sigma_t, &self.sigma_s, &self.sigma_f, &self.nu_sigma_f, &self.chi];
        if fields.iter().flat_map(|v| v.iter()).any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::invalid("cross sections must be finite and non-negative"));
        }
        for g in 0..self.groups() {
            let out = self.scatter_out(g) + self.sigma_f[g];
            if out > self.sigma_t[g] * (1.0 + 1e-12) {
                return Err(Error::invalid(format!(
                    "group {g}: scatter + fission ({out}) exceeds total ({})",
                    self.sigma_t[g]
                )));
            }
        }
        let chi_sum: f64 = self.chi.iter().sum();
        if self.is_fissile() && (chi_sum - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("chi sums to {chi_sum}, expected 1")));
        }
        Ok(())
    }

    pub fn groups(&self) -> usize {
        self.sigma_t.len()
    }

    pub fn scatter_row(&self, g: usize) -> &[f64] {
        let n = self.groups();
        &self.sigma_s[g * n..(g + 1) * n]
    }

    pub fn scatter_out(&self, g: usize) -> f64 {
        self.scatter_row(g).iter().sum()
    }

    pub fn is_fissile(&self) -> bool {
        self.nu_sigma_f.iter().any(|&x| x > 0.0)
    }

    /// Multiplies every cross section by `factor` (the spectrum is unchanged).
    pub fn scaled(&self, factor: f64) -> Self {
        let s = |v: &[f64]| v.iter().map(|x| x * factor).collect();
        Self {
            sigma_t: s(&self.sigma_t),
            sigma_s: s(&self.sigma_s),
            sigma_f: s(&self.sigma_f),
            nu_sigma_f: s(&self.nu_sigma_f),
            chi: self.chi.clone(),
        }
    }
}

/// `Sigma = sum_i N_i sigma_i` over the nuclides of a material.
///
/// Every reaction entry is the density-weighted sum of microscopic values
/// (atoms/barn-cm times barns gives cm^-1). The spectrum is the mixture of
/// nuclide spectra weighted by each nuclide's group-summed production
/// `N_i sum_g nu_i sigma_f,i`.
pub fn macro_xs_build(densities: &[NuclideDensity], lib: &MicroLibrary) -> Result<MaterialMG> {
    let g = lib.groups();
    let mut m = MaterialMG::zero(g);
    let mut production_total = 0.0;
    for nd in densities {
        let xs = lib
            .get(&nd.nuclide)
            .ok_or_else(|| Error::MissingNuclide(nd.nuclide.clone()))?;
        let n = nd.density;
        for grp in 0..g {
            m.sigma_t[grp] += n * xs.total[grp];
            m.sigma_f[grp] += n * xs.fission[grp];
            m.nu_sigma_f[grp] += n * xs.nu[grp] * xs.fission[grp];
        }
        for (acc, s) in m.sigma_s.iter_mut().zip(&xs.scatter) {
            *acc += n * s;
        }
        let production: f64 = (0..g).map(|grp| n * xs.nu[grp] * xs.fission[grp]).sum();
        if production > 0.0 {
            for (acc, c) in m.chi.iter_mut().zip(&xs.chi) {
                *acc += production * c;
            }
            production_total += production;
        }
    }
    if production_total > 0.0 {
        m.chi.iter_mut().for_each(|c| *c /= production_total);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transport::library::test_2g;

    fn nd(n: &str, d: f64) -> NuclideDensity {
        NuclideDensity {
            nuclide: n.into(),
            density: d,
        }
    }

    #[test]
    fn empty_is_zero() {
        let m = macro_xs_build(&[], &test_2g()).unwrap();
        assert_eq!(m, MaterialMG::zero(2));
    }

    #[test]
    fn missing_nuclide_is_named() {
        match macro_xs_build(&[nd("Pu-239", 1e-3)], &test_2g()) {
            Err(Error::MissingNuclide(n)) => assert_eq!(n, "Pu-239"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn linear_in_density() {
        let lib = test_2g();
        let a = [nd("U-235", 1e-3), nd("C-12", 5e-2)];
        let b = [nd("U-235", 2e-3), nd("C-12", 1e-1)];
        let ma = macro_xs_build(&a, &lib).unwrap();
        let mb = macro_xs_build(&b, &lib).unwrap();
        assert_eq!(ma.scaled(2.0), mb);
    }

    #[test]
    fn single_nuclide_entries() {
        let lib = test_2g();
        let m = macro_xs_build(&[nd("U-235", 0.01)], &lib).unwrap();
        let u = lib.get("U-235").unwrap();
        assert_eq!(m.sigma_t[1], 0.01 * u.total[1]);
        assert_eq!(m.nu_sigma_f[0], 0.01 * u.nu[0] * u.fission[0]);
        assert_eq!(m.chi, u.chi);
    }

    #[test]
    fn from_parts_validates() {
        assert!(MaterialMG::one_group(1.0, 0.6, 0.5).is_ok());
        assert!(MaterialMG::one_group(1.0, 0.9, 0.5).is_err());
        assert!(MaterialMG::one_group(1.0, -0.1, 0.0).is_err());
    }
}

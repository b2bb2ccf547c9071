//! Macroscopic cross sections of the HTR-10 materials and their
//! infinite-medium multiplication factors.

use sortmc::transport::{
    analytic_kinf_oracle, fixed_point_kinf, htr10_materials, infinite_medium_spectrum, macro_xs_build, synthetic_23g,
    test_2g,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let materials = htr10_materials();
    for (label, lib) in [("2-group", test_2g()), ("23-group", synthetic_23g())] {
        println!("{label} library");
        for spec in &materials {
            let mat = macro_xs_build(&spec.nuclides, &lib)?;
            let direct = analytic_kinf_oracle(&mat)?;
            let iterated = fixed_point_kinf(&mat, 1e-13)?;
            println!(
                "  {:<40} sigma_t[0] {:.5e}  k_inf {direct:.8} (fixed point {iterated:.8})",
                spec.name, mat.sigma_t[0]
            );
        }
    }
    let fuel = macro_xs_build(&materials[1].nuclides, &test_2g())?;
    println!("fuel kernel 2-group spectrum {:?}", infinite_medium_spectrum(&fuel)?);
    Ok(())
}

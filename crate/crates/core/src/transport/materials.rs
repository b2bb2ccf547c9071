//! Material composition files.
//!
//! Line-oriented UTF-8 text:
//!
//! ```text
//! # comment
//! material Fuel kernel
//! U-235 3.99198E-3
//! U-238 1.92441E-2
//! ```
//!
//! A `material <name>` line opens a material (the name is the rest of the
//! line); each following `<nuclide> <density>` line adds a nuclide with an
//! atom density in atoms per barn-cm (1e24 cm^-3). Nuclide names are
//! `<element symbol>-<mass number>`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The bundled composition of the HTR-10 fuel pebble with fresh fuel.
pub const HTR10_MATERIALS: &str = include_str!("../../data/htr10_materials.txt");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuclideDensity {
    pub nuclide: String,
    /// Atoms per barn-cm.
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialSpec {
    pub name: String,
    pub nuclides: Vec<NuclideDensity>,
}

const ELEMENTS: [&str; 118] = [
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar", "K", "Ca",
    "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",
    "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce",
    "Pr", "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir",
    "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U", "Np", "Pu", "Am", "Cm",
    "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc",
    "Lv", "Ts", "Og",
];

/// Whether `name` has the form `<element symbol>-<mass number>` with a
/// known element and a mass number in `1..=300`.
pub fn is_known_nuclide(name: &str) -> bool {
    let Some((symbol, mass)) = name.split_once('-') else {
        return false;
    };
    let mass_ok = !mass.is_empty()
        && mass.bytes().all(|b| b.is_ascii_digit())
        && mass.parse::<u32>().is_ok_and(|a| (1..=300).contains(&a));
    mass_ok && ELEMENTS.contains(&symbol)
}

/// Parses material definitions from `text`. `source` names the input in
/// error messages.
pub fn parse_materials(text: &str, source: &str) -> Result<Vec<MaterialSpec>> {
    let err = |line: usize, message: String| Error::Parse {
        path: source.to_string(),
        line,
        message,
    };
    let mut out: Vec<MaterialSpec> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("material") {
            if !rest.is_empty() && !rest.starts_with(char::is_whitespace) {
                return Err(err(line_no, format!("unrecognized line `{line}`")));
            }
            let name = rest.trim();
            if name.is_empty() {
                return Err(err(line_no, "material header without a name".into()));
            }
            out.push(MaterialSpec {
                name: name.to_string(),
                nuclides: Vec::new(),
            });
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(nuclide), Some(value), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(err(line_no, format!("expected `<nuclide> <density>`, got `{line}`")));
        };
        if !is_known_nuclide(nuclide) {
            return Err(err(line_no, format!("unknown nuclide `{nuclide}`")));
        }
        let density: f64 = value
            .parse()
            .map_err(|_| err(line_no, format!("bad density `{value}`")))?;
        if !density.is_finite() || density <= 0.0 {
            return Err(err(
                line_no,
                format!("density of {nuclide} must be positive, got {value}"),
            ));
        }
        let Some(material) = out.last_mut() else {
            return Err(err(line_no, format!("nuclide `{nuclide}` outside of any material")));
        };
        material.nuclides.push(NuclideDensity {
            nuclide: nuclide.to_string(),
            density,
        });
    }
    Ok(out)
}

/// Reads a material file.
pub fn load_materials(path: &Path) -> Result<Vec<MaterialSpec>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_materials(&text, &path.display().to_string())
}

/// The bundled HTR-10 pebble materials.
pub fn htr10_materials() -> Vec<MaterialSpec> {
    parse_materials(HTR10_MATERIALS, "htr10_materials.txt").expect("bundled file parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nuclide_names() {
        for ok in ["U-235", "B-10", "Si-28", "H-1"] {
            assert!(is_known_nuclide(ok), "{ok}");
        }
        for bad in ["U235", "Xx-12", "C-", "C-0", "C-12a", "-12", "c-12"] {
            assert!(!is_known_nuclide(bad), "{bad}");
        }
    }

    #[test]
    fn empty_file() {
        assert!(parse_materials("", "t").unwrap().is_empty());
        assert!(parse_materials("# only a comment\n\n", "t").unwrap().is_empty());
    }

    #[test]
    fn unknown_nuclide_names_line() {
        let e = parse_materials("material A\nC-12 1e-2\nZz-3 1e-3\n", "f.txt").unwrap_err();
        match e {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("Zz-3"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_density_rejected() {
        assert!(parse_materials("material A\nC-12 -1e-2\n", "t").is_err());
        assert!(parse_materials("material A\nC-12 0\n", "t").is_err());
    }

    #[test]
    fn orphan_nuclide_rejected() {
        assert!(parse_materials("C-12 1e-2\n", "t").is_err());
    }

    #[test]
    fn names_keep_spaces_and_comments_are_stripped() {
        let m = parse_materials("material Pyrolytic Carbon (PyC)  # layers\nC-12 9.42057E-2\n", "t").unwrap();
        assert_eq!(m[0].name, "Pyrolytic Carbon (PyC)");
        assert_eq!(m[0].nuclides[0].density, 9.42057e-2);
    }
}

use super::geometry::{Boundary, Geometry, Shell};
use super::library::MicroLibrary;
use super::materials::{htr10_materials, MaterialSpec};
use super::xs::{macro_xs_build, MaterialMG};
use crate::error::{Error, Result};

/// Pebble outer radius, cm.
pub const PEBBLE_RADIUS: f64 = 3.0;
/// Fuel zone radius, cm.
pub const FUEL_ZONE_RADIUS: f64 = 2.5;

/// Geometry plus the macroscopic data of each material it references.
#[derive(Debug, Clone)]
pub struct Problem {
    pub geometry: Geometry,
    pub materials: Vec<MaterialMG>,
    pub material_names: Vec<String>,
}

impl Problem {
    pub fn new(geometry: Geometry, materials: Vec<MaterialMG>, material_names: Vec<String>) -> Result<Self> {
        let Some(first) = materials.first() else {
            return Err(Error::invalid("a problem needs at least one material"));
        };
        let groups = first.groups();
        if materials.iter().any(|m| m.groups() != groups) {
            return Err(Error::invalid("all materials must share one group structure"));
        }
        if (0..geometry.cell_count()).any(|c| geometry.material_of(c) >= materials.len()) {
            return Err(Error::invalid("geometry references a missing material"));
        }
        if material_names.len() != materials.len() {
            return Err(Error::invalid("one name per material required"));
        }
        Ok(Self {
            geometry,
            materials,
            material_names,
        })
    }

    /// An infinite homogeneous medium of `material`.
    pub fn infinite(material: MaterialMG) -> Self {
        Self::new(
            Geometry::Infinite { material: 0 },
            vec![material],
            vec!["medium".into()],
        )
        .expect("single material problem is valid")
    }

    /// Concentric shells filled with named materials from `specs`, built
    /// against `lib`. `shells` lists `(outer radius cm, material name)` from
    /// the inside out.
    pub fn from_shells(
        shells: &[(f64, &str)],
        boundary: Boundary,
        specs: &[MaterialSpec],
        lib: &MicroLibrary,
    ) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut materials = Vec::new();
        let mut geometry_shells = Vec::new();
        for &(radius, name) in shells {
            let idx = match names.iter().position(|n| n == name) {
                Some(i) => i,
                None => {
                    let spec = specs
                        .iter()
                        .find(|s| s.name == name)
                        .ok_or_else(|| Error::Config(format!("material `{name}` not defined")))?;
                    materials.push(macro_xs_build(&spec.nuclides, lib)?);
                    names.push(name.to_string());
                    names.len() - 1
                }
            };
            geometry_shells.push(Shell {
                outer_radius: radius,
                material: idx,
            });
        }
        Self::new(Geometry::spheres(geometry_shells, boundary)?, materials, names)
    }

    /// Infinite medium of one named material.
    pub fn infinite_named(name: &str, specs: &[MaterialSpec], lib: &MicroLibrary) -> Result<Self> {
        let spec = specs
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::Config(format!("material `{name}` not defined")))?;
        let mut p = Self::infinite(macro_xs_build(&spec.nuclides, lib)?);
        p.material_names = vec![name.to_string()];
        Ok(p)
    }

    /// The reflected two-region HTR-10 pebble: homogenized fuel kernel
    /// material inside 2.5 cm, carbon matrix out to 3.0 cm.
    pub fn pebble(lib: &MicroLibrary) -> Result<Self> {
        Self::from_shells(
            &[
                (FUEL_ZONE_RADIUS, "Fuel kernel"),
                (PEBBLE_RADIUS, "Pebble Carbon matrix"),
            ],
            Boundary::Reflective,
            &htr10_materials(),
            lib,
        )
    }

    pub fn groups(&self) -> usize {
        self.materials[0].groups()
    }

    pub fn cells(&self) -> usize {
        self.geometry.cell_count()
    }

    pub fn material_in(&self, cell: usize) -> &MaterialMG {
        &self.materials[self.geometry.material_of(cell)]
    }
}

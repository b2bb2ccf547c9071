//! Concentric-sphere geometry and the infinite medium.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::CounterRng;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        self * (1.0 / self.norm())
    }

    /// Uniform direction on the unit sphere.
    pub fn isotropic(rng: &mut CounterRng) -> Vec3 {
        let mu = 2.0 * rng.next_f64() - 1.0;
        let phi = 2.0 * std::f64::consts::PI * rng.next_f64();
        let s = (1.0 - mu * mu).max(0.0).sqrt();
        Vec3::new(s * phi.cos(), s * phi.sin(), mu)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Reflective,
    Vacuum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Shell {
    /// cm.
    pub outer_radius: f64,
    /// Index into the problem's material list.
    pub material: usize,
}

/// Which surface a flight ends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Crossing {
    Inward,
    Outward,
}

/// Relative slack when checking a position against its cell.
const LOCATE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    /// A single unbounded cell.
    Infinite { material: usize },
    /// Cell `i` is the shell between radius `shells[i-1]` and `shells[i]`.
    Spheres { shells: Vec<Shell>, boundary: Boundary },
}

impl Geometry {
    pub fn spheres(shells: Vec<Shell>, boundary: Boundary) -> Result<Self> {
        if shells.is_empty() {
            return Err(Error::invalid("sphere geometry needs at least one shell"));
        }
        if shells[0].outer_radius <= 0.0 || shells.windows(2).any(|w| w[0].outer_radius >= w[1].outer_radius) {
            return Err(Error::invalid("shell radii must be positive and strictly increasing"));
        }
        Ok(Geometry::Spheres { shells, boundary })
    }

    pub fn cell_count(&self) -> usize {
        match self {
            Geometry::Infinite { .. } => 1,
            Geometry::Spheres { shells, .. } => shells.len(),
        }
    }

    pub fn material_of(&self, cell: usize) -> usize {
        match self {
            Geometry::Infinite { material } => *material,
            Geometry::Spheres { shells, .. } => shells[cell].material,
        }
    }

    pub fn outer_radius(&self) -> Option<f64> {
        match self {
            Geometry::Infinite { .. } => None,
            Geometry::Spheres { shells, .. } => shells.last().map(|s| s.outer_radius),
        }
    }

    /// The cell containing `p`, or `None` outside the geometry.
    pub fn locate(&self, p: Vec3) -> Option<usize> {
        match self {
            Geometry::Infinite { .. } => Some(0),
            Geometry::Spheres { shells, .. } => {
                let r = p.norm();
                shells.iter().position(|s| r < s.outer_radius).or_else(|| {
                    let outer = shells.last()?.outer_radius;
                    (r <= outer * (1.0 + LOCATE_TOLERANCE)).then_some(shells.len() - 1)
                })
            }
        }
    }

    /// Whether `p` lies in `cell`, allowing a small relative slack on the
    /// bounding surfaces.
    pub fn consistent(&self, p: Vec3, cell: usize) -> bool {
        match self {
            Geometry::Infinite { .. } => cell == 0,
            Geometry::Spheres { shells, .. } => {
                let Some(shell) = shells.get(cell) else {
                    return false;
                };
                let r = p.norm();
                let inner = if cell == 0 { 0.0 } else { shells[cell - 1].outer_radius };
                r <= shell.outer_radius * (1.0 + LOCATE_TOLERANCE) && r >= inner * (1.0 - LOCATE_TOLERANCE)
            }
        }
    }

    /// Distance along `d` from `p` (inside `cell`) to the cell's boundary and
    /// the surface hit. Infinite for the infinite medium.
    pub fn distance_to_boundary(&self, p: Vec3, d: Vec3, cell: usize) -> (f64, Option<Crossing>) {
        let Geometry::Spheres { shells, .. } = self else {
            return (f64::INFINITY, None);
        };
        let b = p.dot(d);
        let p2 = p.norm2();
        let outer = shells[cell].outer_radius;
        let c_out = p2 - outer * outer;
        let mut best = ((-b + (b * b - c_out).max(0.0).sqrt()).max(0.0), Some(Crossing::Outward));
        if cell > 0 && b < 0.0 {
            let inner = shells[cell - 1].outer_radius;
            let disc = b * b - (p2 - inner * inner);
            if disc > 0.0 {
                let t = (-b - disc.sqrt()).max(0.0);
                if t < best.0 {
                    best = (t, Some(Crossing::Inward));
                }
            }
        }
        best
    }

    /// Uniform point inside the geometry's bounding sphere (the origin for the
    /// infinite medium).
    pub fn sample_point(&self, rng: &mut CounterRng) -> Vec3 {
        let Some(r) = self.outer_radius() else {
            return Vec3::default();
        };
        loop {
            let p = Vec3::new(
                r * (2.0 * rng.next_f64() - 1.0),
                r * (2.0 * rng.next_f64() - 1.0),
                r * (2.0 * rng.next_f64() - 1.0),
            );
            if p.norm2() < r * r {
                return p;
            }
        }
    }
}

/// Mirror reflection of `d` about the plane with unit normal `n`.
pub fn reflect(d: Vec3, n: Vec3) -> Vec3 {
    (d - n * (2.0 * d.dot(n))).normalized()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pebble() -> Geometry {
        Geometry::spheres(
            vec![
                Shell {
                    outer_radius: 2.5,
                    material: 0,
                },
                Shell {
                    outer_radius: 3.0,
                    material: 1,
                },
            ],
            Boundary::Reflective,
        )
        .unwrap()
    }

    #[test]
    fn radii_must_increase() {
        let bad = vec![
            Shell {
                outer_radius: 3.0,
                material: 0,
            },
            Shell {
                outer_radius: 2.5,
                material: 1,
            },
        ];
        assert!(Geometry::spheres(bad, Boundary::Vacuum).is_err());
        assert!(Geometry::spheres(vec![], Boundary::Vacuum).is_err());
    }

    #[test]
    fn locate_cells() {
        let g = pebble();
        assert_eq!(g.locate(Vec3::new(0.0, 0.0, 1.0)), Some(0));
        assert_eq!(g.locate(Vec3::new(0.0, 2.7, 0.0)), Some(1));
        assert_eq!(g.locate(Vec3::new(3.0, 0.0, 0.0)), Some(1));
        assert_eq!(g.locate(Vec3::new(3.1, 0.0, 0.0)), None);
    }

    #[test]
    fn outward_distance_from_center() {
        let g = pebble();
        let (t, c) = g.distance_to_boundary(Vec3::default(), Vec3::new(0.0, 0.0, 1.0), 0);
        assert!((t - 2.5).abs() < 1e-12);
        assert_eq!(c, Some(Crossing::Outward));
    }

    #[test]
    fn inward_distance_hits_inner_sphere() {
        let g = pebble();
        let (t, c) = g.distance_to_boundary(Vec3::new(0.0, 0.0, 2.9), Vec3::new(0.0, 0.0, -1.0), 1);
        assert!((t - 0.4).abs() < 1e-12);
        assert_eq!(c, Some(Crossing::Inward));
        // grazing past the inner sphere goes to the outer one
        let (_, c) = g.distance_to_boundary(Vec3::new(2.6, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0), 1);
        assert_eq!(c, Some(Crossing::Outward));
    }

    #[test]
    fn reflection_flips_normal_component() {
        let n = Vec3::new(1.0, 0.0, 0.0);
        let d = Vec3::new(0.6, 0.8, 0.0);
        let r = reflect(d, n);
        assert!((r.x + 0.6).abs() < 1e-15 && (r.y - 0.8).abs() < 1e-15);
        assert!((r.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn isotropic_is_unit() {
        let mut rng = CounterRng::new(1, 0);
        for _ in 0..1000 {
            assert!((Vec3::isotropic(&mut rng).norm() - 1.0).abs() < 1e-12);
        }
    }
}

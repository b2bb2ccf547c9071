//! One event for every particle in the bank, in three staged passes.
//!
//! 1. flight planning: sample the distance to collision and find the
//!    distance to the cell boundary;
//! 2. advance: move to the collision site or the surface, crossing into the
//!    neighbouring cell, reflecting, or leaking;
//! 3. collision: pick scatter, fission or capture from the macroscopic
//!    fractions.
//!
//! Each pass is a data-parallel map over the bank. A particle's random
//! numbers come from the stream `(seed, cycle, id, event_counter)`, and
//! tallies are summed in fixed point, so results do not depend on the bank
//! order or on how the passes are split across threads.

use rayon::prelude::*;

use super::geometry::{reflect, Boundary, Crossing, Geometry, Vec3};
use super::particle::{FissionSite, Particle};
use super::problem::Problem;
use crate::rng::CounterRng;

const EVENT_DOMAIN: u64 = 0x0065_7665_6e74;

/// Histories still alive after this many events are killed as lost.
pub const MAX_EVENTS_PER_HISTORY: u64 = 1_000_000;

/// Order-independent accumulator: each addend is rounded to a multiple of
/// 2^-64 and summed exactly in an `i128`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FixedSum(i128);

const FIXED_SCALE: f64 = 18_446_744_073_709_551_616.0; // 2^64

impl FixedSum {
    #[inline]
    pub fn add(&mut self, v: f64) {
        self.0 += (v * FIXED_SCALE).round() as i128;
    }

    pub fn value(&self) -> f64 {
        self.0 as f64 / FIXED_SCALE
    }
}

/// Per-cycle tally accumulators.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleTally {
    pub groups: usize,
    pub cells: usize,
    /// Track length times weight per `(cell, group)`, cm.
    pub flux: Vec<FixedSum>,
    /// Track-length fission rate per cell.
    pub fission: Vec<FixedSum>,
    /// Collision estimator sum of `w nu_sigma_f / sigma_t`.
    pub k: FixedSum,
}

impl CycleTally {
    pub fn new(cells: usize, groups: usize) -> Self {
        Self {
            groups,
            cells,
            flux: vec![FixedSum::default(); cells * groups],
            fission: vec![FixedSum::default(); cells],
            k: FixedSum::default(),
        }
    }
}

/// Per-cycle transport context.
#[derive(Debug, Clone, Copy)]
pub struct EventContext<'a> {
    pub problem: &'a Problem,
    pub seed: u64,
    pub cycle: usize,
    /// Eigenvalue used to normalize fission site production.
    pub k_norm: f64,
}

impl EventContext<'_> {
    pub fn event_rng(&self, p: &Particle) -> CounterRng {
        CounterRng::from_words(&[self.seed, self.cycle as u64, p.id, p.event_counter, EVENT_DOMAIN])
    }
}

/// Outcome of pass 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flight {
    pub collision: f64,
    pub boundary: f64,
    pub crossing: Option<Crossing>,
}

/// Outcome of pass 2.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Advance {
    pub cell: usize,
    pub group: usize,
    /// Weighted track length in `cell`.
    pub track: f64,
    pub collided: bool,
    pub leaked: bool,
    pub lost: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reaction {
    Scatter,
    Fission,
    Capture,
}

/// Outcome of pass 3.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Collision {
    pub k_score: f64,
    pub reaction: Option<Reaction>,
    pub sites: Vec<FissionSite>,
}

/// Weight bookkeeping of one pass.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PassSummary {
    pub start_weight: f64,
    pub fission_weight: f64,
    pub captured_weight: f64,
    pub leaked_weight: f64,
    pub lost_weight: f64,
    pub surviving_weight: f64,
    pub collisions: u64,
    pub lost: u64,
    pub sites_banked: u64,
}

impl PassSummary {
    /// `start - (fission + capture + leakage + lost + surviving)`.
    pub fn weight_defect(&self) -> f64 {
        self.start_weight
            - (self.fission_weight
                + self.captured_weight
                + self.leaked_weight
                + self.lost_weight
                + self.surviving_weight)
    }
}

/// Pass 1 for one particle.
pub fn plan_flight(p: &Particle, ctx: &EventContext<'_>) -> Flight {
    let mut rng = ctx.event_rng(p);
    let sigma_t = ctx.problem.material_in(p.cell).sigma_t[p.group];
    let collision = if sigma_t > 0.0 {
        -rng.next_open_f64().ln() / sigma_t
    } else {
        f64::INFINITY
    };
    let (boundary, crossing) = ctx
        .problem
        .geometry
        .distance_to_boundary(p.position, p.direction, p.cell);
    Flight {
        collision,
        boundary,
        crossing,
    }
}

/// Pass 2 for one particle.
pub fn advance(p: &mut Particle, flight: &Flight, geometry: &Geometry) -> Advance {
    let mut out = Advance {
        cell: p.cell,
        group: p.group,
        ..Advance::default()
    };
    if p.event_counter >= MAX_EVENTS_PER_HISTORY {
        p.alive = false;
        out.lost = true;
        return out;
    }
    if flight.collision <= flight.boundary {
        if !flight.collision.is_finite() {
            p.alive = false;
            out.lost = true;
            return out;
        }
        p.position = p.position + p.direction * flight.collision;
        out.track = p.weight * flight.collision;
        out.collided = true;
    } else {
        p.position = p.position + p.direction * flight.boundary;
        out.track = p.weight * flight.boundary;
        match (flight.crossing, geometry) {
            (Some(Crossing::Inward), _) => p.cell -= 1,
            (Some(Crossing::Outward), Geometry::Spheres { shells, boundary }) => {
                if p.cell + 1 < shells.len() {
                    p.cell += 1;
                } else {
                    match boundary {
                        Boundary::Vacuum => {
                            p.alive = false;
                            out.leaked = true;
                            return out;
                        }
                        Boundary::Reflective => {
                            let radius = shells[p.cell].outer_radius;
                            let normal = p.position.normalized();
                            p.position = normal * radius;
                            p.direction = reflect(p.direction, normal);
                        }
                    }
                }
            }
            _ => {
                p.alive = false;
                out.lost = true;
                return out;
            }
        }
    }
    if !geometry.consistent(p.position, p.cell) {
        p.alive = false;
        out.lost = true;
    }
    out
}

/// Pass 3 for one particle.
pub fn collide(p: &mut Particle, adv: &Advance, ctx: &EventContext<'_>) -> Collision {
    let mut out = Collision::default();
    if !adv.collided || !p.alive {
        return out;
    }
    let mat = ctx.problem.material_in(p.cell);
    let g = p.group;
    let sigma_t = mat.sigma_t[g];
    out.k_score = p.weight * mat.nu_sigma_f[g] / sigma_t;

    let mut rng = ctx.event_rng(p);
    rng.next_u64(); // draw 0 belongs to the flight
    let scatter = mat.scatter_out(g);
    let xi = rng.next_f64() * sigma_t;
    if xi < scatter {
        let target = rng.next_f64() * scatter;
        let mut acc = 0.0;
        let row = mat.scatter_row(g);
        let mut new_group = row.iter().rposition(|&s| s > 0.0).unwrap_or(g);
        for (h, &s) in row.iter().enumerate() {
            acc += s;
            if target < acc {
                new_group = h;
                break;
            }
        }
        p.group = new_group;
        p.direction = Vec3::isotropic(&mut rng);
        out.reaction = Some(Reaction::Scatter);
    } else if xi < scatter + mat.sigma_f[g] {
        let nu = mat.nu_sigma_f[g] / mat.sigma_f[g];
        let expected = p.weight * nu / ctx.k_norm;
        let count = (expected + rng.next_f64()).floor() as u32;
        out.sites = (0..count)
            .map(|index| FissionSite {
                parent: p.id,
                event: p.event_counter,
                index,
                position: p.position,
                group: sample_spectrum(&mat.chi, &mut rng),
                cell: p.cell,
                weight: 1.0,
            })
            .collect();
        p.alive = false;
        out.reaction = Some(Reaction::Fission);
    } else {
        p.alive = false;
        out.reaction = Some(Reaction::Capture);
    }
    out
}

/// Samples a group from a normalized spectrum.
pub fn sample_spectrum(chi: &[f64], rng: &mut CounterRng) -> usize {
    let xi = rng.next_f64();
    let mut acc = 0.0;
    for (g, &c) in chi.iter().enumerate() {
        acc += c;
        if xi < acc {
            return g;
        }
    }
    chi.iter().rposition(|&c| c > 0.0).unwrap_or(0)
}

/// Runs one event for every live particle in `bank`, accumulates tallies and
/// fission sites, and compacts dead particles out of the bank.
///
/// Uses the current rayon pool.
pub fn transport_event_iteration(
    bank: &mut Vec<Particle>,
    ctx: &EventContext<'_>,
    tally: &mut CycleTally,
    sites: &mut Vec<FissionSite>,
) -> PassSummary {
    let mut summary = PassSummary {
        start_weight: bank.iter().map(|p| p.weight).sum(),
        ..PassSummary::default()
    };
    let flights: Vec<Flight> = bank.par_iter().map(|p| plan_flight(p, ctx)).collect();
    let geometry = &ctx.problem.geometry;
    let advances: Vec<Advance> = bank
        .par_iter_mut()
        .zip(flights.par_iter())
        .map(|(p, f)| advance(p, f, geometry))
        .collect();
    let collisions: Vec<Collision> = bank
        .par_iter_mut()
        .zip(advances.par_iter())
        .map(|(p, a)| {
            let c = collide(p, a, ctx);
            p.event_counter += 1;
            c
        })
        .collect();

    let groups = tally.groups;
    for ((p, adv), col) in bank.iter().zip(&advances).zip(collisions) {
        let mat = ctx.problem.material_in(adv.cell);
        tally.flux[adv.cell * groups + adv.group].add(adv.track);
        tally.fission[adv.cell].add(adv.track * mat.sigma_f[adv.group]);
        tally.k.add(col.k_score);
        if adv.collided {
            summary.collisions += 1;
        }
        if adv.lost {
            summary.lost += 1;
            summary.lost_weight += p.weight;
        } else if adv.leaked {
            summary.leaked_weight += p.weight;
        }
        match col.reaction {
            Some(Reaction::Fission) => summary.fission_weight += p.weight,
            Some(Reaction::Capture) => summary.captured_weight += p.weight,
            _ => {}
        }
        if p.alive {
            summary.surviving_weight += p.weight;
        }
        summary.sites_banked += col.sites.len() as u64;
        sites.extend(col.sites);
    }
    bank.retain(|p| p.alive);
    summary
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transport::geometry::Shell;
    use crate::transport::xs::MaterialMG;

    fn particle(id: u64, position: Vec3, direction: Vec3, cell: usize) -> Particle {
        Particle {
            id,
            position,
            direction,
            group: 0,
            weight: 1.0,
            cell,
            alive: true,
            event_counter: 0,
        }
    }

    fn ctx(problem: &Problem) -> EventContext<'_> {
        EventContext {
            problem,
            seed: 17,
            cycle: 0,
            k_norm: 1.0,
        }
    }

    #[test]
    fn free_path_mean() {
        let problem = Problem::infinite(MaterialMG::one_group(2.0, 1.0, 0.0).unwrap());
        let c = ctx(&problem);
        let n = 100_000;
        let paths: Vec<f64> = (0..n)
            .map(|id| plan_flight(&particle(id, Vec3::default(), Vec3::new(0.0, 0.0, 1.0), 0), &c).collision)
            .collect();
        let mean = paths.iter().sum::<f64>() / n as f64;
        // exponential with mean 0.5 has sigma 0.5
        let sigma_mean = 0.5 / (n as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * sigma_mean, "{mean}");
    }

    #[test]
    fn reflection_keeps_particle_inside() {
        let geometry = Geometry::spheres(
            vec![Shell {
                outer_radius: 3.0,
                material: 0,
            }],
            Boundary::Reflective,
        )
        .unwrap();
        let dirs = [
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(0.3, 0.4, 0.866_025_403_784_438_6).normalized(),
        ];
        for d in dirs {
            let mut p = particle(0, Vec3::new(0.0, 0.0, 2.9), d, 0);
            let (boundary, crossing) = geometry.distance_to_boundary(p.position, p.direction, 0);
            let flight = Flight {
                collision: 10.0,
                boundary,
                crossing,
            };
            let adv = advance(&mut p, &flight, &geometry);
            assert!(p.alive && !adv.lost);
            assert!(p.position.norm() <= 3.0 * (1.0 + 1e-12));
            assert!((p.direction.norm() - 1.0).abs() < 1e-9);
            let outward = p.position.normalized();
            assert!(p.direction.dot(outward) <= 0.0);
        }
    }

    #[test]
    fn vacuum_boundary_leaks() {
        let geometry = Geometry::spheres(
            vec![Shell {
                outer_radius: 1.0,
                material: 0,
            }],
            Boundary::Vacuum,
        )
        .unwrap();
        let mut p = particle(0, Vec3::default(), Vec3::new(1.0, 0.0, 0.0), 0);
        let flight = Flight {
            collision: 5.0,
            boundary: 1.0,
            crossing: Some(Crossing::Outward),
        };
        let adv = advance(&mut p, &flight, &geometry);
        assert!(adv.leaked && !p.alive);
        assert_eq!(adv.track, 1.0);
    }

    #[test]
    fn pure_capture_empties_bank() {
        let problem = Problem::infinite(MaterialMG::one_group(1.0, 0.0, 0.0).unwrap());
        let c = ctx(&problem);
        let mut bank: Vec<Particle> = (0..500)
            .map(|i| particle(i, Vec3::default(), Vec3::new(1.0, 0.0, 0.0), 0))
            .collect();
        let mut tally = CycleTally::new(1, 1);
        let mut sites = Vec::new();
        let s = transport_event_iteration(&mut bank, &c, &mut tally, &mut sites);
        assert!(bank.is_empty());
        assert_eq!(s.collisions, 500);
        assert_eq!(s.captured_weight, 500.0);
        assert!(sites.is_empty());
    }

    #[test]
    fn weight_is_conserved_per_pass() {
        let problem = Problem::infinite(MaterialMG::one_group(1.0, 0.5, 0.6).unwrap());
        let c = ctx(&problem);
        let mut bank: Vec<Particle> = (0..2000)
            .map(|i| particle(i, Vec3::default(), Vec3::new(1.0, 0.0, 0.0), 0))
            .collect();
        let mut tally = CycleTally::new(1, 1);
        let mut sites = Vec::new();
        while !bank.is_empty() {
            let s = transport_event_iteration(&mut bank, &c, &mut tally, &mut sites);
            assert!(s.weight_defect().abs() <= 1e-9 * s.start_weight);
        }
        assert!(!sites.is_empty());
    }

    #[test]
    fn fixed_sum_is_order_free() {
        let vals: Vec<f64> = (0..1000).map(|i| ((i as f64) * 0.731).sin().abs() * 1e3).collect();
        let mut a = FixedSum::default();
        let mut b = FixedSum::default();
        vals.iter().for_each(|&v| a.add(v));
        vals.iter().rev().for_each(|&v| b.add(v));
        assert_eq!(a, b);
        assert!((a.value() - vals.iter().sum::<f64>()).abs() < 1e-9);
    }

    #[test]
    fn spectrum_sampling_skips_empty_groups() {
        let mut rng = CounterRng::new(3, 0);
        for _ in 0..1000 {
            assert_eq!(sample_spectrum(&[0.0, 1.0, 0.0], &mut rng), 1);
        }
    }
}

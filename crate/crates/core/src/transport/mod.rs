//! Event-based multi-group Monte Carlo k-eigenvalue transport.
//!
//! Particles live in a bank that is processed one event at a time for every
//! particle. Between events the bank can be re-sorted by `(cell, group)` with
//! any of the [`crate::sort`] algorithms; the physics results do not depend
//! on that choice.

mod bank;
mod eigen;
mod event;
mod geometry;
mod library;
mod materials;
mod oracle;
mod output;
mod particle;
mod problem;
mod strategy;
mod xs;

pub use bank::sample_fission_bank;
pub use eigen::{
    format_with_uncertainty, run_eigenvalue, running_statistics, CycleConfig, RunOptions, RunResult, TallySet, TraceRow,
};
pub use event::{
    advance, collide, plan_flight, sample_spectrum, transport_event_iteration, Advance, Collision, CycleTally,
    EventContext, FixedSum, Flight, PassSummary, Reaction, MAX_EVENTS_PER_HISTORY,
};
pub use geometry::{reflect, Boundary, Crossing, Geometry, Shell, Vec3};
pub use library::{
    build_synthetic_library, synthetic_23g, test_1g, test_2g, MicroLibrary, NuclideXs, SYNTHETIC_23G, TEST_1G, TEST_2G,
};
pub use materials::{
    htr10_materials, is_known_nuclide, load_materials, parse_materials, MaterialSpec, NuclideDensity, HTR10_MATERIALS,
};
pub use oracle::{analytic_kinf_oracle, fixed_point_kinf, infinite_medium_spectrum};
pub use output::{flux_csv, keff_csv, presortedness_trace, write_run_outputs};
pub use particle::{FissionSite, Particle};
pub use problem::{Problem, FUEL_ZONE_RADIUS, PEBBLE_RADIUS};
pub use strategy::{sort_bank, KeyScheme, SortMode, SortStrategy};
pub use xs::{macro_xs_build, MaterialMG};

//! Particle-sorting performance lab.
//!
//! * [`sort`]: three instrumented sorting algorithms (introspective,
//!   partition-parallel, bitonic network) over `(key, payload)` records.
//! * [`presort`]: uniform and partially sorted input generators plus
//!   presortedness measures.
//! * [`bench`]: size and swap-ratio sweeps, CSV output and log-log SVG plots.
//! * [`transport`]: an event-based multi-group Monte Carlo k-eigenvalue
//!   mini-app whose particle bank can be re-sorted between events.
//! * [`cli`]: the `sortmc` command line.

pub mod bench;
pub mod cli;
pub mod error;
mod fsutil;
pub mod presort;
pub mod rng;
pub mod sort;
pub mod transport;

pub use error::{Error, Result};

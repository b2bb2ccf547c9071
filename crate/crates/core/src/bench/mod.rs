//! Sorting benchmark sweeps and their CSV / SVG output.

mod csv_io;
mod fit;
mod svg;
mod sweep;

pub use csv_io::{read_csv, write_csv, CSV_HEADER};
pub use fit::{loglog_fit, LineFit};
pub use svg::{loglog_svg, render_loglog_svg, LogAxis, XAxis, R_FLOOR};
pub use sweep::{run_ratio_sweep, run_size_sweep, BenchRecord, SweepConfig};

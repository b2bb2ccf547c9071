//! Run output files.

use std::path::Path;

use super::eigen::{running_statistics, RunResult, TraceRow};
use crate::error::{Error, Result};
use crate::fsutil::write_atomic;

fn to_bytes(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner().map_err(|e| Error::Config(format!("csv buffer: {e}")))
}

/// `cycle,k_cycle,running_mean,running_std`; the running columns are empty
/// during inactive cycles.
pub fn keff_csv(result: &RunResult) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["cycle", "k_cycle", "running_mean", "running_std"])?;
    let t = &result.tallies;
    let running = running_statistics(&t.keff_cycle, result.config.inactive_cycles);
    for (cycle, (k, stats)) in t.keff_cycle.iter().zip(running).enumerate() {
        let (mean, std) = match stats {
            Some((m, s)) => (format!("{m:.17e}"), format!("{s:.17e}")),
            None => (String::new(), String::new()),
        };
        w.write_record([cycle.to_string(), format!("{k:.17e}"), mean, std])?;
    }
    to_bytes(w)
}

/// `cell,group,value,rel_err`.
pub fn flux_csv(result: &RunResult) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["cell", "group", "value", "rel_err"])?;
    let t = &result.tallies;
    for cell in 0..t.cells {
        for g in 0..t.groups {
            let i = cell * t.groups + g;
            w.write_record([
                cell.to_string(),
                g.to_string(),
                format!("{:.17e}", t.flux[i]),
                format!("{:.6e}", t.flux_rel_err[i]),
            ])?;
        }
    }
    to_bytes(w)
}

/// One row per bank sort.
pub fn presortedness_trace(rows: &[TraceRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record([
            "cycle",
            "event_pass",
            "inversion_fraction",
            "sorted_runs",
            "n",
            "comparisons",
            "bitonic_comparators",
        ])?;
    }
    to_bytes(w)
}

/// Writes `keff.csv`, `flux.csv` and `presort_trace.csv` into `dir`.
pub fn write_run_outputs(result: &RunResult, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_atomic(&dir.join("keff.csv"), &keff_csv(result)?)?;
    write_atomic(&dir.join("flux.csv"), &flux_csv(result)?)?;
    write_atomic(&dir.join("presort_trace.csv"), &presortedness_trace(&result.trace)?)?;
    Ok(())
}

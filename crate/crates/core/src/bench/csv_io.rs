use std::path::Path;

use super::sweep::BenchRecord;
use crate::error::{Error, Result};
use crate::fsutil::write_atomic;

pub const CSV_HEADER: [&str; 8] = [
    "algorithm",
    "n",
    "r",
    "median_nanos",
    "min_nanos",
    "comparisons",
    "stages",
    "repetitions",
];

/// Writes measured records as CSV. Skipped rows are left out. The file is
/// replaced atomically.
pub fn write_csv(records: &[BenchRecord], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for rec in records.iter().filter(|r| r.is_measured()) {
        w.write_record([
            rec.algorithm.as_str().to_string(),
            rec.n.to_string(),
            rec.r.map(|r| r.to_string()).unwrap_or_default(),
            rec.median_nanos.to_string(),
            rec.min_nanos.to_string(),
            rec.comparisons.to_string(),
            rec.stages.to_string(),
            rec.repetitions.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io(path, e.into_error()))?;
    write_atomic(path, &bytes)
}

/// Reads a file produced by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<BenchRecord>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Config(format!("{}: {other:?}", path.display())),
    })?;
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(Error::Parse {
            path: path.display().to_string(),
            line: 1,
            message: format!("expected header {}", CSV_HEADER.join(",")),
        });
    }
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let line = i + 2;
        let bad = |what: &str| Error::Parse {
            path: path.display().to_string(),
            line,
            message: format!("bad {what}"),
        };
        let num = |idx: usize, what: &str| row[idx].parse::<u64>().map_err(|_| bad(what));
        out.push(BenchRecord {
            algorithm: row[0].parse().map_err(|_| bad("algorithm"))?,
            n: num(1, "n")? as usize,
            r: if row[2].is_empty() {
                None
            } else {
                Some(row[2].parse().map_err(|_| bad("r"))?)
            },
            median_nanos: num(3, "median_nanos")?,
            min_nanos: num(4, "min_nanos")?,
            comparisons: num(5, "comparisons")?,
            stages: num(6, "stages")?,
            repetitions: num(7, "repetitions")? as usize,
            skipped: None,
        });
    }
    Ok(out)
}

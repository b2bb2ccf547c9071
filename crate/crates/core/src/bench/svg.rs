//! Log-log line plots written as standalone SVG.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::sweep::BenchRecord;
use crate::error::{Error, Result};
use crate::fsutil::write_atomic;
use crate::sort::AlgorithmId;

/// Where `r = 0` rows are drawn on a logarithmic ratio axis.
pub const R_FLOOR: f64 = 1e-7;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 560.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 70.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum XAxis {
    /// Array size.
    N,
    /// Swap ratio.
    R,
}

/// Maps positive values onto a pixel range on a base-10 log scale.
#[derive(Debug, Clone, Copy)]
pub struct LogAxis {
    lo: f64,
    hi: f64,
    px_start: f64,
    px_end: f64,
}

impl LogAxis {
    /// Axis covering `[min, max]`, widened to whole decades.
    pub fn new(min: f64, max: f64, px_start: f64, px_end: f64) -> Self {
        let mut lo = min.log10().floor();
        let mut hi = max.log10().ceil();
        if hi <= lo {
            lo -= 0.5;
            hi += 0.5;
        }
        Self {
            lo,
            hi,
            px_start,
            px_end,
        }
    }

    pub fn position(&self, v: f64) -> f64 {
        self.px_start + (v.log10() - self.lo) / (self.hi - self.lo) * (self.px_end - self.px_start)
    }

    fn decades(&self) -> impl Iterator<Item = i32> {
        (self.lo.ceil() as i32)..=(self.hi.floor() as i32)
    }
}

fn x_value(rec: &BenchRecord, axis: XAxis) -> Result<f64> {
    let v = match axis {
        XAxis::N => rec.n as f64,
        XAxis::R => match rec.r {
            Some(0.0) => R_FLOOR,
            Some(r) => r,
            None => {
                return Err(Error::invalid(format!(
                    "record {} n={} has no swap ratio to plot",
                    rec.algorithm, rec.n
                )))
            }
        },
    };
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::invalid(format!(
            "record {} n={} r={:?} has a non-positive x value",
            rec.algorithm, rec.n, rec.r
        )))
    }
}

/// Renders median time against `x` on log-log axes, one polyline per
/// algorithm.
pub fn loglog_svg(records: &[BenchRecord], x: XAxis) -> Result<String> {
    let measured: Vec<&BenchRecord> = records.iter().filter(|r| r.is_measured()).collect();
    if measured.is_empty() {
        return Err(Error::invalid("nothing to plot: no measured records"));
    }
    let mut series: BTreeMap<AlgorithmId, Vec<(f64, f64)>> = BTreeMap::new();
    for rec in &measured {
        let xv = x_value(rec, x)?;
        if rec.median_nanos == 0 {
            return Err(Error::invalid(format!(
                "record {} n={} r={:?} has a non-positive median time",
                rec.algorithm, rec.n, rec.r
            )));
        }
        series
            .entry(rec.algorithm)
            .or_default()
            .push((xv, rec.median_nanos as f64));
    }
    for pts in series.values_mut() {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    let all = series.values().flatten();
    let (xmin, xmax, ymin, ymax) = all.fold(
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
    );
    let xa = LogAxis::new(xmin, xmax, LEFT, WIDTH - RIGHT);
    let ya = LogAxis::new(ymin, ymax, HEIGHT - BOTTOM, TOP);
    let (x_label, title) = match x {
        XAxis::N => ("array size n (elements)", "Sort time vs. array size"),
        XAxis::R => ("swap ratio r (dimensionless)", "Sort time vs. swap ratio"),
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{title}</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0
    );
    // grid and ticks
    let _ = writeln!(s, r##"<g stroke="#dddddd" stroke-width="1">"##);
    for d in xa.decades() {
        let px = xa.position(10f64.powi(d));
        let _ = writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{TOP}" x2="{px:.2}" y2="{}"/>"#,
            HEIGHT - BOTTOM
        );
    }
    for d in ya.decades() {
        let py = ya.position(10f64.powi(d));
        let _ = writeln!(
            s,
            r#"<line x1="{LEFT}" y1="{py:.2}" x2="{}" y2="{py:.2}"/>"#,
            WIDTH - RIGHT
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g text-anchor="middle">"#);
    for d in xa.decades() {
        let px = xa.position(10f64.powi(d));
        let _ = writeln!(s, r#"<text x="{px:.2}" y="{}">1e{d}</text>"#, HEIGHT - BOTTOM + 18.0);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g text-anchor="end">"#);
    for d in ya.decades() {
        let py = ya.position(10f64.powi(d));
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}">1e{d}</text>"#, LEFT - 6.0, py + 4.0);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - RIGHT - LEFT,
        HEIGHT - BOTTOM - TOP
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{x_label}</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        HEIGHT - 24.0
    );
    let _ = writeln!(
        s,
        r#"<text x="22" y="{0}" text-anchor="middle" transform="rotate(-90 22 {0})">median time (ns)</text>"#,
        (TOP + HEIGHT - BOTTOM) / 2.0
    );

    for (i, (alg, pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", xa.position(x), ya.position(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            coords.join(" ")
        );
        let ly = TOP + 16.0 + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{alg}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Writes [`loglog_svg`] output to `path`.
pub fn render_loglog_svg(records: &[BenchRecord], x: XAxis, path: &Path) -> Result<()> {
    let svg = loglog_svg(records, x)?;
    write_atomic(path, svg.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_spacing_per_factor() {
        let axis = LogAxis::new(1024.0, (1u64 << 30) as f64, 0.0, 600.0);
        let p = |e: i32| axis.position(2f64.powi(e));
        let a = p(20) - p(10);
        let b = p(30) - p(20);
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn zero_ratio_uses_floor() {
        let rec = BenchRecord {
            algorithm: AlgorithmId::BitonicNetwork,
            n: 8,
            r: Some(0.0),
            median_nanos: 1,
            min_nanos: 1,
            comparisons: 0,
            stages: 0,
            repetitions: 1,
            skipped: None,
        };
        assert_eq!(x_value(&rec, XAxis::R).unwrap(), R_FLOOR);
        let size_row = BenchRecord { r: None, ..rec };
        assert!(x_value(&size_row, XAxis::R).is_err());
    }
}

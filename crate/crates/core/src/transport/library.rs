//! Multi-group microscopic cross-section libraries.
//!
//! Text grammar (whitespace separated, `#` starts a comment):
//!
//! ```text
//! library   := "groups" G nuclide*
//! nuclide   := "nuclide" NAME entry* "end"
//! entry     := "total" G numbers
//!            | "scatter" G*G numbers      # row g holds g -> g', g' = 0..G
//!            | "fission" G numbers        # optional, default 0
//!            | "nu" G numbers             # optional, default 0
//!            | "chi" G numbers            # optional, default all in group 0
//! ```
//!
//! Numbers may wrap across lines. Cross sections are in barns; group 0 is the
//! highest energy group.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

pub const SYNTHETIC_23G: &str = include_str!("../../data/synthetic_23g.lib");
pub const TEST_1G: &str = include_str!("../../data/test_1g.lib");
pub const TEST_2G: &str = include_str!("../../data/test_2g.lib");

const CHI_TOLERANCE: f64 = 1e-12;

/// Microscopic data of one nuclide.
#[derive(Debug, Clone, PartialEq)]
pub struct NuclideXs {
    pub total: Vec<f64>,
    /// Row-major `G x G`: `scatter[g * G + h]` is the `g -> h` transfer.
    pub scatter: Vec<f64>,
    pub fission: Vec<f64>,
    pub nu: Vec<f64>,
    pub chi: Vec<f64>,
}

impl NuclideXs {
    pub fn groups(&self) -> usize {
        self.total.len()
    }

    pub fn scatter_out(&self, g: usize) -> f64 {
        let n = self.groups();
        self.scatter[g * n..(g + 1) * n].iter().sum()
    }

    fn validate(&self, name: &str) -> std::result::Result<(), String> {
        let g = self.groups();
        if self.scatter.len() != g * g || [&self.fission, &self.nu, &self.chi].iter().any(|v| v.len() != g) {
            return Err(format!("{name}: inconsistent vector lengths"));
        }
        let all = [&self.total, &self.scatter, &self.fission, &self.nu, &self.chi];
        if all.iter().flat_map(|v| v.iter()).any(|x| !x.is_finite() || *x < 0.0) {
            return Err(format!("{name}: cross sections must be finite and non-negative"));
        }
        for grp in 0..g {
            let out = self.scatter_out(grp) + self.fission[grp];
            if out > self.total[grp] * (1.0 + 1e-12) {
                return Err(format!(
                    "{name}: group {grp} scatter + fission ({out}) exceeds total ({})",
                    self.total[grp]
                ));
            }
        }
        let chi_sum: f64 = self.chi.iter().sum();
        if (chi_sum - 1.0).abs() > CHI_TOLERANCE {
            return Err(format!("{name}: chi sums to {chi_sum}, expected 1"));
        }
        Ok(())
    }
}

/// A multi-group microscopic library keyed by nuclide name.
#[derive(Debug, Clone, PartialEq)]
pub struct MicroLibrary {
    groups: usize,
    nuclides: BTreeMap<String, NuclideXs>,
}

impl MicroLibrary {
    pub fn new(groups: usize) -> Self {
        Self {
            groups,
            nuclides: BTreeMap::new(),
        }
    }

    pub fn groups(&self) -> usize {
        self.groups
    }

    pub fn get(&self, nuclide: &str) -> Option<&NuclideXs> {
        self.nuclides.get(nuclide)
    }

    pub fn nuclides(&self) -> impl Iterator<Item = (&str, &NuclideXs)> {
        self.nuclides.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Adds or replaces a nuclide after checking its consistency.
    pub fn insert(&mut self, name: &str, xs: NuclideXs) -> Result<()> {
        if xs.groups() != self.groups {
            return Err(Error::invalid(format!(
                "{name}: {} groups in a {}-group library",
                xs.groups(),
                self.groups
            )));
        }
        xs.validate(name).map_err(Error::InvalidArgument)?;
        self.nuclides.insert(name.to_string(), xs);
        Ok(())
    }

    /// A one-group library giving every listed nuclide `total` barns of pure
    /// capture.
    pub fn uniform_one_group(names: &[&str], total: f64) -> Self {
        let mut lib = MicroLibrary::new(1);
        for name in names {
            lib.insert(
                name,
                NuclideXs {
                    total: vec![total],
                    scatter: vec![0.0],
                    fission: vec![0.0],
                    nu: vec![0.0],
                    chi: vec![1.0],
                },
            )
            .expect("valid one-group data");
        }
        lib
    }

    pub fn parse(text: &str, source: &str) -> Result<Self> {
        Parser::new(text, source).library()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Serializes in the library grammar. Numbers use the shortest
    /// representation that parses back exactly.
    pub fn to_text(&self) -> String {
        let mut s = format!("groups {}\n", self.groups);
        let row = |s: &mut String, key: &str, v: &[f64]| {
            let _ = write!(s, "{key}");
            for x in v {
                let _ = write!(s, " {x:e}");
            }
            s.push('\n');
        };
        for (name, xs) in &self.nuclides {
            let _ = writeln!(s, "\nnuclide {name}");
            row(&mut s, "total", &xs.total);
            s.push_str("scatter\n");
            for g in 0..self.groups {
                row(&mut s, " ", &xs.scatter[g * self.groups..(g + 1) * self.groups]);
            }
            if xs.fission.iter().any(|&f| f > 0.0) {
                row(&mut s, "fission", &xs.fission);
                row(&mut s, "nu", &xs.nu);
                row(&mut s, "chi", &xs.chi);
            }
            s.push_str("end\n");
        }
        s
    }
}

struct Token<'a> {
    text: &'a str,
    line: usize,
}

struct Parser<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    source: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, source: &'a str) -> Self {
        let tokens = text
            .lines()
            .enumerate()
            .flat_map(|(i, l)| {
                l.split('#')
                    .next()
                    .unwrap_or("")
                    .split_whitespace()
                    .map(move |t| Token { text: t, line: i + 1 })
            })
            .collect();
        Self { tokens, pos: 0, source }
    }

    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.source.to_string(),
            line,
            message: message.into(),
        }
    }

    fn last_line(&self) -> usize {
        self.tokens.last().map_or(1, |t| t.line)
    }

    fn next(&mut self) -> Option<&Token<'a>> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn expect_word(&mut self, word: &str) -> Result<usize> {
        match self.next() {
            Some(t) if t.text == word => Ok(t.line),
            Some(t) => {
                let (line, text) = (t.line, t.text.to_string());
                Err(self.err(line, format!("expected `{word}`, found `{text}`")))
            }
            None => Err(self.err(self.last_line(), format!("expected `{word}`, found end of input"))),
        }
    }

    fn numbers(&mut self, count: usize, what: &str) -> Result<Vec<f64>> {
        let mut v = Vec::with_capacity(count);
        for _ in 0..count {
            let Some(t) = self.next() else {
                return Err(self.err(self.last_line(), format!("`{what}` needs {count} values")));
            };
            let (line, text) = (t.line, t.text);
            let x: f64 = text
                .parse()
                .map_err(|_| self.err(line, format!("`{what}`: `{text}` is not a number")))?;
            v.push(x);
        }
        Ok(v)
    }

    fn library(mut self) -> Result<MicroLibrary> {
        self.expect_word("groups")?;
        let groups = self.numbers(1, "groups")?[0];
        if groups < 1.0 || groups.fract() != 0.0 {
            return Err(self.err(1, format!("group count must be a positive integer, got {groups}")));
        }
        let g = groups as usize;
        let mut lib = MicroLibrary::new(g);
        while self.pos < self.tokens.len() {
            let line = self.expect_word("nuclide")?;
            let name = match self.next() {
                Some(t) => t.text.to_string(),
                None => return Err(self.err(line, "nuclide without a name")),
            };
            let mut total = None;
            let mut scatter = None;
            let mut fission = vec![0.0; g];
            let mut nu = vec![0.0; g];
            let mut chi = None;
            loop {
                let Some(t) = self.next() else {
                    return Err(self.err(self.last_line(), format!("nuclide {name}: missing `end`")));
                };
                let (kline, key) = (t.line, t.text);
                match key {
                    "total" => total = Some(self.numbers(g, key)?),
                    "scatter" => scatter = Some(self.numbers(g * g, key)?),
                    "fission" => fission = self.numbers(g, key)?,
                    "nu" => nu = self.numbers(g, key)?,
                    "chi" => chi = Some(self.numbers(g, key)?),
                    "end" => break,
                    other => return Err(self.err(kline, format!("unknown entry `{other}`"))),
                }
            }
            let (Some(total), Some(scatter)) = (total, scatter) else {
                return Err(self.err(line, format!("nuclide {name} needs `total` and `scatter`")));
            };
            let chi = chi.unwrap_or_else(|| {
                let mut c = vec![0.0; g];
                c[0] = 1.0;
                c
            });
            let xs = NuclideXs {
                total,
                scatter,
                fission,
                nu,
                chi,
            };
            xs.validate(&name).map_err(|m| self.err(line, m))?;
            lib.nuclides.insert(name, xs);
        }
        Ok(lib)
    }
}

/// Bundled synthetic 23-group library.
pub fn synthetic_23g() -> MicroLibrary {
    MicroLibrary::parse(SYNTHETIC_23G, "synthetic_23g.lib").expect("bundled library parses")
}

pub fn test_1g() -> MicroLibrary {
    MicroLibrary::parse(TEST_1G, "test_1g.lib").expect("bundled library parses")
}

pub fn test_2g() -> MicroLibrary {
    MicroLibrary::parse(TEST_2G, "test_2g.lib").expect("bundled library parses")
}

/// Builds the synthetic library shipped as `synthetic_23g.lib`.
///
/// The data are smooth made-up shapes with plausible magnitudes: moderator
/// slowing-down by one or two groups, 1/v capture, a resonance capture band
/// for U-238 and a fission spectrum concentrated in the top groups. They
/// exist to give transport a realistic event mix, not to reproduce any
/// evaluated data.
pub fn build_synthetic_library(groups: usize) -> MicroLibrary {
    struct Shape {
        name: &'static str,
        scatter: f64,
        down: f64,
        capture_fast: f64,
        capture_thermal: f64,
        resonance: f64,
        fission_fast: f64,
        fission_thermal: f64,
        nu: f64,
    }
    let shapes = [
        Shape {
            name: "B-10",
            scatter: 2.2,
            down: 0.15,
            capture_fast: 0.2,
            capture_thermal: 3840.0,
            resonance: 0.0,
            fission_fast: 0.0,
            fission_thermal: 0.0,
            nu: 0.0,
        },
        Shape {
            name: "B-11",
            scatter: 4.8,
            down: 0.15,
            capture_fast: 1e-4,
            capture_thermal: 5e-3,
            resonance: 0.0,
            fission_fast: 0.0,
            fission_thermal: 0.0,
            nu: 0.0,
        },
        Shape {
            name: "C-12",
            scatter: 4.7,
            down: 0.12,
            capture_fast: 1e-5,
            capture_thermal: 3.4e-3,
            resonance: 0.0,
            fission_fast: 0.0,
            fission_thermal: 0.0,
            nu: 0.0,
        },
        Shape {
            name: "C-13",
            scatter: 4.2,
            down: 0.11,
            capture_fast: 1e-5,
            capture_thermal: 1.4e-3,
            resonance: 0.0,
            fission_fast: 0.0,
            fission_thermal: 0.0,
            nu: 0.0,
        },
        Shape {
            name: "O-16",
            scatter: 3.8,
            down: 0.08,
            capture_fast: 1e-4,
            capture_thermal: 1.9e-4,
            resonance: 0.0,
            fission_fast: 0.0,
            fission_thermal: 0.0,
            nu: 0.0,
        },
        Shape {
            name: "Si-28",
            scatter: 2.2,
            down: 0.05,
            capture_fast: 1e-3,
            capture_thermal: 0.17,
            resonance: 0.0,
            fission_fast: 0.0,
            fission_thermal: 0.0,
            nu: 0.0,
        },
        Shape {
            name: "Si-29",
            scatter: 2.6,
            down: 0.05,
            capture_fast: 1e-3,
            capture_thermal: 0.12,
            resonance: 0.0,
            fission_fast: 0.0,
            fission_thermal: 0.0,
            nu: 0.0,
        },
        Shape {
            name: "Si-30",
            scatter: 2.5,
            down: 0.05,
            capture_fast: 1e-3,
            capture_thermal: 0.11,
            resonance: 0.0,
            fission_fast: 0.0,
            fission_thermal: 0.0,
            nu: 0.0,
        },
        Shape {
            name: "U-235",
            scatter: 11.0,
            down: 0.01,
            capture_fast: 0.1,
            capture_thermal: 99.0,
            resonance: 20.0,
            fission_fast: 1.2,
            fission_thermal: 585.0,
            nu: 2.43,
        },
        Shape {
            name: "U-238",
            scatter: 9.0,
            down: 0.01,
            capture_fast: 0.07,
            capture_thermal: 2.7,
            resonance: 60.0,
            fission_fast: 0.5,
            fission_thermal: 0.0,
            nu: 2.8,
        },
    ];
    let gmax = (groups - 1).max(1) as f64;
    // fission spectrum over the fastest groups
    let mut chi: Vec<f64> = (0..groups)
        .map(|g| if g < 6 { (-(g as f64) / 1.5).exp() } else { 0.0 })
        .collect();
    let chi_sum: f64 = chi.iter().sum();
    chi.iter_mut().for_each(|c| *c /= chi_sum);
    let resonance_band = (groups * 10 / 23)..(groups * 15 / 23).max(groups * 10 / 23 + 1);

    let mut lib = MicroLibrary::new(groups);
    for s in &shapes {
        let mut total = vec![0.0; groups];
        let mut scatter = vec![0.0; groups * groups];
        let mut fission = vec![0.0; groups];
        let mut nu = vec![0.0; groups];
        for g in 0..groups {
            let t = g as f64 / gmax;
            let row = &mut scatter[g * groups..(g + 1) * groups];
            let down = if g + 1 < groups { s.down * s.scatter } else { 0.0 };
            row[g] = s.scatter - down;
            if g + 2 < groups {
                row[g + 1] = 0.7 * down;
                row[g + 2] = 0.3 * down;
            } else if g + 1 < groups {
                row[g + 1] = down;
            }
            // geometric interpolation gives a 1/v-like rise towards thermal
            let mut capture = s.capture_fast * (s.capture_thermal / s.capture_fast).powf(t.powi(3));
            if resonance_band.contains(&g) {
                capture += s.resonance;
            }
            if s.fission_fast > 0.0 {
                fission[g] = if s.fission_thermal > 0.0 {
                    s.fission_fast * (s.fission_thermal / s.fission_fast).powf(t.powi(3))
                } else if g < 3 {
                    s.fission_fast
                } else {
                    0.0
                };
                nu[g] = if fission[g] > 0.0 { s.nu + 0.2 * (1.0 - t) } else { 0.0 };
            }
            total[g] = s.scatter + capture + fission[g];
        }
        let fissile = fission.iter().any(|&f| f > 0.0);
        let nuclide_chi = if fissile {
            chi.clone()
        } else {
            let mut c = vec![0.0; groups];
            c[0] = 1.0;
            c
        };
        lib.insert(
            s.name,
            NuclideXs {
                total,
                scatter,
                fission,
                nu,
                chi: nuclide_chi,
            },
        )
        .expect("synthetic data are consistent");
    }
    lib
}

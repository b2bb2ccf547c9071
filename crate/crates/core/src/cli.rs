//! The `sortmc` command line.
//!
//! ```text
//! sortmc sortbench size   [--sizes 1024,4096] [--reps 9]
//! sortmc sortbench ratio  [--n 1048576] [--ratios 1e-7,1e-5,1]
//! sortmc mc run           [--particles N] [--inactive N] [--cycles N] [--sort-mode M]
//! sortmc report plot      --input size_sweep.csv
//! ```
//!
//! Every subcommand accepts `--config <file>`, `--seed`, `--workers`
//! (default from `SORTMC_WORKERS`), `--out` and `--dump-config`. Flags
//! override values from the config file. Exit status is 0 on success, 1 for
//! invalid input and 2 for runtime failures.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::bench::{
    read_csv, render_loglog_svg, run_ratio_sweep, run_size_sweep, write_csv, BenchRecord, SweepConfig, XAxis,
};
use crate::error::{Error, Result};
use crate::sort::AlgorithmId;
use crate::transport::{
    htr10_materials, load_materials, run_eigenvalue, synthetic_23g, test_1g, test_2g, write_run_outputs, Boundary,
    CycleConfig, KeyScheme, MaterialSpec, MicroLibrary, Problem, RunOptions, SortMode, SortStrategy, FUEL_ZONE_RADIUS,
    PEBBLE_RADIUS,
};

const BUILTIN: &str = "builtin:";

/// A complete run description, as read from `--config` files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RunConfig {
    SortbenchSize {
        #[serde(default)]
        sweep: SweepConfig,
        #[serde(default = "default_out")]
        output_dir: PathBuf,
    },
    SortbenchRatio {
        #[serde(default)]
        sweep: SweepConfig,
        #[serde(default = "default_out")]
        output_dir: PathBuf,
    },
    McRun {
        #[serde(default)]
        transport: TransportConfig,
        #[serde(default = "default_out")]
        output_dir: PathBuf,
    },
    Report {
        input: PathBuf,
        /// Inferred from the CSV when absent.
        #[serde(default)]
        x: Option<XAxis>,
        #[serde(default = "default_out")]
        output_dir: PathBuf,
    },
}

fn default_out() -> PathBuf {
    PathBuf::from("results")
}

/// Payload of an `mc-run` config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransportConfig {
    /// `pebble`, `bare-pebble` or `infinite:<material name>`.
    #[serde(default = "default_geometry")]
    pub geometry: String,
    /// Material file path, or `builtin:htr10`.
    #[serde(default = "default_materials")]
    pub materials: String,
    /// Library file path, or `builtin:test-1g`, `builtin:test-2g`,
    /// `builtin:synthetic-23g`.
    #[serde(default = "default_library")]
    pub library: String,
    #[serde(default)]
    pub cycle: CycleConfig,
    #[serde(default)]
    pub strategy: SortStrategy,
    #[serde(default = "one")]
    pub workers: usize,
}

fn default_geometry() -> String {
    "pebble".into()
}

fn default_materials() -> String {
    format!("{BUILTIN}htr10")
}

fn default_library() -> String {
    format!("{BUILTIN}test-2g")
}

fn one() -> usize {
    1
}

impl Default for TransportConfig {
    fn default() -> Self {
        Self {
            geometry: default_geometry(),
            materials: default_materials(),
            library: default_library(),
            cycle: CycleConfig::default(),
            strategy: SortStrategy::default(),
            workers: 1,
        }
    }
}

impl TransportConfig {
    fn materials(&self) -> Result<Vec<MaterialSpec>> {
        match self.materials.strip_prefix(BUILTIN) {
            Some("htr10") => Ok(htr10_materials()),
            Some(other) => Err(Error::Config(format!("materials: unknown builtin `{other}`"))),
            None => load_materials(Path::new(&self.materials)),
        }
    }

    fn library(&self) -> Result<MicroLibrary> {
        match self.library.strip_prefix(BUILTIN) {
            Some("test-1g") => Ok(test_1g()),
            Some("test-2g") => Ok(test_2g()),
            Some("synthetic-23g") => Ok(synthetic_23g()),
            Some(other) => Err(Error::Config(format!("library: unknown builtin `{other}`"))),
            None => MicroLibrary::load(Path::new(&self.library)),
        }
    }

    /// Builds the problem described by the geometry, material and library
    /// fields.
    pub fn problem(&self) -> Result<Problem> {
        let specs = self.materials()?;
        let lib = self.library()?;
        let shells = [
            (FUEL_ZONE_RADIUS, "Fuel kernel"),
            (PEBBLE_RADIUS, "Pebble Carbon matrix"),
        ];
        match self.geometry.as_str() {
            "pebble" => Problem::from_shells(&shells, Boundary::Reflective, &specs, &lib),
            "bare-pebble" => Problem::from_shells(&shells, Boundary::Vacuum, &specs, &lib),
            g => match g.strip_prefix("infinite:") {
                Some(name) => Problem::infinite_named(name, &specs, &lib),
                None => Err(Error::Config(format!(
                    "geometry: expected `pebble`, `bare-pebble` or `infinite:<material>`, got `{g}`"
                ))),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        self.cycle.validate()?;
        self.strategy.validate()
    }
}

impl RunConfig {
    pub fn output_dir(&self) -> &Path {
        match self {
            RunConfig::SortbenchSize { output_dir, .. }
            | RunConfig::SortbenchRatio { output_dir, .. }
            | RunConfig::McRun { output_dir, .. }
            | RunConfig::Report { output_dir, .. } => output_dir,
        }
    }

    fn mode_name(&self) -> &'static str {
        match self {
            RunConfig::SortbenchSize { .. } => "sortbench-size",
            RunConfig::SortbenchRatio { .. } => "sortbench-ratio",
            RunConfig::McRun { .. } => "mc-run",
            RunConfig::Report { .. } => "report",
        }
    }

    /// Parses a JSON config; syntax errors carry line and column.
    pub fn from_json(text: &str, source: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            path: source.to_string(),
            line: e.line(),
            message: format!("column {}: {e}", e.column()),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text, &path.display().to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RunConfig::SortbenchSize { sweep, .. } | RunConfig::SortbenchRatio { sweep, .. } => sweep.validate(),
            RunConfig::McRun { transport, .. } => transport.validate(),
            RunConfig::Report { .. } => Ok(()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "sortmc",
    version,
    about = "Sorting benchmarks and an event-based Monte Carlo transport mini-app"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, env = "SORTMC_WORKERS")]
    workers: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Print the effective configuration as JSON and exit.
    #[arg(long, global = true)]
    dump_config: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sorting benchmarks.
    #[command(subcommand)]
    Sortbench(SortbenchCommand),
    /// Monte Carlo transport.
    #[command(subcommand)]
    Mc(McCommand),
    /// Plots from existing results.
    #[command(subcommand)]
    Report(ReportCommand),
}

#[derive(Debug, Args)]
struct SweepFlags {
    /// Algorithms to time, comma separated.
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<AlgorithmId>>,
    /// Timed repetitions per row.
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    warmup: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum SortbenchCommand {
    /// Time against array size on uniform random input.
    Size {
        #[command(flatten)]
        sweep: SweepFlags,
        /// Array sizes, comma separated.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
    },
    /// Time against swap ratio on partially sorted input.
    Ratio {
        #[command(flatten)]
        sweep: SweepFlags,
        /// Array size.
        #[arg(long)]
        n: Option<usize>,
        /// Swap ratios, comma separated.
        #[arg(long, value_delimiter = ',')]
        ratios: Option<Vec<f64>>,
    },
}

#[derive(Debug, Subcommand)]
enum McCommand {
    /// Run a k-eigenvalue calculation.
    Run {
        /// `pebble`, `bare-pebble` or `infinite:<material>`.
        #[arg(long)]
        geometry: Option<String>,
        /// Material file, or `builtin:htr10`.
        #[arg(long)]
        materials: Option<String>,
        /// Library file, or `builtin:test-1g|test-2g|synthetic-23g`.
        #[arg(long)]
        library: Option<String>,
        #[arg(long)]
        particles: Option<usize>,
        #[arg(long)]
        inactive: Option<usize>,
        /// Total cycles, inactive included.
        #[arg(long)]
        cycles: Option<usize>,
        #[arg(long, value_parser = parse_sort_mode)]
        sort_mode: Option<SortMode>,
        #[arg(long)]
        k_events: Option<usize>,
        #[arg(long, value_parser = parse_key_scheme)]
        key_scheme: Option<KeyScheme>,
    },
}

#[derive(Debug, Subcommand)]
enum ReportCommand {
    /// Render a log-log SVG from a sweep CSV.
    Plot {
        #[arg(long)]
        input: Option<PathBuf>,
        /// `n` or `r`; inferred from the CSV when omitted.
        #[arg(long, value_parser = parse_x_axis)]
        x: Option<XAxis>,
    },
}

fn parse_kebab<T: for<'de> Deserialize<'de>>(s: &str) -> std::result::Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn parse_sort_mode(s: &str) -> std::result::Result<SortMode, String> {
    parse_kebab(s)
}

fn parse_key_scheme(s: &str) -> std::result::Result<KeyScheme, String> {
    parse_kebab(s)
}

fn parse_x_axis(s: &str) -> std::result::Result<XAxis, String> {
    parse_kebab(s)
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn apply_sweep_flags(sweep: &mut SweepConfig, flags: SweepFlags, global: &GlobalArgs) {
    set(&mut sweep.algorithms, flags.algorithms);
    set(&mut sweep.repetitions, flags.reps);
    set(&mut sweep.warmup, flags.warmup);
    set(&mut sweep.seed, global.seed);
    set(&mut sweep.workers, global.workers);
}

/// Combines the config file (if any) with command line flags.
fn resolve(cli: Cli) -> Result<RunConfig> {
    let base = cli.global.config.as_deref().map(RunConfig::load).transpose()?;
    let global = &cli.global;
    let mismatch = |want: &str, got: &RunConfig| {
        Error::Config(format!(
            "config mode `{}` does not match subcommand `{want}`",
            got.mode_name()
        ))
    };
    let mut cfg = match cli.command {
        Command::Sortbench(SortbenchCommand::Size { sweep: flags, sizes }) => {
            let (mut sweep, output_dir) = match base {
                None => (SweepConfig::default(), default_out()),
                Some(RunConfig::SortbenchSize { sweep, output_dir }) => (sweep, output_dir),
                Some(other) => return Err(mismatch("sortbench size", &other)),
            };
            apply_sweep_flags(&mut sweep, flags, global);
            set(&mut sweep.sizes, sizes);
            RunConfig::SortbenchSize { sweep, output_dir }
        }
        Command::Sortbench(SortbenchCommand::Ratio {
            sweep: flags,
            n,
            ratios,
        }) => {
            let (mut sweep, output_dir) = match base {
                None => (SweepConfig::default(), default_out()),
                Some(RunConfig::SortbenchRatio { sweep, output_dir }) => (sweep, output_dir),
                Some(other) => return Err(mismatch("sortbench ratio", &other)),
            };
            apply_sweep_flags(&mut sweep, flags, global);
            set(&mut sweep.fixed_n, n);
            set(&mut sweep.ratios, ratios);
            RunConfig::SortbenchRatio { sweep, output_dir }
        }
        Command::Mc(McCommand::Run {
            geometry,
            materials,
            library,
            particles,
            inactive,
            cycles,
            sort_mode,
            k_events,
            key_scheme,
        }) => {
            let (mut t, output_dir) = match base {
                None => (TransportConfig::default(), default_out()),
                Some(RunConfig::McRun { transport, output_dir }) => (transport, output_dir),
                Some(other) => return Err(mismatch("mc run", &other)),
            };
            set(&mut t.geometry, geometry);
            set(&mut t.materials, materials);
            set(&mut t.library, library);
            set(&mut t.cycle.particles_per_cycle, particles);
            set(&mut t.cycle.inactive_cycles, inactive);
            set(&mut t.cycle.total_cycles, cycles);
            set(&mut t.cycle.seed, global.seed);
            set(&mut t.strategy.mode, sort_mode);
            set(&mut t.strategy.k_events, k_events);
            set(&mut t.strategy.key_scheme, key_scheme);
            set(&mut t.workers, global.workers);
            RunConfig::McRun {
                transport: t,
                output_dir,
            }
        }
        Command::Report(ReportCommand::Plot { input, x }) => {
            let (base_input, base_x, output_dir) = match base {
                None => (None, None, default_out()),
                Some(RunConfig::Report { input, x, output_dir }) => (Some(input), x, output_dir),
                Some(other) => return Err(mismatch("report plot", &other)),
            };
            let input = input
                .or(base_input)
                .ok_or_else(|| Error::Config("report plot needs --input or a config with `input`".into()))?;
            RunConfig::Report {
                input,
                x: x.or(base_x),
                output_dir,
            }
        }
    };
    if let Some(out) = cli.global.out {
        match &mut cfg {
            RunConfig::SortbenchSize { output_dir, .. }
            | RunConfig::SortbenchRatio { output_dir, .. }
            | RunConfig::McRun { output_dir, .. }
            | RunConfig::Report { output_dir, .. } => *output_dir = out,
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_sweep(records: &[BenchRecord], dir: &Path, stem: &str, x: XAxis) -> Result<()> {
    create_dir(dir)?;
    let csv_path = dir.join(format!("{stem}.csv"));
    write_csv(records, &csv_path)?;
    println!("wrote {}", csv_path.display());
    if records.iter().any(BenchRecord::is_measured) {
        let svg_path = dir.join(format!("{stem}.svg"));
        render_loglog_svg(records, x, &svg_path)?;
        println!("wrote {}", svg_path.display());
    }
    for r in records.iter().filter(|r| !r.is_measured()) {
        eprintln!(
            "skipped {} n={}: {}",
            r.algorithm,
            r.n,
            r.skipped.as_deref().unwrap_or_default()
        );
    }
    Ok(())
}

/// Runs a resolved configuration.
pub fn execute(cfg: &RunConfig) -> Result<()> {
    let out = cfg.output_dir();
    match cfg {
        RunConfig::SortbenchSize { sweep, .. } => write_sweep(&run_size_sweep(sweep)?, out, "size_sweep", XAxis::N),
        RunConfig::SortbenchRatio { sweep, .. } => write_sweep(&run_ratio_sweep(sweep)?, out, "ratio_sweep", XAxis::R),
        RunConfig::McRun { transport, .. } => {
            let problem = transport.problem()?;
            let opts = RunOptions {
                workers: transport.workers,
                trace: true,
            };
            let result = run_eigenvalue(&problem, &transport.cycle, &transport.strategy, &opts)?;
            write_run_outputs(&result, out)?;
            println!("keff = {}", result.tallies.keff_display());
            println!("wrote keff.csv, flux.csv, presort_trace.csv to {}", out.display());
            if result.lost > 0 {
                eprintln!("{} of {} histories lost", result.lost, result.histories);
            }
            Ok(())
        }
        RunConfig::Report { input, x, .. } => {
            let records = read_csv(input)?;
            let axis = x.unwrap_or(if records.iter().any(|r| r.r.is_some()) {
                XAxis::R
            } else {
                XAxis::N
            });
            let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("plot");
            create_dir(out)?;
            let svg_path = out.join(format!("{stem}.svg"));
            render_loglog_svg(&records, axis, &svg_path)?;
            println!("wrote {}", svg_path.display());
            Ok(())
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit status.
pub fn parse_and_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let dump = cli.global.dump_config;
    let cfg = match resolve(cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return if e.is_validation() { 1 } else { 2 };
        }
    };
    if dump {
        println!("{}", cfg.to_json());
        return 0;
    }
    match execute(&cfg) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                1
            } else {
                2
            }
        }
    }
}

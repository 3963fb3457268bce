//! Command-line front end for `fdsat-core`.
//!
//! Exit codes: 0 success (or validation pass), 1 statistical validation
//! failure, 2 usage, scenario, validation or I/O error.

pub mod error;
pub mod format;
pub mod output;
pub mod scenario;
pub mod sweep;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fdsat_core::stats::DEFAULT_Z_MAX;
use fdsat_core::{compare, run, NetworkConfig, QueueDiscipline};

pub use error::CliError;
use output::{
    ConfigJson, CountersJson, ReportJson, RunJson, SimulateJson, StdErrorJson, TheoryJson,
    ValidateJson,
};
use scenario::{Preset, Scenario, SimBlock, SimSettings, SweepSpec};

#[derive(Debug, Parser)]
#[command(
    name = "fdsat",
    version,
    about = "Saturation throughput of a full-duplex AP with mixed FD/HD stations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form per-flow throughputs.
    Theory {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write to this file instead of stdout.
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo run with theory values alongside.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        sim: SimArgs,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form throughputs across station mixes, as CSV.
    Sweep {
        /// JSON sweep description; flags below are ignored when given.
        #[arg(long, conflicts_with_all = ["total_stations", "m", "preset"])]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 40)]
        total_stations: u32,
        /// Full-duplex station counts (default: every value 0..=total).
        #[arg(long, value_delimiter = ',')]
        m: Vec<u32>,
        /// Presets to sweep (default: dca,fair).
        #[arg(long, value_enum, value_delimiter = ',')]
        preset: Vec<Preset>,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// z-test the simulator against the closed form; exit 1 on failure.
    Validate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long = "z-max", default_value_t = DEFAULT_Z_MAX, allow_negative_numbers = true)]
        z_max: f64,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QueueArg {
    Backlogged,
    Fixed,
}

impl From<QueueArg> for QueueDiscipline {
    fn from(q: QueueArg) -> Self {
        match q {
            QueueArg::Backlogged => QueueDiscipline::Backlogged,
            QueueArg::Fixed => QueueDiscipline::Fixed,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioArgs {
    /// Scenario JSON file.
    #[arg(long, conflicts_with_all = ["m", "n", "preset", "p_a", "p_f", "p_h"])]
    pub scenario: Option<PathBuf>,
    /// Number of full-duplex stations.
    #[arg(long)]
    pub m: Option<u32>,
    /// Number of half-duplex stations.
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, value_enum, conflicts_with_all = ["p_a", "p_f", "p_h"])]
    pub preset: Option<Preset>,
    /// Probability that the AP wins a slot.
    #[arg(long = "pA", allow_negative_numbers = true)]
    pub p_a: Option<f64>,
    /// Probability that a given FD station wins a slot.
    #[arg(long = "pF", allow_negative_numbers = true)]
    pub p_f: Option<f64>,
    /// Probability that a given HD station wins a slot.
    #[arg(long = "pH", allow_negative_numbers = true)]
    pub p_h: Option<f64>,
}

impl ScenarioArgs {
    pub fn load(&self) -> Result<Scenario, CliError> {
        if let Some(path) = &self.scenario {
            return Scenario::load(path);
        }
        let (Some(m), Some(n)) = (self.m, self.n) else {
            return Err(CliError::Scenario(
                "--m and --n are required without --scenario".to_owned(),
            ));
        };
        Ok(Scenario {
            m,
            n,
            preset: self.preset,
            p_a: self.p_a,
            p_f: self.p_f,
            p_h: self.p_h,
            sim: None,
        })
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct SimArgs {
    /// Measured slots [default: 1000000].
    #[arg(long)]
    pub slots: Option<u64>,
    /// Discarded warm-up slots [default: 10000].
    #[arg(long)]
    pub warmup: Option<u64>,
    /// Queue capacity [default: 10*(m+n)].
    #[arg(long)]
    pub capacity: Option<usize>,
    /// PRNG seed [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Queue discipline [default: backlogged].
    #[arg(long, value_enum)]
    pub queue: Option<QueueArg>,
}

impl SimArgs {
    /// Flags override the scenario's sim block.
    fn merge(&self, block: Option<&SimBlock>) -> SimBlock {
        let base = block.cloned().unwrap_or_default();
        SimBlock {
            slots: self.slots.or(base.slots),
            warmup: self.warmup.or(base.warmup),
            capacity: self.capacity.or(base.capacity),
            seed: self.seed.or(base.seed),
            queue: self.queue.map(Into::into).or(base.queue),
        }
    }
}

/// Runs a parsed command, writing its primary output to `stdout` unless
/// `--out` is given. Returns the process exit code.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<u8, CliError> {
    match &cli.command {
        Command::Theory {
            scenario,
            format,
            out,
        } => {
            let sc = scenario.load()?;
            let cfg = sc.resolve()?;
            emit(out.as_ref(), stdout, |w| match format {
                Format::Json => write_json(w, &theory_json(&sc, &cfg)?),
                Format::Csv => sweep::write_csv(
                    &[sweep::SweepRow::new(sweep::label_for(sc.preset), cfg)?],
                    w,
                ),
            })?;
            Ok(0)
        }
        Command::Simulate { scenario, sim, out } => {
            let sc = scenario.load()?;
            let cfg = sc.resolve()?;
            let settings = SimSettings::resolve(&sim.merge(sc.sim.as_ref()), &cfg)?;
            let doc = simulate_json(&sc, &cfg, &settings)?;
            emit(out.as_ref(), stdout, |w| write_json(w, &doc))?;
            Ok(0)
        }
        Command::Sweep {
            spec,
            total_stations,
            m,
            preset,
            out,
        } => {
            let spec = match spec {
                Some(path) => SweepSpec::load(path)?,
                None => SweepSpec {
                    total_stations: *total_stations,
                    m_values: (!m.is_empty()).then(|| m.clone()),
                    presets: (!preset.is_empty()).then(|| preset.clone()),
                },
            };
            let rows = sweep::sweep_rows(&spec)?;
            emit(out.as_ref(), stdout, |w| sweep::write_csv(&rows, w))?;
            Ok(0)
        }
        Command::Validate {
            scenario,
            sim,
            z_max,
            out,
        } => {
            if z_max.is_nan() || *z_max <= 0.0 {
                return Err(CliError::Scenario(format!(
                    "--z-max must be positive (got {z_max})"
                )));
            }
            let sc = scenario.load()?;
            let cfg = sc.resolve()?;
            let settings = SimSettings::resolve(&sim.merge(sc.sim.as_ref()), &cfg)?;
            let doc = validate_json(&sc, &cfg, &settings, *z_max)?;
            let passed = doc.passed;
            emit(out.as_ref(), stdout, |w| write_json(w, &doc))?;
            Ok(if passed { 0 } else { 1 })
        }
    }
}

pub fn theory_json(sc: &Scenario, cfg: &NetworkConfig) -> Result<TheoryJson, CliError> {
    Ok(TheoryJson {
        scenario: sc.label(),
        config: cfg.into(),
        theory: (&cfg.throughputs()?).into(),
    })
}

pub fn simulate_json(
    sc: &Scenario,
    cfg: &NetworkConfig,
    settings: &SimSettings,
) -> Result<SimulateJson, CliError> {
    let theory = cfg.throughputs()?;
    let stats = run(cfg, &settings.run_spec())?;
    let cmp = compare(&theory, &stats, DEFAULT_Z_MAX);
    Ok(SimulateJson {
        scenario: sc.label(),
        config: ConfigJson::from(cfg),
        run: RunJson::from(settings),
        counters: CountersJson::from(&stats),
        empirical: ReportJson::from(&stats.report()),
        std_error: StdErrorJson::from(&cmp),
        theory: ReportJson::from(&theory),
    })
}

pub fn validate_json(
    sc: &Scenario,
    cfg: &NetworkConfig,
    settings: &SimSettings,
    z_max: f64,
) -> Result<ValidateJson, CliError> {
    let theory = cfg.throughputs()?;
    let stats = run(cfg, &settings.run_spec())?;
    let cmp = compare(&theory, &stats, z_max);
    Ok(ValidateJson {
        scenario: sc.label(),
        config: cfg.into(),
        run: settings.into(),
        fd_wins_no_packet: stats.fd_wins_no_packet,
        z_max: format::Num(z_max),
        passed: cmp.passed,
        flows: output::flow_rows(&cmp),
    })
}

fn write_json<T: serde::Serialize>(w: &mut dyn Write, doc: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *w, doc).map_err(io::Error::from)?;
    w.write_all(b"\n")?;
    Ok(())
}

fn emit<F>(out: Option<&PathBuf>, stdout: &mut dyn Write, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    match out {
        None => {
            body(stdout)?;
            stdout.flush()?;
        }
        Some(path) => {
            let io_err = |source| CliError::Io {
                path: path.clone(),
                source,
            };
            let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
            body(&mut w)?;
            w.flush().map_err(io_err)?;
        }
    }
    Ok(())
}

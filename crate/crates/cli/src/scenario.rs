//! Scenario and sweep descriptions, from JSON files or command-line flags.

use std::fmt;
use std::path::Path;

use fdsat_core::{NetworkConfig, QueueDiscipline};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
#[derive(clap::ValueEnum)]
pub enum Preset {
    /// Equal access for every node.
    Dca,
    /// Equal uplink and downlink throughput for every station.
    Fair,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Dca => "dca",
            Preset::Fair => "fair",
        }
    }

    pub fn config(self, m: u32, n: u32) -> Result<NetworkConfig, CliError> {
        Ok(match self {
            Preset::Dca => NetworkConfig::dca(m, n)?,
            Preset::Fair => NetworkConfig::fairness(m, n)?,
        })
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Optional simulation parameters of a scenario.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimBlock {
    pub slots: Option<u64>,
    pub warmup: Option<u64>,
    pub capacity: Option<usize>,
    pub seed: Option<u64>,
    pub queue: Option<QueueDiscipline>,
}

/// Scenario file contents: either explicit probabilities or a preset.
///
/// ```json
/// {"m": 1, "n": 1, "p_A": 0.6, "p_F": 0.3, "p_H": 0.1}
/// {"preset": "dca", "m": 4, "n": 36, "sim": {"slots": 1000000, "seed": 3}}
/// ```
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub m: u32,
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[serde(rename = "p_A", default, skip_serializing_if = "Option::is_none")]
    pub p_a: Option<f64>,
    #[serde(rename = "p_F", default, skip_serializing_if = "Option::is_none")]
    pub p_f: Option<f64>,
    #[serde(rename = "p_H", default, skip_serializing_if = "Option::is_none")]
    pub p_h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sim: Option<SimBlock>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&text).map_err(|source| CliError::Json {
            path: path.to_owned(),
            source,
        })
    }

    /// The validated network configuration.
    pub fn resolve(&self) -> Result<NetworkConfig, CliError> {
        let explicit = [self.p_a, self.p_f, self.p_h];
        let cfg = match self.preset {
            Some(preset) => {
                if explicit.iter().any(Option::is_some) {
                    return Err(CliError::Scenario(format!(
                        "preset \"{preset}\" sets p_A/p_F/p_H itself; remove the explicit probabilities"
                    )));
                }
                preset.config(self.m, self.n)?
            }
            None => match explicit {
                [Some(a), Some(f), Some(h)] => NetworkConfig::new(self.m, self.n, a, f, h),
                _ => {
                    return Err(CliError::Scenario(
                        "give either a preset or all of p_A, p_F and p_H".to_owned(),
                    ))
                }
            },
        };
        Ok(cfg.validated()?)
    }

    pub fn label(&self) -> &'static str {
        self.preset.map_or("explicit", Preset::name)
    }
}

/// Fully-specified simulation parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimSettings {
    pub slots: u64,
    pub warmup: u64,
    pub capacity: usize,
    pub seed: u64,
    pub queue: QueueDiscipline,
}

pub const DEFAULT_SLOTS: u64 = 1_000_000;
pub const DEFAULT_WARMUP: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 0;

impl SimSettings {
    /// Fills unset fields with defaults: 10^6 slots, 10^4 warm-up slots,
    /// capacity `10·(m+n)`, seed 0, backlogged queue.
    pub fn resolve(block: &SimBlock, cfg: &NetworkConfig) -> Result<Self, CliError> {
        let s = Self {
            slots: block.slots.unwrap_or(DEFAULT_SLOTS),
            warmup: block.warmup.unwrap_or(DEFAULT_WARMUP),
            capacity: block.capacity.unwrap_or(10 * cfg.station_count() as usize),
            seed: block.seed.unwrap_or(DEFAULT_SEED),
            queue: block.queue.unwrap_or_default(),
        };
        if s.slots == 0 {
            return Err(CliError::Scenario("sim.slots must be positive".to_owned()));
        }
        if s.capacity == 0 {
            return Err(CliError::Scenario(
                "sim.capacity must be positive".to_owned(),
            ));
        }
        Ok(s)
    }

    pub fn run_spec(&self) -> fdsat_core::RunSpec {
        fdsat_core::RunSpec {
            measured_slots: self.slots,
            warmup_slots: self.warmup,
            capacity: self.capacity,
            discipline: self.queue,
            seed: self.seed,
        }
    }
}

/// Station-mix sweep at a fixed total station count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub total_stations: u32,
    /// Full-duplex station counts; defaults to `0..=total_stations`.
    #[serde(default)]
    pub m_values: Option<Vec<u32>>,
    /// Defaults to both presets.
    #[serde(default)]
    pub presets: Option<Vec<Preset>>,
}

impl SweepSpec {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.to_owned(),
            source,
        })
    }

    /// Sorted, de-duplicated presets and m values.
    pub fn points(&self) -> Result<(Vec<Preset>, Vec<u32>), CliError> {
        if self.total_stations == 0 {
            return Err(CliError::Scenario(
                "total_stations must be at least 1".to_owned(),
            ));
        }
        let mut presets = self
            .presets
            .clone()
            .unwrap_or_else(|| vec![Preset::Dca, Preset::Fair]);
        if presets.is_empty() {
            return Err(CliError::Scenario(
                "at least one preset is required".to_owned(),
            ));
        }
        presets.sort();
        presets.dedup();
        let mut ms = self
            .m_values
            .clone()
            .unwrap_or_else(|| (0..=self.total_stations).collect());
        if ms.is_empty() {
            return Err(CliError::Scenario(
                "at least one m value is required".to_owned(),
            ));
        }
        if let Some(&bad) = ms.iter().find(|&&m| m > self.total_stations) {
            return Err(CliError::Scenario(format!(
                "m = {bad} exceeds total_stations = {}",
                self.total_stations
            )));
        }
        ms.sort_unstable();
        ms.dedup();
        Ok((presets, ms))
    }
}

//! Plot-ready CSV of closed-form throughputs across station mixes.

use std::io::Write;

use fdsat_core::{NetworkConfig, ThroughputReport};

use crate::error::CliError;
use crate::format::sig12;
use crate::scenario::{Preset, SweepSpec};

pub const COLUMNS: [&str; 16] = [
    "preset",
    "m",
    "n",
    "p_A",
    "p_F",
    "p_H",
    "p",
    "hd_down",
    "hd_up",
    "fd_down",
    "fd_up",
    "sum",
    "hd_down_total",
    "hd_up_total",
    "fd_down_total",
    "fd_up_total",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub label: &'static str,
    pub config: NetworkConfig,
    pub report: ThroughputReport,
}

impl SweepRow {
    pub fn new(label: &'static str, config: NetworkConfig) -> Result<Self, CliError> {
        let report = config.throughputs()?;
        Ok(Self {
            label,
            config,
            report,
        })
    }

    fn record(&self) -> Vec<String> {
        let c = &self.config;
        let r = &self.report;
        let t = r.totals(c.fd_stations, c.hd_stations);
        let mut rec = vec![
            self.label.to_owned(),
            c.fd_stations.to_string(),
            c.hd_stations.to_string(),
        ];
        rec.extend(
            [
                c.ap_access,
                c.fd_access,
                c.hd_access,
                r.head_fraction,
                r.hd_down,
                r.hd_up,
                r.fd_down,
                r.fd_up,
                r.sum,
                t.hd_down,
                t.hd_up,
                t.fd_down,
                t.fd_up,
            ]
            .into_iter()
            .map(sig12),
        );
        rec
    }
}

/// One row per (preset, m), ordered by preset then m.
pub fn sweep_rows(spec: &SweepSpec) -> Result<Vec<SweepRow>, CliError> {
    let (presets, ms) = spec.points()?;
    let mut rows = Vec::with_capacity(presets.len() * ms.len());
    for preset in presets {
        for &m in &ms {
            let n = spec.total_stations - m;
            rows.push(SweepRow::new(preset.name(), preset.config(m, n)?)?);
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(COLUMNS)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

/// Label used when a single scenario is written as a sweep-format row.
pub fn label_for(preset: Option<Preset>) -> &'static str {
    preset.map_or("explicit", Preset::name)
}

//! JSON documents emitted by the commands. Every real number goes through
//! [`Num`] so output is rounded to 12 significant digits.

use fdsat_core::stats::FlowEstimate;
use fdsat_core::{
    ComparisonResult, Flow, NetworkConfig, SimStats, ThroughputReport, Verdict, PRNG_ALGORITHM,
};
use serde::Serialize;

use crate::format::Num;
use crate::scenario::SimSettings;

#[derive(Debug, Serialize)]
pub struct ConfigJson {
    pub m: u32,
    pub n: u32,
    #[serde(rename = "p_A")]
    pub p_a: Num,
    #[serde(rename = "p_F")]
    pub p_f: Num,
    #[serde(rename = "p_H")]
    pub p_h: Num,
}

impl From<&NetworkConfig> for ConfigJson {
    fn from(c: &NetworkConfig) -> Self {
        Self {
            m: c.fd_stations,
            n: c.hd_stations,
            p_a: Num(c.ap_access),
            p_f: Num(c.fd_access),
            p_h: Num(c.hd_access),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ReportJson {
    pub p: Num,
    pub hd_down: Num,
    pub hd_up: Num,
    pub fd_down: Num,
    pub fd_up: Num,
    pub sum: Num,
}

impl From<&ThroughputReport> for ReportJson {
    fn from(r: &ThroughputReport) -> Self {
        Self {
            p: Num(r.head_fraction),
            hd_down: Num(r.hd_down),
            hd_up: Num(r.hd_up),
            fd_down: Num(r.fd_down),
            fd_up: Num(r.fd_up),
            sum: Num(r.sum),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TheoryJson {
    pub scenario: &'static str,
    pub config: ConfigJson,
    pub theory: ReportJson,
}

#[derive(Debug, Serialize)]
pub struct RunJson {
    pub slots: u64,
    pub warmup: u64,
    pub capacity: usize,
    pub queue: &'static str,
    pub seed: u64,
    pub prng: &'static str,
}

impl From<&SimSettings> for RunJson {
    fn from(s: &SimSettings) -> Self {
        Self {
            slots: s.slots,
            warmup: s.warmup,
            capacity: s.capacity,
            queue: s.queue.name(),
            seed: s.seed,
            prng: PRNG_ALGORITHM,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CountersJson {
    pub total_slots: u64,
    pub ap_wins: u64,
    pub ap_wins_hd_head: u64,
    pub fd_wins_no_packet: u64,
    pub down_slots: Vec<u64>,
    pub up_slots: Vec<u64>,
}

impl From<&SimStats> for CountersJson {
    fn from(s: &SimStats) -> Self {
        Self {
            total_slots: s.total_slots,
            ap_wins: s.ap_wins,
            ap_wins_hd_head: s.ap_wins_hd_head,
            fd_wins_no_packet: s.fd_wins_no_packet,
            down_slots: s.down_slots.clone(),
            up_slots: s.up_slots.clone(),
        }
    }
}

/// Standard error per flow; `null` for flows of an empty class.
#[derive(Debug, Serialize)]
pub struct StdErrorJson {
    pub p: Option<Num>,
    pub hd_down: Option<Num>,
    pub hd_up: Option<Num>,
    pub fd_down: Option<Num>,
    pub fd_up: Option<Num>,
    pub sum: Option<Num>,
}

impl From<&ComparisonResult> for StdErrorJson {
    fn from(c: &ComparisonResult) -> Self {
        let se = |f: Flow| {
            c.get(f)
                .and_then(|row| row.estimate)
                .map(|e| Num(e.std_error))
        };
        Self {
            p: se(Flow::HeadFraction),
            hd_down: se(Flow::HdDown),
            hd_up: se(Flow::HdUp),
            fd_down: se(Flow::FdDown),
            fd_up: se(Flow::FdUp),
            sum: se(Flow::Sum),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SimulateJson {
    pub scenario: &'static str,
    pub config: ConfigJson,
    pub run: RunJson,
    pub counters: CountersJson,
    pub empirical: ReportJson,
    pub std_error: StdErrorJson,
    pub theory: ReportJson,
}

#[derive(Debug, Serialize)]
pub struct FlowJson {
    pub flow: &'static str,
    pub theory: Num,
    pub estimate: Option<Num>,
    pub std_error: Option<Num>,
    /// `null` when not applicable or when an exact check failed (infinite z).
    pub z: Option<Num>,
    pub verdict: Verdict,
}

#[derive(Debug, Serialize)]
pub struct ValidateJson {
    pub scenario: &'static str,
    pub config: ConfigJson,
    pub run: RunJson,
    pub fd_wins_no_packet: u64,
    pub z_max: Num,
    pub passed: bool,
    pub flows: Vec<FlowJson>,
}

pub fn flow_rows(c: &ComparisonResult) -> Vec<FlowJson> {
    c.flows
        .iter()
        .map(|row| FlowJson {
            flow: row.flow.name(),
            theory: Num(row.theory),
            estimate: row.estimate.map(|e: FlowEstimate| Num(e.mean)),
            std_error: row.estimate.map(|e| Num(e.std_error)),
            z: row.z.map(Num),
            verdict: row.verdict,
        })
        .collect()
}

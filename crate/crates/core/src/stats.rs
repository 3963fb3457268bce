//! Binomial standard errors and theory-vs-simulation z-tests.
//!
//! Per-slot indicators are treated as independent Bernoulli trials. The
//! head-class indicator is correlated through the queue state, which the
//! default `z_max = 4` is meant to absorb.

use alloc::vec::Vec;
use core::fmt;

use crate::analytic::ThroughputReport;
use crate::error::Error;
use crate::queue::StationClass;
use crate::sim::SimStats;

pub const DEFAULT_Z_MAX: f64 = 4.0;

/// Absolute tolerance used instead of a z-test when the standard error is 0.
pub const EXACT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FlowEstimate {
    pub mean: f64,
    pub std_error: f64,
}

impl FlowEstimate {
    /// Sum of two estimates, treating them as independent.
    pub fn plus(self, other: FlowEstimate) -> FlowEstimate {
        FlowEstimate {
            mean: self.mean + other.mean,
            std_error: libm::hypot(self.std_error, other.std_error),
        }
    }
}

/// Slot fraction `count/total` with standard error `sqrt(q(1-q)/total)`,
/// `q = min(mean, 1)`.
pub fn estimate(count: u64, total: u64) -> Result<FlowEstimate, Error> {
    if total == 0 {
        return Err(Error::ZeroTotal);
    }
    let total = total as f64;
    let mean = count as f64 / total;
    let q = mean.min(1.0);
    let var = (q * (1.0 - q)).max(0.0);
    Ok(FlowEstimate {
        mean,
        std_error: libm::sqrt(var / total),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Flow {
    #[cfg_attr(feature = "serde", serde(rename = "p"))]
    HeadFraction,
    HdDown,
    HdUp,
    FdDown,
    FdUp,
    Sum,
}

impl Flow {
    pub const ALL: [Flow; 6] = [
        Flow::HeadFraction,
        Flow::HdDown,
        Flow::HdUp,
        Flow::FdDown,
        Flow::FdUp,
        Flow::Sum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Flow::HeadFraction => "p",
            Flow::HdDown => "hd_down",
            Flow::HdUp => "hd_up",
            Flow::FdDown => "fd_down",
            Flow::FdUp => "fd_up",
            Flow::Sum => "sum",
        }
    }

    pub fn of(self, r: &ThroughputReport) -> f64 {
        match self {
            Flow::HeadFraction => r.head_fraction,
            Flow::HdDown => r.hd_down,
            Flow::HdUp => r.hd_up,
            Flow::FdDown => r.fd_down,
            Flow::FdUp => r.fd_up,
            Flow::Sum => r.sum,
        }
    }

    fn class(self) -> Option<StationClass> {
        match self {
            Flow::HdDown | Flow::HdUp => Some(StationClass::HalfDuplex),
            Flow::FdDown | Flow::FdUp => Some(StationClass::FullDuplex),
            Flow::HeadFraction | Flow::Sum => None,
        }
    }
}

impl fmt::Display for Flow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    Pass,
    Fail,
    /// The flow's station class is empty.
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FlowComparison {
    pub flow: Flow,
    pub theory: f64,
    pub estimate: Option<FlowEstimate>,
    /// `(mean - theory) / std_error`; infinite when an exact check fails,
    /// `None` when not applicable.
    pub z: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComparisonResult {
    pub z_max: f64,
    pub flows: Vec<FlowComparison>,
    pub passed: bool,
}

impl ComparisonResult {
    pub fn get(&self, flow: Flow) -> Option<&FlowComparison> {
        self.flows.iter().find(|c| c.flow == flow)
    }

    pub fn failures(&self) -> impl Iterator<Item = &FlowComparison> {
        self.flows.iter().filter(|c| c.verdict == Verdict::Fail)
    }
}

fn flow_estimate(flow: Flow, stats: &SimStats) -> Option<FlowEstimate> {
    let n_slots = stats.total_slots;
    let class_est = |count: u64, size: u32| estimate(count, u64::from(size) * n_slots).ok();
    match flow {
        Flow::HeadFraction => {
            if stats.ap_wins == 0 {
                Some(FlowEstimate {
                    mean: 0.0,
                    std_error: 0.0,
                })
            } else {
                estimate(stats.ap_wins_hd_head, stats.ap_wins).ok()
            }
        }
        Flow::HdDown => class_est(
            stats.class_down(StationClass::HalfDuplex),
            stats.hd_stations,
        ),
        Flow::HdUp => class_est(stats.class_up(StationClass::HalfDuplex), stats.hd_stations),
        Flow::FdDown => class_est(
            stats.class_down(StationClass::FullDuplex),
            stats.fd_stations,
        ),
        Flow::FdUp => class_est(stats.class_up(StationClass::FullDuplex), stats.fd_stations),
        // At most one uplink and one downlink per slot: estimate each direction.
        Flow::Sum => {
            let up = estimate(stats.total_up(), n_slots).ok()?;
            let down = estimate(stats.total_down(), n_slots).ok()?;
            Some(up.plus(down))
        }
    }
}

/// z-tests each flow of `theory` against the simulator counters.
///
/// Flows of a class with no stations are [`Verdict::NotApplicable`] and do
/// not affect the overall verdict.
///
/// # Panics
///
/// If `z_max` is not positive.
pub fn compare(theory: &ThroughputReport, stats: &SimStats, z_max: f64) -> ComparisonResult {
    assert!(z_max > 0.0, "z_max must be positive");
    let class_size = |c: StationClass| match c {
        StationClass::FullDuplex => stats.fd_stations,
        StationClass::HalfDuplex => stats.hd_stations,
    };
    let flows: Vec<FlowComparison> = Flow::ALL
        .iter()
        .map(|&flow| {
            let expected = flow.of(theory);
            let absent = flow.class().is_some_and(|c| class_size(c) == 0);
            let est = if absent {
                None
            } else {
                flow_estimate(flow, stats)
            };
            let Some(est) = est else {
                return FlowComparison {
                    flow,
                    theory: expected,
                    estimate: None,
                    z: None,
                    verdict: Verdict::NotApplicable,
                };
            };
            let diff = est.mean - expected;
            let z = if est.std_error > 0.0 {
                diff / est.std_error
            } else if diff.abs() <= EXACT_TOLERANCE {
                0.0
            } else {
                f64::INFINITY.copysign(diff)
            };
            let verdict = if z.abs() <= z_max {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            FlowComparison {
                flow,
                theory: expected,
                estimate: Some(est),
                z: Some(z),
                verdict,
            }
        })
        .collect();
    let passed = flows.iter().all(|c| c.verdict != Verdict::Fail);
    ComparisonResult {
        z_max,
        flows,
        passed,
    }
}

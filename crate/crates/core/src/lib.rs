//! Throughput model and Monte Carlo simulator for a slotted random-access
//! network with one full-duplex access point serving `m` full-duplex and `n`
//! half-duplex stations.
//!
//! * [`analytic`] evaluates the closed-form per-flow throughputs and builds the
//!   equal-access (DCA) and full-fairness configurations.
//! * [`sim`] runs the slot-by-slot contention and AP queue dynamics.
//! * [`stats`] turns simulator counters into estimates and compares them to
//!   the closed form.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analytic;
mod error;
pub mod queue;
pub mod sim;
pub mod stats;

pub use analytic::{dca_gain, NetworkConfig, ThroughputReport, Violation, PROBABILITY_TOLERANCE};
pub use error::Error;
pub use queue::{ApQueue, QueueDiscipline, Station, StationClass};
pub use sim::{run, RunSpec, SimStats, Simulation, SlotOutcome, Winner, PRNG_ALGORITHM};
pub use stats::{compare, estimate, ComparisonResult, Flow, FlowComparison, FlowEstimate, Verdict};

//! Slot-by-slot Monte Carlo simulation of the contention and AP queue.
//!
//! Each slot has exactly one winner (collisions are not modeled):
//!
//! * AP: sends the head packet. If it is for an FD station the slot is
//!   full-duplex and that station also transmits.
//! * HD station: uplink only.
//! * FD station: uplink, and the AP answers with the first queued packet for
//!   that station if one exists.
//!
//! Contention draws and packet-destination draws come from two separate
//! ChaCha8 streams of the same seed.

use alloc::vec;
use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analytic::{NetworkConfig, ThroughputReport};
use crate::error::Error;
use crate::queue::{ApQueue, Layout, QueueDiscipline, Station, StationClass};

/// Identifies the generator and how it is keyed; recorded in CLI output.
pub const PRNG_ALGORITHM: &str =
    "ChaCha8 (rand_chacha 0.9, seed_from_u64; stream 0 = contention, stream 1 = arrivals)";

const CONTENTION_STREAM: u64 = 0;
const ARRIVAL_STREAM: u64 = 1;

/// Minimum number of discarded slots before measurement.
pub const MIN_WARMUP_SLOTS: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Winner {
    Ap,
    Station(Station),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotOutcome {
    pub winner: Winner,
    /// Station that received a packet from the AP in this slot.
    pub downlink_to: Option<Station>,
    /// Station that sent a packet to the AP in this slot.
    pub uplink_from: Option<Station>,
    /// Class of the head packet; only set when the AP won.
    pub head_class_at_win: Option<StationClass>,
}

/// Counters accumulated over the measured (post-warm-up) slots.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimStats {
    pub fd_stations: u32,
    pub hd_stations: u32,
    pub total_slots: u64,
    /// Indexed FD stations first, then HD stations; see [`SimStats::down`].
    pub down_slots: Vec<u64>,
    pub up_slots: Vec<u64>,
    pub ap_wins: u64,
    pub ap_wins_hd_head: u64,
    pub fd_wins_no_packet: u64,
}

impl SimStats {
    fn new(layout: Layout) -> Self {
        Self {
            fd_stations: layout.fd,
            hd_stations: layout.hd,
            total_slots: 0,
            down_slots: vec![0; layout.len()],
            up_slots: vec![0; layout.len()],
            ap_wins: 0,
            ap_wins_hd_head: 0,
            fd_wins_no_packet: 0,
        }
    }

    fn layout(&self) -> Layout {
        Layout {
            fd: self.fd_stations,
            hd: self.hd_stations,
        }
    }

    fn record(&mut self, outcome: &SlotOutcome) {
        let layout = self.layout();
        self.total_slots += 1;
        if let Some(s) = outcome.downlink_to {
            self.down_slots[layout.index(s)] += 1;
        }
        if let Some(s) = outcome.uplink_from {
            self.up_slots[layout.index(s)] += 1;
        }
        match outcome.winner {
            Winner::Ap => {
                self.ap_wins += 1;
                if outcome.head_class_at_win == Some(StationClass::HalfDuplex) {
                    self.ap_wins_hd_head += 1;
                }
            }
            Winner::Station(Station::Fd(_)) if outcome.downlink_to.is_none() => {
                self.fd_wins_no_packet += 1;
            }
            Winner::Station(_) => {}
        }
    }

    pub fn down(&self, s: Station) -> u64 {
        self.down_slots[self.layout().index(s)]
    }

    pub fn up(&self, s: Station) -> u64 {
        self.up_slots[self.layout().index(s)]
    }

    fn class_range(&self, class: StationClass) -> core::ops::Range<usize> {
        let fd = self.fd_stations as usize;
        match class {
            StationClass::FullDuplex => 0..fd,
            StationClass::HalfDuplex => fd..fd + self.hd_stations as usize,
        }
    }

    /// Downlink slots summed over a class.
    pub fn class_down(&self, class: StationClass) -> u64 {
        self.down_slots[self.class_range(class)].iter().sum()
    }

    /// Uplink slots summed over a class.
    pub fn class_up(&self, class: StationClass) -> u64 {
        self.up_slots[self.class_range(class)].iter().sum()
    }

    pub fn total_down(&self) -> u64 {
        self.down_slots.iter().sum()
    }

    pub fn total_up(&self) -> u64 {
        self.up_slots.iter().sum()
    }

    /// Empirical counterpart of [`NetworkConfig::throughputs`]: per-station
    /// values are class means of slot fractions.
    pub fn report(&self) -> ThroughputReport {
        let n_slots = self.total_slots.max(1) as f64;
        let class_mean = |count: u64, size: u32| {
            if size == 0 {
                0.0
            } else {
                count as f64 / (f64::from(size) * n_slots)
            }
        };
        let head_fraction = if self.ap_wins == 0 {
            0.0
        } else {
            self.ap_wins_hd_head as f64 / self.ap_wins as f64
        };
        ThroughputReport {
            head_fraction,
            hd_down: class_mean(self.class_down(StationClass::HalfDuplex), self.hd_stations),
            hd_up: class_mean(self.class_up(StationClass::HalfDuplex), self.hd_stations),
            fd_down: class_mean(self.class_down(StationClass::FullDuplex), self.fd_stations),
            fd_up: class_mean(self.class_up(StationClass::FullDuplex), self.fd_stations),
            sum: (self.total_down() + self.total_up()) as f64 / n_slots,
        }
    }
}

/// Parameters of one simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSpec {
    pub measured_slots: u64,
    pub warmup_slots: u64,
    pub capacity: usize,
    pub discipline: QueueDiscipline,
    pub seed: u64,
}

impl RunSpec {
    /// Defaults: warm-up of 1% of the measured slots (at least 10^4),
    /// capacity `10·(m+n)`, backlogged queue.
    pub fn new(config: &NetworkConfig, measured_slots: u64, seed: u64) -> Self {
        Self {
            measured_slots,
            warmup_slots: default_warmup(measured_slots),
            capacity: default_capacity(config),
            discipline: QueueDiscipline::default(),
            seed,
        }
    }
}

pub fn default_warmup(measured_slots: u64) -> u64 {
    (measured_slots / 100).max(MIN_WARMUP_SLOTS)
}

pub fn default_capacity(config: &NetworkConfig) -> usize {
    10 * config.station_count() as usize
}

/// Simulation state: queue, generators and counters.
#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    config: NetworkConfig,
    layout: Layout,
    queue: ApQueue,
    sampler: WeightedIndex<f64>,
    contention: ChaCha8Rng,
    arrivals: ChaCha8Rng,
    warmup_remaining: u64,
    stats: SimStats,
}

impl Simulation {
    /// A fresh simulation with `capacity` uniformly-destined packets queued,
    /// a backlogged queue and no warm-up.
    pub fn new(config: NetworkConfig, capacity: usize, seed: u64) -> Result<Self, Error> {
        let config = config.validated()?;
        let mut sim = Self::with_queue(
            config,
            ApQueue::new(
                config.fd_stations,
                config.hd_stations,
                capacity,
                QueueDiscipline::default(),
            )?,
            seed,
        )?;
        sim.queue.replenish(&mut sim.arrivals);
        Ok(sim)
    }

    /// Uses `queue` as given (it is not replenished until the first slot).
    ///
    /// # Panics
    ///
    /// If the queue's station layout differs from `config`.
    pub fn with_queue(config: NetworkConfig, queue: ApQueue, seed: u64) -> Result<Self, Error> {
        let config = config.validated()?;
        let layout = Layout {
            fd: config.fd_stations,
            hd: config.hd_stations,
        };
        let mut weights = Vec::with_capacity(1 + layout.len());
        weights.push(config.ap_access);
        weights.extend((0..config.fd_stations).map(|_| config.fd_access));
        weights.extend((0..config.hd_stations).map(|_| config.hd_access));
        // validation guarantees a positive total
        let sampler = WeightedIndex::new(weights).expect("access probabilities sum to 1");

        let mut contention = ChaCha8Rng::seed_from_u64(seed);
        contention.set_stream(CONTENTION_STREAM);
        let mut arrivals = ChaCha8Rng::seed_from_u64(seed);
        arrivals.set_stream(ARRIVAL_STREAM);

        let sim = Self {
            config,
            layout,
            queue,
            sampler,
            contention,
            arrivals,
            warmup_remaining: 0,
            stats: SimStats::new(layout),
        };
        for s in sim.queue.packets() {
            assert!(layout.contains(s), "queued packet for unknown station {s}");
        }
        Ok(sim)
    }

    pub fn with_discipline(mut self, discipline: QueueDiscipline) -> Self {
        self.queue = self.queue_with_discipline(discipline);
        self
    }

    fn queue_with_discipline(&self, discipline: QueueDiscipline) -> ApQueue {
        ApQueue::with_packets(
            self.layout.fd,
            self.layout.hd,
            self.queue.capacity(),
            discipline,
            self.queue.packets(),
        )
        .expect("layout already validated")
    }

    /// Slots to run before counters start.
    pub fn with_warmup(mut self, slots: u64) -> Self {
        self.warmup_remaining = slots;
        self
    }

    pub fn config(&self) -> &NetworkConfig {
        &self.config
    }

    pub fn queue(&self) -> &ApQueue {
        &self.queue
    }

    pub fn stats(&self) -> &SimStats {
        &self.stats
    }

    pub fn into_stats(self) -> SimStats {
        self.stats
    }

    pub fn in_warmup(&self) -> bool {
        self.warmup_remaining > 0
    }

    pub fn sample_winner(&mut self) -> Winner {
        match self.sampler.sample(&mut self.contention) {
            0 => Winner::Ap,
            k => Winner::Station(self.layout.station(k - 1)),
        }
    }

    /// Runs one slot with a sampled winner.
    pub fn step(&mut self) -> SlotOutcome {
        let winner = self.sample_winner();
        self.apply(winner)
    }

    /// Runs one slot won by `winner`.
    ///
    /// # Panics
    ///
    /// If `winner` names a station that does not exist.
    pub fn apply(&mut self, winner: Winner) -> SlotOutcome {
        let outcome = match winner {
            Winner::Ap => {
                // Only a hand-built queue can be empty here.
                if self.queue.is_empty() {
                    self.queue.push_arrival(&mut self.arrivals);
                }
                let head = self.queue.pop_head().expect("queue is non-empty");
                SlotOutcome {
                    winner,
                    downlink_to: Some(head),
                    uplink_from: head.is_full_duplex().then_some(head),
                    head_class_at_win: Some(head.class()),
                }
            }
            Winner::Station(s @ Station::Hd(_)) => {
                assert!(self.layout.contains(s), "no such station: {s}");
                SlotOutcome {
                    winner,
                    downlink_to: None,
                    uplink_from: Some(s),
                    head_class_at_win: None,
                }
            }
            Winner::Station(s @ Station::Fd(_)) => {
                assert!(self.layout.contains(s), "no such station: {s}");
                let mut served = self.queue.remove_first_for(s);
                if !served && self.queue.discipline() == QueueDiscipline::Backlogged {
                    self.queue.extend_until(s, &mut self.arrivals);
                    served = self.queue.remove_first_for(s);
                }
                SlotOutcome {
                    winner,
                    downlink_to: served.then_some(s),
                    uplink_from: Some(s),
                    head_class_at_win: None,
                }
            }
        };
        self.queue.replenish(&mut self.arrivals);

        if self.warmup_remaining > 0 {
            self.warmup_remaining -= 1;
        } else {
            self.stats.record(&outcome);
        }
        outcome
    }
}

/// Runs `spec.warmup_slots` uncounted slots followed by
/// `spec.measured_slots` counted ones.
pub fn run(config: &NetworkConfig, spec: &RunSpec) -> Result<SimStats, Error> {
    if spec.measured_slots == 0 {
        return Err(Error::NoMeasuredSlots);
    }
    let mut sim = Simulation::new(*config, spec.capacity, spec.seed)?
        .with_discipline(spec.discipline)
        .with_warmup(spec.warmup_slots);
    for _ in 0..spec.warmup_slots + spec.measured_slots {
        sim.step();
    }
    Ok(sim.into_stats())
}

//! The access point's single downlink queue.
//!
//! Packets carry only a destination. The AP transmits the head packet when it
//! wins a slot, and when a full-duplex station wins it pulls the first packet
//! addressed to that station out of turn. Internally each station keeps the
//! arrival sequence numbers of its queued packets, so head lookup is a scan
//! over station fronts and out-of-turn removal is O(1).

use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum StationClass {
    FullDuplex,
    HalfDuplex,
}

/// A station, indexed within its class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Station {
    Fd(u32),
    Hd(u32),
}

impl Station {
    pub fn class(self) -> StationClass {
        match self {
            Station::Fd(_) => StationClass::FullDuplex,
            Station::Hd(_) => StationClass::HalfDuplex,
        }
    }

    pub fn is_full_duplex(self) -> bool {
        matches!(self, Station::Fd(_))
    }
}

impl fmt::Display for Station {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Station::Fd(i) => write!(f, "FD({i})"),
            Station::Hd(j) => write!(f, "HD({j})"),
        }
    }
}

/// How the queue is kept saturated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum QueueDiscipline {
    /// Unbounded saturated backlog. At least `capacity` packets are
    /// materialized; when a full-duplex winner has nothing queued, further
    /// arrivals are drawn until one for it appears and the skipped packets
    /// stay queued. Statistically this is an infinite i.i.d. queue.
    #[default]
    Backlogged,
    /// Exactly `capacity` packets; each removal is replaced at the tail. A
    /// full-duplex winner with nothing queued gets no downlink.
    Fixed,
}

impl QueueDiscipline {
    pub fn name(self) -> &'static str {
        match self {
            QueueDiscipline::Backlogged => "backlogged",
            QueueDiscipline::Fixed => "fixed",
        }
    }
}

/// Station layout shared by the queue and the simulator: FD stations take
/// flat indices `0..m`, HD stations `m..m+n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Layout {
    pub fd: u32,
    pub hd: u32,
}

impl Layout {
    pub fn len(self) -> usize {
        (self.fd + self.hd) as usize
    }

    pub fn index(self, s: Station) -> usize {
        match s {
            Station::Fd(i) => {
                debug_assert!(i < self.fd);
                i as usize
            }
            Station::Hd(j) => {
                debug_assert!(j < self.hd);
                (self.fd + j) as usize
            }
        }
    }

    pub fn station(self, idx: usize) -> Station {
        let idx = idx as u32;
        if idx < self.fd {
            Station::Fd(idx)
        } else {
            Station::Hd(idx - self.fd)
        }
    }

    pub fn contains(self, s: Station) -> bool {
        match s {
            Station::Fd(i) => i < self.fd,
            Station::Hd(j) => j < self.hd,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApQueue {
    layout: Layout,
    capacity: usize,
    discipline: QueueDiscipline,
    by_station: Vec<VecDeque<u64>>,
    len: usize,
    next_seq: u64,
}

impl ApQueue {
    /// An empty queue for `fd_stations` + `hd_stations` destinations.
    pub fn new(
        fd_stations: u32,
        hd_stations: u32,
        capacity: usize,
        discipline: QueueDiscipline,
    ) -> Result<Self, Error> {
        if fd_stations + hd_stations == 0 {
            return Err(Error::EmptyNetwork);
        }
        if capacity == 0 {
            return Err(Error::ZeroCapacity);
        }
        let layout = Layout {
            fd: fd_stations,
            hd: hd_stations,
        };
        Ok(Self {
            layout,
            capacity,
            discipline,
            by_station: (0..layout.len()).map(|_| VecDeque::new()).collect(),
            len: 0,
            next_seq: 0,
        })
    }

    /// A queue holding `packets` in order, head first.
    ///
    /// # Panics
    ///
    /// If a destination does not exist in the layout.
    pub fn with_packets<I>(
        fd_stations: u32,
        hd_stations: u32,
        capacity: usize,
        discipline: QueueDiscipline,
        packets: I,
    ) -> Result<Self, Error>
    where
        I: IntoIterator<Item = Station>,
    {
        let mut q = Self::new(fd_stations, hd_stations, capacity, discipline)?;
        for s in packets {
            q.push_back(s);
        }
        Ok(q)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn discipline(&self) -> QueueDiscipline {
        self.discipline
    }

    pub fn push_back(&mut self, dest: Station) {
        assert!(self.layout.contains(dest), "no such station: {dest}");
        let idx = self.layout.index(dest);
        self.by_station[idx].push_back(self.next_seq);
        self.next_seq += 1;
        self.len += 1;
    }

    /// Appends one arrival whose destination is uniform over all stations.
    pub fn push_arrival<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Station {
        let dest = self.layout.station(rng.random_range(0..self.layout.len()));
        self.push_back(dest);
        dest
    }

    /// Tops the queue up to `capacity` with uniform arrivals.
    pub fn replenish<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        while self.len < self.capacity {
            self.push_arrival(rng);
        }
    }

    fn head_index(&self) -> Option<usize> {
        self.by_station
            .iter()
            .enumerate()
            .filter_map(|(i, q)| q.front().map(|&seq| (seq, i)))
            .min()
            .map(|(_, i)| i)
    }

    pub fn head(&self) -> Option<Station> {
        self.head_index().map(|i| self.layout.station(i))
    }

    pub fn pop_head(&mut self) -> Option<Station> {
        let idx = self.head_index()?;
        self.by_station[idx].pop_front();
        self.len -= 1;
        Some(self.layout.station(idx))
    }

    /// Removes the first queued packet for `dest`. Returns whether one existed.
    pub fn remove_first_for(&mut self, dest: Station) -> bool {
        if !self.layout.contains(dest) {
            return false;
        }
        let removed = self.by_station[self.layout.index(dest)]
            .pop_front()
            .is_some();
        if removed {
            self.len -= 1;
        }
        removed
    }

    /// Draws arrivals until one is addressed to `dest`; returns how many were
    /// drawn (the last one is for `dest`).
    pub fn extend_until<R: Rng + ?Sized>(&mut self, dest: Station, rng: &mut R) -> usize {
        assert!(self.layout.contains(dest), "no such station: {dest}");
        let mut drawn = 0;
        loop {
            drawn += 1;
            if self.push_arrival(rng) == dest {
                return drawn;
            }
        }
    }

    pub fn count_for(&self, dest: Station) -> usize {
        if !self.layout.contains(dest) {
            return 0;
        }
        self.by_station[self.layout.index(dest)].len()
    }

    /// Destinations in queue order, head first.
    pub fn packets(&self) -> Vec<Station> {
        let mut all: Vec<(u64, usize)> = self
            .by_station
            .iter()
            .enumerate()
            .flat_map(|(i, q)| q.iter().map(move |&seq| (seq, i)))
            .collect();
        all.sort_unstable();
        all.into_iter()
            .map(|(_, i)| self.layout.station(i))
            .collect()
    }
}

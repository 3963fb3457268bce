//! Closed-form saturation throughputs.
//!
//! All throughputs are normalized: the fraction of slots in which data flows
//! in the given direction. A full-duplex slot counts once for each direction,
//! so the system sum lies in `[1, 2]`.

use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::queue::StationClass;

/// Absolute tolerance on `p_A + m·p_F + n·p_H = 1`.
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;

/// Station counts and per-node slot-win probabilities.
///
/// `fd_access` and `hd_access` are the probabilities that one *given*
/// station of that class wins a slot, so every slot is won by someone when
/// `ap_access + fd_stations·fd_access + hd_stations·hd_access = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NetworkConfig {
    pub fd_stations: u32,
    pub hd_stations: u32,
    pub ap_access: f64,
    pub fd_access: f64,
    pub hd_access: f64,
}

/// Which node's access probability a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum AccessOf {
    AccessPoint,
    FullDuplex,
    HalfDuplex,
}

impl fmt::Display for AccessOf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AccessOf::AccessPoint => "p_A",
            AccessOf::FullDuplex => "p_F",
            AccessOf::HalfDuplex => "p_H",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Violation {
    /// `m + n = 0`.
    EmptyNetwork,
    /// A probability is outside `[0, 1]` or not finite.
    OutOfRange { of: AccessOf, value: f64 },
    /// Slot-win probabilities do not add up to one.
    ProbabilitySum { sum: f64 },
    /// A class with no stations was given a non-zero access probability.
    AbsentClassAccess { class: StationClass, value: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyNetwork => f.write_str("m + n must be at least 1 (got m = 0, n = 0)"),
            Violation::OutOfRange { of, value } => {
                write!(f, "{of} = {value} is outside [0, 1]")
            }
            Violation::ProbabilitySum { sum } => write!(
                f,
                "p_A + m*p_F + n*p_H = {sum}, expected 1 within {PROBABILITY_TOLERANCE:e}"
            ),
            Violation::AbsentClassAccess { class, value } => match class {
                StationClass::FullDuplex => write!(f, "m = 0 but p_F = {value} (must be 0)"),
                StationClass::HalfDuplex => write!(f, "n = 0 but p_H = {value} (must be 0)"),
            },
        }
    }
}

impl NetworkConfig {
    pub fn new(
        fd_stations: u32,
        hd_stations: u32,
        ap_access: f64,
        fd_access: f64,
        hd_access: f64,
    ) -> Self {
        Self {
            fd_stations,
            hd_stations,
            ap_access,
            fd_access,
            hd_access,
        }
    }

    /// Equal access for every node, as under idealized 802.11 DCA:
    /// `p_A = p_F = p_H = 1/(1+m+n)`. The probability of an empty class is
    /// forced to zero.
    pub fn dca(fd_stations: u32, hd_stations: u32) -> Result<Self, Error> {
        if fd_stations == 0 && hd_stations == 0 {
            return Err(Error::EmptyNetwork);
        }
        let share = 1.0 / (1.0 + f64::from(fd_stations) + f64::from(hd_stations));
        Ok(Self {
            fd_stations,
            hd_stations,
            ap_access: share,
            fd_access: if fd_stations > 0 { share } else { 0.0 },
            hd_access: if hd_stations > 0 { share } else { 0.0 },
        })
    }

    /// Access probabilities that give every station the same uplink and
    /// downlink throughput `1/(2n+m)`.
    ///
    /// With `n > 0`: `p_F = p_H = 1/(2n+m)` and `p_A = n/(2n+m)`. Without
    /// half-duplex stations the AP never needs to initiate, so `p_A = 0` and
    /// `p_F = 1/m`.
    pub fn fairness(fd_stations: u32, hd_stations: u32) -> Result<Self, Error> {
        if fd_stations == 0 && hd_stations == 0 {
            return Err(Error::EmptyNetwork);
        }
        let m = f64::from(fd_stations);
        let n = f64::from(hd_stations);
        if hd_stations == 0 {
            return Ok(Self::new(fd_stations, 0, 0.0, 1.0 / m, 0.0));
        }
        let denom = 2.0 * n + m;
        Ok(Self {
            fd_stations,
            hd_stations,
            ap_access: n / denom,
            fd_access: if fd_stations > 0 { 1.0 / denom } else { 0.0 },
            hd_access: 1.0 / denom,
        })
    }

    pub fn station_count(&self) -> u32 {
        self.fd_stations + self.hd_stations
    }

    /// `p_A + m·p_F + n·p_H`.
    pub fn access_sum(&self) -> f64 {
        self.ap_access
            + f64::from(self.fd_stations) * self.fd_access
            + f64::from(self.hd_stations) * self.hd_access
    }

    /// Every violated invariant; empty when the configuration is usable.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.station_count() == 0 {
            out.push(Violation::EmptyNetwork);
        }
        let probs = [
            (AccessOf::AccessPoint, self.ap_access),
            (AccessOf::FullDuplex, self.fd_access),
            (AccessOf::HalfDuplex, self.hd_access),
        ];
        let mut in_range = true;
        for (of, value) in probs {
            if !(0.0..=1.0).contains(&value) {
                in_range = false;
                out.push(Violation::OutOfRange { of, value });
            }
        }
        if self.fd_stations == 0 && self.fd_access != 0.0 {
            out.push(Violation::AbsentClassAccess {
                class: StationClass::FullDuplex,
                value: self.fd_access,
            });
        }
        if self.hd_stations == 0 && self.hd_access != 0.0 {
            out.push(Violation::AbsentClassAccess {
                class: StationClass::HalfDuplex,
                value: self.hd_access,
            });
        }
        if in_range {
            let sum = self.access_sum();
            if (sum - 1.0).abs() > PROBABILITY_TOLERANCE {
                out.push(Violation::ProbabilitySum { sum });
            }
        }
        out
    }

    pub fn validated(self) -> Result<Self, Error> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidConfig(violations))
        }
    }

    /// Fraction of AP-won slots whose head-of-queue packet is for a
    /// half-duplex station: `min(1, n/(n+m) · (p_A + m·p_F)/p_A)`.
    ///
    /// Conventions where the expression is undefined: 1 when `m = 0`, 0 when
    /// `n = 0`, and 0 when `p_A = 0`. In the last case `p` is always
    /// multiplied by `p_A`, so no throughput depends on the choice.
    pub fn head_fraction(&self) -> Result<f64, Error> {
        let cfg = self.validated()?;
        Ok(cfg.head_fraction_unchecked())
    }

    fn head_fraction_unchecked(&self) -> f64 {
        if self.fd_stations == 0 {
            return 1.0;
        }
        if self.hd_stations == 0 || self.ap_access == 0.0 {
            return 0.0;
        }
        let m = f64::from(self.fd_stations);
        let n = f64::from(self.hd_stations);
        // FD packets leave at least as fast as HD ones reach the head.
        if n * self.fd_access >= self.ap_access {
            return 1.0;
        }
        let balanced = n * (self.ap_access + m * self.fd_access) / ((n + m) * self.ap_access);
        balanced.min(1.0)
    }

    /// Per-flow stationary throughputs.
    pub fn throughputs(&self) -> Result<ThroughputReport, Error> {
        let cfg = self.validated()?;
        let p = cfg.head_fraction_unchecked();
        let m = f64::from(cfg.fd_stations);
        let n = f64::from(cfg.hd_stations);

        let (hd_down, hd_up) = if cfg.hd_stations > 0 {
            (cfg.ap_access * p / n, cfg.hd_access)
        } else {
            (0.0, 0.0)
        };
        // An FD station's downlink and uplink always share a slot.
        let fd = if cfg.fd_stations > 0 {
            cfg.ap_access * (1.0 - p) / m + cfg.fd_access
        } else {
            0.0
        };
        Ok(ThroughputReport {
            head_fraction: p,
            hd_down,
            hd_up,
            fd_down: fd,
            fd_up: fd,
            sum: 1.0 + m * cfg.fd_access + cfg.ap_access * (1.0 - p),
        })
    }
}

/// Normalized per-station throughputs plus the head fraction and system sum.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThroughputReport {
    /// Fraction of AP-won slots used for a half-duplex station.
    pub head_fraction: f64,
    /// AP to one half-duplex station.
    pub hd_down: f64,
    /// One half-duplex station to the AP.
    pub hd_up: f64,
    /// AP to one full-duplex station.
    pub fd_down: f64,
    /// One full-duplex station to the AP.
    pub fd_up: f64,
    pub sum: f64,
}

/// Class-wide totals (per-station value times class size).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassTotals {
    pub hd_down: f64,
    pub hd_up: f64,
    pub fd_down: f64,
    pub fd_up: f64,
}

impl ThroughputReport {
    pub fn totals(&self, fd_stations: u32, hd_stations: u32) -> ClassTotals {
        let m = f64::from(fd_stations);
        let n = f64::from(hd_stations);
        ClassTotals {
            hd_down: self.hd_down * n,
            hd_up: self.hd_up * n,
            fd_down: self.fd_down * m,
            fd_up: self.fd_up * m,
        }
    }

    /// `n·(hd_down + hd_up) + m·(fd_down + fd_up)`; agrees with `sum`.
    pub fn flow_sum(&self, fd_stations: u32, hd_stations: u32) -> f64 {
        let t = self.totals(fd_stations, hd_stations);
        t.hd_down + t.hd_up + t.fd_down + t.fd_up
    }
}

/// Sum-throughput gain of an equal-access network over an all-half-duplex
/// one: `1 + m/(1+m+n)` when `n > 0`.
///
/// With `n = 0` the head fraction drops to 0, every AP slot is full-duplex
/// too, and the gain is 2; the value always equals
/// `NetworkConfig::dca(m, n)?.throughputs()?.sum`.
pub fn dca_gain(fd_stations: u32, hd_stations: u32) -> Result<f64, Error> {
    if fd_stations == 0 && hd_stations == 0 {
        return Err(Error::EmptyNetwork);
    }
    if hd_stations == 0 {
        return Ok(2.0);
    }
    let m = f64::from(fd_stations);
    Ok(1.0 + m / (1.0 + m + f64::from(hd_stations)))
}

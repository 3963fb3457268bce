#![allow(dead_code)]

use fdsat_core::NetworkConfig;
use rand::Rng;

/// Solves `p·p_A/n = p_F + (1-p)·p_A/m` on `[0, 1]` by bisection, clamping
/// to 1 when half-duplex depletion never catches up. Independent of the
/// closed form in the crate.
pub fn head_fraction_by_bisection(cfg: &NetworkConfig) -> f64 {
    let m = f64::from(cfg.fd_stations);
    let n = f64::from(cfg.hd_stations);
    let excess = |p: f64| p * cfg.ap_access / n - cfg.fd_access - (1.0 - p) * cfg.ap_access / m;
    if excess(1.0) <= 0.0 {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Valid config with both classes present. `ratio = n·p_F/p_A` selects the
/// regime (balanced below 1, saturated at or above).
pub fn config_with_ratio(m: u32, n: u32, ratio: f64, hd_over_fd: f64) -> NetworkConfig {
    let mf = f64::from(m);
    let nf = f64::from(n);
    // p_F = ratio·p_A/n, p_H = hd_over_fd·p_F, then normalize.
    let fd = ratio / nf;
    let hd = hd_over_fd * fd;
    let total = 1.0 + mf * fd + nf * hd;
    NetworkConfig::new(m, n, 1.0 / total, fd / total, hd / total)
}

pub fn random_mixed_config<R: Rng>(rng: &mut R, max_stations: u32) -> NetworkConfig {
    let m = rng.random_range(1..=max_stations);
    let n = rng.random_range(1..=max_stations);
    config_with_ratio(
        m,
        n,
        rng.random_range(0.2..3.0),
        rng.random_range(0.25..4.0),
    )
}

/// Any valid config, including single-class and `p_A = 0` ones.
pub fn random_any_config<R: Rng>(rng: &mut R, max_stations: u32) -> NetworkConfig {
    match rng.random_range(0..6) {
        0 => {
            let n = rng.random_range(1..=max_stations);
            let hd = rng.random_range(0.0..1.0 / f64::from(n));
            NetworkConfig::new(0, n, 1.0 - f64::from(n) * hd, 0.0, hd)
        }
        1 => {
            let m = rng.random_range(1..=max_stations);
            let fd = rng.random_range(0.0..1.0 / f64::from(m));
            NetworkConfig::new(m, 0, 1.0 - f64::from(m) * fd, fd, 0.0)
        }
        2 => {
            let m = rng.random_range(1..=max_stations);
            let n = rng.random_range(1..=max_stations);
            let c = config_with_ratio(m, n, 1.0, rng.random_range(0.25..4.0));
            // drop the AP and renormalize
            let s = f64::from(m) * c.fd_access + f64::from(n) * c.hd_access;
            NetworkConfig::new(m, n, 0.0, c.fd_access / s, c.hd_access / s)
        }
        _ => random_mixed_config(rng, max_stations),
    }
}

//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

use std::process::{Command, ExitCode};
use std::time::Instant;

use fdsat_core::{
    compare, run, NetworkConfig, QueueDiscipline, RunSpec, Simulation, Station, StationClass,
    Winner,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXACT: f64 = 1e-12;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EXACT
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Valid probabilities for the given mix, absent classes at zero.
fn random_config(rng: &mut ChaCha8Rng, m: u32, n: u32) -> NetworkConfig {
    let ap: f64 = rng.random_range(0.01..0.99);
    let wf = if m > 0 {
        rng.random_range(0.05..1.0)
    } else {
        0.0
    };
    let wh = if n > 0 {
        rng.random_range(0.05..1.0)
    } else {
        0.0
    };
    let scale = (1.0 - ap) / (m as f64 * wf + n as f64 * wh);
    NetworkConfig::new(m, n, ap, wf * scale, wh * scale)
}

fn corner_sums() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    for k in 1..=50 {
        for _ in 0..20 {
            for (m, n, want) in [(0, k, 1.0), (k, 0, 2.0)] {
                let cfg = random_config(&mut rng, m, n);
                let sum = cfg.throughputs().map_err(|e| e.to_string())?.sum;
                ensure(close(sum, want), || {
                    format!("{cfg:?}: sum {sum}, want {want}")
                })?;
                checked += 1;
            }
        }
        for (m, n, want) in [(0, k, 1.0), (k, 0, 2.0)] {
            for cfg in [NetworkConfig::dca(m, n), NetworkConfig::fairness(m, n)] {
                let sum = cfg
                    .and_then(|c| c.throughputs())
                    .map_err(|e| e.to_string())?
                    .sum;
                ensure(close(sum, want), || {
                    format!("preset ({m},{n}): sum {sum}, want {want}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} single-class configs"))
}

fn dca_head_fraction() -> Outcome {
    for m in 1..=50 {
        for n in 1..=50 {
            let p = NetworkConfig::dca(m, n)
                .and_then(|c| c.head_fraction())
                .map_err(|e| e.to_string())?;
            ensure(p == 1.0, || format!("dca({m},{n}): p = {p}"))?;
        }
    }
    Ok("p = 1 for 1 <= m,n <= 50".into())
}

fn dca_gains() -> Outcome {
    let mut shown = Vec::new();
    for (m, want) in [(1, 4.0 / 3.0), (2, 1.4), (4, 13.0 / 9.0)] {
        let sum = NetworkConfig::dca(m, m)
            .and_then(|c| c.throughputs())
            .map_err(|e| e.to_string())?
            .sum;
        ensure(close(sum, want), || {
            format!("dca({m},{m}): sum {sum}, want {want}")
        })?;
        shown.push(format!("{sum:.4}"));
    }
    Ok(format!("sums {}", shown.join(", ")))
}

fn fairness_flows() -> Outcome {
    for m in 0..40 {
        let n = 40 - m;
        let r = NetworkConfig::fairness(m, n)
            .and_then(|c| c.throughputs())
            .map_err(|e| e.to_string())?;
        let want = 1.0 / f64::from(2 * n + m);
        let mut flows = vec![("hd_down", r.hd_down), ("hd_up", r.hd_up)];
        if m > 0 {
            flows.extend([("fd_down", r.fd_down), ("fd_up", r.fd_up)]);
        }
        for (name, v) in flows {
            ensure(close(v, want), || {
                format!("fair({m},{n}) {name} = {v}, want {want}")
            })?;
        }
    }
    Ok("every flow 1/(2n+m) for m = 0..39".into())
}

fn sweep_shape() -> Outcome {
    let mut prev = f64::NEG_INFINITY;
    for m in 0..=40 {
        let n = 40 - m;
        let dca = NetworkConfig::dca(m, n)
            .and_then(|c| c.throughputs())
            .map_err(|e| e.to_string())?
            .sum;
        let fair = NetworkConfig::fairness(m, n)
            .and_then(|c| c.throughputs())
            .map_err(|e| e.to_string())?
            .sum;
        ensure(dca > prev, || {
            format!("dca sum not increasing at m={m}: {prev} -> {dca}")
        })?;
        ensure(fair <= dca + EXACT, || {
            format!("m={m}: fair {fair} > dca {dca}")
        })?;
        if m == 0 || m == 40 {
            ensure(close(fair, dca), || {
                format!("m={m}: fair {fair} != dca {dca}")
            })?;
        }
        prev = dca;
    }
    let first = NetworkConfig::dca(0, 40)
        .and_then(|c| c.throughputs())
        .map_err(|e| e.to_string())?
        .sum;
    ensure(close(first, 1.0) && close(prev, 2.0), || {
        format!("endpoints {first}, {prev}")
    })?;
    Ok("dca 1 -> 2 increasing, fair <= dca, equal at ends".into())
}

fn simulator_oracle() -> Outcome {
    let cases = [
        (
            "dca(2,2)",
            NetworkConfig::dca(2, 2).map_err(|e| e.to_string())?,
        ),
        (
            "fair(2,2)",
            NetworkConfig::fairness(2, 2).map_err(|e| e.to_string())?,
        ),
        (
            "explicit(1,1,0.6,0.3,0.1)",
            NetworkConfig::new(1, 1, 0.6, 0.3, 0.1),
        ),
    ];
    let mut lines = Vec::new();
    let mut failed = false;
    for (name, cfg) in cases {
        let theory = cfg.throughputs().map_err(|e| e.to_string())?;
        let spec = RunSpec {
            measured_slots: 1_000_000,
            warmup_slots: 10_000,
            capacity: 10 * cfg.station_count() as usize,
            discipline: QueueDiscipline::Backlogged,
            seed: 0,
        };
        let start = Instant::now();
        let stats = run(&cfg, &spec).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed().as_secs_f64();
        let result = compare(&theory, &stats, 4.0);
        let worst = result
            .flows
            .iter()
            .filter_map(|f| f.z.map(|z| (f.flow.name(), z)))
            .fold(("-", 0.0f64), |acc, (n, z)| {
                if z.abs() > acc.1.abs() {
                    (n, z)
                } else {
                    acc
                }
            });
        if result.passed {
            lines.push(format!(
                "{name} pass (max |z| {:.2} on {}, {elapsed:.2}s)",
                worst.1.abs(),
                worst.0
            ));
        } else {
            failed = true;
            let bad: Vec<_> = result
                .failures()
                .map(|f| {
                    let est = f.estimate.map_or(f64::NAN, |e| e.mean);
                    format!(
                        "{} theory {:.6} est {:.6} z {:.1}",
                        f.flow.name(),
                        f.theory,
                        est,
                        f.z.unwrap_or(f64::NAN)
                    )
                })
                .collect();
            lines.push(format!("{name} FAIL [{}]", bad.join("; ")));
        }
    }
    if failed {
        Err(lines.join(" | "))
    } else {
        Ok(lines.join(" | "))
    }
}

fn balance_equation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut interior = 0;
    for _ in 0..1000 {
        let m = rng.random_range(1..=8);
        let n = rng.random_range(1..=8);
        let cfg = random_config(&mut rng, m, n);
        let p = cfg.head_fraction().map_err(|e| e.to_string())?;
        if p < 1.0 {
            interior += 1;
            let lhs = p * cfg.ap_access / f64::from(n);
            let rhs = cfg.fd_access + (1.0 - p) * cfg.ap_access / f64::from(m);
            ensure(close(lhs, rhs), || format!("{cfg:?}: {lhs} != {rhs}"))?;
        }
    }
    ensure(interior > 0, || "no config had p < 1".into())?;
    Ok(format!("1000 configs, {interior} with p < 1"))
}

fn conservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut steps = 0u64;
    for discipline in [QueueDiscipline::Backlogged, QueueDiscipline::Fixed] {
        for _ in 0..100 {
            let (m, n) = loop {
                let mn = (rng.random_range(0..=6), rng.random_range(0..=6));
                if mn != (0, 0) {
                    break mn;
                }
            };
            let cfg = random_config(&mut rng, m, n);
            let capacity = rng.random_range(1..=3 * (m + n) as usize);
            let mut sim = Simulation::new(cfg, capacity, rng.random())
                .map_err(|e| e.to_string())?
                .with_discipline(discipline);
            for _ in 0..500 {
                let out = sim.step();
                steps += 1;
                let what = || format!("{cfg:?} {discipline:?}: {out:?}");
                match out.winner {
                    Winner::Ap => {
                        let to = out.downlink_to.ok_or_else(what)?;
                        ensure(out.head_class_at_win == Some(to.class()), what)?;
                        let up = to.is_full_duplex().then_some(to);
                        ensure(out.uplink_from == up, what)?;
                    }
                    Winner::Station(s) => {
                        ensure(
                            out.uplink_from == Some(s) && out.head_class_at_win.is_none(),
                            what,
                        )?;
                        match s.class() {
                            StationClass::HalfDuplex => ensure(out.downlink_to.is_none(), what)?,
                            StationClass::FullDuplex => ensure(
                                out.downlink_to.is_none() || out.downlink_to == Some(s),
                                what,
                            )?,
                        }
                    }
                }
                if let (Some(Station::Hd(_)), Some(Station::Hd(_))) =
                    (out.uplink_from, out.downlink_to)
                {
                    return Err(format!("HD exclusivity: {}", what()));
                }
                let len = sim.queue().len();
                let restored = match discipline {
                    QueueDiscipline::Fixed => len == capacity,
                    QueueDiscipline::Backlogged => len >= capacity,
                };
                ensure(restored, || {
                    format!("queue length {len}, capacity {capacity}: {}", what())
                })?;
            }
        }
    }
    Ok(format!("{steps} random steps"))
}

fn starvation_decay() -> Outcome {
    let cfg = NetworkConfig::dca(4, 4).map_err(|e| e.to_string())?;
    let mean_fraction = |capacity: usize| -> Result<f64, String> {
        let mut total = 0.0;
        for seed in 0..5 {
            let spec = RunSpec {
                measured_slots: 1_000_000,
                warmup_slots: 10_000,
                capacity,
                discipline: QueueDiscipline::Fixed,
                seed,
            };
            let stats = run(&cfg, &spec).map_err(|e| e.to_string())?;
            total += stats.fd_wins_no_packet as f64 / stats.total_slots as f64;
        }
        Ok(total / 5.0)
    };
    let large = mean_fraction(80)?;
    let small = mean_fraction(16)?;
    let detail = format!("fixed queue: capacity 80 -> {large:.6}, capacity 16 -> {small:.6}");
    if large < small {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn determinism() -> Outcome {
    let args = [
        "simulate", "--preset", "dca", "--m", "2", "--n", "2", "--seed", "0",
    ];
    let once = || {
        Command::new(env!("CARGO_BIN_EXE_fdsat"))
            .args(args)
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (once()?, once()?);
    ensure(a.status.success() && b.status.success(), || {
        "simulate exited non-zero".into()
    })?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || {
        "outputs differ".into()
    })?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("corner-case exactness", corner_sums),
        ("dca head fraction", dca_head_fraction),
        ("dca gains", dca_gains),
        ("fairness flows", fairness_flows),
        ("40-station sweep shape", sweep_shape),
        ("theory vs simulator", simulator_oracle),
        ("balance equation", balance_equation),
        ("simulator conservation", conservation),
        ("starvation decay", starvation_decay),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Acceptance criteria. Each prints a single `[PASS]` or `[FAIL]` line with
//! the measured values; the process fails if any criterion does.

use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::OnceLock;
use std::time::Instant;

use jointgiant::analytic::{self, bd_prob, h_eval, DEFAULT_BETA_TOL, DEFAULT_CURVE_TOL};
use jointgiant::branching::{estimate_event, growth_check, Sampler, TreeEvent};
use jointgiant::harness::{default_theta, mid_cutoff, run_trial, sweep_to_writer, TrialConfig, TrialRecord};
use jointgiant::jointdecomp::{brute_force_joint_components, joint_components};
use jointgiant::rng::{derive_seed, SplitMix64};
use jointgiant::DoubleGraph;

const N: usize = 200_000;

static FAILED: AtomicBool = AtomicBool::new(false);

fn report(id: u32, title: &str, ok: bool, detail: String) {
    println!("[{}] C{id} {title}: {detail}", if ok { "PASS" } else { "FAIL" });
    if !ok {
        FAILED.store(true, Ordering::Relaxed);
    }
}

fn frac(r: &TrialRecord) -> f64 {
    r.largest as f64 / r.n as f64
}

/// Five supercritical runs at (2.6, 2.6) with cores and s = 4, shared by
/// criteria 3, 8 and 9.
fn supercritical_runs() -> &'static Vec<TrialRecord> {
    static RUNS: OnceLock<Vec<TrialRecord>> = OnceLock::new();
    RUNS.get_or_init(|| {
        (0..5)
            .map(|i| {
                let cfg = TrialConfig { s: Some(4), ..TrialConfig::new(N, 2.6, 2.6, derive_seed(2026, i)).with_cores() };
                run_trial(&cfg).unwrap()
            })
            .collect()
    })
}

fn c01_diagonal_critical_point() {
    let start = Instant::now();
    let (ls, bs) = analytic::diagonal_critical(1e-10).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let ok = (ls - 2.4554).abs() <= 5e-4 && (bs - 0.5117).abs() <= 5e-4 && secs < 1.0;
    report(1, "diagonal critical point", ok, format!("lambda*={ls:.7} beta*={bs:.7} in {secs:.3}s"));
}

fn c02_root_structure() {
    let below = analytic::beta_value(2.4, 2.4).unwrap();
    let above = analytic::beta_value(2.5, 2.5).unwrap();
    let residual = (above - (1.0 - (-2.5 * above).exp()).powi(2)).abs();
    let mut b = 1.0f64;
    for _ in 0..100_000 {
        let next = (1.0 - (-2.5 * b).exp()).powi(2);
        if next == b {
            break;
        }
        b = next;
    }
    let ok = below == 0.0 && above > 0.0 && residual < 1e-10 && (above - b).abs() < 1e-9;
    report(
        2,
        "root structure",
        ok,
        format!("beta(2.4)={below} beta(2.5)={above:.12} residual={residual:.1e} oracle_diff={:.1e}", (above - b).abs()),
    );
}

fn c03_giant_size() {
    let beta = analytic::beta_value(2.6, 2.6).unwrap();
    let runs = supercritical_runs();
    let start = Instant::now();
    let base = run_trial(&TrialConfig::new(N, 2.6, 2.6, derive_seed(2026, 0))).unwrap();
    let secs = start.elapsed().as_secs_f64();
    assert_eq!(base.largest, runs[0].largest);
    let fracs: Vec<f64> = runs.iter().map(frac).collect();
    let seconds: Vec<usize> = runs.iter().map(|r| r.second_largest).collect();
    let ok = fracs.iter().all(|f| (f - beta).abs() <= 0.015) && seconds.iter().all(|&s| s <= 2) && secs <= 5.0;
    report(
        3,
        "giant size",
        ok,
        format!("beta={beta:.5} largest/n={fracs:.5?} second={seconds:?} trial={secs:.2}s"),
    );
}

fn c04_subcritical() {
    let cutoff = mid_cutoff(N);
    let runs: Vec<TrialRecord> = (0..10)
        .map(|i| run_trial(&TrialConfig::new(N, 2.3, 2.3, derive_seed(2027, i))).unwrap())
        .collect();
    let small = runs.iter().filter(|r| r.largest <= 2).count();
    let no_mid = runs.iter().filter(|r| r.count_mid == 0 && r.large_sizes.is_empty()).count();
    let largest: Vec<usize> = runs.iter().map(|r| r.largest).collect();
    let ok = small >= 9 && no_mid >= 9;
    report(
        4,
        "subcritical regime",
        ok,
        format!("largest={largest:?} runs_largest<=2={small}/10 runs_without_[3,{cutoff}]={no_mid}/10"),
    );
}

fn c05_first_order_jump() {
    let mut ok = true;
    let mut cells = Vec::new();
    for i in 0..=8 {
        let l = 2.30 + 0.05 * i as f64;
        let f = frac(&run_trial(&TrialConfig::new(N, l, l, derive_seed(2028, i))).unwrap());
        if (i <= 3 && f > 0.01) || (i >= 4 && f < 0.45) || (f > 0.05 && f < 0.40) {
            ok = false;
        }
        cells.push(format!("{l:.2}:{f:.4}"));
    }
    report(5, "first-order jump", ok, cells.join(" "));
}

fn c06_oracle_equivalence() {
    let mut rng = SplitMix64::new(2029);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let n = 1 + (rng.next() % 8) as usize;
        let pr = if rng.next() % 2 == 0 { 0.2 } else { 0.5 };
        let pb = if rng.next() % 2 == 0 { 0.2 } else { 0.5 };
        let (mut red, mut blue) = (Vec::new(), Vec::new());
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                if rng.unit() < pr {
                    red.push((u, v));
                }
                if rng.unit() < pb {
                    blue.push((u, v));
                }
            }
        }
        let g = DoubleGraph::from_edges(n, &red, &blue).unwrap();
        if joint_components(&g) != brute_force_joint_components(&g).unwrap() {
            mismatches += 1;
        }
    }
    report(6, "oracle equivalence", mismatches == 0, format!("{mismatches} mismatches in 1000 graphs"));
}

fn c07_branching_consistency() {
    let grid = [1.5, 2.5, 4.0];
    let trials = 100_000;
    let mut worst_z = 0.0f64;
    let mut ok = true;
    for (a, &l1) in grid.iter().enumerate() {
        for (b, &l2) in grid.iter().enumerate() {
            let q = bd_prob(l1, l2, 5);
            for d in 0..=5 {
                let seed = derive_seed(2030, (a * 100 + b * 10 + d) as u64);
                let r = estimate_event(l1, l2, TreeEvent::Binary(d), trials, seed, Sampler::Lazy).unwrap();
                let diff = (r.estimate - q[d]).abs();
                if r.std_error == 0.0 {
                    ok &= diff == 0.0;
                } else {
                    let z = diff / r.std_error;
                    worst_z = worst_z.max(z);
                    ok &= z <= 4.0;
                }
            }
        }
    }
    let mut worst_growth = 0.0f64;
    for (i, &(l1, l2)) in [(1.5, 1.5), (1.5, 4.0), (2.5, 2.5), (4.0, 4.0)].iter().enumerate() {
        let table = growth_check(l1, l2, 6, trials, derive_seed(2031, i as u64), &[]).unwrap();
        for g in &table.generations {
            if g.std_error == 0.0 {
                ok &= g.mean == g.expected;
            } else {
                let z = (g.mean - g.expected).abs() / g.std_error;
                worst_growth = worst_growth.max(z);
                ok &= z <= 3.0;
            }
        }
    }
    report(
        7,
        "branching consistency",
        ok,
        format!("max B_d z={worst_z:.2} (limit 4), max growth z={worst_growth:.2} (limit 3)"),
    );
}

fn c08_core_inclusion() {
    let beta = analytic::beta_value(2.6, 2.6).unwrap();
    let theta = default_theta(N);
    let runs = supercritical_runs();
    let inside: Vec<Option<bool>> = runs.iter().map(|r| r.largest_in_size_core).collect();
    let cores: Vec<f64> = runs.iter().map(|r| r.size_core.unwrap() as f64 / N as f64).collect();
    let ok = runs.iter().all(|r| {
        r.theta == theta
            && r.largest_in_size_core == Some(true)
            && r.size_core.unwrap() >= r.largest
            && r.size_core.unwrap() as f64 / N as f64 >= beta - 0.02
    });
    report(8, "core inclusion", ok, format!("theta={theta} inside={inside:?} size_core/n={cores:.5?}"));
}

fn c09_upper_bound_statistic() {
    let beta = analytic::beta_value(2.6, 2.6).unwrap();
    let runs = supercritical_runs();
    let fracs: Vec<f64> = runs.iter().map(|r| r.br_fraction.unwrap()).collect();
    let ok = fracs.iter().all(|f| (f - beta).abs() <= 0.03);
    report(9, "upper-bound statistic", ok, format!("beta={beta:.5} br_fraction(s=4)={fracs:.5?}"));
}

fn c10_positive_margins() {
    let mut checked = 0;
    let mut worst = f64::INFINITY;
    for i in 1..=20 {
        for j in 1..=20 {
            let (l1, l2) = (1.0 + 0.25 * i as f64, 1.0 + 0.25 * j as f64);
            let b = analytic::beta_value(l1, l2).unwrap();
            if b > 0.0 {
                let (m1, m2) = analytic::epsexist_margins(l1, l2, b);
                worst = worst.min(m1.min(m2));
                checked += 1;
            }
        }
    }
    report(10, "positive margins", worst > 0.0, format!("{checked} supercritical cells, min margin={worst:.4}"));
}

fn c11_asymmetric_curve() {
    let l2c = analytic::critical_lambda2(4.0, DEFAULT_CURVE_TOL).unwrap().unwrap();
    let at = analytic::beta(4.0, l2c, DEFAULT_BETA_TOL).unwrap();
    let (h, dh, _) = h_eval(4.0, l2c, at.local_max_location);
    let below = frac(&run_trial(&TrialConfig::new(N, 4.0, l2c - 0.1, 2032)).unwrap());
    let beta_above = analytic::beta_value(4.0, l2c + 0.1).unwrap();
    let above = frac(&run_trial(&TrialConfig::new(N, 4.0, l2c + 0.1, 2033)).unwrap());
    let ok = h.abs() < 1e-8 && dh.abs() < 1e-6 && below <= 0.01 && above >= beta_above - 0.02;
    report(
        11,
        "asymmetric curve",
        ok,
        format!(
            "lambda2c={l2c:.9} |h|={:.1e} |h'|={:.1e} below={below:.4} above={above:.4} beta_above={beta_above:.4}",
            h.abs(),
            dh.abs()
        ),
    );
}

fn c12_sweep_determinism() {
    let mut grid = Vec::new();
    for (i, l) in [1.5, 2.3, 2.6, 3.0].iter().enumerate() {
        for s in 0..4u64 {
            let cfg = TrialConfig::new(20_000, *l, l + 0.2, derive_seed(2034, i as u64 * 10 + s));
            grid.push(if s % 2 == 0 { cfg.with_cores() } else { cfg });
        }
    }
    let mut one = Vec::new();
    let mut eight = Vec::new();
    sweep_to_writer(&grid, 1, false, &mut one).unwrap();
    sweep_to_writer(&grid, 8, false, &mut eight).unwrap();
    let ok = one == eight && one.iter().filter(|&&b| b == b'\n').count() == grid.len() + 1;
    report(12, "sweep determinism", ok, format!("{} bytes, identical={}", one.len(), one == eight));
}

fn main() -> ExitCode {
    c01_diagonal_critical_point();
    c02_root_structure();
    c03_giant_size();
    c04_subcritical();
    c05_first_order_jump();
    c06_oracle_equivalence();
    c07_branching_consistency();
    c08_core_inclusion();
    c09_upper_bound_statistic();
    c10_positive_margins();
    c11_asymmetric_curve();
    c12_sweep_determinism();
    if FAILED.load(Ordering::Relaxed) {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

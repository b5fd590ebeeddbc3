use std::io::Write;

use serde::Serialize;

use super::{fmt_float, mid_cutoff, run_trial, TrialConfig, TrialRecord};
use crate::error::{Error, Result};
use crate::rng::derive_seed;

/// First-moment bound on the expected number of joint components with
/// `3 <= size <= k_max`:
/// `sum_k C(n, k) k^(2k-4) (l1 l2 / n^2)^(k-1)`, each term summed from logs.
pub fn first_moment_bound(n: usize, lambda1: f64, lambda2: f64, k_max: usize) -> f64 {
    let product = lambda1 * lambda2;
    if product == 0.0 || k_max < 3 || n < 3 {
        return 0.0;
    }
    let nf = n as f64;
    let log_rate = product.ln() - 2.0 * nf.ln();
    // ln C(n, k), advanced incrementally.
    let mut log_binom = 0.0;
    let mut total = 0.0;
    for k in 1..=k_max.min(n) {
        log_binom += (nf - (k - 1) as f64).ln() - (k as f64).ln();
        if k >= 3 {
            let kf = k as f64;
            total += (log_binom + (2.0 * kf - 4.0) * kf.ln() + (kf - 1.0) * log_rate).exp();
        }
    }
    total
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusSummary {
    pub records: Vec<TrialRecord>,
    /// Components with `3 <= size <= floor(sqrt(n))`, summed over seeds.
    pub total_mid: usize,
    pub seeds_without_mid: usize,
    pub seeds_largest_at_most_two: usize,
    pub first_moment_bound: f64,
}

pub const CENSUS_HEADER: &str =
    "row,seed,largest,second_largest,count_size1,count_size2,count_mid,first_moment_bound";

/// Joint component size census over `num_seeds` graphs with seeds
/// `derive_seed(master_seed, i)`; one CSV row per seed and a `total` row.
pub fn census_experiment<W: Write>(
    n: usize,
    lambda1: f64,
    lambda2: f64,
    num_seeds: usize,
    master_seed: u64,
    mut out: W,
) -> Result<CensusSummary> {
    if num_seeds == 0 {
        return Err(Error::param("need at least one seed"));
    }
    let records = (0..num_seeds)
        .map(|i| run_trial(&TrialConfig::new(n, lambda1, lambda2, derive_seed(master_seed, i as u64))))
        .collect::<Result<Vec<_>>>()?;
    let bound = first_moment_bound(n, lambda1, lambda2, mid_cutoff(n));

    writeln!(out, "{CENSUS_HEADER}")?;
    for (i, r) in records.iter().enumerate() {
        writeln!(
            out,
            "{i},{},{},{},{},{},{},",
            r.seed, r.largest, r.second_largest, r.count_size1, r.count_size2, r.count_mid
        )?;
    }
    let sum = |f: fn(&TrialRecord) -> usize| records.iter().map(f).sum::<usize>();
    let total_mid = sum(|r| r.count_mid);
    writeln!(
        out,
        "total,,{},{},{},{},{},{}",
        records.iter().map(|r| r.largest).max().unwrap(),
        records.iter().map(|r| r.second_largest).max().unwrap(),
        sum(|r| r.count_size1),
        sum(|r| r.count_size2),
        total_mid,
        fmt_float(bound)
    )?;
    out.flush()?;

    Ok(CensusSummary {
        total_mid,
        seeds_without_mid: records.iter().filter(|r| r.count_mid == 0).count(),
        seeds_largest_at_most_two: records.iter().filter(|r| r.largest <= 2).count(),
        first_moment_bound: bound,
        records,
    })
}

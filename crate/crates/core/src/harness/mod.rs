//! Experiment driver: single trials, parallel sweeps, the component census
//! and the phase diagram.

mod census;
mod phase;
mod sweep;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::analytic;
use crate::doublegraph::generate;
use crate::error::{Error, Result};
use crate::jointdecomp::{br_fraction, census as size_census, joint_components, size_core, tadpole_core};

pub use census::{census_experiment, first_moment_bound, CensusSummary};
pub use phase::{emit_phase_diagram, render_svg, PhaseDiagram, PhaseGrid};
pub use sweep::{sweep, sweep_to_writer, CSV_HEADER};

/// One Monte Carlo trial. `theta` and `s` fall back to
/// [`default_theta`] and [`default_depth`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialConfig {
    pub n: usize,
    pub lambda1: f64,
    pub lambda2: f64,
    pub seed: u64,
    #[serde(default)]
    pub theta: Option<usize>,
    #[serde(default)]
    pub s: Option<usize>,
    #[serde(default)]
    pub compute_cores: bool,
}

impl TrialConfig {
    pub fn new(n: usize, lambda1: f64, lambda2: f64, seed: u64) -> Self {
        TrialConfig { n, lambda1, lambda2, seed, theta: None, s: None, compute_cores: false }
    }

    pub fn with_cores(mut self) -> Self {
        self.compute_cores = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::param("n must be at least 1"));
        }
        for l in [self.lambda1, self.lambda2] {
            if !l.is_finite() || l < 0.0 {
                return Err(Error::param(format!("intensity {l} must be finite and non-negative")));
            }
        }
        if self.theta == Some(0) || self.s == Some(0) {
            return Err(Error::param("theta and s must be positive"));
        }
        Ok(())
    }
}

/// `ceil(n^{3/5})`.
pub fn default_theta(n: usize) -> usize {
    ((n as f64).powf(0.6).ceil() as usize).max(1)
}

/// `max(3, ceil(ln ln n))`.
pub fn default_depth(n: usize) -> usize {
    let ll = (n as f64).ln().ln();
    if ll.is_finite() && ll > 3.0 {
        ll.ceil() as usize
    } else {
        3
    }
}

/// `floor(sqrt(n))`, the upper end of the "mid-size" component band.
pub fn mid_cutoff(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub n: usize,
    pub lambda1: f64,
    pub lambda2: f64,
    pub seed: u64,
    pub theta: usize,
    pub s: usize,
    pub compute_cores: bool,
    pub largest: usize,
    pub second_largest: usize,
    pub count_size1: usize,
    pub count_size2: usize,
    /// Components with `3 <= size <= floor(sqrt(n))`.
    pub count_mid: usize,
    /// Sizes above `floor(sqrt(n))`, largest first.
    pub large_sizes: Vec<usize>,
    pub tadpole_core: Option<usize>,
    pub size_core: Option<usize>,
    pub br_fraction: Option<f64>,
    /// Whether the largest joint component lies inside the size core, when
    /// that component has at least `theta` vertices and cores were computed.
    pub largest_in_size_core: Option<bool>,
    pub beta_predicted: f64,
    pub gen_ms: f64,
    pub decomp_ms: f64,
    pub cores_ms: f64,
}

fn millis(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

pub fn run_trial(cfg: &TrialConfig) -> Result<TrialRecord> {
    cfg.validate()?;
    let theta = cfg.theta.unwrap_or_else(|| default_theta(cfg.n));
    let s = cfg.s.unwrap_or_else(|| default_depth(cfg.n));
    let beta_predicted = analytic::beta_value(cfg.lambda1, cfg.lambda2)?;

    let start = Instant::now();
    let g = generate(cfg.n, cfg.lambda1, cfg.lambda2, cfg.seed)?;
    let gen_ms = millis(start);

    let start = Instant::now();
    let joint = joint_components(&g);
    let hist = size_census(&joint);
    let decomp_ms = millis(start);

    let cutoff = mid_cutoff(cfg.n);
    let mut large_sizes: Vec<usize> = hist
        .counts
        .range(cutoff + 1..)
        .flat_map(|(&k, &c)| std::iter::repeat(k).take(c))
        .collect();
    large_sizes.reverse();

    let mut record = TrialRecord {
        n: cfg.n,
        lambda1: cfg.lambda1,
        lambda2: cfg.lambda2,
        seed: cfg.seed,
        theta,
        s,
        compute_cores: cfg.compute_cores,
        largest: hist.largest,
        second_largest: hist.second_largest,
        count_size1: hist.count(1),
        count_size2: hist.count(2),
        count_mid: hist.count_between(3, cutoff),
        large_sizes,
        tadpole_core: None,
        size_core: None,
        br_fraction: None,
        largest_in_size_core: None,
        beta_predicted,
        gen_ms,
        decomp_ms,
        cores_ms: 0.0,
    };

    if cfg.compute_cores {
        let start = Instant::now();
        record.tadpole_core = Some(tadpole_core(&g).vertices.len());
        let core = size_core(&g, theta)?;
        record.size_core = Some(core.vertices.len());
        if let Some(big) = joint.largest_part().filter(|p| p.len() >= theta) {
            record.largest_in_size_core =
                Some(big.iter().all(|v| core.vertices.binary_search(v).is_ok()));
        }
        record.br_fraction = Some(br_fraction(&g, s)?);
        record.cores_ms = millis(start);
    }
    Ok(record)
}

/// Formats with 10 significant digits in plain decimal notation.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { format!("{x}") };
    }
    let sci = format!("{x:.9e}");
    let exponent: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if exponent >= 9 {
        return format!("{x:.0}");
    }
    let decimals = (9 - exponent) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(fmt_float(2.6), "2.6");
        assert_eq!(fmt_float(0.70735078293105), "0.7073507829");
        assert_eq!(fmt_float(1.0 / 3.0), "0.3333333333");
        assert_eq!(fmt_float(12345.678912345), "12345.67891");
        assert_eq!(fmt_float(0.0), "0");
        assert_eq!(fmt_float(-0.5), "-0.5");
        assert_eq!(fmt_float(1e-12), "0.000000000001");
        assert_eq!(fmt_float(9.99999999999), "10");
    }

    #[test]
    fn defaults() {
        assert_eq!(default_theta(200_000), 1_516);
        assert_eq!(default_depth(200_000), 3);
        assert_eq!(default_depth(1), 3);
        assert_eq!(mid_cutoff(200_000), 447);
        assert_eq!(mid_cutoff(16), 4);
    }

    #[test]
    fn single_vertex_trial() {
        let r = run_trial(&TrialConfig::new(1, 2.0, 2.0, 0).with_cores()).unwrap();
        assert_eq!(r.largest, 1);
        assert_eq!(r.second_largest, 0);
        assert_eq!(r.count_size1, 1);
        assert_eq!(r.size_core, Some(1));
    }

    #[test]
    fn trial_is_deterministic_and_consistent() {
        let cfg = TrialConfig { theta: Some(20), ..TrialConfig::new(5_000, 2.8, 2.8, 3).with_cores() };
        let a = run_trial(&cfg).unwrap();
        let b = run_trial(&cfg).unwrap();
        assert_eq!((a.largest, a.size_core, a.br_fraction), (b.largest, b.size_core, b.br_fraction));
        let total = a.count_size1 + 2 * a.count_size2 + a.large_sizes.iter().sum::<usize>();
        assert!(total + 3 * a.count_mid <= a.n);
        assert!(a.largest >= a.second_largest);
        assert_eq!(a.largest_in_size_core, Some(true));
        assert_eq!(a.beta_predicted, analytic::beta_value(2.8, 2.8).unwrap());
    }

    #[test]
    fn invalid_config() {
        assert!(run_trial(&TrialConfig::new(0, 1.0, 1.0, 0)).is_err());
        assert!(run_trial(&TrialConfig::new(10, -1.0, 1.0, 0)).is_err());
        assert!(run_trial(&TrialConfig { theta: Some(0), ..TrialConfig::new(10, 1.0, 1.0, 0) }).is_err());
    }

    #[test]
    fn config_json_defaults() {
        let cfg: TrialConfig =
            serde_json::from_str(r#"{"n": 10, "lambda1": 1.5, "lambda2": 2, "seed": 4}"#).unwrap();
        assert_eq!(cfg, TrialConfig::new(10, 1.5, 2.0, 4));
        assert!(serde_json::from_str::<TrialConfig>(r#"{"n": 10, "lambda1": 1, "lambda2": 2, "seed": 4, "x": 1}"#).is_err());
    }
}

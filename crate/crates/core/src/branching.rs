//! Bicoloured Galton-Watson trees and the binary red-blue tree events.
//!
//! `B_d` holds at a node when it is the root of a perfect binary tree of
//! height `d` in which every internal node has one red and one blue child.
//! `RB_k` is `B_k` surviving the deletion of any single generation-`k` node.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::{derive_seed, SplitMix64};
use crate::tree::{Color, ColoredTree};

pub const DEFAULT_NODE_CAP: usize = 1_000_000;

/// Samples the process breadth-first: every node above `depth` receives
/// Poisson(`lambda1`) red and then Poisson(`lambda2`) blue children.
/// Generation stops early, with `truncated` set, once `node_cap` nodes exist.
pub fn sample_tree(lambda1: f64, lambda2: f64, depth: usize, node_cap: usize, seed: u64) -> ColoredTree {
    let mut rng = SplitMix64::new(seed);
    let mut tree = ColoredTree::singleton();
    tree.set_explored_depth(depth);
    let mut head = 0usize;
    'grow: while head < tree.len() {
        let generation = tree.generation_of(head);
        if generation >= depth {
            break;
        }
        for (color, mean) in [(Color::Red, lambda1), (Color::Blue, lambda2)] {
            let count = rng.poisson(mean);
            for _ in 0..count {
                if tree.len() >= node_cap {
                    tree.mark_truncated(generation);
                    break 'grow;
                }
                tree.push_child(head as u32, color).expect("breadth-first order");
            }
        }
        head += 1;
    }
    tree
}

/// Largest `j <= cap` such that each node satisfies `B_j`, bottom-up.
fn binary_levels(tree: &ColoredTree, cap: usize) -> Vec<usize> {
    let len = tree.len();
    let mut level = vec![0usize; len];
    // Best child level per color, or None if no child of that color.
    let mut best: Vec<[Option<usize>; 2]> = vec![[None, None]; len];
    for i in (0..len).rev() {
        level[i] = match best[i] {
            [Some(r), Some(b)] => (r.min(b) + 1).min(cap),
            _ => 0,
        };
        let node = tree.nodes()[i];
        if let (Some(p), Some(c)) = (node.parent, node.color) {
            let slot = &mut best[p as usize][c.index()];
            *slot = Some(slot.map_or(level[i], |s| s.max(level[i])));
        }
    }
    level
}

/// Whether the root has property `B_d`.
pub fn has_binary_rb(tree: &ColoredTree, d: usize) -> Result<bool> {
    tree.check_depth(d)?;
    Ok(binary_levels(tree, d)[0] >= d)
}

/// Whether the root has property `RB_k`, decided by propagating one-deletion
/// robustness upwards from generation `k`.
///
/// A node at generation `i < k` is robust when, for each color, it has either
/// two children satisfying `B_{k-i-1}` or one robust child. Generation-`k`
/// nodes are never robust since they can be deleted themselves.
pub fn robust_rb(tree: &ColoredTree, k: usize) -> Result<bool> {
    if k == 0 {
        return Err(Error::param("robustness level must be positive"));
    }
    tree.check_depth(k)?;
    let len = tree.len();
    let level = binary_levels(tree, k);
    let generation = |i: usize| tree.generation_of(i);
    // ok_count saturates at 2.
    let mut ok_count = vec![[0u8; 2]; len];
    let mut robust_child = vec![[false; 2]; len];
    let mut robust = vec![false; len];
    for i in (0..len).rev() {
        let g = generation(i);
        if g > k {
            continue;
        }
        let needed = k - g;
        if g < k {
            robust[i] = (0..2).all(|c| ok_count[i][c] >= 2 || robust_child[i][c]);
        }
        let node = tree.nodes()[i];
        if let (Some(p), Some(c)) = (node.parent, node.color) {
            let p = p as usize;
            if level[i] >= needed {
                ok_count[p][c.index()] = (ok_count[p][c.index()] + 1).min(2);
            }
            robust_child[p][c.index()] |= robust[i];
        }
    }
    Ok(robust[0])
}

/// `RB_k` by deleting each generation-`k` node in turn and re-testing `B_k`.
pub fn robust_rb_naive(tree: &ColoredTree, k: usize) -> Result<bool> {
    if k == 0 {
        return Err(Error::param("robustness level must be positive"));
    }
    if !has_binary_rb(tree, k)? {
        return Ok(false);
    }
    for w in 0..tree.len() {
        if tree.generation_of(w) == k && !has_binary_rb(&tree.without_subtree(w), k)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact draw of the indicator of `B_d` that only generates the part of the
/// tree it needs: children of one color are examined one at a time and the
/// search stops at the first child carrying `B_{d-1}`. Unexamined siblings
/// are independent of everything examined, so the indicator has the same
/// law as `has_binary_rb(sample_tree(..), d)`.
pub fn sample_binary_rb(lambda1: f64, lambda2: f64, d: usize, rng: &mut SplitMix64) -> bool {
    if d == 0 {
        return true;
    }
    for mean in [lambda1, lambda2] {
        let count = rng.poisson(mean);
        let found = (0..count).any(|_| sample_binary_rb(lambda1, lambda2, d - 1, rng));
        if !found {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TreeEvent {
    /// `B_d`
    Binary(usize),
    /// `RB_k`
    RobustBinary(usize),
}

impl TreeEvent {
    pub fn name(&self) -> String {
        match self {
            TreeEvent::Binary(d) => format!("B_{d}"),
            TreeEvent::RobustBinary(k) => format!("RB_{k}"),
        }
    }
}

/// How `B_d` samples are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampler {
    /// [`sample_binary_rb`]; cost grows with the witness, not the tree.
    #[default]
    Lazy,
    /// [`sample_tree`] followed by [`has_binary_rb`].
    FullTree,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub event: String,
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    pub std_error: f64,
    /// Trees redrawn because the node cap cut them before the event depth.
    pub resampled: u64,
}

impl EstimateReport {
    fn new(event: String, trials: u64, successes: u64, resampled: u64) -> Self {
        let estimate = successes as f64 / trials as f64;
        EstimateReport {
            event,
            trials,
            successes,
            estimate,
            std_error: (estimate * (1.0 - estimate) / trials as f64).sqrt(),
            resampled,
        }
    }
}

/// Monte Carlo estimate of a tree event. Trial `i` draws from the stream
/// `derive_seed(seed, i)`.
pub fn estimate_event(
    lambda1: f64,
    lambda2: f64,
    event: TreeEvent,
    trials: u64,
    seed: u64,
    sampler: Sampler,
) -> Result<EstimateReport> {
    if trials == 0 {
        return Err(Error::param("trials must be positive"));
    }
    for lambda in [lambda1, lambda2] {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::param(format!("intensity {lambda} must be finite and non-negative")));
        }
    }
    let mut successes = 0u64;
    let mut resampled = 0u64;
    for i in 0..trials {
        let trial_seed = derive_seed(seed, i);
        let hit = match (event, sampler) {
            (TreeEvent::Binary(d), Sampler::Lazy) => {
                sample_binary_rb(lambda1, lambda2, d, &mut SplitMix64::new(trial_seed))
            }
            (TreeEvent::Binary(level), Sampler::FullTree) | (TreeEvent::RobustBinary(level), _) => {
                let mut attempt = 0u64;
                loop {
                    let s = if attempt == 0 { trial_seed } else { derive_seed(trial_seed, attempt) };
                    let tree = sample_tree(lambda1, lambda2, level, DEFAULT_NODE_CAP, s);
                    let outcome = match event {
                        TreeEvent::Binary(d) => has_binary_rb(&tree, d),
                        TreeEvent::RobustBinary(k) => robust_rb(&tree, k),
                    };
                    match outcome {
                        Ok(hit) => break hit,
                        Err(Error::Precondition(_)) => {
                            resampled += 1;
                            attempt += 1;
                            if attempt > 1_000 {
                                return Err(Error::Numeric(
                                    "node cap hit on 1000 consecutive redraws".into(),
                                ));
                            }
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
        };
        successes += hit as u64;
    }
    Ok(EstimateReport::new(event.name(), trials, successes, resampled))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenerationStat {
    pub generation: usize,
    pub mean: f64,
    pub std_error: f64,
    /// `(lambda1 + lambda2)^t`.
    pub expected: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthTable {
    pub trials: u64,
    pub generations: Vec<GenerationStat>,
    /// `(threshold, fraction of trials whose total size through the last
    /// generation exceeds threshold)`.
    pub exceedance: Vec<(u64, f64)>,
}

/// Empirical generation sizes `N_t` for `t <= depth`.
///
/// Given `N_t`, the next generation is the sum of `N_t` independent
/// Poisson(`lambda1`) and Poisson(`lambda2`) counts, so it is drawn as
/// Poisson(`lambda1 N_t`) + Poisson(`lambda2 N_t`) without materializing
/// the tree.
pub fn growth_check(
    lambda1: f64,
    lambda2: f64,
    depth: usize,
    trials: u64,
    seed: u64,
    thresholds: &[u64],
) -> Result<GrowthTable> {
    if trials == 0 {
        return Err(Error::param("trials must be positive"));
    }
    let mut sum = vec![0f64; depth + 1];
    let mut sum_sq = vec![0f64; depth + 1];
    let mut exceed = vec![0u64; thresholds.len()];
    for i in 0..trials {
        let mut rng = SplitMix64::new(derive_seed(seed, i));
        let mut size = 1u64;
        let mut total = 1u64;
        for t in 0..=depth {
            if t > 0 {
                let mean = size as f64;
                size = rng.poisson(lambda1 * mean) + rng.poisson(lambda2 * mean);
                total = total.saturating_add(size);
            }
            sum[t] += size as f64;
            sum_sq[t] += (size as f64) * (size as f64);
        }
        for (count, &threshold) in exceed.iter_mut().zip(thresholds) {
            *count += (total > threshold) as u64;
        }
    }
    let m = trials as f64;
    let generations = (0..=depth)
        .map(|t| {
            let mean = sum[t] / m;
            let var = if trials > 1 { (sum_sq[t] - m * mean * mean).max(0.0) / (m - 1.0) } else { 0.0 };
            GenerationStat {
                generation: t,
                mean,
                std_error: (var / m).sqrt(),
                expected: (lambda1 + lambda2).powi(t as i32),
            }
        })
        .collect();
    let exceedance = thresholds
        .iter()
        .zip(&exceed)
        .map(|(&t, &c)| (t, c as f64 / m))
        .collect();
    Ok(GrowthTable { trials, generations, exceedance })
}

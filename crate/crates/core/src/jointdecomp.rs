//! Joint components and the peeling cores.
//!
//! A joint component is a maximal vertex set whose induced subgraph is
//! connected in both layers. They are found by refining the trivial
//! partition: a part is split into the components of its induced red
//! subgraph, then of its induced blue subgraph, until every part is
//! connected in both.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::branching::has_binary_rb;
use crate::doublegraph::{restricted_components, DoubleGraph, Explorer, LocalShape, Marks};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::tree::Color;

pub const BRUTE_FORCE_MAX_N: usize = 16;

/// Coarsest partition whose parts are connected in both induced layers.
pub fn joint_components(g: &DoubleGraph) -> Partition {
    let n = g.n();
    let mut part_id = vec![0u32; n];
    let mut parts: Vec<Vec<u32>> = vec![(0..n as u32).collect()];
    let mut worklist = vec![0usize];
    let mut marks = Marks::new(n);
    while let Some(p) = worklist.pop() {
        for color in Color::BOTH {
            let members = std::mem::take(&mut parts[p]);
            let pid = p as u32;
            let mut pieces =
                restricted_components(g, color, &members, |w| part_id[w as usize] == pid, &mut marks);
            if pieces.len() == 1 {
                parts[p] = members;
                continue;
            }
            parts[p] = pieces.swap_remove(0);
            worklist.push(p);
            for piece in pieces {
                let id = parts.len();
                for &v in &piece {
                    part_id[v as usize] = id as u32;
                }
                parts.push(piece);
                worklist.push(id);
            }
            break;
        }
    }
    Partition::from_parts(n, parts)
}

/// Adjacency bitmasks for graphs with at most 16 vertices.
fn masks(g: &DoubleGraph) -> [Vec<u32>; 2] {
    let mut out = [vec![0u32; g.n()], vec![0u32; g.n()]];
    for color in Color::BOTH {
        for v in 0..g.n() as u32 {
            for &w in g.neighbors(color, v) {
                out[color.index()][v as usize] |= 1 << w;
            }
        }
    }
    out
}

fn mask_connected(adj: &[u32], set: u32) -> bool {
    if set == 0 {
        return false;
    }
    let mut reached = set & set.wrapping_neg();
    loop {
        let mut next = reached;
        let mut rest = reached;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            next |= adj[v as usize] & set;
        }
        if next == reached {
            return reached == set;
        }
        reached = next;
    }
}

/// Joint components by enumerating every vertex subset. Exponential; for
/// testing the refinement on small graphs.
pub fn brute_force_joint_components(g: &DoubleGraph) -> Result<Partition> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::param(format!("brute force supports n <= {BRUTE_FORCE_MAX_N}, got {n}")));
    }
    let [red, blue] = masks(g);
    let mut closure: Vec<u32> = (0..n).map(|v| 1u32 << v).collect();
    for set in 1u32..(1u32 << n) {
        if set.count_ones() > 1 && mask_connected(&red, set) && mask_connected(&blue, set) {
            let mut rest = set;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                closure[v] |= set;
            }
        }
    }
    let mut parts = Vec::new();
    let mut done = 0u32;
    for v in 0..n {
        if done & (1 << v) != 0 {
            continue;
        }
        let set = closure[v];
        done |= set;
        parts.push((0..n as u32).filter(|&w| set & (1 << w) != 0).collect());
    }
    Ok(Partition::from_parts(n, parts))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoreKind {
    Tadpole,
    Size,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoreResult {
    pub kind: CoreKind,
    /// Component-size threshold; size core only.
    pub threshold: Option<usize>,
    pub vertices: Vec<u32>,
    /// Peeling passes that removed at least one vertex.
    pub rounds: usize,
}

/// Repeatedly deletes every vertex lying in a component (of either layer,
/// within the surviving set) that `doomed(vertex_count, edge_count)` rejects.
fn peel(g: &DoubleGraph, doomed: impl Fn(usize, usize) -> bool) -> (Vec<u32>, usize) {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut survivors: Vec<u32> = (0..n as u32).collect();
    let mut marks = Marks::new(n);
    let mut rounds = 0;
    loop {
        let mut kill = Vec::new();
        for color in Color::BOTH {
            for comp in restricted_components(g, color, &survivors, |w| alive[w as usize], &mut marks) {
                let endpoints: usize = comp
                    .iter()
                    .map(|&u| g.neighbors(color, u).iter().filter(|&&w| alive[w as usize]).count())
                    .sum();
                if doomed(comp.len(), endpoints / 2) {
                    kill.extend(comp);
                }
            }
        }
        if kill.is_empty() {
            break;
        }
        rounds += 1;
        for v in kill {
            alive[v as usize] = false;
        }
        survivors.retain(|&v| alive[v as usize]);
    }
    (survivors, rounds)
}

/// Largest vertex set in which every vertex's red and blue components
/// (inside the set) both contain a cycle.
pub fn tadpole_core(g: &DoubleGraph) -> CoreResult {
    // A component with c vertices is acyclic iff it has c - 1 edges.
    let (vertices, rounds) = peel(g, |c, e| e + 1 == c);
    CoreResult { kind: CoreKind::Tadpole, threshold: None, vertices, rounds }
}

/// Largest vertex set in which every vertex's red and blue components
/// (inside the set) both have at least `theta` vertices.
pub fn size_core(g: &DoubleGraph, theta: usize) -> Result<CoreResult> {
    if theta == 0 {
        return Err(Error::param("size core threshold must be positive"));
    }
    let (vertices, rounds) = peel(g, |c, _| c < theta);
    Ok(CoreResult { kind: CoreKind::Size, threshold: Some(theta), vertices, rounds })
}

/// Joint component counts by size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizeHistogram {
    pub counts: BTreeMap<usize, usize>,
    pub largest: usize,
    pub second_largest: usize,
}

impl SizeHistogram {
    pub fn count(&self, size: usize) -> usize {
        self.counts.get(&size).copied().unwrap_or(0)
    }

    /// Number of components with size in `lo..=hi`.
    pub fn count_between(&self, lo: usize, hi: usize) -> usize {
        if lo > hi {
            return 0;
        }
        self.counts.range(lo..=hi).map(|(_, &c)| c).sum()
    }

    pub fn total_vertices(&self) -> usize {
        self.counts.iter().map(|(k, c)| k * c).sum()
    }
}

pub fn census(p: &Partition) -> SizeHistogram {
    let mut counts = BTreeMap::new();
    let mut sizes: Vec<usize> = p.parts().iter().map(Vec::len).collect();
    for &s in &sizes {
        *counts.entry(s).or_insert(0) += 1;
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    SizeHistogram {
        counts,
        largest: sizes.first().copied().unwrap_or(0),
        second_largest: sizes.get(1).copied().unwrap_or(0),
    }
}

/// Fraction of vertices whose radius-`s` ball has a cycle or, being a tree,
/// carries a binary red-blue witness of height `s` at the root.
pub fn br_fraction(g: &DoubleGraph, s: usize) -> Result<f64> {
    if s == 0 {
        return Err(Error::param("depth must be positive"));
    }
    let mut explorer = Explorer::new(g.n());
    let mut hits = 0usize;
    for v in 0..g.n() as u32 {
        let hit = match explorer.local_shape(g, v, s) {
            LocalShape::Cycle => true,
            LocalShape::Tree(tree) => has_binary_rb(&tree, s)?,
        };
        hits += hit as usize;
    }
    Ok(hits as f64 / g.n() as f64)
}

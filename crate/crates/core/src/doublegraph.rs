//! Two-layer random graphs and the queries the decomposition builds on.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::rng::{derive_seed, SplitMix64};
use crate::tree::{Color, ColoredTree};

/// Compressed adjacency of one layer.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Layer {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Layer {
    fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut degree = vec![0usize; n + 1];
        for &(u, v) in edges {
            degree[u as usize + 1] += 1;
            degree[v as usize + 1] += 1;
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; offsets[n]];
        for &(u, v) in edges {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Layer { offsets, targets }
    }

    #[inline]
    fn neighbors(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }
}

/// Vertex set `0..n` carrying an independent red and blue edge layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleGraph {
    n: usize,
    layers: [Layer; 2],
}

impl DoubleGraph {
    /// Builds a graph from explicit edge lists. Self-loops, out-of-range
    /// endpoints and repeated edges within a layer are rejected.
    pub fn from_edges(n: usize, red: &[(u32, u32)], blue: &[(u32, u32)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("graph needs at least one vertex"));
        }
        if n > i32::MAX as usize {
            return Err(Error::param("vertex count exceeds 2^31 - 1"));
        }
        let mut norm = [Vec::with_capacity(red.len()), Vec::with_capacity(blue.len())];
        for (layer, edges) in norm.iter_mut().zip([red, blue]) {
            for &(u, v) in edges {
                if u as usize >= n || v as usize >= n {
                    return Err(Error::param(format!("edge ({u}, {v}) out of range for n = {n}")));
                }
                if u == v {
                    return Err(Error::param(format!("self-loop at {u}")));
                }
                layer.push((u.min(v), u.max(v)));
            }
            layer.sort_unstable();
            if layer.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::param("duplicate edge within a layer"));
            }
        }
        Ok(DoubleGraph {
            n,
            layers: [Layer::from_edges(n, &norm[0]), Layer::from_edges(n, &norm[1])],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn neighbors(&self, color: Color, v: u32) -> &[u32] {
        self.layers[color.index()].neighbors(v)
    }

    pub fn edge_count(&self, color: Color) -> usize {
        self.layers[color.index()].edge_count()
    }

    pub fn red_edge_count(&self) -> usize {
        self.edge_count(Color::Red)
    }

    pub fn blue_edge_count(&self) -> usize {
        self.edge_count(Color::Blue)
    }

    /// Edges of one layer as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self, color: Color) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count(color));
        for u in 0..self.n as u32 {
            for &v in self.neighbors(color, u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Same vertex set with the two layers exchanged.
    pub fn color_swapped(&self) -> DoubleGraph {
        DoubleGraph {
            n: self.n,
            layers: [self.layers[1].clone(), self.layers[0].clone()],
        }
    }

    /// Graph induced on `vertices`, relabelled `0..len` in the given order.
    pub fn induced(&self, vertices: &[u32]) -> Result<DoubleGraph> {
        let mut index = vec![u32::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            if v as usize >= self.n {
                return Err(Error::param(format!("vertex {v} out of range")));
            }
            index[v as usize] = i as u32;
        }
        let mut layers = [Vec::new(), Vec::new()];
        for color in Color::BOTH {
            for &u in vertices {
                for &v in self.neighbors(color, u) {
                    let (a, b) = (index[u as usize], index[v as usize]);
                    if b != u32::MAX && a < b {
                        layers[color.index()].push((a, b));
                    }
                }
            }
        }
        DoubleGraph::from_edges(vertices.len().max(1), &layers[0], &layers[1])
    }

    /// Writes the plain-text dump: a header `n red_m blue_m`, then one
    /// `r u v` / `b u v` line per edge sorted by (color, u, v).
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{} {} {}", self.n, self.red_edge_count(), self.blue_edge_count())?;
        for (color, tag) in [(Color::Red, 'r'), (Color::Blue, 'b')] {
            for (u, v) in self.edges(color) {
                writeln!(w, "{tag} {u} {v}")?;
            }
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<DoubleGraph> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty graph file".into()))??;
        let fields: Vec<usize> = header
            .split_whitespace()
            .map(|f| f.parse().map_err(|_| Error::Format(format!("bad header field {f:?}"))))
            .collect::<Result<_>>()?;
        let [n, red_m, blue_m] = fields[..] else {
            return Err(Error::Format("header must be `n red_m blue_m`".into()));
        };
        let mut red = Vec::with_capacity(red_m);
        let mut blue = Vec::with_capacity(blue_m);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let (tag, u, v) = match (it.next(), it.next(), it.next(), it.next()) {
                (Some(t), Some(u), Some(v), None) => (t, u, v),
                _ => return Err(Error::Format(format!("bad edge line {line:?}"))),
            };
            let parse = |s: &str| {
                s.parse::<u32>()
                    .map_err(|_| Error::Format(format!("bad vertex {s:?}")))
            };
            let edge = (parse(u)?, parse(v)?);
            match tag {
                "r" => red.push(edge),
                "b" => blue.push(edge),
                _ => return Err(Error::Format(format!("unknown edge color {tag:?}"))),
            }
        }
        if red.len() != red_m || blue.len() != blue_m {
            return Err(Error::Format("edge counts disagree with header".into()));
        }
        DoubleGraph::from_edges(n, &red, &blue)
    }
}

/// Samples `G(n, lambda1/n, lambda2/n)`.
///
/// Each layer walks the pairs `(u, v)`, `u > v`, in lexicographic order and
/// jumps over non-edges with geometric gaps, so the cost is linear in
/// `n` plus the number of edges. The two layers read independent substreams
/// of `seed`. The substream tag follows the intensity rather than the color
/// (the smaller intensity takes tag 0, ties go to red), so exchanging
/// `lambda1` and `lambda2` exchanges the layers.
pub fn generate(n: usize, lambda1: f64, lambda2: f64, seed: u64) -> Result<DoubleGraph> {
    if n == 0 {
        return Err(Error::param("n must be at least 1"));
    }
    for lambda in [lambda1, lambda2] {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::param(format!("intensity {lambda} must be finite and non-negative")));
        }
        // With one vertex there are no pairs, so no probability is formed.
        if n > 1 && lambda > n as f64 {
            return Err(Error::param(format!("intensity {lambda} exceeds n = {n}")));
        }
    }
    let (red_tag, blue_tag) = if lambda2.total_cmp(&lambda1).is_lt() { (1, 0) } else { (0, 1) };
    let red = sample_layer(n, lambda1 / n as f64, derive_seed(seed, red_tag));
    let blue = sample_layer(n, lambda2 / n as f64, derive_seed(seed, blue_tag));
    DoubleGraph::from_edges(n, &red, &blue)
}

fn sample_layer(n: usize, p: f64, seed: u64) -> Vec<(u32, u32)> {
    let mut edges = Vec::new();
    if p <= 0.0 || n < 2 {
        return edges;
    }
    let mut rng = SplitMix64::new(seed);
    let log_q = (-p).ln_1p();
    // Pair cursor: row v, column w < v.
    let mut v: u64 = 1;
    let mut w: i64 = -1;
    let n = n as u64;
    loop {
        let skip = if p >= 1.0 {
            0.0
        } else {
            (rng.unit_open0().ln() / log_q).floor()
        };
        // Gaps past the last pair end the layer.
        if skip >= (n * n) as f64 {
            break;
        }
        w += 1 + skip as i64;
        while v < n && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v >= n {
            break;
        }
        edges.push((w as u32, v as u32));
    }
    edges
}

/// Reusable visited marks; reset by bumping an epoch.
#[derive(Debug, Default)]
pub(crate) struct Marks {
    stamp: Vec<u32>,
    epoch: u32,
}

impl Marks {
    pub(crate) fn new(n: usize) -> Self {
        Marks { stamp: vec![0; n], epoch: 0 }
    }

    pub(crate) fn reset(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
    }

    #[inline]
    pub(crate) fn is_set(&self, v: u32) -> bool {
        self.stamp[v as usize] == self.epoch
    }

    #[inline]
    pub(crate) fn set(&mut self, v: u32) {
        self.stamp[v as usize] = self.epoch;
    }
}

/// Connected components of `color` inside the vertex set `members`, where
/// `inside(w)` must be true exactly for members. Components are returned in
/// discovery order.
pub(crate) fn restricted_components(
    g: &DoubleGraph,
    color: Color,
    members: &[u32],
    inside: impl Fn(u32) -> bool,
    marks: &mut Marks,
) -> Vec<Vec<u32>> {
    marks.reset();
    let mut comps = Vec::new();
    for &s in members {
        if marks.is_set(s) {
            continue;
        }
        marks.set(s);
        let mut comp = vec![s];
        let mut head = 0;
        while head < comp.len() {
            let u = comp[head];
            head += 1;
            for &w in g.neighbors(color, u) {
                if !marks.is_set(w) && inside(w) {
                    marks.set(w);
                    comp.push(w);
                }
            }
        }
        comps.push(comp);
    }
    comps
}

/// Connected components of one layer, optionally restricted to the induced
/// subgraph on `subset`.
pub fn components(g: &DoubleGraph, color: Color, subset: Option<&[u32]>) -> Result<Partition> {
    let n = g.n();
    let mut marks = Marks::new(n);
    let comps = match subset {
        None => {
            let all: Vec<u32> = (0..n as u32).collect();
            restricted_components(g, color, &all, |_| true, &mut marks)
        }
        Some(subset) => {
            let mut member = vec![false; n];
            for &v in subset {
                if v as usize >= n {
                    return Err(Error::param(format!("vertex {v} out of range for n = {n}")));
                }
                member[v as usize] = true;
            }
            let mut members: Vec<u32> = subset.to_vec();
            members.sort_unstable();
            members.dedup();
            restricted_components(g, color, &members, |w| member[w as usize], &mut marks)
        }
    };
    Ok(Partition::from_parts(n, comps))
}

/// Ball of merged-layer radius `depth` around `root`.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodReport {
    pub root: u32,
    pub depth: usize,
    /// Vertices in breadth-first order.
    pub reached: Vec<u32>,
    /// Merged distance from the root, aligned with `reached`.
    pub distance: Vec<u32>,
    /// The node cap stopped the search before the radius was exhausted.
    pub truncated: bool,
    /// The induced merged subgraph on `reached`, counting a red and a blue
    /// edge on one pair as two edges, has a cycle.
    pub contains_cycle: bool,
    /// Breadth-first tree with colored edges, present when cycle-free.
    pub tree: Option<ColoredTree>,
}

/// Breadth-first exploration of the merged layers from `root`, up to
/// distance `depth` or `node_cap` vertices.
pub fn neighborhood(
    g: &DoubleGraph,
    root: u32,
    depth: usize,
    node_cap: usize,
) -> Result<NeighborhoodReport> {
    if root as usize >= g.n() {
        return Err(Error::param(format!("root {root} out of range for n = {}", g.n())));
    }
    if node_cap == 0 {
        return Err(Error::param("node cap must be positive"));
    }
    let mut explorer = Explorer::new(g.n());
    let ball = explorer.explore(g, root, depth, node_cap);
    let mut marks = Marks::new(g.n());
    marks.reset();
    for &v in &ball.reached {
        marks.set(v);
    }
    let mut endpoint_count = 0usize;
    for &u in &ball.reached {
        for color in Color::BOTH {
            endpoint_count += g.neighbors(color, u).iter().filter(|&&w| marks.is_set(w)).count();
        }
    }
    let contains_cycle = endpoint_count / 2 + 1 > ball.reached.len();
    let tree = (!contains_cycle).then(|| ball.to_tree(depth));
    Ok(NeighborhoodReport {
        root,
        depth,
        reached: ball.reached,
        distance: ball.distance,
        truncated: ball.truncated,
        contains_cycle,
        tree,
    })
}

pub(crate) struct Ball {
    pub(crate) reached: Vec<u32>,
    pub(crate) distance: Vec<u32>,
    parent_slot: Vec<u32>,
    parent_color: Vec<Option<Color>>,
    truncated: bool,
    /// Depth of the vertex being expanded when the cap was hit.
    cut_depth: usize,
}

impl Ball {
    fn to_tree(&self, depth: usize) -> ColoredTree {
        let mut tree = ColoredTree::singleton();
        for i in 1..self.reached.len() {
            tree.push_child(self.parent_slot[i], self.parent_color[i].unwrap())
                .expect("breadth-first order");
        }
        tree.set_explored_depth(depth);
        if self.truncated {
            tree.mark_truncated(self.cut_depth);
        }
        tree
    }
}

/// Outcome of a cycle-aware exploration that stops at the first extra edge.
pub(crate) enum LocalShape {
    Cycle,
    Tree(ColoredTree),
}

/// Breadth-first explorer with scratch buffers reused across roots.
pub(crate) struct Explorer {
    slot: Vec<u32>,
    marks: Marks,
}

impl Explorer {
    pub(crate) fn new(n: usize) -> Self {
        Explorer { slot: vec![0; n], marks: Marks::new(n) }
    }

    fn explore(&mut self, g: &DoubleGraph, root: u32, depth: usize, node_cap: usize) -> Ball {
        self.marks.reset();
        let mut ball = Ball {
            reached: vec![root],
            distance: vec![0],
            parent_slot: vec![u32::MAX],
            parent_color: vec![None],
            truncated: false,
            cut_depth: 0,
        };
        self.marks.set(root);
        self.slot[root as usize] = 0;
        let mut head = 0;
        'bfs: while head < ball.reached.len() {
            let u = ball.reached[head];
            let du = ball.distance[head];
            if du as usize >= depth {
                break;
            }
            for color in Color::BOTH {
                for &w in g.neighbors(color, u) {
                    if self.marks.is_set(w) {
                        continue;
                    }
                    if ball.reached.len() == node_cap {
                        ball.truncated = true;
                        ball.cut_depth = du as usize;
                        break 'bfs;
                    }
                    self.marks.set(w);
                    self.slot[w as usize] = ball.reached.len() as u32;
                    ball.reached.push(w);
                    ball.distance.push(du + 1);
                    ball.parent_slot.push(head as u32);
                    ball.parent_color.push(Some(color));
                }
            }
            head += 1;
        }
        ball
    }

    /// Explores the radius-`depth` ball around `root` and reports either that
    /// the induced merged subgraph has a cycle or the breadth-first tree.
    /// Gives up on the tree as soon as a non-tree edge is seen.
    pub(crate) fn local_shape(&mut self, g: &DoubleGraph, root: u32, depth: usize) -> LocalShape {
        self.marks.reset();
        let mut reached = vec![root];
        let mut distance = vec![0u32];
        let mut parent_slot = vec![u32::MAX];
        let mut parent_color: Vec<Option<Color>> = vec![None];
        self.marks.set(root);
        self.slot[root as usize] = 0;
        let mut head = 0;
        while head < reached.len() {
            let u = reached[head];
            let du = distance[head];
            let expand = (du as usize) < depth;
            for color in Color::BOTH {
                for &w in g.neighbors(color, u) {
                    if self.marks.is_set(w) {
                        let ws = self.slot[w as usize] as usize;
                        let is_parent = head != 0
                            && parent_slot[head] as usize == ws
                            && parent_color[head] == Some(color);
                        if !is_parent {
                            return LocalShape::Cycle;
                        }
                    } else if expand {
                        self.marks.set(w);
                        self.slot[w as usize] = reached.len() as u32;
                        reached.push(w);
                        distance.push(du + 1);
                        parent_slot.push(head as u32);
                        parent_color.push(Some(color));
                    }
                }
            }
            head += 1;
        }
        let mut tree = ColoredTree::singleton();
        for i in 1..reached.len() {
            tree.push_child(parent_slot[i], parent_color[i].unwrap())
                .expect("breadth-first order");
        }
        tree.set_explored_depth(depth);
        LocalShape::Tree(tree)
    }
}

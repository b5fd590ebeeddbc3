use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Edge layer of a double graph, also used as the offspring type of the
/// bicoloured branching process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub const BOTH: [Color; 2] = [Color::Red, Color::Blue];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Color::Red => 0,
            Color::Blue => 1,
        }
    }

    pub fn other(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeNode {
    pub parent: Option<u32>,
    /// Color of the edge to the parent; `None` only for the root.
    pub color: Option<Color>,
}

/// Rooted tree with colored edges, nodes numbered in breadth-first order.
///
/// `explored_depth` records how far the tree is known to be complete: when
/// `Some(k)`, nodes at depth `k` or deeper never had their offspring
/// generated, so events that look below depth `k` cannot be decided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredTree {
    nodes: Vec<TreeNode>,
    generation_of: Vec<u32>,
    generation_sizes: Vec<usize>,
    truncated: bool,
    explored_depth: Option<usize>,
}

impl ColoredTree {
    pub fn singleton() -> Self {
        ColoredTree {
            nodes: vec![TreeNode { parent: None, color: None }],
            generation_of: vec![0],
            generation_sizes: vec![1],
            truncated: false,
            explored_depth: None,
        }
    }

    /// Builds a complete tree from `(parent, color)` pairs for nodes 1.. in
    /// order; node 0 is the root. Parents must precede their children and
    /// generations must be non-decreasing (breadth-first numbering).
    pub fn from_parents(edges: &[(u32, Color)]) -> Result<Self> {
        let mut tree = ColoredTree::singleton();
        for &(parent, color) in edges {
            tree.push_child(parent, color)?;
        }
        Ok(tree)
    }

    pub(crate) fn push_child(&mut self, parent: u32, color: Color) -> Result<u32> {
        let idx = self.nodes.len();
        if parent as usize >= idx {
            return Err(Error::param(format!(
                "parent {parent} of node {idx} is not an earlier node"
            )));
        }
        let generation = self.generation_of[parent as usize] + 1;
        if generation < *self.generation_of.last().unwrap() {
            return Err(Error::param("nodes are not in breadth-first order"));
        }
        self.nodes.push(TreeNode { parent: Some(parent), color: Some(color) });
        self.generation_of.push(generation);
        if self.generation_sizes.len() <= generation as usize {
            self.generation_sizes.push(0);
        }
        self.generation_sizes[generation as usize] += 1;
        Ok(idx as u32)
    }

    pub(crate) fn mark_truncated(&mut self, explored_depth: usize) {
        self.truncated = true;
        self.set_explored_depth(explored_depth);
    }

    pub(crate) fn set_explored_depth(&mut self, depth: usize) {
        self.explored_depth = Some(match self.explored_depth {
            Some(d) => d.min(depth),
            None => depth,
        });
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn generation_of(&self, node: usize) -> usize {
        self.generation_of[node] as usize
    }

    pub fn generation_sizes(&self) -> &[usize] {
        &self.generation_sizes
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Depth up to which offspring are fully known; `None` when the tree is
    /// the entire process.
    pub fn explored_depth(&self) -> Option<usize> {
        self.explored_depth
    }

    /// Deepest generation present.
    pub fn height(&self) -> usize {
        self.generation_sizes.len() - 1
    }

    pub fn children(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if let Some(p) = node.parent {
                out[p as usize].push(i as u32);
            }
        }
        out
    }

    /// Copy of the tree with `node` and its descendants removed.
    pub fn without_subtree(&self, node: usize) -> ColoredTree {
        assert!(node != 0, "cannot delete the root");
        let mut keep = vec![true; self.nodes.len()];
        let mut remap = vec![u32::MAX; self.nodes.len()];
        let mut out = ColoredTree::singleton();
        out.truncated = self.truncated;
        out.explored_depth = self.explored_depth;
        remap[0] = 0;
        for i in 1..self.nodes.len() {
            let p = self.nodes[i].parent.unwrap() as usize;
            keep[i] = i != node && keep[p];
            if keep[i] {
                remap[i] = out
                    .push_child(remap[p], self.nodes[i].color.unwrap())
                    .expect("order preserved");
            }
        }
        out
    }

    pub(crate) fn check_depth(&self, d: usize) -> Result<()> {
        match self.explored_depth {
            Some(k) if d > k => Err(Error::Precondition(format!(
                "tree is only explored to depth {k}, event needs depth {d}"
            ))),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_bookkeeping() {
        let t = ColoredTree::from_parents(&[
            (0, Color::Red),
            (0, Color::Blue),
            (1, Color::Blue),
            (2, Color::Red),
        ])
        .unwrap();
        assert_eq!(t.generation_sizes(), &[1, 2, 2]);
        assert_eq!(t.generation_of(4), 2);
        assert_eq!(t.height(), 2);
        assert_eq!(t.generation_sizes().iter().sum::<usize>(), t.len());
    }

    #[test]
    fn rejects_forward_parent_and_non_bfs() {
        assert!(ColoredTree::from_parents(&[(1, Color::Red)]).is_err());
        assert!(ColoredTree::from_parents(&[(0, Color::Red), (1, Color::Red), (0, Color::Blue)]).is_err());
    }

    #[test]
    fn subtree_removal() {
        let t = ColoredTree::from_parents(&[
            (0, Color::Red),
            (0, Color::Blue),
            (1, Color::Blue),
            (2, Color::Red),
        ])
        .unwrap();
        let cut = t.without_subtree(1);
        assert_eq!(cut.len(), 3);
        assert_eq!(cut.generation_sizes(), &[1, 1, 1]);
        assert_eq!(cut.nodes()[1].color, Some(Color::Blue));
    }
}

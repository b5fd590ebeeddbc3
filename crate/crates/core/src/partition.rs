use serde::Serialize;

/// Decomposition of a ground set of vertices into disjoint parts.
///
/// Parts are sorted internally and ordered by their smallest vertex.
/// Vertices outside the ground set map to [`Partition::NONE`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    part_of: Vec<u32>,
    parts: Vec<Vec<u32>>,
}

impl Partition {
    pub const NONE: u32 = u32::MAX;

    /// Normalizes `parts` (sorting and ordering) over a universe of `n`
    /// vertices. Panics if parts overlap.
    pub fn from_parts(n: usize, mut parts: Vec<Vec<u32>>) -> Self {
        for p in parts.iter_mut() {
            p.sort_unstable();
        }
        parts.retain(|p| !p.is_empty());
        parts.sort_unstable_by_key(|p| p[0]);
        let mut part_of = vec![Self::NONE; n];
        for (i, p) in parts.iter().enumerate() {
            for &v in p {
                assert_eq!(part_of[v as usize], Self::NONE, "vertex {v} in two parts");
                part_of[v as usize] = i as u32;
            }
        }
        Partition { part_of, parts }
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[Vec<u32>] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &[u32] {
        &self.parts[i]
    }

    /// Part id of `v`, or `None` when `v` is outside the ground set.
    pub fn part_of(&self, v: u32) -> Option<usize> {
        match self.part_of.get(v as usize) {
            Some(&p) if p != Self::NONE => Some(p as usize),
            _ => None,
        }
    }

    pub fn universe(&self) -> usize {
        self.part_of.len()
    }

    pub fn ground_size(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    pub fn largest_part(&self) -> Option<&[u32]> {
        self.parts.iter().max_by_key(|p| p.len()).map(Vec::as_slice)
    }

    /// Checks the structural invariants: disjoint, consistent lookup.
    pub fn is_consistent(&self) -> bool {
        let mut seen = vec![false; self.part_of.len()];
        for (i, p) in self.parts.iter().enumerate() {
            if p.is_empty() || p.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            for &v in p {
                let v = v as usize;
                if v >= seen.len() || seen[v] || self.part_of[v] != i as u32 {
                    return false;
                }
                seen[v] = true;
            }
        }
        self.part_of
            .iter()
            .zip(&seen)
            .all(|(&p, &s)| (p != Self::NONE) == s)
    }
}

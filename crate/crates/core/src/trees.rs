//! Dual graphs of n-pointed stable genus-0 curves and boundary decompositions.
//!
//! A [`StableTree`] has one vertex per irreducible component, one edge per node
//! and one tail per marked point. Vertex ids are arbitrary integers; wherever an
//! order among vertices matters (leaf tie-breaking) the position in
//! [`StableTree::vertices`] is used.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::labels::{LabelSet, MAX_LABELS};
use crate::rational::{self, Rational};
use crate::weights::WeightVector;
use crate::{Error, Result};

pub type VertexId = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableTree {
    pub n: u32,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
    /// Marked label → vertex carrying it.
    pub tails: BTreeMap<u32, VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeViolation {
    NoVertices,
    DuplicateVertex(VertexId),
    UnknownVertex(VertexId),
    SelfLoop(VertexId),
    /// Edge count is not `#vertices - 1` or the graph has a cycle.
    NotATree,
    Disconnected,
    /// `degree + #tails < 3` at this vertex.
    Unstable { vertex: VertexId, special_points: usize },
    MissingLabel(u32),
    LabelOutOfRange(u32),
    TooManyLabels(u32),
}

impl fmt::Display for TreeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeViolation::NoVertices => write!(f, "no vertices"),
            TreeViolation::DuplicateVertex(v) => write!(f, "vertex {v} listed twice"),
            TreeViolation::UnknownVertex(v) => write!(f, "vertex {v} is referenced but not listed"),
            TreeViolation::SelfLoop(v) => write!(f, "self-loop at vertex {v}"),
            TreeViolation::NotATree => write!(f, "edges do not form a tree"),
            TreeViolation::Disconnected => write!(f, "graph is disconnected"),
            TreeViolation::Unstable { vertex, special_points } => write!(
                f,
                "vertex {vertex} has only {special_points} special points (needs 3)"
            ),
            TreeViolation::MissingLabel(l) => write!(f, "label {l} carries no tail"),
            TreeViolation::LabelOutOfRange(l) => write!(f, "tail label {l} outside 1..=n"),
            TreeViolation::TooManyLabels(n) => write!(f, "n = {n} exceeds {MAX_LABELS}"),
        }
    }
}

impl StableTree {
    /// One component carrying every label.
    pub fn smooth(n: u32) -> Self {
        StableTree {
            n,
            vertices: vec![0],
            edges: Vec::new(),
            tails: (1..=n).map(|l| (l, 0)).collect(),
        }
    }

    /// Builds from `(vertex, tails)` lists and edges; does not validate.
    pub fn from_parts(n: u32, tails_by_vertex: &[(VertexId, &[u32])], edges: &[(VertexId, VertexId)]) -> Self {
        let mut tails = BTreeMap::new();
        for (v, labels) in tails_by_vertex {
            for &l in *labels {
                tails.insert(l, *v);
            }
        }
        StableTree {
            n,
            vertices: tails_by_vertex.iter().map(|(v, _)| *v).collect(),
            edges: edges.to_vec(),
            tails,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    pub fn tails_at(&self, v: VertexId) -> LabelSet {
        let mut s = LabelSet::EMPTY;
        for (&l, &w) in &self.tails {
            if w == v {
                // labels were range-checked by validation
                let _ = s.insert(l);
            }
        }
        s
    }

    /// Adjacency as vertex positions.
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            if let (Some(i), Some(j)) = (self.index_of(a), self.index_of(b)) {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
        adj
    }

    pub fn validate(&self) -> Vec<TreeViolation> {
        let mut out = Vec::new();
        if self.n > MAX_LABELS {
            out.push(TreeViolation::TooManyLabels(self.n));
            return out;
        }
        if self.vertices.is_empty() {
            out.push(TreeViolation::NoVertices);
            return out;
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if self.vertices[..i].contains(v) {
                out.push(TreeViolation::DuplicateVertex(*v));
            }
        }
        for &(a, b) in &self.edges {
            for v in [a, b] {
                if self.index_of(v).is_none() && !out.contains(&TreeViolation::UnknownVertex(v)) {
                    out.push(TreeViolation::UnknownVertex(v));
                }
            }
            if a == b {
                out.push(TreeViolation::SelfLoop(a));
            }
        }
        for (&l, &v) in &self.tails {
            if l == 0 || l > self.n {
                out.push(TreeViolation::LabelOutOfRange(l));
            }
            if self.index_of(v).is_none() && !out.contains(&TreeViolation::UnknownVertex(v)) {
                out.push(TreeViolation::UnknownVertex(v));
            }
        }
        for l in 1..=self.n {
            if !self.tails.contains_key(&l) {
                out.push(TreeViolation::MissingLabel(l));
            }
        }
        if !out.is_empty() {
            return out;
        }

        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            out.push(TreeViolation::Disconnected);
        } else if self.edges.len() + 1 != self.vertices.len() {
            out.push(TreeViolation::NotATree);
        }
        for (i, &v) in self.vertices.iter().enumerate() {
            let special = adj[i].len() + self.tails_at(v).len() as usize;
            if special < 3 {
                out.push(TreeViolation::Unstable { vertex: v, special_points: special });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn ensure_valid(&self) -> Result<()> {
        match self.validate().first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidTree(format!("{v}"))),
        }
    }

    /// One decomposition per edge, in edge order: the labels on either side of
    /// the node.
    pub fn edge_cuts(&self) -> Result<Vec<Decomposition>> {
        self.ensure_valid()?;
        let adj = self.adjacency();
        self.edges
            .iter()
            .map(|&(a, b)| {
                let ia = self.index_of(a).unwrap();
                let ib = self.index_of(b).unwrap();
                let side = self.labels_behind(&adj, ia, ib);
                Decomposition::new(self.n, side)
            })
            .collect()
    }

    /// Labels on vertices reachable from `start` without passing through `blocked`.
    fn labels_behind(&self, adj: &[Vec<usize>], start: usize, blocked: usize) -> LabelSet {
        let mut seen = vec![false; self.vertices.len()];
        seen[blocked] = true;
        seen[start] = true;
        let mut stack = vec![start];
        let mut labels = LabelSet::EMPTY;
        while let Some(i) = stack.pop() {
            labels = labels.union(self.tails_at(self.vertices[i]));
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        labels
    }

    /// Leaf-by-leaf contraction. Among the currently available leaves the one
    /// listed first in `vertices` is taken. `k0` is the first step whose
    /// contracted subtree has weight at least one.
    pub fn contraction_sequence(&self, d: &WeightVector) -> Result<ContractionSequence> {
        self.ensure_valid()?;
        if d.len() != self.n as usize {
            return Err(Error::SizeMismatch { expected: self.n as usize, found: d.len() });
        }
        let c = self.vertices.len();
        let adj = self.adjacency();
        let mut alive = vec![true; c];
        let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
        let mut carried: Vec<LabelSet> =
            self.vertices.iter().map(|&v| self.tails_at(v)).collect();
        let mut steps = Vec::with_capacity(c);
        let mut k0 = None;
        for k in 0..c {
            let i = (0..c)
                .find(|&i| alive[i] && degree[i] <= 1)
                .expect("a finite tree always has a leaf");
            alive[i] = false;
            let subtree = carried[i];
            let alpha = d.alpha(subtree)?;
            for &j in &adj[i] {
                if alive[j] {
                    degree[j] -= 1;
                    carried[j] = carried[j].union(subtree);
                }
            }
            if k0.is_none() && alpha >= rational::one() {
                k0 = Some(k);
            }
            steps.push(ContractionStep { vertex: self.vertices[i], carried: subtree, alpha });
        }
        // The last step carries every label, so α = 2.
        let k0 = k0.expect("final contraction carries total weight 2");
        Ok(ContractionSequence { steps, k0 })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionStep {
    pub vertex: VertexId,
    /// All tails carried by the contracted subtree.
    pub carried: LabelSet,
    pub alpha: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionSequence {
    pub steps: Vec<ContractionStep>,
    pub k0: usize,
}

impl ContractionSequence {
    pub fn order(&self) -> Vec<VertexId> {
        self.steps.iter().map(|s| s.vertex).collect()
    }

    pub fn distinguished(&self) -> VertexId {
        self.steps[self.k0].vertex
    }
}

/// Unordered split `{S', S''}` of `{1..n}` with both sides of size ≥ 2.
///
/// Stored with the side containing label 1 first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Decomposition {
    n: u32,
    first: LabelSet,
}

impl Decomposition {
    pub fn new(n: u32, side: LabelSet) -> Result<Self> {
        let full = LabelSet::full(n)?;
        if !side.is_subset(full) {
            return Err(Error::LabelOutOfRange { label: side.max().unwrap_or(0), n });
        }
        let other = full.difference(side);
        if side.len() < 2 || other.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "decomposition sides must both have at least 2 labels, got {{{side}|{other}}}"
            )));
        }
        let first = if side.contains(1) { side } else { other };
        Ok(Decomposition { n, first })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Side containing label 1.
    pub fn first(&self) -> LabelSet {
        self.first
    }

    pub fn second(&self) -> LabelSet {
        LabelSet::full(self.n).unwrap().difference(self.first)
    }

    /// The side other than `side`; `None` if `side` is not one of the two.
    pub fn complement_of(&self, side: LabelSet) -> Option<LabelSet> {
        if side == self.first {
            Some(self.second())
        } else if side == self.second() {
            Some(self.first)
        } else {
            None
        }
    }

    pub fn contains_side(&self, side: LabelSet) -> bool {
        self.complement_of(side).is_some()
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}|{}}}", self.first, self.second())
    }
}

fn lex_cmp(a: LabelSet, b: LabelSet) -> Ordering {
    a.iter().cmp(b.iter())
}

/// All boundary decompositions of `{1..n}`, sorted lexicographically by the side
/// containing label 1.
pub fn enumerate_decompositions(n: u32) -> Result<Vec<Decomposition>> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("n = {n} < 3")));
    }
    if n > 30 {
        return Err(Error::InvalidInput(format!("n = {n} too large to enumerate")));
    }
    let rest = n - 1;
    let mut out = Vec::new();
    // Subsets of {2..n} joined with label 1.
    for bits in 0u64..(1u64 << rest) {
        let side = LabelSet::from_bits(1 | (bits << 1));
        let other_len = n - side.len();
        if side.len() >= 2 && other_len >= 2 {
            out.push(Decomposition { n, first: side });
        }
    }
    out.sort_by(|a, b| lex_cmp(a.first, b.first));
    Ok(out)
}

/// `(2^n − 2 − 2n) / 2`.
pub fn decomposition_count(n: u32) -> u64 {
    ((1u64 << n) - 2 - 2 * n as u64) / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn ls(v: &[u32]) -> LabelSet {
        LabelSet::from_labels(v.iter().copied()).unwrap()
    }

    fn remark5_tree() -> StableTree {
        StableTree::from_parts(5, &[(1, &[1, 2]), (2, &[3, 4, 5])], &[(1, 2)])
    }

    fn chain() -> StableTree {
        StableTree::from_parts(5, &[(1, &[1, 2]), (2, &[3]), (3, &[4, 5])], &[(1, 2), (2, 3)])
    }

    #[test]
    fn validation_examples() {
        assert!(StableTree::smooth(3).is_valid());
        let bad = StableTree::smooth(2);
        assert_eq!(
            bad.validate(),
            vec![TreeViolation::Unstable { vertex: 0, special_points: 2 }]
        );
        assert!(remark5_tree().is_valid());
        assert!(chain().is_valid());
    }

    #[test]
    fn validation_itemizes() {
        let t = StableTree::from_parts(4, &[(0, &[1, 2]), (1, &[3])], &[]);
        let v = t.validate();
        assert!(v.contains(&TreeViolation::MissingLabel(4)));
        let t = StableTree::from_parts(4, &[(0, &[1, 2]), (1, &[3, 4])], &[]);
        assert_eq!(t.validate()[0], TreeViolation::Disconnected);
        let t = StableTree::from_parts(
            6,
            &[(0, &[1, 2]), (1, &[3, 4]), (2, &[5, 6])],
            &[(0, 1), (1, 2), (2, 0)],
        );
        assert!(t.validate().contains(&TreeViolation::NotATree));
        let t = StableTree::from_parts(4, &[(0, &[1, 2]), (1, &[3, 9])], &[(0, 1)]);
        assert!(t.validate().contains(&TreeViolation::LabelOutOfRange(9)));
    }

    #[test]
    fn decompositions_small() {
        assert!(enumerate_decompositions(3).unwrap().is_empty());
        let four = enumerate_decompositions(4).unwrap();
        let firsts: Vec<_> = four.iter().map(|d| d.first().to_vec()).collect();
        assert_eq!(firsts, vec![vec![1, 2], vec![1, 3], vec![1, 4]]);
        assert_eq!(alloc::format!("{}", four[0]), "{12|34}");
        assert_eq!(enumerate_decompositions(5).unwrap().len(), 10);
        assert_eq!(enumerate_decompositions(6).unwrap().len(), 25);
        assert!(enumerate_decompositions(2).is_err());
    }

    #[test]
    fn cuts() {
        assert!(StableTree::smooth(4).edge_cuts().unwrap().is_empty());
        let r5 = remark5_tree().edge_cuts().unwrap();
        assert_eq!(r5, vec![Decomposition::new(5, ls(&[1, 2])).unwrap()]);
        let ch = chain().edge_cuts().unwrap();
        assert_eq!(ch.len(), 2);
        assert!(ch[0].contains_side(ls(&[1, 2])));
        assert!(ch[1].contains_side(ls(&[4, 5])));
    }

    #[test]
    fn contraction_examples() {
        let d = WeightVector::new(vec![ratio(1, 1), ratio(1, 2), ratio(1, 2)]).unwrap();
        let s = StableTree::smooth(3).contraction_sequence(&d).unwrap();
        assert_eq!((s.steps.len(), s.k0, s.distinguished()), (1, 0, 0));

        let d = WeightVector::new(vec![
            ratio(4, 7),
            ratio(4, 7),
            ratio(2, 7),
            ratio(2, 7),
            ratio(2, 7),
        ])
        .unwrap();
        let s = remark5_tree().contraction_sequence(&d).unwrap();
        assert_eq!(s.k0, 0);
        assert_eq!(s.distinguished(), 1);
        assert_eq!(s.steps[0].alpha, ratio(8, 7));

        // leaves {1,2} (α = 1/2) then {1,2,3} (α = 1): k0 = 1 at the middle vertex
        let d = WeightVector::new(vec![
            ratio(1, 4),
            ratio(1, 4),
            ratio(1, 2),
            ratio(1, 2),
            ratio(1, 2),
        ])
        .unwrap();
        let s = chain().contraction_sequence(&d).unwrap();
        assert_eq!(s.order(), vec![1, 2, 3]);
        assert_eq!(s.steps[0].alpha, ratio(1, 2));
        assert_eq!(s.steps[1].carried, ls(&[1, 2, 3]));
        assert_eq!(s.k0, 1);
        assert_eq!(s.distinguished(), 2);
    }
}

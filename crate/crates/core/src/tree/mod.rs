//! Graph to cardinality-tree transform and the path queries coders use.
//!
//! Level `l` of the tree splits every nonempty node of level `l - 1` into the
//! neighbors (left child) and non-neighbors (right child) of vertex `V_l`,
//! which is removed from the first nonempty node of level `l - 1`. Only node
//! cardinalities are kept.

mod motif;
mod paths;

pub use motif::{classify_4motif, MotifClass};
pub(crate) use motif::classify as classify_levels;
pub use paths::PathIndex;

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Position of a tree node: `index` is 1-based within the level, so left
/// children have odd indices and right children even ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NodeRef {
    pub level: usize,
    pub index: usize,
}

impl NodeRef {
    pub const ROOT: NodeRef = NodeRef { level: 0, index: 1 };

    pub fn new(level: usize, index: usize) -> Self {
        Self { level, index }
    }

    pub fn is_left(&self) -> bool {
        self.level > 0 && self.index % 2 == 1
    }

    fn pos(&self) -> usize {
        self.index - 1
    }
}

/// Which vertex of the first nonempty node is removed at each level.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Picker {
    /// Smallest vertex id; reproducible codelengths.
    #[default]
    Smallest,
    /// Uniformly random member, seeded.
    Random { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Level {
    cards: Vec<u32>,
    /// Position of each node's parent in the previous level.
    parents: Vec<u32>,
    /// Position of each nonempty node's left child in the next level.
    first_child: Vec<u32>,
}

const NONE: u32 = u32::MAX;

/// The rooted binary tree with node cardinalities as values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CardinalityTree {
    n: usize,
    levels: Vec<Level>,
}

impl CardinalityTree {
    /// Assembles a tree from per-level cardinalities, checking every
    /// structural invariant.
    pub fn from_levels(n: usize, levels: Vec<Vec<u32>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if levels.len() != n {
            return Err(Error::MalformedTree(format!(
                "expected {n} levels, found {}",
                levels.len()
            )));
        }
        let mut tree = Self::with_root(n);
        if levels[0] != [n as u32] {
            return Err(Error::MalformedTree("root must hold every vertex".into()));
        }
        for cards in levels.into_iter().skip(1) {
            tree.push_level(cards)?;
        }
        Ok(tree)
    }

    pub(crate) fn with_root(n: usize) -> Self {
        Self {
            n,
            levels: vec![Level {
                cards: vec![n as u32],
                parents: Vec::new(),
                first_child: vec![NONE],
            }],
        }
    }

    /// Appends the next level after validating it against the current last
    /// level.
    pub(crate) fn push_level(&mut self, cards: Vec<u32>) -> Result<()> {
        let depth = self.levels.len();
        if depth >= self.n {
            return Err(Error::MalformedTree(format!("more than {} levels", self.n)));
        }
        let prev = self.levels.last_mut().expect("root exists");
        let alpha = prev.cards.iter().position(|&c| c > 0).ok_or_else(|| {
            Error::MalformedTree(format!("level {} has no nonempty node", depth - 1))
        })?;
        let nonempty = prev.cards.iter().filter(|&&c| c > 0).count();
        if cards.len() != 2 * nonempty {
            return Err(Error::MalformedTree(format!(
                "level {depth} has {} nodes, expected {}",
                cards.len(),
                2 * nonempty
            )));
        }
        let mut parents = Vec::with_capacity(cards.len());
        let mut next = 0usize;
        for (pos, &c) in prev.cards.iter().enumerate() {
            if c == 0 {
                prev.first_child[pos] = NONE;
                continue;
            }
            let expected = c - u32::from(pos == alpha);
            let (l, r) = (cards[next], cards[next + 1]);
            if l.checked_add(r) != Some(expected) {
                return Err(Error::MalformedTree(format!(
                    "children of [{}, {}] sum to {}, expected {expected}",
                    depth - 1,
                    pos + 1,
                    l as u64 + r as u64
                )));
            }
            prev.first_child[pos] = next as u32;
            parents.push(pos as u32);
            parents.push(pos as u32);
            next += 2;
        }
        let first_child = vec![NONE; cards.len()];
        self.levels.push(Level {
            cards,
            parents,
            first_child,
        });
        Ok(())
    }

    pub(crate) fn is_complete(&self) -> bool {
        self.levels.len() == self.n
    }

    /// Vertex count of the encoded graph.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of levels, `n` for a complete tree (levels `0..n`).
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn level_cards(&self, level: usize) -> &[u32] {
        &self.levels[level].cards
    }

    pub fn level_len(&self, level: usize) -> usize {
        self.levels[level].cards.len()
    }

    pub fn contains(&self, node: NodeRef) -> bool {
        node.index >= 1
            && node.level < self.levels.len()
            && node.index <= self.levels[node.level].cards.len()
    }

    pub fn card(&self, node: NodeRef) -> u32 {
        self.levels[node.level].cards[node.pos()]
    }

    pub fn parent(&self, node: NodeRef) -> Option<NodeRef> {
        if node.level == 0 {
            return None;
        }
        let p = self.levels[node.level].parents[node.pos()] as usize;
        Some(NodeRef::new(node.level - 1, p + 1))
    }

    pub fn left_child(&self, node: NodeRef) -> Option<NodeRef> {
        let c = *self.levels[node.level].first_child.get(node.pos())?;
        (c != NONE && node.level + 1 < self.levels.len())
            .then(|| NodeRef::new(node.level + 1, c as usize + 1))
    }

    pub fn right_child(&self, node: NodeRef) -> Option<NodeRef> {
        self.left_child(node).map(|l| NodeRef::new(l.level, l.index + 1))
    }

    /// First nonempty node of `level`, the source of vertex `V_{level+1}`.
    pub fn alpha(&self, level: usize) -> Option<NodeRef> {
        self.levels[level]
            .cards
            .iter()
            .position(|&c| c > 0)
            .map(|p| NodeRef::new(level, p + 1))
    }

    /// Levels at which the root path of `node` passes through a left node,
    /// in increasing order.
    pub fn left_levels(&self, node: NodeRef) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = Some(node);
        while let Some(c) = cur {
            if c.is_left() {
                out.push(c.level);
            }
            cur = self.parent(c);
        }
        out.reverse();
        out
    }

    /// Levels where both the root path of `node` and that of the first
    /// nonempty node of its level contain a left node.
    pub fn ci_levels(&self, node: NodeRef) -> Vec<usize> {
        let alpha = self.alpha(node.level).unwrap_or(node);
        let a = self.left_levels(alpha);
        self.left_levels(node)
            .into_iter()
            .filter(|l| a.binary_search(l).is_ok())
            .collect()
    }

    /// Levels where either root path contains a left node.
    pub fn i_levels(&self, node: NodeRef) -> Vec<usize> {
        let alpha = self.alpha(node.level).unwrap_or(node);
        let mut out = self.left_levels(node);
        out.extend(self.left_levels(alpha));
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Indented text rendering, one line per level: cardinalities tagged
    /// with `L`/`R`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (l, level) in self.levels.iter().enumerate() {
            let _ = write!(s, "{l}:");
            for (pos, c) in level.cards.iter().enumerate() {
                let tag = match (l, pos % 2) {
                    (0, _) => "",
                    (_, 0) => "L",
                    _ => "R",
                };
                let _ = write!(s, " {c}{tag}");
            }
            s.push('\n');
        }
        s
    }
}

/// Transforms `g` into its cardinality tree. Also returns the picked vertex
/// for each level `1..n`, i.e. `picks[l - 1]` is `V_l`.
pub fn graph_to_tree(g: &Graph, picker: Picker) -> Result<(CardinalityTree, Vec<usize>)> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = match picker {
        Picker::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        Picker::Smallest => None,
    };
    let mut tree = CardinalityTree::with_root(n);
    let mut sets: Vec<Vec<u32>> = vec![(0..n as u32).collect()];
    let mut picks = Vec::with_capacity(n - 1);
    let mut is_nbr = vec![false; n];
    for _ in 1..n {
        let alpha = sets.iter().position(|s| !s.is_empty()).expect("n - l > 0 vertices remain");
        let at = match rng.as_mut() {
            Some(r) => r.random_range(0..sets[alpha].len()),
            None => 0,
        };
        let cards: Vec<usize> = sets.iter().map(Vec::len).collect();
        let v = sets[alpha].remove(at) as usize;
        picks.push(v);
        for &u in g.neighbors(v) {
            is_nbr[u as usize] = true;
        }
        let mut next = Vec::with_capacity(2 * sets.len());
        for (set, card) in sets.into_iter().zip(cards) {
            if card == 0 {
                continue;
            }
            let (left, right): (Vec<u32>, Vec<u32>) =
                set.into_iter().partition(|&u| is_nbr[u as usize]);
            next.push(left);
            next.push(right);
        }
        for &u in g.neighbors(v) {
            is_nbr[u as usize] = false;
        }
        tree.push_level(next.iter().map(|s| s.len() as u32).collect())?;
        sets = next;
    }
    Ok((tree, picks))
}

/// Rebuilds a graph isomorphic to any graph that produced `t`.
pub fn tree_to_graph(t: &CardinalityTree) -> Result<Graph> {
    tree_to_graph_with_picks(t).map(|(g, _)| g)
}

/// As [`tree_to_graph`], also returning the vertex created for each level.
/// Vertex sets are materialized in increasing id order and the smallest id
/// of the first nonempty node is picked, so `graph_to_tree` with
/// [`Picker::Smallest`] maps the result back onto `t` exactly.
pub fn tree_to_graph_with_picks(t: &CardinalityTree) -> Result<(Graph, Vec<usize>)> {
    let n = t.n();
    if !t.is_complete() {
        return Err(Error::MalformedTree(format!(
            "tree has {} of {n} levels",
            t.depth()
        )));
    }
    let mut sets: Vec<Vec<u32>> = vec![(0..n as u32).collect()];
    let mut edges = Vec::new();
    let mut picks = Vec::with_capacity(n.saturating_sub(1));
    for l in 1..n {
        let alpha = sets.iter().position(|s| !s.is_empty()).ok_or_else(|| {
            Error::MalformedTree(format!("level {} has no vertices", l - 1))
        })?;
        let cards = t.level_cards(l);
        let v = sets[alpha].remove(0);
        picks.push(v as usize);
        let mut next = Vec::with_capacity(cards.len());
        let mut child = 0;
        for (pos, set) in sets.into_iter().enumerate() {
            if t.level_cards(l - 1)[pos] == 0 {
                continue;
            }
            let left = cards[child] as usize;
            let mut right = set;
            let left_set: Vec<u32> = right.drain(..left).collect();
            edges.extend(left_set.iter().map(|&u| (v as usize, u as usize)));
            next.push(left_set);
            next.push(right);
            child += 2;
        }
        sets = next;
    }
    Ok((Graph::from_edges(n, edges)?, picks))
}

#[cfg(test)]
mod tests;

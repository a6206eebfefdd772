use super::{CardinalityTree, NONE};

/// Incremental index of left-node levels along root paths.
///
/// Each nonempty node of the newest level points into a shared arena of
/// `(level, next)` cells listing the left levels on its root path, newest
/// first. Encoder, decoder and trainer push levels in the same order, so the
/// index only ever reflects already-coded parts of the tree.
#[derive(Clone, Debug)]
pub struct PathIndex {
    arena: Vec<(u32, u32)>,
    heads: Vec<u32>,
    level: usize,
    alpha: Option<usize>,
    /// `adjacency[j]`: levels `i < j` with `V_i ~ V_j`, ascending.
    adjacency: Vec<Vec<u32>>,
}

impl PathIndex {
    /// Index for a tree that so far holds only its root.
    pub fn new(n: usize) -> Self {
        Self {
            arena: Vec::new(),
            heads: vec![NONE],
            level: 0,
            alpha: (n > 0).then_some(0),
            adjacency: vec![Vec::new(), Vec::new()],
        }
    }

    /// Newest level covered by the index.
    pub fn level(&self) -> usize {
        self.level
    }

    /// Position of the first nonempty node of the newest level.
    pub fn alpha(&self) -> Option<usize> {
        self.alpha
    }

    /// Extends the index with level `self.level() + 1` of `tree`.
    pub fn push_level(&mut self, tree: &CardinalityTree) {
        let level = self.level + 1;
        let lv = &tree.levels[level];
        let mut heads = Vec::with_capacity(lv.cards.len());
        for (pos, (&card, &parent)) in lv.cards.iter().zip(&lv.parents).enumerate() {
            if card == 0 {
                heads.push(NONE);
                continue;
            }
            let inherited = self.heads[parent as usize];
            if pos % 2 == 0 {
                self.arena.push((level as u32, inherited));
                heads.push((self.arena.len() - 1) as u32);
            } else {
                heads.push(inherited);
            }
        }
        self.heads = heads;
        self.level = level;
        self.alpha = lv.cards.iter().position(|&c| c > 0);
        let adj = match self.alpha {
            Some(a) => self.left_levels(a),
            None => Vec::new(),
        };
        self.adjacency.push(adj);
    }

    /// Left levels on the root path of node `pos` of the newest level,
    /// ascending.
    pub fn left_levels(&self, pos: usize) -> Vec<u32> {
        let mut out = Vec::new();
        let mut cur = self.heads[pos];
        while cur != NONE {
            let (l, next) = self.arena[cur as usize];
            out.push(l);
            cur = next;
        }
        out.reverse();
        out
    }

    /// Number of left levels on the path of node `pos` whose mark is set.
    pub fn count_marked(&self, pos: usize, marks: &[bool]) -> usize {
        let mut count = 0;
        let mut cur = self.heads[pos];
        while cur != NONE {
            let (l, next) = self.arena[cur as usize];
            count += usize::from(marks[l as usize]);
            cur = next;
        }
        count
    }

    /// Levels `i < j` whose picked vertex `V_i` is adjacent to `V_j`.
    /// Available for `j <= self.level() + 1`.
    pub fn vertex_adjacency(&self, j: usize) -> &[u32] {
        &self.adjacency[j]
    }
}

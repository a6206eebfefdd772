use super::Family;
use crate::tree::{MotifClass, PathIndex};

/// Common-neighbor bucket cap in universal mode; larger counts share the
/// last bucket.
pub const UNIVERSAL_CN_CAP: usize = 64;

/// Number of parameter buckets of `family` when common-neighbor counts are
/// capped at `cap`.
pub fn bucket_count(family: Family, cap: usize) -> usize {
    match family {
        Family::Iid => 1,
        Family::Triangle => 2,
        Family::CommonNeighbor => cap + 1,
        Family::FourMotif => MotifClass::ALL.len(),
    }
}

/// Maps the parent of a left node to the bucket whose parameter codes it,
/// looking only at levels already in the [`PathIndex`].
#[derive(Debug)]
pub(crate) struct Bucketer {
    family: Family,
    cap: usize,
    pivot_marks: Vec<bool>,
    marked: Vec<u32>,
    scratch: Vec<bool>,
}

impl Bucketer {
    pub fn new(family: Family, n: usize, cap: usize) -> Self {
        Self {
            family,
            cap,
            pivot_marks: vec![false; n + 1],
            marked: Vec::new(),
            scratch: vec![false; n + 1],
        }
    }

    /// Prepares for level `idx.level() + 1`, whose picked vertex comes from
    /// the first nonempty node of the index's newest level.
    pub fn begin_level(&mut self, idx: &PathIndex) {
        for &l in &self.marked {
            self.pivot_marks[l as usize] = false;
        }
        self.marked.clear();
        if matches!(self.family, Family::Triangle | Family::CommonNeighbor) {
            self.marked.extend_from_slice(idx.vertex_adjacency(idx.level() + 1));
            for &l in &self.marked {
                self.pivot_marks[l as usize] = true;
            }
        }
    }

    /// Bucket of a left node whose parent sits at `parent_pos` of the
    /// index's newest level.
    pub fn bucket(&mut self, idx: &PathIndex, parent_pos: usize) -> usize {
        match self.family {
            Family::Iid => 0,
            Family::Triangle => usize::from(idx.count_marked(parent_pos, &self.pivot_marks) > 0),
            Family::CommonNeighbor => idx.count_marked(parent_pos, &self.pivot_marks).min(self.cap),
            Family::FourMotif => {
                let level = idx.level() + 1;
                crate::tree::classify_levels(
                    &idx.left_levels(parent_pos),
                    idx.vertex_adjacency(level),
                    |j| idx.vertex_adjacency(j as usize),
                    &mut self.scratch,
                )
                .index()
            }
        }
    }
}

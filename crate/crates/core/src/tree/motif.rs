use serde::{Deserialize, Serialize};

use super::{CardinalityTree, NodeRef};
use crate::error::{Error, Result};

/// Four-vertex motif closed by the edges of a left node, in priority order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MotifClass {
    FourClique,
    DoubleTriangle,
    FourCycle,
    None,
}

impl MotifClass {
    pub const ALL: [MotifClass; 4] = [
        MotifClass::FourClique,
        MotifClass::DoubleTriangle,
        MotifClass::FourCycle,
        MotifClass::None,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Classifies the edges between `V_l` and the vertices of a left node at
/// level `l`.
///
/// * `parent_left`: left levels on the root path of the node's parent.
/// * `pivot_adj`: left levels on the root path of the first nonempty node of
///   level `l - 1`, i.e. the earlier neighbors of `V_l`.
/// * `earlier(j)`: earlier neighbors of `V_j`.
///
/// All level lists are ascending. `marks` is scratch space indexed by level
/// and must be all-false on entry; it is restored before returning.
pub(crate) fn classify<'a, F>(
    parent_left: &[u32],
    pivot_adj: &[u32],
    earlier: F,
    marks: &mut [bool],
) -> MotifClass
where
    F: Fn(u32) -> &'a [u32],
{
    let common = intersect(parent_left, pivot_adj);
    match common.len() {
        0 => {
            let either = union(parent_left, pivot_adj);
            if either.len() > 1 && has_adjacent_pair(&either, &earlier, marks) {
                MotifClass::FourCycle
            } else {
                MotifClass::None
            }
        }
        1 => {
            let shared = earlier(common[0]);
            if overlaps(shared, pivot_adj) || overlaps(shared, parent_left) {
                MotifClass::DoubleTriangle
            } else {
                MotifClass::None
            }
        }
        _ => {
            if has_adjacent_pair(&common, &earlier, marks) {
                MotifClass::FourClique
            } else {
                MotifClass::DoubleTriangle
            }
        }
    }
}

/// Whether two levels `a < b` of `set` have adjacent picked vertices.
fn has_adjacent_pair<'a, F>(set: &[u32], earlier: &F, marks: &mut [bool]) -> bool
where
    F: Fn(u32) -> &'a [u32],
{
    for &l in set {
        marks[l as usize] = true;
    }
    let found = set
        .iter()
        .any(|&b| earlier(b).iter().any(|&a| marks[a as usize]));
    for &l in set {
        marks[l as usize] = false;
    }
    found
}

pub(crate) fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn union(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn overlaps(a: &[u32], b: &[u32]) -> bool {
    !intersect(a, b).is_empty()
}

/// Motif class of a left node, computed by walking root paths of `t`.
pub fn classify_4motif(left_node: NodeRef, t: &CardinalityTree) -> Result<MotifClass> {
    if !t.contains(left_node) || !left_node.is_left() {
        return Err(Error::Domain(format!(
            "[{}, {}] is not a left node of the tree",
            left_node.level, left_node.index
        )));
    }
    let l = left_node.level;
    let to_u32 = |v: Vec<usize>| v.into_iter().map(|x| x as u32).collect::<Vec<_>>();
    let parent = t.parent(left_node).expect("left nodes have parents");
    let parent_left = to_u32(t.left_levels(parent));
    // earlier[j] lists the earlier neighbors of V_j, held by the first
    // nonempty node of level j - 1.
    let earlier: Vec<Vec<u32>> = (0..=l)
        .map(|j| match j.checked_sub(1).and_then(|p| t.alpha(p)) {
            Some(a) => to_u32(t.left_levels(a)),
            None => Vec::new(),
        })
        .collect();
    let mut marks = vec![false; l + 1];
    Ok(classify(
        &parent_left,
        &earlier[l],
        |j| &earlier[j as usize],
        &mut marks,
    ))
}

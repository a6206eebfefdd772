use super::Graph;
use crate::error::{Error, Result};

pub const MAX_ISO_VERTICES: usize = 12;

/// Exact isomorphism test by backtracking over degree-compatible mappings.
/// Only graphs with at most [`MAX_ISO_VERTICES`] vertices are accepted.
pub fn is_isomorphic_small(g1: &Graph, g2: &Graph) -> Result<bool> {
    let n = g1.vertex_count();
    if n > MAX_ISO_VERTICES || g2.vertex_count() > MAX_ISO_VERTICES {
        return Err(Error::Unsupported(format!(
            "exhaustive isomorphism limited to {MAX_ISO_VERTICES} vertices"
        )));
    }
    if n != g2.vertex_count()
        || g1.edge_count() != g2.edge_count()
        || g1.degree_sequence() != g2.degree_sequence()
    {
        return Ok(false);
    }
    // Map high-degree vertices first; they prune the search fastest.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g1.degree(v)));
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(extend(g1, g2, &order, 0, &mut map, &mut used))
}

fn extend(
    g1: &Graph,
    g2: &Graph,
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&u) = order.get(depth) else {
        return true;
    };
    for cand in 0..g2.vertex_count() {
        if used[cand] || g2.degree(cand) != g1.degree(u) {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&w| g1.has_edge(u, w) == g2.has_edge(cand, map[w]));
        if !consistent {
            continue;
        }
        map[u] = cand;
        used[cand] = true;
        if extend(g1, g2, order, depth + 1, map, used) {
            return true;
        }
        used[cand] = false;
    }
    map[u] = usize::MAX;
    false
}

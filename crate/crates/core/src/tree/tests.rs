use proptest::prelude::*;

use super::*;
use crate::graph::{generate, is_isomorphic_small, GraphModel};

fn tree_of(g: &Graph) -> CardinalityTree {
    graph_to_tree(g, Picker::Smallest).unwrap().0
}

#[test]
fn empty_graph_is_right_chain() {
    let t = tree_of(&Graph::empty(3));
    assert_eq!(t.dump(), "0: 3\n1: 0L 2R\n2: 0L 1R\n");
}

#[test]
fn triangle_is_left_chain() {
    let t = tree_of(&Graph::complete(3));
    assert_eq!(t.level_cards(1), &[2, 0]);
    assert_eq!(t.level_cards(2), &[1, 0]);
}

#[test]
fn star_center_first() {
    let t = tree_of(&Graph::star(5));
    assert_eq!(t.level_cards(1), &[5, 0]);
}

#[test]
fn zero_vertices_rejected() {
    assert!(matches!(graph_to_tree(&Graph::empty(0), Picker::Smallest), Err(Error::EmptyGraph)));
}

#[test]
fn single_vertex_tree() {
    let t = tree_of(&Graph::empty(1));
    assert_eq!(t.depth(), 1);
    assert_eq!(tree_to_graph(&t).unwrap(), Graph::empty(1));
}

#[test]
fn reconstruct_small_graphs() {
    assert_eq!(tree_to_graph(&tree_of(&Graph::empty(3))).unwrap(), Graph::empty(3));
    assert_eq!(tree_to_graph(&tree_of(&Graph::complete(3))).unwrap(), Graph::complete(3));
}

/// Vertices 0..7; V1 = 0, V2 = 1. Vertex 2 sees both, vertex 3 only 1, so
/// [2,1] = {2} and [2,3] = {3}.
fn fixture() -> Graph {
    Graph::from_edges(7, [(0, 1), (0, 2), (1, 2), (1, 3), (3, 4), (4, 5), (5, 6)]).unwrap()
}

#[test]
fn ci_and_i_on_fixture() {
    let t = tree_of(&fixture());
    assert_eq!(t.level_cards(2)[..4], [1, 0, 1, 3]);
    let node = NodeRef::new(2, 3);
    assert_eq!(t.ci_levels(node), vec![2]);
    assert_eq!(t.i_levels(node), vec![1, 2]);
    assert_eq!(t.parent(node), Some(NodeRef::new(1, 2)));
    assert_eq!(t.left_child(NodeRef::new(1, 2)), Some(node));
    assert_eq!(t.right_child(NodeRef::new(1, 2)), Some(NodeRef::new(2, 4)));
}

#[test]
fn all_right_path_has_empty_sets() {
    let t = tree_of(&Graph::empty(4));
    let node = NodeRef::new(3, 2);
    assert!(t.ci_levels(node).is_empty());
    assert!(t.i_levels(node).is_empty());
}

#[test]
fn k4_ci_covers_all_prior_levels() {
    let t = tree_of(&Graph::complete(4));
    assert_eq!(t.ci_levels(NodeRef::new(3, 1)), vec![1, 2, 3]);
    assert_eq!(classify_4motif(NodeRef::new(3, 1), &t).unwrap(), MotifClass::FourClique);
}

#[test]
fn c4_closing_edge_is_four_cycle() {
    let t = tree_of(&Graph::cycle(4));
    assert_eq!(t.level_cards(3), &[0, 0, 1, 0]);
    let parent = t.parent(NodeRef::new(3, 3)).unwrap();
    assert!(t.ci_levels(parent).is_empty());
    assert_eq!(t.i_levels(parent), vec![1, 2]);
    assert_eq!(classify_4motif(NodeRef::new(3, 3), &t).unwrap(), MotifClass::FourCycle);
}

#[test]
fn path_start_has_no_motif() {
    let t = tree_of(&Graph::path(5));
    assert_eq!(classify_4motif(NodeRef::new(1, 1), &t).unwrap(), MotifClass::None);
}

#[test]
fn double_triangle_sharing_pivot_edge() {
    // Diamond: triangles 0-1-2 and 1-2-3 share edge 1-2.
    let g = Graph::from_edges(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
    let t = tree_of(&g);
    // V1=0: [1,1]={1,2}, [1,2]={3}. V2=1: [2,1]={2}, [2,3]={3}.
    // V3=2: level 3 left node holding 3 has parent [2,3] whose only common
    // level with [2,1] is 2, and V2's earlier neighbor V1 is shared by V3.
    let node = NodeRef::new(3, 3);
    assert_eq!(t.card(node), 1);
    let parent = t.parent(node).unwrap();
    assert_eq!(t.ci_levels(parent), vec![2]);
    assert_eq!(classify_4motif(node, &t).unwrap(), MotifClass::DoubleTriangle);
}

#[test]
fn right_node_rejected() {
    let t = tree_of(&Graph::complete(4));
    assert!(classify_4motif(NodeRef::new(1, 2), &t).is_err());
    assert!(classify_4motif(NodeRef::ROOT, &t).is_err());
}

#[test]
fn malformed_levels_rejected() {
    assert!(CardinalityTree::from_levels(3, vec![vec![3], vec![1, 1], vec![0, 0, 0, 1]]).is_ok());
    // children of the pivot must sum to parent - 1
    assert!(CardinalityTree::from_levels(3, vec![vec![3], vec![2, 1], vec![1, 1, 0, 0]]).is_err());
    // empty nodes have no children
    assert!(CardinalityTree::from_levels(3, vec![vec![3], vec![1, 1], vec![0, 1]]).is_err());
    // wrong depth and wrong root
    assert!(CardinalityTree::from_levels(3, vec![vec![3], vec![1, 1]]).is_err());
    assert!(CardinalityTree::from_levels(2, vec![vec![3], vec![1, 1]]).is_err());
}

#[test]
fn round_trip_er_20() {
    for seed in 0..100 {
        let g = generate(GraphModel::ErdosRenyi { n: 20, p: 0.3 }, seed).unwrap();
        let (t, picks) = graph_to_tree(&g, Picker::Smallest).unwrap();
        let (h, rebuilt) = tree_to_graph_with_picks(&t).unwrap();
        assert!(maps_onto(&g, &picks, &h, &rebuilt), "seed {seed}");
        assert_eq!(tree_of(&h), t, "fixed point, seed {seed}");
    }
}

/// Checks that sending the `l`-th picked vertex of `g` to the `l`-th picked
/// vertex of `h` (and the leftover vertex to the leftover) is an
/// isomorphism.
pub(crate) fn maps_onto(g: &Graph, picks_g: &[usize], h: &Graph, picks_h: &[usize]) -> bool {
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edge_count() != h.edge_count() {
        return false;
    }
    let leftover = |p: &[usize]| {
        let mut seen = vec![false; n];
        p.iter().for_each(|&v| seen[v] = true);
        seen.iter().position(|s| !s)
    };
    let mut map = vec![0; n];
    for (&a, &b) in picks_g.iter().zip(picks_h) {
        map[a] = b;
    }
    if let (Some(a), Some(b)) = (leftover(picks_g), leftover(picks_h)) {
        map[a] = b;
    }
    g.edges().all(|(u, v)| h.has_edge(map[u], map[v]))
}

#[test]
fn random_picker_still_reconstructs() {
    let g = generate(GraphModel::BarabasiAlbert { n: 40, m: 3 }, 1).unwrap();
    for seed in 0..5 {
        let (t, picks) = graph_to_tree(&g, Picker::Random { seed }).unwrap();
        let (h, rebuilt) = tree_to_graph_with_picks(&t).unwrap();
        assert!(maps_onto(&g, &picks, &h, &rebuilt));
    }
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn tree_invariants(g in arb_graph(12), seed in any::<u64>()) {
        let n = g.vertex_count();
        let (t, picks) = graph_to_tree(&g, Picker::Random { seed }).unwrap();
        prop_assert_eq!(t.depth(), n);
        prop_assert_eq!(picks.len(), n - 1);
        for l in 0..n {
            let sum: u32 = t.level_cards(l).iter().sum();
            prop_assert_eq!(sum as usize, n - l);
            prop_assert!(l >= 63 || t.level_len(l) <= 1 << l);
            for i in 1..=t.level_len(l) {
                let node = NodeRef::new(l, i);
                let ci = t.ci_levels(node);
                let all = t.i_levels(node);
                prop_assert!(ci.iter().all(|x| all.contains(x)));
            }
        }
        let h = tree_to_graph(&t).unwrap();
        prop_assert!(is_isomorphic_small(&g, &h).unwrap());
        prop_assert_eq!(tree_of(&h), tree_of(&tree_to_graph(&tree_of(&h)).unwrap()));
    }

    #[test]
    fn path_index_matches_tree_walk(g in arb_graph(14)) {
        let t = tree_of(&g);
        let n = t.n();
        let mut idx = PathIndex::new(n);
        for l in 1..n {
            // Level l is coded against the index of level l - 1.
            let mut marks = vec![false; n];
            for i in 1..=t.level_len(l) {
                let node = NodeRef::new(l, i);
                if !node.is_left() {
                    continue;
                }
                let parent = t.parent(node).unwrap();
                let fast_left = idx.left_levels(parent.index - 1);
                let slow_left: Vec<u32> = t.left_levels(parent).into_iter().map(|x| x as u32).collect();
                prop_assert_eq!(&fast_left, &slow_left);
                let fast = motif::classify(
                    &fast_left,
                    idx.vertex_adjacency(l),
                    |j| idx.vertex_adjacency(j as usize),
                    &mut marks,
                );
                prop_assert_eq!(fast, classify_4motif(node, &t).unwrap());
            }
            idx.push_level(&t);
        }
    }
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// Random and deterministic graph families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum GraphModel {
    /// Erdős–Rényi: every pair independently with probability `p`.
    ErdosRenyi { n: usize, p: f64 },
    /// Barabási–Albert: each new vertex attaches `m` edges preferentially.
    BarabasiAlbert { n: usize, m: usize },
    /// Watts–Strogatz ring lattice of `k` nearest neighbors, rewired with
    /// probability `beta`.
    WattsStrogatz { n: usize, k: usize, beta: f64 },
    Empty { n: usize },
    Complete { n: usize },
}

impl GraphModel {
    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Domain(msg));
        match *self {
            GraphModel::ErdosRenyi { p, .. } if !(0.0..=1.0).contains(&p) => {
                bad(format!("ER edge probability {p} outside [0, 1]"))
            }
            GraphModel::BarabasiAlbert { n, m } if m < 1 || m >= n => {
                bad(format!("BA requires 1 <= m < n, got m={m}, n={n}"))
            }
            GraphModel::WattsStrogatz { n, k, beta } => {
                if k % 2 != 0 || k >= n {
                    bad(format!("WS requires even k < n, got k={k}, n={n}"))
                } else if !(0.0..=1.0).contains(&beta) {
                    bad(format!("WS rewiring probability {beta} outside [0, 1]"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

/// Draws a graph from `model`. The result is a pure function of
/// `(model, seed)`.
pub fn generate(model: GraphModel, seed: u64) -> Result<Graph> {
    model.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match model {
        GraphModel::Empty { n } => Ok(Graph::empty(n)),
        GraphModel::Complete { n } => Ok(Graph::complete(n)),
        GraphModel::ErdosRenyi { n, p } => {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, edges)
        }
        GraphModel::BarabasiAlbert { n, m } => {
            // m isolated seed vertices; vertex m links to all of them, later
            // vertices sample targets from the endpoint multiset.
            let mut edges = Vec::with_capacity(m * (n - m));
            let mut endpoints: Vec<usize> = Vec::with_capacity(2 * m * (n - m));
            let mut targets: Vec<usize> = (0..m).collect();
            for source in m..n {
                for &t in &targets {
                    edges.push((source, t));
                    endpoints.push(t);
                    endpoints.push(source);
                }
                targets.clear();
                while targets.len() < m {
                    let t = endpoints[rng.random_range(0..endpoints.len())];
                    if !targets.contains(&t) {
                        targets.push(t);
                    }
                }
            }
            Graph::from_edges(n, edges)
        }
        GraphModel::WattsStrogatz { n, k, beta } => {
            let mut adj = vec![std::collections::BTreeSet::new(); n];
            for u in 0..n {
                for j in 1..=k / 2 {
                    let v = (u + j) % n;
                    adj[u].insert(v);
                    adj[v].insert(u);
                }
            }
            for j in 1..=k / 2 {
                for u in 0..n {
                    let v = (u + j) % n;
                    if !rng.random_bool(beta) {
                        continue;
                    }
                    if adj[u].len() >= n - 1 || !adj[u].contains(&v) {
                        continue;
                    }
                    let w = loop {
                        let w = rng.random_range(0..n);
                        if w != u && !adj[u].contains(&w) {
                            break w;
                        }
                    };
                    adj[u].remove(&v);
                    adj[v].remove(&u);
                    adj[u].insert(w);
                    adj[w].insert(u);
                }
            }
            let edges = adj
                .iter()
                .enumerate()
                .flat_map(|(u, s)| s.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
                .collect::<Vec<_>>();
            Graph::from_edges(n, edges)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_four() {
        let g = generate(GraphModel::Complete { n: 4 }, 0).unwrap();
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn er_edge_count_within_three_sigma() {
        let g = generate(GraphModel::ErdosRenyi { n: 1000, p: 0.02 }, 7).unwrap();
        let pairs = 1000.0 * 999.0 / 2.0;
        let mean = pairs * 0.02;
        let sd = (pairs * 0.02 * 0.98f64).sqrt();
        assert!((g.edge_count() as f64 - mean).abs() < 3.0 * sd, "{}", g.edge_count());
    }

    #[test]
    fn ba_edge_count_is_exact() {
        let g = generate(GraphModel::BarabasiAlbert { n: 1000, m: 10 }, 3).unwrap();
        assert_eq!(g.edge_count(), 10 * 990);
    }

    #[test]
    fn ws_preserves_edge_count() {
        let g = generate(GraphModel::WattsStrogatz { n: 200, k: 6, beta: 0.2 }, 5).unwrap();
        assert_eq!(g.edge_count(), 600);
        let lattice = generate(GraphModel::WattsStrogatz { n: 10, k: 4, beta: 0.0 }, 5).unwrap();
        assert!((0..10).all(|v| lattice.degree(v) == 4));
    }

    #[test]
    fn reproducible_per_seed() {
        let m = GraphModel::ErdosRenyi { n: 60, p: 0.1 };
        assert_eq!(generate(m, 11).unwrap(), generate(m, 11).unwrap());
        assert_ne!(generate(m, 11).unwrap(), generate(m, 12).unwrap());
    }

    #[test]
    fn invalid_parameters() {
        assert!(generate(GraphModel::ErdosRenyi { n: 5, p: 1.5 }, 0).is_err());
        assert!(generate(GraphModel::BarabasiAlbert { n: 5, m: 5 }, 0).is_err());
        assert!(generate(GraphModel::BarabasiAlbert { n: 5, m: 0 }, 0).is_err());
        assert!(generate(GraphModel::WattsStrogatz { n: 10, k: 3, beta: 0.1 }, 0).is_err());
        assert!(generate(GraphModel::WattsStrogatz { n: 10, k: 4, beta: -0.1 }, 0).is_err());
    }

    #[test]
    fn degree_sum_is_twice_edges() {
        for (i, m) in [
            GraphModel::ErdosRenyi { n: 100, p: 0.05 },
            GraphModel::BarabasiAlbert { n: 100, m: 3 },
            GraphModel::WattsStrogatz { n: 100, k: 4, beta: 0.3 },
        ]
        .into_iter()
        .enumerate()
        {
            let g = generate(m, i as u64).unwrap();
            let h = g.degree_histogram();
            assert_eq!(h.total(), 100);
            assert_eq!(h.degree_sum(), 2 * g.edge_count() as u64);
        }
    }
}

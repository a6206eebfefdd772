use serde::{Deserialize, Serialize};

use super::context::{bucket_count, Bucketer};
use super::{Class, CoderSpec, Family};
use crate::entropy::clamp_prob;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tree::{graph_to_tree, CardinalityTree, PathIndex, Picker};

/// Sequential add-half estimate of a success probability.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KtCounter {
    pub n1: u64,
    pub n0: u64,
}

impl KtCounter {
    pub fn estimate(&self) -> f64 {
        (self.n1 as f64 + 0.5) / ((self.n1 + self.n0) as f64 + 1.0)
    }

    pub fn update(&mut self, left: u64, right: u64) {
        self.n1 += left;
        self.n0 += right;
    }
}

/// Degree counts summed over a training corpus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHistogram {
    /// `sums[k]`: vertices of degree `k`, over all training graphs.
    pub sums: Vec<u64>,
    pub graphs: u64,
}

impl DegreeHistogram {
    /// Average count of degree `k` per graph.
    pub fn average(&self, k: usize) -> f64 {
        self.sums.get(k).map_or(0.0, |&s| s as f64 / self.graphs.max(1) as f64)
    }
}

/// Parameters learned from a corpus for one family and class.
///
/// `params` holds one probability per bucket:
/// * IID: `[p]`
/// * Triangle: `[p̌ (no common neighbor), p△]`
/// * CommonNeighbor: `p(m)` for `m = 0..=d_max`
/// * FourMotif: `[4-clique, double triangle, 4-cycle, none]`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoderStats {
    pub family: Family,
    pub class: Class,
    pub params: Vec<f64>,
    pub degree_hist: Option<DegreeHistogram>,
}

impl CoderStats {
    /// Checks the stats against `spec` and the clamp range.
    pub fn validate(&self, spec: CoderSpec) -> Result<()> {
        if self.family != spec.family || self.class != spec.class {
            return Err(Error::Config(format!(
                "stats trained for {}/{} cannot drive {}/{}",
                self.family, self.class, spec.family, spec.class
            )));
        }
        let expected = match self.family {
            Family::CommonNeighbor => None,
            f => Some(bucket_count(f, 0)),
        };
        if self.params.is_empty() || expected.is_some_and(|e| e != self.params.len()) {
            return Err(Error::Config(format!(
                "{} stats need {} parameters, found {}",
                self.family,
                expected.unwrap_or(1),
                self.params.len()
            )));
        }
        if self.params.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Config("parameters must lie in [0, 1]".into()));
        }
        if self.class == Class::Two && self.degree_hist.is_none() {
            return Err(Error::Config("class 2 stats need a degree histogram".into()));
        }
        Ok(())
    }

    /// Human-readable name of each parameter.
    pub fn param_names(&self) -> Vec<String> {
        match self.family {
            Family::Iid => vec!["p".into()],
            Family::Triangle => vec!["p_tri_check".into(), "p_tri".into()],
            Family::CommonNeighbor => (0..self.params.len()).map(|m| format!("p_cn[{m}]")).collect(),
            Family::FourMotif => ["p_4clique", "p_dtri", "p_4cycle", "p_4check"]
                .map(String::from)
                .to_vec(),
        }
    }
}

/// Per-bucket sums of left values and trials over one tree.
pub(crate) fn bucket_sums(tree: &CardinalityTree, family: Family) -> Vec<(u64, u64)> {
    let n = tree.n();
    // Common-neighbor buckets grow on demand, uncapped.
    let mut sums = vec![(0u64, 0u64); bucket_count(family, 0)];
    let mut idx = PathIndex::new(n);
    let mut bucketer = Bucketer::new(family, n, n);
    for l in 1..n {
        bucketer.begin_level(&idx);
        let prev = tree.level_cards(l - 1);
        let alpha = idx.alpha().expect("complete trees have a pivot");
        let cards = tree.level_cards(l);
        let mut child = 0;
        for (pos, &c) in prev.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let trials = u64::from(c - u32::from(pos == alpha));
            let left = u64::from(cards[child]);
            child += 2;
            if trials == 0 {
                continue;
            }
            let b = bucketer.bucket(&idx, pos);
            if b >= sums.len() {
                sums.resize(b + 1, (0, 0));
            }
            sums[b].0 += left;
            sums[b].1 += trials;
        }
        idx.push_level(tree);
    }
    sums
}

/// Learns bucket parameters and, for class 2, the degree histogram.
///
/// Each graph contributes its own ratio of left values to trials per
/// bucket; ratios are averaged over the graphs where the bucket occurs.
/// Buckets never seen fall back to the pooled ratio over all buckets.
pub fn train_stats(graphs: &[Graph], spec: CoderSpec) -> Result<CoderStats> {
    train_stats_with(graphs, spec, Picker::Smallest)
}

pub fn train_stats_with(graphs: &[Graph], spec: CoderSpec, picker: Picker) -> Result<CoderStats> {
    if graphs.is_empty() {
        return Err(Error::Config("training needs at least one graph".into()));
    }
    let per_graph = |g: &Graph| -> Result<Vec<(u64, u64)>> {
        let (tree, _) = graph_to_tree(g, picker)?;
        Ok(bucket_sums(&tree, spec.family))
    };
    #[cfg(feature = "parallel")]
    let all: Vec<Vec<(u64, u64)>> = {
        use rayon::prelude::*;
        graphs.par_iter().map(per_graph).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let all: Vec<Vec<(u64, u64)>> = graphs.iter().map(per_graph).collect::<Result<_>>()?;

    let buckets = all.iter().map(Vec::len).max().unwrap_or(1).max(1);
    let (pooled_left, pooled_trials) = all
        .iter()
        .flatten()
        .fold((0u64, 0u64), |acc, s| (acc.0 + s.0, acc.1 + s.1));
    let pooled = if pooled_trials > 0 {
        pooled_left as f64 / pooled_trials as f64
    } else {
        0.5
    };
    let params = (0..buckets)
        .map(|b| {
            let ratios: Vec<f64> = all
                .iter()
                .filter_map(|s| s.get(b).filter(|x| x.1 > 0).map(|x| x.0 as f64 / x.1 as f64))
                .collect();
            let raw = if ratios.is_empty() {
                pooled
            } else {
                ratios.iter().sum::<f64>() / ratios.len() as f64
            };
            clamp_prob(raw)
        })
        .collect();
    let degree_hist = (spec.class == Class::Two).then(|| {
        let mut sums = Vec::new();
        for g in graphs {
            let h = g.degree_histogram();
            if sums.len() < h.counts.len() {
                sums.resize(h.counts.len(), 0);
            }
            for (s, c) in sums.iter_mut().zip(&h.counts) {
                *s += c;
            }
        }
        while sums.len() > 1 && sums.last() == Some(&0) {
            sums.pop();
        }
        DegreeHistogram {
            sums,
            graphs: graphs.len() as u64,
        }
    });
    Ok(CoderStats {
        family: spec.family,
        class: spec.class,
        params,
        degree_hist,
    })
}

/// 32-bit fixed-point form of a probability, never 0.
pub(crate) fn quantize(p: f64) -> u32 {
    (p * 4_294_967_296.0).round().clamp(1.0, 4_294_967_295.0) as u32
}

pub(crate) fn dequantize(q: u32) -> f64 {
    clamp_prob(f64::from(q) / 4_294_967_296.0)
}

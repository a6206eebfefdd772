//! The level-by-level coding loop shared by encoder, decoder and meter.

use super::context::Bucketer;
use super::stats::KtCounter;
use super::{Class, Family};
use crate::entropy::{binomial_model, FrequencyModel, LevelConditional, SymbolCoder};
use crate::error::{Error, Result};
use crate::tree::{CardinalityTree, PathIndex};

/// Where the per-bucket parameters come from.
#[derive(Clone, Debug)]
pub(crate) enum Params {
    Fixed(Vec<f64>),
    /// Sequential estimates, updated after each node (class 1) or each
    /// level (class 2).
    Adaptive(Vec<KtCounter>),
}

impl Params {
    fn theta(&self, bucket: usize) -> f64 {
        match self {
            Params::Fixed(p) => p[bucket.min(p.len() - 1)],
            Params::Adaptive(c) => c[bucket].estimate(),
        }
    }

    fn update(&mut self, bucket: usize, left: u32, trials: u32) {
        if let Params::Adaptive(c) = self {
            c[bucket].update(u64::from(left), u64::from(trials - left));
        }
    }
}

/// Unnormalized degree weights for class 2; degrees past the end of
/// `weights` get `tail`.
#[derive(Clone, Debug)]
pub(crate) struct DegreeWeights {
    pub weights: Vec<f64>,
    pub tail: f64,
}

impl DegreeWeights {
    /// Model of the degree over `lo..=lo + span`.
    fn model(&self, lo: usize, span: usize) -> FrequencyModel {
        if span == 0 {
            return FrequencyModel::certain();
        }
        let w: Vec<f64> = (lo..=lo + span)
            .map(|k| self.weights.get(k).copied().unwrap_or(self.tail))
            .collect();
        FrequencyModel::from_weights(&w).expect("degree support fits")
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Plan {
    pub family: Family,
    pub class: Class,
    pub cap: usize,
    pub params: Params,
    pub degrees: Option<DegreeWeights>,
}

fn check(value: u32, truth: Option<u32>) -> Result<u32> {
    match truth {
        Some(t) if t != value => Err(Error::Domain(format!(
            "value {t} is outside its coding support"
        ))),
        _ => Ok(value),
    }
}

/// Codes levels `1..n` of a cardinality tree. With `source` the true
/// values are fed to `coder` (encoding, metering); without it the coder
/// supplies them (decoding). Returns the tree as rebuilt from coded values.
pub(crate) fn code_tree<C: SymbolCoder>(
    coder: &mut C,
    plan: &mut Plan,
    n: usize,
    source: Option<&CardinalityTree>,
) -> Result<CardinalityTree> {
    let mut tree = CardinalityTree::with_root(n);
    let mut idx = PathIndex::new(n);
    let mut bucketer = Bucketer::new(plan.family, n, plan.cap);
    let mut trials = Vec::new();
    let mut buckets = Vec::new();
    let mut lefts = Vec::new();
    for l in 1..n {
        let alpha = idx
            .alpha()
            .ok_or_else(|| Error::MalformedTree(format!("level {} is empty", l - 1)))?;
        trials.clear();
        for (pos, &c) in tree.level_cards(l - 1).iter().enumerate() {
            if c > 0 {
                trials.push((pos, c - u32::from(pos == alpha)));
            }
        }
        let truth = |i: usize| source.map(|t| t.level_cards(l)[2 * i]);
        bucketer.begin_level(&idx);
        buckets.clear();
        for &(pos, t) in &trials {
            let b = if t == 0 || plan.family == Family::Iid && plan.class == Class::Two {
                0
            } else {
                bucketer.bucket(&idx, pos)
            };
            buckets.push(b);
        }
        lefts.clear();
        match plan.class {
            Class::One => {
                for (i, &(_, t)) in trials.iter().enumerate() {
                    let x = if t == 0 {
                        0
                    } else {
                        let model = binomial_model(t, plan.params.theta(buckets[i]));
                        let sym = truth(i).unwrap_or(0) as usize;
                        let x = coder.code(&model, sym)? as u32;
                        plan.params.update(buckets[i], x, t);
                        x
                    };
                    lefts.push(check(x, truth(i))?);
                }
            }
            Class::Two => {
                let base = idx.vertex_adjacency(l).len();
                let span: u32 = trials.iter().map(|t| t.1).sum();
                let true_sum: Option<u32> = source.map(|_| (0..trials.len()).map(|i| truth(i).unwrap_or(0)).sum());
                let degrees = plan.degrees.as_ref().expect("class 2 plans carry degree weights");
                let model = degrees.model(base, span as usize);
                let sum = coder.code(&model, true_sum.unwrap_or(0) as usize)? as u32;
                let sum = check(sum, true_sum)?;
                let totals: Vec<u32> = trials.iter().map(|t| t.1).collect();
                let thetas: Option<Vec<f64>> = (plan.family != Family::Iid)
                    .then(|| buckets.iter().map(|&b| plan.params.theta(b)).collect());
                let cond = LevelConditional::new(&totals, thetas.as_deref(), sum)?;
                let mut remaining = sum;
                for i in 0..trials.len() {
                    let (lo, model) = cond.model(i, remaining);
                    let sym = truth(i).map_or(0, |t| t.saturating_sub(lo)) as usize;
                    let x = check(lo + coder.code(&model, sym)? as u32, truth(i))?;
                    remaining -= x;
                    lefts.push(x);
                }
                for (i, &(_, t)) in trials.iter().enumerate() {
                    if t > 0 {
                        plan.params.update(buckets[i], lefts[i], t);
                    }
                }
            }
        }
        let cards: Vec<u32> = trials
            .iter()
            .zip(&lefts)
            .flat_map(|(&(_, t), &x)| [x, t - x])
            .collect();
        tree.push_level(cards)?;
        idx.push_level(&tree);
    }
    Ok(tree)
}

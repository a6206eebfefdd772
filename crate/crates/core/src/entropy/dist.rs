use std::sync::OnceLock;

use super::model::FrequencyModel;
use crate::error::{Error, Result};

const TABLE_SIZE: usize = 1 << 16;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(TABLE_SIZE);
        let mut acc = 0.0;
        t.push(0.0);
        for i in 1..TABLE_SIZE {
            acc += (i as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// `ln n!`, from a table for small `n` and Stirling's series beyond it.
pub fn ln_factorial(n: u64) -> f64 {
    if let Some(&v) = ln_factorial_table().get(n as usize) {
        return v;
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

/// `ln C(n, k)`, negative infinity when `k > n`.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

fn ln_binomial_term(n: u32, p: f64, k: u32) -> f64 {
    let (n64, k64) = (u64::from(n), u64::from(k));
    let hits = if k == 0 { 0.0 } else { f64::from(k) * p.ln() };
    let misses = if k == n { 0.0 } else { f64::from(n - k) * (1.0 - p).ln() };
    ln_choose(n64, k64) + hits + misses
}

/// `P(X = k)` for `X ~ Binom(n, p)`.
pub fn binomial_pmf(n: u32, p: f64, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    ln_binomial_term(n, p, k).exp()
}

/// The whole `Binom(n, p)` pmf over `0..=n`.
pub fn binomial_probs(n: u32, p: f64) -> Vec<f64> {
    (0..=n).map(|k| binomial_pmf(n, p, k)).collect()
}

/// Pmf of a sum of independent blocks, block `j` being `Binom(t_j, θ_j)`,
/// truncated to sums `0..=max_sum`. Built one Bernoulli trial at a time.
pub fn poisson_binomial_blocks(blocks: &[(u32, f64)], max_sum: usize) -> Vec<f64> {
    let mut dist = vec![0.0; max_sum + 1];
    dist[0] = 1.0;
    let mut top = 0;
    for &(trials, theta) in blocks {
        for _ in 0..trials {
            add_trial(&mut dist, &mut top, theta);
        }
    }
    dist
}

fn add_trial(dist: &mut [f64], top: &mut usize, theta: f64) {
    let q = 1.0 - theta;
    *top = (*top + 1).min(dist.len() - 1);
    for s in (1..=*top).rev() {
        dist[s] = dist[s] * q + dist[s - 1] * theta;
    }
    dist[0] *= q;
}

/// `P(Σ X_i = s)` for independent `X_i ~ Bernoulli(thetas[i])`.
pub fn poisson_binomial_pmf(thetas: &[f64], s: usize) -> f64 {
    if s > thetas.len() {
        return 0.0;
    }
    let blocks: Vec<(u32, f64)> = thetas.iter().map(|&t| (1, t)).collect();
    poisson_binomial_blocks(&blocks, s)[s]
}

/// Sequential conditionals for the left-node values of one tree level given
/// their sum.
///
/// Block `j` has `totals[j]` trials. With identical parameters the value of
/// block `j` given that blocks `j..` sum to `s` is hypergeometric; with
/// per-block parameters it is the binomial weight of `v` times the
/// Poisson-binomial mass of `s - v` over the remaining blocks.
#[derive(Clone, Debug)]
pub struct LevelConditional {
    totals: Vec<u32>,
    thetas: Option<Vec<f64>>,
    /// `suffix[j]` trials in blocks `j..`.
    suffix: Vec<u64>,
    /// Rescaled Poisson-binomial masses of blocks `j..`, sums `0..=target`.
    tails: Vec<Vec<f64>>,
}

impl LevelConditional {
    /// `thetas` is `None` for identically distributed trials.
    pub fn new(totals: &[u32], thetas: Option<&[f64]>, target: u32) -> Result<Self> {
        if let Some(th) = thetas {
            if th.len() != totals.len() {
                return Err(Error::Domain("one parameter per block required".into()));
            }
        }
        let mut suffix = vec![0u64; totals.len() + 1];
        for j in (0..totals.len()).rev() {
            suffix[j] = suffix[j + 1] + u64::from(totals[j]);
        }
        if u64::from(target) > suffix[0] {
            return Err(Error::Domain(format!(
                "sum {target} exceeds {} available trials",
                suffix[0]
            )));
        }
        let mut tails = Vec::new();
        if let Some(th) = thetas {
            let width = target as usize + 1;
            tails = vec![Vec::new(); totals.len() + 1];
            let mut dist = vec![0.0; width];
            dist[0] = 1.0;
            let mut top = 0;
            tails[totals.len()] = dist.clone();
            for j in (0..totals.len()).rev() {
                for _ in 0..totals[j] {
                    add_trial(&mut dist, &mut top, th[j]);
                }
                let max = dist.iter().cloned().fold(0.0, f64::max);
                if max > 0.0 {
                    dist.iter_mut().for_each(|x| *x /= max);
                }
                tails[j] = dist.clone();
            }
        }
        Ok(Self {
            totals: totals.to_vec(),
            thetas: thetas.map(<[f64]>::to_vec),
            suffix,
            tails,
        })
    }

    pub fn blocks(&self) -> usize {
        self.totals.len()
    }

    /// Feasible values of block `j` when blocks `j..` sum to `remaining`.
    pub fn support(&self, j: usize, remaining: u32) -> (u32, u32) {
        let rest = self.suffix[j + 1].min(u64::from(remaining)) as u32;
        (remaining - rest, self.totals[j].min(remaining))
    }

    fn log_weights(&self, j: usize, remaining: u32) -> (u32, Vec<f64>) {
        let (lo, hi) = self.support(j, remaining);
        let t = self.totals[j];
        let rest = self.suffix[j + 1];
        let w = (lo..=hi)
            .map(|v| match &self.thetas {
                None => ln_choose(u64::from(t), u64::from(v)) + ln_choose(rest, u64::from(remaining - v)),
                Some(th) => {
                    ln_binomial_term(t, th[j], v) + self.tails[j + 1][(remaining - v) as usize].ln()
                }
            })
            .collect();
        (lo, w)
    }

    /// Normalized conditional pmf of block `j` over its support, with the
    /// support's lower end.
    pub fn probs(&self, j: usize, remaining: u32) -> (u32, Vec<f64>) {
        let (lo, mut w) = self.log_weights(j, remaining);
        let max = w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            let u = 1.0 / w.len() as f64;
            return (lo, vec![u; w.len()]);
        }
        w.iter_mut().for_each(|x| *x = (*x - max).exp());
        let sum: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= sum);
        (lo, w)
    }

    /// Coding model for block `j`; symbol `i` stands for value `lo + i`.
    pub fn model(&self, j: usize, remaining: u32) -> (u32, FrequencyModel) {
        let (lo, hi) = self.support(j, remaining);
        if lo == hi {
            return (lo, FrequencyModel::certain());
        }
        let (lo, p) = self.probs(j, remaining);
        (lo, FrequencyModel::from_weights(&p).expect("support fits"))
    }
}

use super::dist::binomial_probs;
use crate::error::{Error, Result};

/// Probability floor applied to every estimated parameter.
pub const EPSILON: f64 = 1.0 / (1u64 << 20) as f64;

/// Largest frequency total a model may carry.
pub const MAX_TOTAL: u32 = 1 << 30;

/// Integer frequency table over symbols `0..len`. Every symbol has
/// frequency at least one, so anything in the support can be coded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyModel {
    /// `cum[i]` is the total frequency of symbols below `i`.
    cum: Vec<u32>,
}

impl FrequencyModel {
    /// Quantizes nonnegative weights (not necessarily normalized) onto a
    /// total of at most [`MAX_TOTAL`]. All-zero weights give a uniform model.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let k = weights.len();
        if k == 0 {
            return Err(Error::Domain("model needs at least one symbol".into()));
        }
        if k as u64 > u64::from(MAX_TOTAL / 2) {
            return Err(Error::Domain(format!("alphabet of {k} symbols is too large")));
        }
        let sum: f64 = weights.iter().filter(|w| w.is_finite() && **w > 0.0).sum();
        let spare = f64::from(MAX_TOTAL - k as u32);
        let mut cum = Vec::with_capacity(k + 1);
        let mut acc = 0u32;
        cum.push(0);
        for &w in weights {
            let share = if sum > 0.0 && w.is_finite() && w > 0.0 {
                (w / sum * spare).floor() as u32
            } else if sum > 0.0 {
                0
            } else {
                (spare / k as f64).floor() as u32
            };
            acc += 1 + share;
            cum.push(acc);
        }
        Ok(Self { cum })
    }

    /// Builds a model from explicit positive frequencies.
    pub fn from_frequencies(freqs: &[u32]) -> Result<Self> {
        if freqs.is_empty() || freqs.contains(&0) {
            return Err(Error::Domain("frequencies must be positive".into()));
        }
        let mut cum = Vec::with_capacity(freqs.len() + 1);
        let mut acc = 0u64;
        cum.push(0);
        for &f in freqs {
            acc += u64::from(f);
            if acc > u64::from(MAX_TOTAL) {
                return Err(Error::Domain(format!("frequency total exceeds {MAX_TOTAL}")));
            }
            cum.push(acc as u32);
        }
        Ok(Self { cum })
    }

    /// Single-symbol model; coding with it costs nothing.
    pub fn certain() -> Self {
        Self { cum: vec![0, 1] }
    }

    pub fn len(&self) -> usize {
        self.cum.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn total(&self) -> u32 {
        *self.cum.last().expect("nonempty")
    }

    /// `(low, high)` cumulative bounds of `symbol`.
    pub fn range(&self, symbol: usize) -> (u32, u32) {
        (self.cum[symbol], self.cum[symbol + 1])
    }

    pub fn frequency(&self, symbol: usize) -> u32 {
        self.cum[symbol + 1] - self.cum[symbol]
    }

    pub fn probability(&self, symbol: usize) -> f64 {
        f64::from(self.frequency(symbol)) / f64::from(self.total())
    }

    /// Information content of `symbol` in bits.
    pub fn bits(&self, symbol: usize) -> f64 {
        -self.probability(symbol).log2()
    }

    /// Symbol whose cumulative range contains `target < total`.
    pub fn find(&self, target: u32) -> usize {
        self.cum.partition_point(|&c| c <= target) - 1
    }
}

/// Model of `Binom(n, p)` over `{0..=n}`; `p` is clamped away from 0 and 1.
pub fn binomial_model(n: u32, p: f64) -> FrequencyModel {
    if n == 0 {
        return FrequencyModel::certain();
    }
    FrequencyModel::from_weights(&binomial_probs(n, p)).expect("binomial support is small")
}

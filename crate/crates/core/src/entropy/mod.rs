//! Bit-level I/O, integer codes, integer frequency models and an exact
//! arithmetic coder, plus the distributions the graph coders feed it.

mod arith;
mod bits;
mod dist;
mod intcode;
mod model;

pub use arith::{Decoder, Encoder, SymbolCoder, CostMeter, PRECISION};
pub use bits::{BitReader, BitWriter};
pub use dist::{
    binomial_pmf, binomial_probs, ln_choose, ln_factorial, poisson_binomial_blocks,
    poisson_binomial_pmf, LevelConditional,
};
pub use intcode::{elias_delta_len, read_elias_delta, write_elias_delta};
pub use model::{binomial_model, FrequencyModel, EPSILON, MAX_TOTAL};

/// Clamps a probability into `[EPSILON, 1 - EPSILON]`.
pub fn clamp_prob(p: f64) -> f64 {
    if p.is_nan() {
        return 0.5;
    }
    p.clamp(EPSILON, 1.0 - EPSILON)
}

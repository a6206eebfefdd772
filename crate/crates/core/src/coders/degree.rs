//! Enumerative code for degree histograms: a histogram of `n` vertices over
//! degrees `0..n` is a weak composition of `n` into `n` parts, sent as its
//! lexicographic rank in a fixed number of bits.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::entropy::{BitReader, BitWriter};
use crate::error::{Error, Result};

/// `C(a, k)` as a big integer.
fn choose(a: u64, k: u64) -> BigUint {
    if k > a {
        return BigUint::zero();
    }
    let k = k.min(a - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// Number of weak compositions of `n` into `n` parts, `C(2n-1, n-1)`.
pub fn composition_count(n: u64) -> BigUint {
    if n == 0 {
        return BigUint::one();
    }
    choose(2 * n - 1, n - 1)
}

/// Width in bits of the rank of an `n`-vertex histogram.
pub fn histogram_code_bits(n: u64) -> u64 {
    let count = composition_count(n);
    if count.is_one() {
        0
    } else {
        (count - 1u32).bits()
    }
}

/// Lexicographic rank of `parts` among weak compositions of their sum into
/// `parts.len()` parts.
///
/// Compositions whose part `i` is smaller than `c_i` number
/// `C(r + q, q) - C(r - c_i + q, q)`, with `r` the sum still to place and
/// `q` the parts after `i`; both binomials are carried from step to step
/// with one small multiply or divide per unit of change.
pub fn rank_composition(parts: &[u64]) -> BigUint {
    let m = parts.len() as u64;
    if m == 0 {
        return BigUint::zero();
    }
    let mut r: u64 = parts.iter().sum();
    let mut rank = BigUint::zero();
    // x = C(r + q, q) for the current part.
    let mut x = choose(r + m - 1, m - 1);
    for (i, &c) in parts.iter().enumerate() {
        let q = m - 1 - i as u64;
        let mut y = x.clone();
        let mut top = r + q;
        for _ in 0..c {
            // C(top - 1, q) = C(top, q) * (top - q) / top
            y = y * (top - q) / top;
            top -= 1;
        }
        rank += &x - &y;
        r -= c;
        if q == 0 {
            break;
        }
        // C(r + q - 1, q - 1) = C(r + q, q) * q / (r + q)
        x = y * q / (r + q);
    }
    rank
}

/// Inverse of [`rank_composition`] for compositions of `total` into `m` parts.
pub fn unrank_composition(mut rank: BigUint, total: u64, m: usize) -> Result<Vec<u64>> {
    if m == 0 {
        return if total == 0 && rank.is_zero() {
            Ok(Vec::new())
        } else {
            Err(Error::Decode("composition rank out of range".into()))
        };
    }
    let m = m as u64;
    let mut r = total;
    let mut x = choose(r + m - 1, m - 1);
    if rank >= x {
        return Err(Error::Decode("composition rank out of range".into()));
    }
    let mut parts = Vec::with_capacity(m as usize);
    for i in 0..m {
        let q = m - 1 - i;
        if q == 0 {
            parts.push(r);
            break;
        }
        // Largest c with x - C(r - c + q, q) <= rank.
        let mut y = x.clone();
        let mut top = r + q;
        let mut c = 0;
        while c < r {
            let next = &y * (top - q) / top;
            if &x - &next > rank {
                break;
            }
            y = next;
            top -= 1;
            c += 1;
        }
        rank -= &x - &y;
        parts.push(c);
        r -= c;
        x = y * q / (r + q);
    }
    Ok(parts)
}

/// Writes the histogram `counts` (degrees `0..n`, summing to `n`).
pub fn write_histogram(w: &mut BitWriter, counts: &[u64]) -> Result<()> {
    let n = counts.len() as u64;
    if counts.iter().sum::<u64>() != n {
        return Err(Error::Domain(format!(
            "degree histogram must count {n} vertices over {n} degrees"
        )));
    }
    let rank = rank_composition(counts);
    for i in (0..histogram_code_bits(n)).rev() {
        w.write_bit(rank.bit(i));
    }
    Ok(())
}

pub fn read_histogram(r: &mut BitReader<'_>, n: u64) -> Result<Vec<u64>> {
    let mut rank = BigUint::zero();
    for i in (0..histogram_code_bits(n)).rev() {
        if r.read_bit()? {
            rank.set_bit(i, true);
        }
    }
    unrank_composition(rank, n, n as usize)
}

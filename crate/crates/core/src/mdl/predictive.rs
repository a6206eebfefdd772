use std::f64::consts::{LN_2, PI};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::dempster::{dempster_complete, dempster_complete_from, DempsterOptions};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Ridge added, relative to the mean variance, when a running covariance
/// is not positive definite.
pub const SHRINKAGE: f64 = 1e-3;

#[derive(Clone, Copy, Debug, Default)]
pub struct PredictiveOptions {
    /// Samples coded under the standard normal before fitting starts;
    /// defaults to `min(2p, ceil(N / 4))`.
    pub warmup: Option<usize>,
    /// Refit every this many samples; defaults to 1 up to 500 samples and
    /// `ceil(N / 100)` beyond.
    pub stride: Option<usize>,
    pub dempster: DempsterOptions,
}

#[derive(Clone, Debug, Serialize)]
pub struct PredictiveReport {
    pub bits: f64,
    pub warmup: usize,
    pub refits: usize,
    /// Whether some refit needed the shrinkage fallback.
    pub shrinkage: bool,
}

pub fn default_warmup(n: usize, p: usize) -> usize {
    (2 * p).min(n.div_ceil(4))
}

pub fn default_stride(n: usize) -> usize {
    if n <= 500 {
        1
    } else {
        n.div_ceil(100)
    }
}

/// `-log2` of the zero-mean Gaussian density with the given Cholesky
/// factor at `x`.
fn gaussian_bits(chol: &nalgebra::Cholesky<f64, nalgebra::Dyn>, x: &DVector<f64>) -> f64 {
    let p = x.len() as f64;
    let l = chol.l_dirty();
    let log_det: f64 = 2.0 * (0..x.len()).map(|i| l[(i, i)].ln()).sum::<f64>();
    let z = chol.l().solve_lower_triangular(x).expect("Cholesky factor is invertible");
    0.5 * (p * (2.0 * PI).ln() + log_det + z.norm_squared()) / LN_2
}

/// `-log2` density of `x` under independent standard normals.
pub fn standard_normal_bits(x: &DVector<f64>) -> f64 {
    0.5 * (x.len() as f64 * (2.0 * PI).ln() + x.norm_squared()) / LN_2
}

/// Sequential codelength of the rows of `x` (observations) under the
/// Gaussian model with conditional independence graph `g`: each sample is
/// coded with the completed covariance of all earlier samples.
pub fn predictive_mdl(x: &DMatrix<f64>, g: &Graph, opts: PredictiveOptions) -> Result<PredictiveReport> {
    let (n, p) = x.shape();
    if g.vertex_count() != p {
        return Err(Error::Domain(format!(
            "graph has {} vertices for {p} variables",
            g.vertex_count()
        )));
    }
    let warmup = opts.warmup.unwrap_or_else(|| default_warmup(n, p)).max(1);
    if n <= warmup {
        return Err(Error::Domain(format!("{n} samples leave nothing after a warmup of {warmup}")));
    }
    let stride = opts.stride.unwrap_or_else(|| default_stride(n)).max(1);
    let mut scatter = DMatrix::<f64>::zeros(p, p);
    let mut bits = 0.0;
    for i in 0..warmup {
        let row = x.row(i).transpose();
        bits += standard_normal_bits(&row);
        scatter.ger(1.0, &row, &row, 1.0);
    }
    let mut refits = 0;
    let mut shrinkage = false;
    let mut chol = None;
    let mut previous: Option<DMatrix<f64>> = None;
    for i in warmup..n {
        if chol.is_none() || (i - warmup) % stride == 0 {
            let mut s = &scatter / i as f64;
            if i < p || s.clone().cholesky().is_none() {
                let ridge = SHRINKAGE * s.trace() / p as f64;
                let ridge = if ridge > 0.0 { ridge } else { SHRINKAGE };
                for d in 0..p {
                    s[(d, d)] += ridge;
                }
                shrinkage = true;
            }
            let completion = match &previous {
                Some(w) => dempster_complete_from(&s, g, opts.dempster, w)?,
                None => dempster_complete(&s, g, opts.dempster)?,
            };
            previous = Some(completion.covariance.clone());
            chol = Some(
                completion
                    .covariance
                    .cholesky()
                    .ok_or_else(|| Error::NotPositiveDefinite("completed covariance".into()))?,
            );
            refits += 1;
        }
        let row = x.row(i).transpose();
        bits += gaussian_bits(chol.as_ref().expect("fitted above"), &row);
        scatter.ger(1.0, &row, &row, 1.0);
    }
    Ok(PredictiveReport {
        bits,
        warmup,
        refits,
        shrinkage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(n: usize, p: usize, seed: u64) -> DMatrix<f64> {
        use rand::SeedableRng;
        use rand_distr::{Distribution, StandardNormal};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(n, p, |_, _| StandardNormal.sample(&mut rng))
    }

    #[test]
    fn empty_graph_codes_coordinates_independently() {
        let x = data(40, 3, 1);
        let opts = PredictiveOptions {
            warmup: Some(5),
            ..Default::default()
        };
        let report = predictive_mdl(&x, &Graph::empty(3), opts).unwrap();
        let mut want = 0.0;
        for i in 0..40 {
            for j in 0..3 {
                let v = x[(i, j)];
                let var = if i < 5 {
                    1.0
                } else {
                    (0..i).map(|r| x[(r, j)].powi(2)).sum::<f64>() / i as f64
                };
                want += 0.5 * ((2.0 * PI * var).ln() + v * v / var) / LN_2;
            }
        }
        assert!((report.bits - want).abs() < 1e-8, "{} vs {want}", report.bits);
        assert_eq!(report.refits, 35);
        assert!(!report.shrinkage);
    }

    #[test]
    fn increment_is_gaussian_density() {
        let sigma = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let x = DVector::from_vec(vec![0.3, -1.2]);
        let direct = {
            let inv = sigma.clone().try_inverse().unwrap();
            let q: f64 = (x.transpose() * inv * &x)[(0, 0)];
            let dens = (-0.5 * q).exp() / (2.0 * PI * sigma.determinant().sqrt());
            -dens.log2()
        };
        let chol = sigma.cholesky().unwrap();
        assert!((gaussian_bits(&chol, &x) - direct).abs() < 1e-12);
    }

    #[test]
    fn few_samples_use_shrinkage() {
        let x = data(20, 8, 2);
        let r = predictive_mdl(&x, &Graph::path(8), PredictiveOptions::default()).unwrap();
        assert!(r.shrinkage);
        assert!(r.bits.is_finite());
        assert_eq!(r.warmup, 5);
    }

    #[test]
    fn schedule_defaults() {
        assert_eq!(default_warmup(80, 40), 20);
        assert_eq!(default_warmup(1000, 10), 20);
        assert_eq!(default_stride(500), 1);
        assert_eq!(default_stride(501), 6);
        let x = data(10, 2, 3);
        let opts = PredictiveOptions {
            warmup: Some(10),
            ..Default::default()
        };
        assert!(predictive_mdl(&x, &Graph::empty(2), opts).is_err());
    }
}

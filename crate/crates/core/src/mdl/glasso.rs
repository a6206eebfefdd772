use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Solver settings for [`graphical_lasso`].
#[derive(Clone, Copy, Debug)]
pub struct GlassoOptions {
    /// Stop once no entry of the working covariance moves more than this
    /// in a full sweep.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for GlassoOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 500,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GlassoFit {
    pub precision: DMatrix<f64>,
    /// Working covariance estimate, approximately `precision⁻¹`.
    pub covariance: DMatrix<f64>,
    pub iterations: usize,
}

fn soft_threshold(x: f64, t: f64) -> f64 {
    if x > t {
        x - t
    } else if x < -t {
        x + t
    } else {
        0.0
    }
}

/// L1-penalized Gaussian maximum likelihood,
/// `max log det Ω - tr(SΩ) - λ Σ|Ω_ij|` (diagonal included), by blockwise
/// coordinate descent on the covariance: each column of `W` is the
/// solution of a lasso problem in the remaining block.
pub fn graphical_lasso(s: &DMatrix<f64>, lambda: f64, opts: GlassoOptions) -> Result<GlassoFit> {
    let p = s.nrows();
    if p == 0 || s.ncols() != p {
        return Err(Error::Domain("covariance must be a nonempty square matrix".into()));
    }
    if !(lambda >= 0.0) {
        return Err(Error::Domain(format!("penalty {lambda} must be nonnegative")));
    }
    if lambda == 0.0 && s.clone().cholesky().is_none() {
        return Err(Error::NotPositiveDefinite(
            "an unpenalized fit needs an invertible covariance".into(),
        ));
    }
    let mut w = s.clone();
    for i in 0..p {
        w[(i, i)] += lambda;
    }
    // Column j of `beta` holds the lasso coefficients for variable j.
    let mut beta = DMatrix::<f64>::zeros(p, p);
    let mut grad = vec![0.0; p];
    let inner_tol = (opts.tol * 1e-3).max(1e-12);
    let mut iterations = 0;
    let mut change = f64::INFINITY;
    while iterations < opts.max_iter {
        iterations += 1;
        change = 0.0;
        for j in 0..p {
            // grad = W11 β for the current coefficients.
            for k in 0..p {
                grad[k] = (0..p)
                    .filter(|&l| l != j)
                    .map(|l| w[(k, l)] * beta[(l, j)])
                    .sum();
            }
            for _ in 0..10_000 {
                let mut delta: f64 = 0.0;
                for k in (0..p).filter(|&k| k != j) {
                    let wkk = w[(k, k)];
                    let old = beta[(k, j)];
                    let r = s[(k, j)] - (grad[k] - wkk * old);
                    let new = soft_threshold(r, lambda) / wkk;
                    if new != old {
                        let d = new - old;
                        beta[(k, j)] = new;
                        for (l, g) in grad.iter_mut().enumerate() {
                            *g += d * w[(l, k)];
                        }
                        delta = delta.max(d.abs() * wkk.sqrt());
                    }
                }
                if delta < inner_tol {
                    break;
                }
            }
            for k in (0..p).filter(|&k| k != j) {
                let new = grad[k];
                change = change.max((new - w[(k, j)]).abs());
                w[(k, j)] = new;
                w[(j, k)] = new;
            }
        }
        if change < opts.tol {
            break;
        }
    }
    if change >= opts.tol {
        return Err(Error::NoConvergence {
            iterations,
            residual: change,
        });
    }
    let mut omega = DMatrix::<f64>::zeros(p, p);
    for j in 0..p {
        let dot: f64 = (0..p).filter(|&k| k != j).map(|k| w[(k, j)] * beta[(k, j)]).sum();
        let ojj = 1.0 / (w[(j, j)] - dot);
        omega[(j, j)] = ojj;
        for k in (0..p).filter(|&k| k != j) {
            omega[(k, j)] = -beta[(k, j)] * ojj;
        }
    }
    let precision = (&omega + omega.transpose()) * 0.5;
    Ok(GlassoFit {
        precision,
        covariance: w,
        iterations,
    })
}

/// Largest violation of the optimality conditions of the penalized
/// likelihood at `omega`: with `W = omega⁻¹`, `W_ij = S_ij + λ sign(Ω_ij)`
/// on nonzero entries and `|W_ij - S_ij| <= λ` on zeros.
pub fn kkt_residual(s: &DMatrix<f64>, omega: &DMatrix<f64>, lambda: f64) -> Result<f64> {
    let w = omega
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NotPositiveDefinite("precision estimate".into()))?
        .inverse();
    let p = s.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..p {
        for j in 0..p {
            let gap = w[(i, j)] - s[(i, j)];
            let r = if omega[(i, j)] != 0.0 {
                (gap - lambda * omega[(i, j)].signum()).abs()
            } else {
                (gap.abs() - lambda).max(0.0)
            };
            worst = worst.max(r);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> DMatrix<f64> {
        DMatrix::from_row_slice(
            4,
            4,
            &[
                2.0, 0.6, 0.3, 0.0, //
                0.6, 1.5, 0.4, 0.2, //
                0.3, 0.4, 1.0, 0.1, //
                0.0, 0.2, 0.1, 1.2,
            ],
        )
    }

    #[test]
    fn large_penalty_gives_diagonal() {
        let s = example();
        let fit = graphical_lasso(&s, 0.7, GlassoOptions::default()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(fit.precision[(i, j)], 0.0);
                }
            }
            assert!((fit.precision[(i, i)] - 1.0 / (s[(i, i)] + 0.7)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_penalty_inverts() {
        let s = example();
        let fit = graphical_lasso(&s, 0.0, GlassoOptions { tol: 1e-10, max_iter: 1000 }).unwrap();
        let inv = s.clone().try_inverse().unwrap();
        assert!((&fit.precision - inv).amax() < 1e-6);
    }

    #[test]
    fn two_by_two_soft_threshold() {
        for (s12, lambda) in [(0.5, 0.2), (-0.5, 0.2), (0.1, 0.2)] {
            let s = DMatrix::from_row_slice(2, 2, &[1.0, s12, s12, 2.0]);
            let fit = graphical_lasso(&s, lambda, GlassoOptions::default()).unwrap();
            let w = fit.precision.clone().try_inverse().unwrap();
            assert!((w[(0, 1)] - soft_threshold(s12, lambda)).abs() < 1e-9, "{s12}");
        }
    }

    #[test]
    fn kkt_holds_along_a_path() {
        let s = example();
        for lambda in [0.01, 0.05, 0.1, 0.2, 0.4] {
            let fit = graphical_lasso(&s, lambda, GlassoOptions::default()).unwrap();
            assert!(kkt_residual(&s, &fit.precision, lambda).unwrap() < 1e-4, "{lambda}");
        }
    }

    #[test]
    fn bad_input() {
        assert!(graphical_lasso(&DMatrix::zeros(2, 3), 0.1, GlassoOptions::default()).is_err());
        assert!(graphical_lasso(&DMatrix::zeros(2, 2), 0.0, GlassoOptions::default()).is_err());
        let err = graphical_lasso(&example(), 0.01, GlassoOptions { tol: 1e-300, max_iter: 2 });
        assert!(matches!(err, Err(Error::NoConvergence { iterations: 2, .. })));
    }
}

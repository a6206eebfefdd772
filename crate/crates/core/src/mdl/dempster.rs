use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug)]
pub struct DempsterOptions {
    /// Stop once a sweep moves no entry more than this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for DempsterOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 2000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Completion {
    pub covariance: DMatrix<f64>,
    pub precision: DMatrix<f64>,
    pub iterations: usize,
    /// Largest of `|Σ_ij - S_ij|` over edges and the diagonal and `|Ω_ij|`
    /// over non-edges.
    pub residual: f64,
}

/// Maximum-likelihood covariance that agrees with `s` on the diagonal and
/// the edges of `g` and whose inverse vanishes on non-edges.
///
/// Cycles through the variables, regressing each on its neighbors in the
/// current estimate and rewriting its row and column from the fit.
pub fn dempster_complete(s: &DMatrix<f64>, g: &Graph, opts: DempsterOptions) -> Result<Completion> {
    complete(s, g, opts, s.clone())
}

/// As [`dempster_complete`], iterating from `init` (typically an earlier
/// completion for a nearby `s`) instead of `s` itself. Falls back to a cold
/// start if `init` leads to an indefinite iterate.
pub fn dempster_complete_from(
    s: &DMatrix<f64>,
    g: &Graph,
    opts: DempsterOptions,
    init: &DMatrix<f64>,
) -> Result<Completion> {
    if init.shape() != s.shape() {
        return Err(Error::Domain("warm start has the wrong shape".into()));
    }
    let mut w = init.clone();
    w.set_diagonal(&s.diagonal());
    match complete(s, g, opts, w) {
        Err(Error::NotPositiveDefinite(_)) => dempster_complete(s, g, opts),
        other => other,
    }
}

fn complete(s: &DMatrix<f64>, g: &Graph, opts: DempsterOptions, mut w: DMatrix<f64>) -> Result<Completion> {
    let p = s.nrows();
    if s.ncols() != p || g.vertex_count() != p {
        return Err(Error::Domain(format!(
            "{}x{} covariance does not match a graph on {} vertices",
            s.nrows(),
            s.ncols(),
            g.vertex_count()
        )));
    }
    if s.clone().cholesky().is_none() {
        return Err(Error::NotPositiveDefinite("sample covariance".into()));
    }
    let mut iterations = 0;
    let mut change = f64::INFINITY;
    let mut column = vec![0.0; p];
    while iterations < opts.max_iter && change >= opts.tol {
        iterations += 1;
        change = 0.0;
        for j in 0..p {
            let nb: Vec<usize> = g.neighbors(j).iter().map(|&v| v as usize).collect();
            let beta = if nb.is_empty() {
                DVector::zeros(0)
            } else {
                let w11 = DMatrix::from_fn(nb.len(), nb.len(), |a, b| w[(nb[a], nb[b])]);
                let s12 = DVector::from_fn(nb.len(), |a, _| s[(nb[a], j)]);
                w11.cholesky()
                    .ok_or_else(|| Error::NotPositiveDefinite("completion iterate".into()))?
                    .solve(&s12)
            };
            for (k, c) in column.iter_mut().enumerate() {
                *c = nb.iter().zip(beta.iter()).map(|(&l, b)| w[(k, l)] * b).sum();
            }
            for k in (0..p).filter(|&k| k != j) {
                change = change.max((column[k] - w[(k, j)]).abs());
                w[(k, j)] = column[k];
                w[(j, k)] = column[k];
            }
        }
    }
    let precision = w
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NotPositiveDefinite("completed covariance".into()))?
        .inverse();
    let mut residual: f64 = 0.0;
    for i in 0..p {
        for j in 0..p {
            let r = if i == j || g.has_edge(i, j) {
                (w[(i, j)] - s[(i, j)]).abs()
            } else {
                precision[(i, j)].abs()
            };
            residual = residual.max(r);
        }
    }
    if change >= opts.tol {
        return Err(Error::NoConvergence { iterations, residual });
    }
    Ok(Completion {
        covariance: w,
        precision,
        iterations,
        residual,
    })
}

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::Serialize;

use super::glasso::{graphical_lasso, GlassoOptions};
use super::predictive::{predictive_mdl, PredictiveOptions, PredictiveReport};
use super::{sample_covariance, standardize};
use crate::coders::{encode_graph, CoderSpec, CoderStats};
use crate::error::{Error, Result};
use crate::graph::{graph_from_precision, Graph};

/// `min, min + step, ..., max`, computed by index so the grid does not
/// drift.
pub fn lambda_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(min > 0.0 && max >= min && step > 0.0) {
        return Err(Error::Config(format!("bad lambda grid {min}..{max} step {step}")));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    // Rounding keeps printed values like 0.86 free of representation noise.
    Ok((0..count).map(|i| ((min + i as f64 * step) * 1e12).round() / 1e12).collect())
}

/// Step 0.01 over `[0.01, 1]` with more samples than variables, over
/// `[0.1, 1]` otherwise.
pub fn default_grid(samples: usize, variables: usize) -> Vec<f64> {
    let min = if samples > variables { 0.01 } else { 0.1 };
    lambda_grid(min, 1.0, 0.01).expect("constant grid is valid")
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SelectOptions {
    pub glasso: GlassoOptions,
    pub predictive: PredictiveOptions,
}

/// Outcome at one penalty.
#[derive(Clone, Debug, Serialize)]
pub struct PathEntry {
    pub lambda: f64,
    pub edges: usize,
    /// `L(G_λ)`: exact bits of the encoded graph.
    pub graph_bits: Option<usize>,
    /// `L(D | G_λ)`: predictive codelength of the data.
    pub data_bits: Option<f64>,
    pub total_bits: Option<f64>,
    pub glasso_iterations: usize,
    /// `None` when every stage succeeded.
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Selection {
    pub lambda: f64,
    pub index: usize,
    #[serde(skip)]
    pub graph: Graph,
    pub path: Vec<PathEntry>,
    /// Some predictive fit needed the shrinkage fallback.
    pub shrinkage: bool,
}

fn map_collect<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Graphical lasso fits over a penalty grid with the data codelength of
/// every distinct estimated graph. Graph codelengths are added per coder by
/// [`LambdaPath::select`], so one path serves any number of coders.
#[derive(Clone, Debug)]
pub struct LambdaPath {
    grid: Vec<f64>,
    /// Per penalty: index into `graphs` and glasso iterations, or the error.
    fits: Vec<std::result::Result<(usize, usize), String>>,
    graphs: Vec<Graph>,
    data: Vec<std::result::Result<PredictiveReport, String>>,
}

/// Fits the path for `x` (observations in rows).
///
/// Columns of `x` are first scaled to unit second moment, so the grid acts on
/// a correlation matrix. Rescaling leaves every edge set unchanged and shifts
/// all data codelengths by the same constant.
pub fn lambda_path(x: &DMatrix<f64>, grid: &[f64], opts: SelectOptions) -> Result<LambdaPath> {
    if grid.is_empty() {
        return Err(Error::Config("lambda grid is empty".into()));
    }
    let x = &standardize(x);
    let s = sample_covariance(x);
    let raw = map_collect(grid, |&lambda| -> Result<(Graph, usize)> {
        let fit = graphical_lasso(&s, lambda, opts.glasso)?;
        Ok((graph_from_precision(&fit.precision, 0.0)?, fit.iterations))
    });
    let mut graphs: Vec<Graph> = Vec::new();
    let mut slot: HashMap<Graph, usize> = HashMap::new();
    let fits = raw
        .into_iter()
        .map(|r| match r {
            Ok((g, iterations)) => {
                let k = *slot.entry(g.clone()).or_insert_with(|| {
                    graphs.push(g);
                    graphs.len() - 1
                });
                Ok((k, iterations))
            }
            Err(e) => Err(e.to_string()),
        })
        .collect();
    let data = map_collect(&graphs, |g| {
        predictive_mdl(x, g, opts.predictive).map_err(|e| e.to_string())
    });
    Ok(LambdaPath {
        grid: grid.to_vec(),
        fits,
        graphs,
        data,
    })
}

impl LambdaPath {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Estimated graph at grid position `i`, if the fit succeeded.
    pub fn graph(&self, i: usize) -> Option<&Graph> {
        self.fits[i].as_ref().ok().map(|&(k, _)| &self.graphs[k])
    }

    /// Picks the penalty minimizing `L(G_λ) + L(D | G_λ)`. Ties go to the
    /// larger penalty.
    pub fn select(&self, spec: CoderSpec, stats: Option<&CoderStats>) -> Result<Selection> {
        let graph_bits = map_collect(&self.graphs, |g| {
            encode_graph(g, spec, stats)
                .map(|e| e.report.exact_bits())
                .map_err(|e| e.to_string())
        });
        let mut path = Vec::with_capacity(self.grid.len());
        let mut best: Option<(usize, f64)> = None;
        let mut shrinkage = false;
        for (i, (&lambda, fit)) in self.grid.iter().zip(&self.fits).enumerate() {
            let mut entry = PathEntry {
                lambda,
                edges: 0,
                graph_bits: None,
                data_bits: None,
                total_bits: None,
                glasso_iterations: 0,
                error: None,
            };
            match fit {
                Err(e) => entry.error = Some(e.clone()),
                Ok((k, iterations)) => {
                    entry.edges = self.graphs[*k].edge_count();
                    entry.glasso_iterations = *iterations;
                    match (&graph_bits[*k], &self.data[*k]) {
                        (Err(e), _) | (_, Err(e)) => entry.error = Some(e.clone()),
                        (Ok(bits), Ok(report)) => {
                            let total = *bits as f64 + report.bits;
                            entry.graph_bits = Some(*bits);
                            entry.data_bits = Some(report.bits);
                            entry.total_bits = Some(total);
                            shrinkage |= report.shrinkage;
                            if best.is_none_or(|(_, b)| total <= b) {
                                best = Some((i, total));
                            }
                        }
                    }
                }
            }
            path.push(entry);
        }
        let (index, _) = best.ok_or_else(|| {
            Error::Selection(format!(
                "no penalty produced a model: {}",
                path[0].error.clone().unwrap_or_default()
            ))
        })?;
        Ok(Selection {
            lambda: self.grid[index],
            index,
            graph: self.graph(index).expect("best entry succeeded").clone(),
            path,
            shrinkage,
        })
    }
}

/// Fits the path and selects with one coder; see [`lambda_path`].
pub fn select_model(
    x: &DMatrix<f64>,
    grid: &[f64],
    spec: CoderSpec,
    stats: Option<&CoderStats>,
    opts: SelectOptions,
) -> Result<Selection> {
    lambda_path(x, grid, opts)?.select(spec, stats)
}

/// Harmonic mean of edge precision and recall. Two empty graphs score 1;
/// an empty estimate of a nonempty truth scores 0.
pub fn f1_score(estimate: &Graph, truth: &Graph) -> Result<f64> {
    if estimate.vertex_count() != truth.vertex_count() {
        return Err(Error::Domain(format!(
            "graphs on {} and {} vertices",
            estimate.vertex_count(),
            truth.vertex_count()
        )));
    }
    let (e, t) = (estimate.edge_count(), truth.edge_count());
    if e == 0 && t == 0 {
        return Ok(1.0);
    }
    let common = estimate.edges().filter(|&(u, v)| truth.has_edge(u, v)).count();
    if common == 0 {
        return Ok(0.0);
    }
    let precision = common as f64 / e as f64;
    let recall = common as f64 / t as f64;
    Ok(2.0 * precision * recall / (precision + recall))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coders::{Class, Family};
    use crate::mdl::{generate_precision, sample_gaussian, PrecisionFamily, PrecisionSpec};
    use nalgebra::DMatrix;

    #[test]
    fn f1_examples() {
        let g = Graph::cycle(5);
        assert_eq!(f1_score(&g, &g).unwrap(), 1.0);
        let a = Graph::from_edges(6, [(0, 1), (2, 3)]).unwrap();
        let b = Graph::from_edges(6, [(4, 5), (1, 2)]).unwrap();
        assert_eq!(f1_score(&a, &b).unwrap(), 0.0);
        let truth = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let est = Graph::from_edges(6, [(0, 1), (1, 2), (0, 5), (4, 5)]).unwrap();
        assert!((f1_score(&est, &truth).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(f1_score(&Graph::empty(3), &Graph::empty(3)).unwrap(), 1.0);
        assert_eq!(f1_score(&Graph::empty(3), &Graph::path(3)).unwrap(), 0.0);
        assert!(f1_score(&Graph::empty(3), &Graph::empty(4)).is_err());
    }

    #[test]
    fn grids() {
        let g = lambda_grid(0.1, 1.0, 0.01).unwrap();
        assert_eq!(g.len(), 91);
        assert_eq!(g[90], 1.0);
        assert_eq!(g[76], 0.86);
        assert_eq!(default_grid(80, 40).len(), 100);
        assert_eq!(default_grid(20, 40).len(), 91);
        assert!(lambda_grid(0.5, 0.1, 0.01).is_err());
    }

    #[test]
    fn single_lambda_is_returned() {
        let omega = generate_precision(PrecisionSpec {
            family: PrecisionFamily::Ar1,
            p: 6,
            seed: 1,
        })
        .unwrap();
        let x = sample_gaussian(&omega, 40, 2).unwrap();
        let spec = CoderSpec::universal(Family::Iid, Class::One);
        let sel = select_model(&x, &[0.3], spec, None, SelectOptions::default()).unwrap();
        assert_eq!(sel.lambda, 0.3);
        assert_eq!(sel.path.len(), 1);
        let entry = &sel.path[0];
        assert_eq!(
            entry.total_bits.unwrap(),
            entry.graph_bits.unwrap() as f64 + entry.data_bits.unwrap()
        );
    }

    #[test]
    fn one_path_serves_every_coder() {
        let omega = generate_precision(PrecisionSpec {
            family: PrecisionFamily::Cycle,
            p: 6,
            seed: 1,
        })
        .unwrap();
        let x = sample_gaussian(&omega, 60, 4).unwrap();
        let grid = lambda_grid(0.1, 1.0, 0.1).unwrap();
        let path = lambda_path(&x, &grid, SelectOptions::default()).unwrap();
        for spec in CoderSpec::all(crate::coders::Mode::Universal) {
            let a = path.select(spec, None).unwrap();
            let b = select_model(&x, &grid, spec, None, SelectOptions::default()).unwrap();
            assert_eq!(a.lambda, b.lambda);
            assert_eq!(a.graph, b.graph);
        }
    }

    #[test]
    fn recovers_a_well_conditioned_chain() {
        let p = 8;
        let mut omega = DMatrix::<f64>::identity(p, p);
        for i in 1..p {
            omega[(i, i - 1)] = 0.3;
            omega[(i - 1, i)] = 0.3;
        }
        let truth = Graph::path(p);
        let x = sample_gaussian(&omega, 400, 3).unwrap();
        let spec = CoderSpec::universal(Family::Triangle, Class::Two);
        let grid = default_grid(400, p);
        let sel = select_model(&x, &grid, spec, None, SelectOptions::default()).unwrap();
        assert_eq!(sel.graph, truth, "lambda {}", sel.lambda);
        assert_eq!(sel.path.last().unwrap().edges, 0);
    }
}

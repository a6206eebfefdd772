//! WebAssembly bindings for the demo page. Every function returns JSON (or
//! plain text) so the page needs no generated type glue beyond
//! wasm-bindgen's.

use graphzip::coders::labeled_iid_bits;
use graphzip::graph::{generate, graph_from_precision, GraphModel};
use graphzip::mdl::{
    default_grid, f1_score, generate_precision, lambda_path, sample_gaussian, PrecisionFamily,
    PrecisionSpec, SelectOptions,
};
use graphzip::{encode_graph, graph_to_tree, CoderSpec, Graph, Mode, Picker};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest graph the tree dump will render.
pub const MAX_DUMP_VERTICES: usize = 64;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// `model` is `er`, `ba` or `ws`; `a` and `b` are its parameters in order
/// (`p`; `m`; `k`, `beta`).
pub fn build_graph(model: &str, n: usize, a: f64, b: f64, seed: u64) -> Result<Graph, String> {
    let model = match model {
        "er" => GraphModel::ErdosRenyi { n, p: a },
        "ba" => GraphModel::BarabasiAlbert { n, m: a as usize },
        "ws" => GraphModel::WattsStrogatz {
            n,
            k: a as usize,
            beta: b,
        },
        other => return Err(format!("unknown graph model `{other}`")),
    };
    generate(model, seed).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Codelength {
    spec: String,
    bits: usize,
    header_bits: usize,
}

#[derive(Serialize)]
struct Codelengths {
    vertices: usize,
    edges: usize,
    labeled_iid_bits: f64,
    coders: Vec<Codelength>,
}

pub fn codelengths_json(model: &str, n: usize, a: f64, b: f64, seed: u64) -> Result<String, String> {
    let g = build_graph(model, n, a, b, seed)?;
    let coders = CoderSpec::all(Mode::Universal)
        .into_iter()
        .map(|spec| {
            let r = encode_graph(&g, spec, None).map_err(|e| e.to_string())?.report;
            Ok(Codelength {
                spec: spec.label(),
                bits: r.exact_bits(),
                header_bits: r.framing_bits + r.n_bits + r.stats_bits,
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    let out = Codelengths {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        labeled_iid_bits: labeled_iid_bits(g.vertex_count(), g.edge_count()),
        coders,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

pub fn tree_dump_text(model: &str, n: usize, a: f64, b: f64, seed: u64) -> Result<String, String> {
    if n > MAX_DUMP_VERTICES {
        return Err(format!("tree dump is limited to {MAX_DUMP_VERTICES} vertices"));
    }
    let g = build_graph(model, n, a, b, seed)?;
    let (tree, picks) = graph_to_tree(&g, Picker::Smallest).map_err(|e| e.to_string())?;
    let order: Vec<String> = picks.iter().map(usize::to_string).collect();
    Ok(format!("picked: {}\n{}", order.join(" "), tree.dump()))
}

#[derive(Serialize)]
struct PathPoint {
    lambda: f64,
    edges: usize,
    graph_bits: Option<usize>,
    data_bits: Option<f64>,
    total_bits: Option<f64>,
    f1: Option<f64>,
}

#[derive(Serialize)]
struct PathCurve {
    selected: f64,
    selected_f1: f64,
    true_edges: usize,
    points: Vec<PathPoint>,
}

/// MDL curve over the default grid for synthetic Gaussian data; `spec` is a
/// coder label such as `triangle/2`.
pub fn lambda_path_json(family: &str, p: usize, samples: usize, seed: u64, spec: &str) -> Result<String, String> {
    let family: PrecisionFamily = family.parse().map_err(|e: graphzip::Error| e.to_string())?;
    let spec: CoderSpec = spec.parse().map_err(|e: graphzip::Error| e.to_string())?;
    if spec.mode != Mode::Universal {
        return Err("the demo has no trained statistics; use a universal coder".into());
    }
    let err = |e: graphzip::Error| e.to_string();
    let omega = generate_precision(PrecisionSpec { family, p, seed }).map_err(err)?;
    let truth = graph_from_precision(&omega, 0.0).map_err(err)?;
    let x = sample_gaussian(&omega, samples, seed.wrapping_add(1)).map_err(err)?;
    let grid = default_grid(samples, p);
    let path = lambda_path(&x, &grid, SelectOptions::default()).map_err(err)?;
    let sel = path.select(spec, None).map_err(err)?;
    let points = sel
        .path
        .iter()
        .enumerate()
        .map(|(i, e)| PathPoint {
            lambda: e.lambda,
            edges: e.edges,
            graph_bits: e.graph_bits,
            data_bits: e.data_bits,
            total_bits: e.total_bits,
            f1: path.graph(i).and_then(|g| f1_score(g, &truth).ok()),
        })
        .collect();
    let curve = PathCurve {
        selected: sel.lambda,
        selected_f1: f1_score(&sel.graph, &truth).map_err(err)?,
        true_edges: truth.edge_count(),
        points,
    };
    serde_json::to_string(&curve).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn codelengths(model: &str, n: usize, a: f64, b: f64, seed: u64) -> Result<String, JsError> {
    codelengths_json(model, n, a, b, seed).map_err(js_err)
}

#[wasm_bindgen]
pub fn tree_dump(model: &str, n: usize, a: f64, b: f64, seed: u64) -> Result<String, JsError> {
    tree_dump_text(model, n, a, b, seed).map_err(js_err)
}

#[wasm_bindgen]
pub fn mdl_path(family: &str, p: usize, samples: usize, seed: u64, spec: &str) -> Result<String, JsError> {
    lambda_path_json(family, p, samples, seed, spec).map_err(js_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codelengths_cover_all_coders() {
        let v: serde_json::Value = serde_json::from_str(&codelengths_json("ba", 60, 3.0, 0.0, 1).unwrap()).unwrap();
        assert_eq!(v["coders"].as_array().unwrap().len(), 8);
        assert_eq!(v["vertices"], 60);
    }

    #[test]
    fn dump_lists_every_level() {
        let text = tree_dump_text("ws", 10, 2.0, 0.0, 0).unwrap();
        assert_eq!(text.lines().count(), 11);
        assert!(text.starts_with("picked: 0 "));
        assert!(tree_dump_text("er", 100, 0.1, 0.0, 0).is_err());
    }

    #[test]
    fn path_curve_has_one_point_per_lambda() {
        let v: serde_json::Value =
            serde_json::from_str(&lambda_path_json("cycle", 6, 30, 2, "iid/1").unwrap()).unwrap();
        assert_eq!(v["points"].as_array().unwrap().len(), 100);
        assert!(lambda_path_json("cycle", 6, 30, 2, "iid/1/learned").is_err());
        assert!(build_graph("tree", 5, 0.0, 0.0, 0).is_err());
    }
}

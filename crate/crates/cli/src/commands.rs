use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use graphzip::coders::{labeled_iid_bits, train_stats, BitReport};
use graphzip::entropy::elias_delta_len;
use graphzip::graph::{generate as generate_graph, load_edge_list, write_edge_list, GraphModel};
use graphzip::mdl::{
    default_grid, f1_score, generate_precision, lambda_grid, parse_matrix, sample_gaussian,
    select_model, PathEntry, PrecisionSpec, SelectOptions,
};
use graphzip::tree::Picker;
use graphzip::{decode_graph, encode_graph, CoderSpec, CoderStats, Graph, Mode};
use rayon::prelude::*;
use serde::Serialize;

use crate::report::{
    emit, emit_json, expand_inputs, read_input, read_text, usage, write_output, FileDigest, RunReport,
};
use crate::{
    BenchmarkArgs, CoderArgs, CompressArgs, DecompressArgs, GenerateCommand, GenerateCommon, SelectArgs,
    TrainArgs,
};

fn load_graph(path: &Path) -> Result<(Graph, FileDigest)> {
    let (text, digest) = read_text(path)?;
    let (g, _) = load_edge_list(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok((g, digest))
}

fn load_stats(path: &Path) -> Result<(CoderStats, FileDigest)> {
    let (text, digest) = read_text(path)?;
    let stats = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok((stats, digest))
}

/// Stats for `args`, insisting they are given exactly in learned mode.
fn stats_for(args: &CoderArgs) -> Result<Option<(CoderStats, FileDigest)>> {
    match (args.mode, &args.stats) {
        (Mode::Learned, Some(p)) => Ok(Some(load_stats(p)?)),
        (Mode::Learned, None) => Err(usage("learned mode needs --stats")),
        (Mode::Universal, Some(_)) => Err(usage("--stats only applies to --mode learned")),
        (Mode::Universal, None) => Ok(None),
    }
}

#[derive(Serialize)]
struct CompressBody {
    spec: String,
    vertices: usize,
    edges: usize,
    header_bits: usize,
    bits: BitReport,
    seconds: f64,
}

fn header_bits(r: &BitReport) -> usize {
    r.framing_bits + r.n_bits + r.stats_bits
}

pub fn compress(args: CompressArgs) -> Result<()> {
    let spec = args.coder.spec();
    let stats = stats_for(&args.coder)?;
    let (g, digest) = load_graph(&args.input)?;
    let picker = args.seed.map_or(Picker::Smallest, |seed| Picker::Random { seed });
    let start = Instant::now();
    let encoded = graphzip::coders::encode_graph_with(&g, spec, stats.as_ref().map(|s| &s.0), picker)?;
    let seconds = start.elapsed().as_secs_f64();
    let out = write_output(&args.output, &encoded.bytes)?;
    let mut inputs = vec![digest];
    inputs.extend(stats.map(|s| s.1));
    let body = CompressBody {
        spec: spec.label(),
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        header_bits: header_bits(&encoded.report),
        bits: encoded.report,
        seconds,
    };
    emit_json(args.report.as_deref(), &RunReport::new(inputs, vec![out], body))
}

#[derive(Serialize)]
struct DecompressBody {
    spec: String,
    vertices: usize,
    edges: usize,
}

pub fn decompress(args: DecompressArgs) -> Result<()> {
    let (bytes, digest) = read_input(&args.input)?;
    let (header, _) = graphzip::coders::read_header(&bytes)?;
    let g = decode_graph(&bytes)?;
    let out = write_output(&args.output, write_edge_list(&g).as_bytes())?;
    let body = DecompressBody {
        spec: header.spec.label(),
        vertices: g.vertex_count(),
        edges: g.edge_count(),
    };
    emit_json(args.report.as_deref(), &RunReport::new(vec![digest], vec![out], body))
}

#[derive(Serialize)]
struct TrainBody {
    spec: String,
    graphs: usize,
    parameters: Vec<(String, f64)>,
}

pub fn train(args: TrainArgs) -> Result<()> {
    let files = expand_inputs(&args.corpus)?;
    if files.is_empty() {
        return Err(usage("training corpus is empty"));
    }
    let loaded = files.iter().map(|f| load_graph(f)).collect::<Result<Vec<_>>>()?;
    let (graphs, inputs): (Vec<Graph>, Vec<FileDigest>) = loaded.into_iter().unzip();
    let spec = CoderSpec::new(args.coder, args.class, Mode::Learned);
    let stats = train_stats(&graphs, spec)?;
    let out = write_output(&args.output, serde_json::to_string_pretty(&stats)?.as_bytes())?;
    let body = TrainBody {
        spec: spec.label(),
        graphs: graphs.len(),
        parameters: stats.param_names().into_iter().zip(stats.params.iter().copied()).collect(),
    };
    emit_json(args.report.as_deref(), &RunReport::new(inputs, vec![out], body))
}

#[derive(Serialize)]
struct Cell {
    spec: String,
    /// Bits excluding byte padding.
    bits: usize,
    header_bits: usize,
    payload_bits: usize,
    /// `8 * bytes` of the stream.
    total_bits: usize,
    seconds: f64,
}

#[derive(Serialize)]
struct Row {
    graph: String,
    sha256: String,
    vertices: usize,
    edges: usize,
    labeled_iid_bits: f64,
    cells: Vec<Cell>,
}

#[derive(Serialize)]
struct BenchmarkBody {
    specs: Vec<String>,
    rows: Vec<Row>,
}

/// Ideal labeled code plus the bits to send `n` and `|E|`.
fn labeled_iid_column(g: &Graph) -> f64 {
    let (n, m) = (g.vertex_count(), g.edge_count());
    labeled_iid_bits(n, m) + (elias_delta_len(n as u64) + elias_delta_len(m as u64 + 1)) as f64
}

pub fn benchmark(args: BenchmarkArgs) -> Result<()> {
    let files = expand_inputs(&args.inputs)?;
    if files.is_empty() {
        return Err(usage("benchmark corpus is empty"));
    }
    let specs = if args.specs.is_empty() {
        CoderSpec::all(Mode::Universal)
    } else {
        args.specs.clone()
    };
    let mut stats = Vec::new();
    let mut inputs = Vec::new();
    for p in &args.stats {
        let (s, d) = load_stats(p)?;
        stats.push(s);
        inputs.push(d);
    }
    let mut chosen: Vec<Option<&CoderStats>> = Vec::with_capacity(specs.len());
    for spec in &specs {
        let found = stats.iter().find(|s| s.family == spec.family && s.class == spec.class);
        match (spec.mode, found) {
            (Mode::Learned, None) => {
                return Err(usage(format!("no --stats file for {}", spec.label())));
            }
            (Mode::Learned, s) => chosen.push(s),
            (Mode::Universal, _) => chosen.push(None),
        }
    }
    let rows = files
        .par_iter()
        .map(|path| -> Result<Row> {
            let (g, digest) = load_graph(path)?;
            let cells = specs
                .iter()
                .zip(&chosen)
                .map(|(&spec, &st)| -> Result<Cell> {
                    let start = Instant::now();
                    let enc = encode_graph(&g, spec, st)
                        .with_context(|| format!("{} with {}", path.display(), spec.label()))?;
                    Ok(Cell {
                        spec: spec.label(),
                        bits: enc.report.exact_bits(),
                        header_bits: header_bits(&enc.report),
                        payload_bits: enc.report.payload_bits,
                        total_bits: enc.report.total_bits,
                        seconds: start.elapsed().as_secs_f64(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Row {
                graph: path.display().to_string(),
                sha256: digest.sha256,
                vertices: g.vertex_count(),
                edges: g.edge_count(),
                labeled_iid_bits: labeled_iid_column(&g),
                cells,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut csv = String::from("graph,vertices,edges,labeled_iid");
    for s in &specs {
        csv.push(',');
        csv.push_str(&s.label());
    }
    csv.push('\n');
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{:.1}",
            csv_field(&r.graph),
            r.vertices,
            r.edges,
            r.labeled_iid_bits
        ));
        for c in &r.cells {
            csv.push_str(&format!(",{}", c.bits));
        }
        csv.push('\n');
    }
    emit(args.out.as_deref(), &csv)?;
    if let Some(json) = &args.json {
        for path in &files {
            inputs.push(FileDigest::of(path, &std::fs::read(path)?));
        }
        let body = BenchmarkBody {
            specs: specs.iter().map(CoderSpec::label).collect(),
            rows,
        };
        emit_json(Some(json), &RunReport::new(inputs, Vec::new(), body))?;
    }
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Serialize)]
struct SelectBody {
    spec: String,
    samples: usize,
    variables: usize,
    lambda: f64,
    index: usize,
    shrinkage: bool,
    selected_edges: Vec<(usize, usize)>,
    f1: Option<f64>,
    path: Vec<PathEntry>,
}

pub fn select(args: SelectArgs) -> Result<()> {
    let spec = args.coder.spec();
    let stats = stats_for(&args.coder)?;
    let (text, digest) = read_text(&args.data)?;
    let x = parse_matrix(&text).with_context(|| format!("parsing {}", args.data.display()))?;
    let (n, p) = x.shape();
    let grid = match (args.lambda_min, args.lambda_max, args.lambda_step) {
        (None, None, None) => default_grid(n, p),
        (min, max, step) => {
            let default = default_grid(n, p);
            lambda_grid(min.unwrap_or(default[0]), max.unwrap_or(1.0), step.unwrap_or(0.01))?
        }
    };
    let mut inputs = vec![digest];
    let truth = match &args.truth {
        Some(t) => {
            let (g, d) = load_graph(t)?;
            inputs.push(d);
            Some(g)
        }
        None => None,
    };
    inputs.extend(stats.as_ref().map(|s| s.1.clone()));
    let sel = select_model(&x, &grid, spec, stats.as_ref().map(|s| &s.0), SelectOptions::default())?;
    let f1 = match &truth {
        Some(t) => Some(f1_score(&sel.graph, t)?),
        None => None,
    };
    let body = SelectBody {
        spec: spec.label(),
        samples: n,
        variables: p,
        lambda: sel.lambda,
        index: sel.index,
        shrinkage: sel.shrinkage,
        selected_edges: sel.graph.edges().collect(),
        f1,
        path: sel.path,
    };
    emit_json(args.out.as_deref(), &RunReport::new(inputs, Vec::new(), body))
}

fn write_or_print(common: &GenerateCommon, text: &str) -> Result<()> {
    emit(common.output.as_deref(), text)
}

pub fn generate(what: GenerateCommand) -> Result<()> {
    let (model, common) = match what {
        GenerateCommand::Er { n, p, common } => (GraphModel::ErdosRenyi { n, p }, common),
        GenerateCommand::Ba { n, m, common } => (GraphModel::BarabasiAlbert { n, m }, common),
        GenerateCommand::Ws { n, k, beta, common } => (GraphModel::WattsStrogatz { n, k, beta }, common),
        GenerateCommand::Empty { n, common } => (GraphModel::Empty { n }, common),
        GenerateCommand::Complete { n, common } => (GraphModel::Complete { n }, common),
        GenerateCommand::Data {
            family,
            p,
            samples,
            truth,
            common,
        } => {
            let omega = generate_precision(PrecisionSpec {
                family,
                p,
                seed: common.seed,
            })?;
            let x = sample_gaussian(&omega, samples, common.seed.wrapping_add(1))?;
            let mut text = String::new();
            for row in x.row_iter() {
                let fields: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
                text.push_str(&fields.join(","));
                text.push('\n');
            }
            write_or_print(&common, &text)?;
            if let Some(t) = truth {
                let g = graphzip::graph::graph_from_precision(&omega, 0.0)?;
                write_output(&t, write_edge_list(&g).as_bytes())?;
            }
            return Ok(());
        }
    };
    let g = generate_graph(model, common.seed).map_err(|e| usage(e.to_string()))?;
    write_or_print(&common, &write_edge_list(&g))
}

//! Bitstream layout and the public encode/decode entry points.
//!
//! ```text
//! "GZT1" | coder id (class << 4 | family) | mode | n (Elias delta) | stats | payload
//! ```
//!
//! Stats block, learned mode: parameter count (Elias delta), then each
//! parameter as a 32-bit fixed-point fraction; class 2 adds the training
//! graph count, histogram length + 1 and each degree count + 1, all Elias
//! delta. Universal mode: class 1 IID sends `|E| + 1` (Elias delta), class 2
//! sends the degree histogram's composition rank in fixed width, other
//! combinations send nothing.

use serde::Serialize;

use super::context::{bucket_count, UNIVERSAL_CN_CAP};
use super::degree::{read_histogram, write_histogram};
use super::engine::{code_tree, DegreeWeights, Params, Plan};
use super::stats::{dequantize, quantize, CoderStats, DegreeHistogram, KtCounter};
use super::{Class, CoderSpec, Family, Mode};
use crate::entropy::{
    clamp_prob, read_elias_delta, write_elias_delta, BitReader, BitWriter, CostMeter, Decoder,
    Encoder,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tree::{graph_to_tree, tree_to_graph, CardinalityTree, Picker};

pub const MAGIC: &[u8; 4] = b"GZT1";

/// Largest vertex count a stream may declare.
const MAX_VERTICES: u64 = 1 << 22;

/// Everything the decoder learns before the payload.
#[derive(Clone, Debug, PartialEq)]
pub struct Header {
    pub spec: CoderSpec,
    pub n: usize,
    /// Learned mode: the parameters exactly as the coder uses them.
    pub stats: Option<CoderStats>,
    /// Universal class 1 IID: edge count.
    pub edges: Option<u64>,
    /// Universal class 2: the coded graph's degree histogram.
    pub degree_counts: Option<Vec<u64>>,
}

/// Size breakdown of an encoded graph.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BitReport {
    /// Magic, coder id and mode.
    pub framing_bits: usize,
    pub n_bits: usize,
    pub stats_bits: usize,
    pub payload_bits: usize,
    /// Zero bits completing the last byte.
    pub padding_bits: usize,
    /// `8 * bytes.len()`.
    pub total_bits: usize,
    /// Information content of the payload under the models used.
    pub ideal_payload_bits: f64,
}

impl BitReport {
    /// Bits excluding byte padding.
    pub fn exact_bits(&self) -> usize {
        self.total_bits - self.padding_bits
    }
}

#[derive(Clone, Debug)]
pub struct Encoded {
    pub bytes: Vec<u8>,
    pub report: BitReport,
}

fn coder_id(spec: CoderSpec) -> u8 {
    spec.class.id() << 4 | spec.family.id()
}

fn pairs(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// Bits of an ideal labeled code for a graph with `n` vertices and `m`
/// edges: `C(n, 2) H(m / C(n, 2))`.
pub fn labeled_iid_bits(n: usize, m: usize) -> f64 {
    let total = pairs(n) as f64;
    if total == 0.0 || m == 0 || m as f64 >= total {
        return 0.0;
    }
    let p = m as f64 / total;
    -total * (p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

/// Stats as the decoder will see them: parameters after fixed-point
/// quantization and clamping.
fn as_transmitted(stats: &CoderStats) -> CoderStats {
    CoderStats {
        params: stats.params.iter().map(|&p| dequantize(quantize(p))).collect(),
        ..stats.clone()
    }
}

fn write_stats(w: &mut BitWriter, header: &Header) -> Result<()> {
    match header.spec.mode {
        Mode::Learned => {
            let stats = header.stats.as_ref().expect("learned headers carry stats");
            write_elias_delta(w, stats.params.len() as u64)?;
            for &p in &stats.params {
                w.write_bits(u64::from(quantize(p)), 32);
            }
            if header.spec.class == Class::Two {
                let hist = stats.degree_hist.as_ref().expect("validated");
                write_elias_delta(w, hist.graphs.max(1))?;
                write_elias_delta(w, hist.sums.len() as u64 + 1)?;
                for &s in &hist.sums {
                    write_elias_delta(w, s + 1)?;
                }
            }
        }
        Mode::Universal => {
            if let Some(m) = header.edges {
                write_elias_delta(w, m + 1)?;
            }
            if let Some(counts) = &header.degree_counts {
                write_histogram(w, counts)?;
            }
        }
    }
    Ok(())
}

fn read_stats(r: &mut BitReader<'_>, spec: CoderSpec, n: usize) -> Result<Header> {
    let mut header = Header {
        spec,
        n,
        stats: None,
        edges: None,
        degree_counts: None,
    };
    match spec.mode {
        Mode::Learned => {
            let count = read_elias_delta(r)?;
            if count * 32 > r.remaining() as u64 {
                return Err(Error::Decode(format!("implausible parameter count {count}")));
            }
            let params = (0..count)
                .map(|_| r.read_bits(32).map(|q| dequantize(q as u32)))
                .collect::<Result<Vec<_>>>()?;
            let degree_hist = if spec.class == Class::Two {
                let graphs = read_elias_delta(r)?;
                let len = read_elias_delta(r)? - 1;
                if len > r.remaining() as u64 {
                    return Err(Error::Decode(format!("implausible histogram length {len}")));
                }
                let sums = (0..len)
                    .map(|_| read_elias_delta(r).map(|s| s - 1))
                    .collect::<Result<Vec<_>>>()?;
                Some(DegreeHistogram { sums, graphs })
            } else {
                None
            };
            let stats = CoderStats {
                family: spec.family,
                class: spec.class,
                params,
                degree_hist,
            };
            stats
                .validate(spec)
                .map_err(|e| Error::Decode(format!("bad stats block: {e}")))?;
            header.stats = Some(stats);
        }
        Mode::Universal => {
            if spec.class == Class::One && spec.family == Family::Iid {
                let m = read_elias_delta(r)? - 1;
                if m > pairs(n) {
                    return Err(Error::Decode(format!("{m} edges cannot fit {n} vertices")));
                }
                header.edges = Some(m);
            }
            if spec.class == Class::Two {
                // The rank takes at least n - 1 bits; refuse before the
                // big-integer work if they cannot be there.
                if r.remaining() + 1 < n {
                    return Err(Error::Decode("degree histogram truncated".into()));
                }
                header.degree_counts = Some(read_histogram(r, n as u64)?);
            }
        }
    }
    Ok(header)
}

fn plan_for(header: &Header) -> Plan {
    let spec = header.spec;
    match &header.stats {
        Some(stats) => Plan {
            family: spec.family,
            class: spec.class,
            cap: stats.params.len() - 1,
            params: Params::Fixed(stats.params.clone()),
            degrees: stats.degree_hist.as_ref().map(|h| DegreeWeights {
                weights: (0..h.sums.len()).map(|k| h.average(k) + 0.5).collect(),
                tail: 0.5,
            }),
        },
        None => {
            let params = match (spec.family, spec.class) {
                (Family::Iid, Class::One) => {
                    let total = pairs(header.n);
                    let m = header.edges.unwrap_or(0);
                    let p = if total == 0 { 0.5 } else { m as f64 / total as f64 };
                    Params::Fixed(vec![clamp_prob(p)])
                }
                (Family::Iid, Class::Two) => Params::Fixed(vec![0.5]),
                (f, _) => Params::Adaptive(vec![KtCounter::default(); bucket_count(f, UNIVERSAL_CN_CAP)]),
            };
            Plan {
                family: spec.family,
                class: spec.class,
                cap: UNIVERSAL_CN_CAP,
                params,
                degrees: header.degree_counts.as_ref().map(|c| DegreeWeights {
                    weights: c.iter().map(|&x| x as f64).collect(),
                    tail: 0.0,
                }),
            }
        }
    }
}

fn build_header(g: &Graph, spec: CoderSpec, stats: Option<&CoderStats>) -> Result<Header> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut header = Header {
        spec,
        n,
        stats: None,
        edges: None,
        degree_counts: None,
    };
    match spec.mode {
        Mode::Learned => {
            let stats = stats.ok_or_else(|| {
                Error::Config(format!("{} needs trained stats", spec.label()))
            })?;
            stats.validate(spec)?;
            header.stats = Some(as_transmitted(stats));
        }
        Mode::Universal => {
            if spec.class == Class::One && spec.family == Family::Iid {
                header.edges = Some(g.edge_count() as u64);
            }
            if spec.class == Class::Two {
                let mut counts = g.degree_histogram().counts;
                counts.resize(n, 0);
                header.degree_counts = Some(counts);
            }
        }
    }
    Ok(header)
}

fn write_header(header: &Header, w: &mut BitWriter) -> Result<(usize, usize, usize)> {
    w.write_bytes(MAGIC);
    w.write_bits(u64::from(coder_id(header.spec)), 8);
    w.write_bits(u64::from(header.spec.mode == Mode::Universal), 8);
    let framing = w.len();
    write_elias_delta(w, header.n as u64)?;
    let n_bits = w.len() - framing;
    write_stats(w, header)?;
    Ok((framing, n_bits, w.len() - framing - n_bits))
}

/// Encodes `g` with the smallest-id picker.
pub fn encode_graph(g: &Graph, spec: CoderSpec, stats: Option<&CoderStats>) -> Result<Encoded> {
    encode_graph_with(g, spec, stats, Picker::Smallest)
}

pub fn encode_graph_with(
    g: &Graph,
    spec: CoderSpec,
    stats: Option<&CoderStats>,
    picker: Picker,
) -> Result<Encoded> {
    let header = build_header(g, spec, stats)?;
    let (tree, _) = graph_to_tree(g, picker)?;
    let mut w = BitWriter::new();
    let (framing_bits, n_bits, stats_bits) = write_header(&header, &mut w)?;
    let mut enc = Encoder::new();
    code_tree(&mut enc, &mut plan_for(&header), header.n, Some(&tree))?;
    let ideal_payload_bits = enc.ideal_bits();
    let payload = enc.finish();
    w.append(&payload);
    let exact = w.len();
    let bytes = w.into_bytes();
    let total_bits = 8 * bytes.len();
    Ok(Encoded {
        bytes,
        report: BitReport {
            framing_bits,
            n_bits,
            stats_bits,
            payload_bits: payload.len(),
            padding_bits: total_bits - exact,
            total_bits,
            ideal_payload_bits,
        },
    })
}

/// Header bits plus the ideal payload information content, without running
/// the arithmetic coder.
pub fn codelength(g: &Graph, spec: CoderSpec, stats: Option<&CoderStats>) -> Result<f64> {
    let header = build_header(g, spec, stats)?;
    let (tree, _) = graph_to_tree(g, Picker::Smallest)?;
    let mut w = BitWriter::new();
    write_header(&header, &mut w)?;
    let mut meter = CostMeter::default();
    code_tree(&mut meter, &mut plan_for(&header), header.n, Some(&tree))?;
    Ok(w.len() as f64 + meter.bits)
}

/// Parses the header, returning it with the bit offset of the payload.
pub fn read_header(bytes: &[u8]) -> Result<(Header, usize)> {
    let mut r = BitReader::new(bytes);
    let magic = r
        .read_bytes(4)
        .map_err(|_| Error::Decode("stream shorter than its magic".into()))?;
    if magic != MAGIC {
        return Err(Error::Decode("not a GZT1 stream".into()));
    }
    let id = r.read_bits(8)? as u8;
    let class = match id >> 4 {
        1 => Class::One,
        2 => Class::Two,
        c => return Err(Error::Decode(format!("unknown coder class {c}"))),
    };
    let family = Family::from_id(id & 0xf)
        .ok_or_else(|| Error::Decode(format!("unknown coder family {}", id & 0xf)))?;
    let mode = match r.read_bits(8)? {
        0 => Mode::Learned,
        1 => Mode::Universal,
        m => return Err(Error::Decode(format!("unknown mode {m}"))),
    };
    let n = read_elias_delta(&mut r)?;
    if n > MAX_VERTICES {
        return Err(Error::Decode(format!("{n} vertices exceeds the supported maximum")));
    }
    let header = read_stats(&mut r, CoderSpec::new(family, class, mode), n as usize)?;
    Ok((header, r.position()))
}

/// Decodes the cardinality tree of a stream.
pub fn decode_tree(bytes: &[u8]) -> Result<(Header, CardinalityTree)> {
    let (header, offset) = read_header(bytes)?;
    let mut r = BitReader::new(bytes);
    r.skip(offset)?;
    let mut dec = Decoder::new(r);
    let tree = code_tree(&mut dec, &mut plan_for(&header), header.n, None)?;
    dec.finish()?;
    Ok((header, tree))
}

/// Rebuilds a graph isomorphic to the encoded one.
pub fn decode_graph(bytes: &[u8]) -> Result<Graph> {
    let (_, tree) = decode_tree(bytes)?;
    tree_to_graph(&tree)
}

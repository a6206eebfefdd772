use super::*;
use crate::entropy::EPSILON;
use crate::graph::{generate, is_isomorphic_small, Graph, GraphModel};
use crate::tree::{graph_to_tree, Picker};

fn trained(g: &[Graph], spec: CoderSpec) -> CoderStats {
    train_stats(g, spec).unwrap()
}

fn round_trip(g: &Graph, spec: CoderSpec, stats: Option<&CoderStats>) -> Encoded {
    let enc = encode_graph(g, spec, stats).unwrap();
    let h = decode_graph(&enc.bytes).unwrap();
    if g.vertex_count() <= 12 {
        assert!(is_isomorphic_small(g, &h).unwrap(), "{spec}");
    }
    let t_g = graph_to_tree(g, Picker::Smallest).unwrap().0;
    let t_h = graph_to_tree(&h, Picker::Smallest).unwrap().0;
    assert_eq!(t_g, t_h, "{spec}");
    assert!(enc.report.payload_bits as f64 <= enc.report.ideal_payload_bits + 32.0);
    enc
}

#[test]
fn spec_names_parse() {
    for spec in CoderSpec::all(Mode::Learned).into_iter().chain(CoderSpec::all(Mode::Universal)) {
        let f: Family = spec.family.name().parse().unwrap();
        let c: Class = spec.class.to_string().parse().unwrap();
        let m: Mode = spec.mode.to_string().parse().unwrap();
        assert_eq!(CoderSpec::new(f, c, m), spec);
    }
    assert!("hexagon".parse::<Family>().is_err());
    assert_eq!(CoderSpec::all(Mode::Universal).len(), 8);
}

#[test]
fn complete_three_learned_iid_is_nearly_free() {
    let spec = CoderSpec::new(Family::Iid, Class::One, Mode::Learned);
    let stats = CoderStats {
        family: Family::Iid,
        class: Class::One,
        params: vec![1.0 - EPSILON],
        degree_hist: None,
    };
    let enc = round_trip(&Graph::complete(3), spec, Some(&stats));
    assert!(enc.report.ideal_payload_bits < 1.0);
    // The flush is the only payload.
    assert_eq!(enc.report.payload_bits, 2);
}

#[test]
fn empty_five_universal() {
    for spec in CoderSpec::all(Mode::Universal) {
        let enc = round_trip(&Graph::empty(5), spec, None);
        if spec.family == Family::Iid {
            assert!(enc.report.payload_bits < 10, "{spec}: {}", enc.report.payload_bits);
        }
        let h = decode_graph(&enc.bytes).unwrap();
        assert_eq!(h, Graph::empty(5));
    }
}

#[test]
fn header_layout() {
    let enc = encode_graph(&Graph::empty(5), CoderSpec::universal(Family::Triangle, Class::Two), None).unwrap();
    assert_eq!(&enc.bytes[..4], MAGIC);
    assert_eq!(enc.bytes[4], 0x21);
    assert_eq!(enc.bytes[5], 1);
    assert_eq!(enc.report.framing_bits, 48);
    assert_eq!(enc.report.stats_bits as u64, histogram_code_bits(5));
    let (header, _) = read_header(&enc.bytes).unwrap();
    assert_eq!(header.degree_counts, Some(vec![5, 0, 0, 0, 0]));
}

#[test]
fn all_specs_round_trip_er_and_ba() {
    let er = generate(GraphModel::ErdosRenyi { n: 50, p: 0.1 }, 4).unwrap();
    let ba = generate(GraphModel::BarabasiAlbert { n: 100, m: 3 }, 4).unwrap();
    let corpus: Vec<Graph> = (10..13)
        .map(|s| generate(GraphModel::ErdosRenyi { n: 50, p: 0.1 }, s).unwrap())
        .collect();
    for g in [&er, &ba] {
        for spec in CoderSpec::all(Mode::Universal) {
            round_trip(g, spec, None);
        }
        for spec in CoderSpec::all(Mode::Learned) {
            let stats = trained(&corpus, spec);
            round_trip(g, spec, Some(&stats));
        }
    }
}

#[test]
fn small_graphs_exactly_isomorphic() {
    for seed in 0..20 {
        let n = 2 + seed as usize % 11;
        let g = generate(GraphModel::ErdosRenyi { n, p: 0.4 }, seed).unwrap();
        for spec in CoderSpec::all(Mode::Universal) {
            round_trip(&g, spec, None);
        }
    }
}

#[test]
fn single_vertex() {
    for spec in CoderSpec::all(Mode::Universal) {
        let enc = round_trip(&Graph::empty(1), spec, None);
        assert_eq!(decode_graph(&enc.bytes).unwrap().vertex_count(), 1);
    }
}

#[test]
fn errors() {
    let spec = CoderSpec::new(Family::Iid, Class::One, Mode::Learned);
    assert!(matches!(encode_graph(&Graph::empty(3), spec, None), Err(Error::Config(_))));
    assert!(matches!(
        encode_graph(&Graph::empty(0), CoderSpec::universal(Family::Iid, Class::One), None),
        Err(Error::EmptyGraph)
    ));
    let wrong = trained(&[Graph::path(5)], CoderSpec::new(Family::Triangle, Class::One, Mode::Learned));
    assert!(matches!(encode_graph(&Graph::path(5), spec, Some(&wrong)), Err(Error::Config(_))));
    assert!(decode_graph(b"nope").is_err());
    let g = generate(GraphModel::ErdosRenyi { n: 60, p: 0.2 }, 1).unwrap();
    let enc = encode_graph(&g, CoderSpec::universal(Family::Triangle, Class::One), None).unwrap();
    let cut = &enc.bytes[..enc.bytes.len() - 8];
    assert!(matches!(decode_graph(cut), Err(Error::Decode(_))));
    let mut bad = enc.bytes.clone();
    bad[4] = 0x37;
    assert!(decode_graph(&bad).is_err());
}

#[test]
fn degree_sums_are_consistent() {
    // Class 2 codes k = (earlier neighbors) + (left values); rebuilding the
    // graph from the decoded tree must give the same degree sequence.
    let g = generate(GraphModel::WattsStrogatz { n: 80, k: 6, beta: 0.2 }, 2).unwrap();
    for family in Family::ALL {
        let enc = encode_graph(&g, CoderSpec::universal(family, Class::Two), None).unwrap();
        let h = decode_graph(&enc.bytes).unwrap();
        assert_eq!(h.degree_sequence(), g.degree_sequence());
    }
}

#[test]
fn triangle_no_worse_than_iid_on_complete_graphs() {
    // Learned stats put every node in one saturated bucket. Universal IID
    // is excluded: its header states |E| and leaves nothing to code.
    let corpus = [Graph::complete(30), Graph::complete(20)];
    let spec = |f| CoderSpec::new(f, Class::One, Mode::Learned);
    let g = Graph::complete(25);
    let tri = encode_graph(&g, spec(Family::Triangle), Some(&trained(&corpus, spec(Family::Triangle)))).unwrap();
    let iid = encode_graph(&g, spec(Family::Iid), Some(&trained(&corpus, spec(Family::Iid)))).unwrap();
    assert!(tri.report.ideal_payload_bits <= iid.report.ideal_payload_bits + 1e-9);
    assert!(tri.report.payload_bits <= iid.report.payload_bits);
}

#[test]
fn codelength_matches_encoder_ideal() {
    let g = generate(GraphModel::BarabasiAlbert { n: 60, m: 2 }, 9).unwrap();
    for spec in CoderSpec::all(Mode::Universal) {
        let enc = encode_graph(&g, spec, None).unwrap();
        let ideal = codelength(&g, spec, None).unwrap();
        let header = enc.report.framing_bits + enc.report.n_bits + enc.report.stats_bits;
        assert!((ideal - header as f64 - enc.report.ideal_payload_bits).abs() < 1e-6);
    }
}

#[test]
fn labeled_baseline() {
    assert_eq!(labeled_iid_bits(1, 0), 0.0);
    // C(4,2) = 6 pairs, 3 edges: 6 bits.
    assert!((labeled_iid_bits(4, 3) - 6.0).abs() < 1e-12);
}

#[test]
fn stats_json_round_trip() {
    let spec = CoderSpec::new(Family::CommonNeighbor, Class::Two, Mode::Learned);
    let stats = trained(&[Graph::complete(6), Graph::cycle(6)], spec);
    let json = serde_json::to_string(&stats).unwrap();
    let back: CoderStats = serde_json::from_str(&json).unwrap();
    assert_eq!(back, stats);
}

#[test]
fn spec_labels_parse_back() {
    for mode in [Mode::Learned, Mode::Universal] {
        for spec in CoderSpec::all(mode) {
            assert_eq!(spec.label().parse::<CoderSpec>().unwrap(), spec);
        }
    }
    let short: CoderSpec = "cn/2".parse().unwrap();
    assert_eq!(short, CoderSpec::universal(Family::CommonNeighbor, Class::Two));
    assert!("iid".parse::<CoderSpec>().is_err());
    assert!("iid/3".parse::<CoderSpec>().is_err());
}

#[test]
fn stats_from_larger_graphs_decode_on_small_ones() {
    let corpus = vec![generate(GraphModel::ErdosRenyi { n: 120, p: 0.3 }, 4).unwrap()];
    let small = generate(GraphModel::ErdosRenyi { n: 6, p: 0.5 }, 5).unwrap();
    for class in [Class::One, Class::Two] {
        let spec = CoderSpec::new(Family::CommonNeighbor, class, Mode::Learned);
        let stats = trained(&corpus, spec);
        assert!(stats.params.len() > small.vertex_count() + 4);
        round_trip(&small, spec, Some(&stats));
    }
}

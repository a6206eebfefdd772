use graphzip::coders::train_stats;
use graphzip::graph::{generate, is_isomorphic_small, GraphModel};
use graphzip::{decode_graph, encode_graph, Class, CoderSpec, Graph, Mode};
use proptest::prelude::*;

fn arb_graph() -> impl Strategy<Value = Graph> {
    (1usize..=10).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn every_universal_coder_round_trips(g in arb_graph()) {
        for spec in CoderSpec::all(Mode::Universal) {
            let enc = encode_graph(&g, spec, None).unwrap();
            let h = decode_graph(&enc.bytes).unwrap();
            prop_assert!(is_isomorphic_small(&g, &h).unwrap(), "{}", spec);
            prop_assert!(enc.report.payload_bits as f64 <= enc.report.ideal_payload_bits + 32.0);
        }
    }
}

/// Gap between learned and universal codelength on a held-out ER graph.
/// Learned statistics are shared with the decoder ahead of time, so their
/// header block is not part of the learned codelength. Universal side
/// information (edge count, degree histogram) is.
fn learned_universal_gaps(class: Class) -> Vec<(CoderSpec, f64, f64)> {
    let (n, p) = (200, 0.05);
    let corpus: Vec<Graph> = (0..50)
        .map(|s| generate(GraphModel::ErdosRenyi { n, p }, s).unwrap())
        .collect();
    let g = generate(GraphModel::ErdosRenyi { n, p }, 50).unwrap();
    CoderSpec::all(Mode::Learned)
        .into_iter()
        .filter(|s| s.class == class)
        .map(|learned| {
            let stats = train_stats(&corpus, learned).unwrap();
            let report = encode_graph(&g, learned, Some(&stats)).unwrap().report;
            let l = (report.exact_bits() - report.stats_bits) as f64;
            let universal = CoderSpec::new(learned.family, class, Mode::Universal);
            let u = encode_graph(&g, universal, None).unwrap().report.exact_bits() as f64;
            (learned, l, u)
        })
        .collect()
}

fn assert_close(class: Class) {
    let slack = 4.0 * 200f64.log2();
    for (spec, l, u) in learned_universal_gaps(class) {
        assert!((l - u).abs() <= 0.01 * u + slack, "{spec}: learned {l} vs universal {u}");
    }
}

#[test]
fn learned_and_universal_agree_on_er_class_one() {
    assert_close(Class::One);
}

#[test]
fn learned_and_universal_agree_on_er_class_two() {
    assert_close(Class::Two);
}

mod common;

use common::oracles::reducing_triples;
use snark_designs::catalog::{
    catalog, catalog_integrity, catalog_integrity_of, has_reducing_3cut, petersen, snark_report, IntegrityFailure,
    SnarkDefect,
};
use snark_designs::formats::{emit_graph, parse_graph};
use snark_designs::graph::{Edge, LabeledGraph};
use snark_designs::SnarkId;

fn two_petersens_joined() -> (LabeledGraph, [Edge; 3]) {
    let p = petersen();
    let mut edges: Vec<Edge> = p.edges().to_vec();
    edges.extend(p.edges().iter().map(|&(u, v)| (u + 10, v + 10)));
    let matching = [(0, 10), (2, 12), (7, 17)];
    edges.extend(matching);
    (LabeledGraph::new(20, edges).unwrap(), matching)
}

#[test]
fn shipped_catalog_certifies() {
    let report = catalog_integrity();
    assert!(report.pass(), "{:?}", report.failure);
    assert_eq!(report.graphs_checked, 38);
    assert_eq!(report.pairs_checked, 703);
    for r in &report.reports {
        assert_eq!((r.vertex_count, r.edge_count, r.chromatic_index), (24, 36, Some(4)));
        assert!(r.girth.unwrap() >= 5);
        assert!(r.is_nontrivial_snark);
    }
}

#[test]
fn petersen_is_a_snark() {
    let r = snark_report(&petersen());
    assert!(r.is_nontrivial_snark, "{r:?}");
    assert_eq!(r.girth, Some(5));
    assert_eq!(r.chromatic_index, Some(4));
}

#[test]
fn k4_is_not_a_snark() {
    let k4 = LabeledGraph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let r = snark_report(&k4);
    assert!(!r.is_nontrivial_snark);
    assert_eq!(r.chromatic_index, Some(3));
    assert_eq!(r.defect(), Some(SnarkDefect::ThreeEdgeColourable));
}

#[test]
fn catalog_edges_from_published_lists() {
    assert!(SnarkId::new(1).unwrap().graph().has_edge(0, 1));
    assert!(SnarkId::new(38).unwrap().graph().has_edge(21, 23));
    assert_eq!(catalog().len(), 38);
    assert!(catalog().iter().all(|g| g.edge_count() == 36));
}

#[test]
fn joined_petersens_have_exactly_the_matching_as_reducing_cut() {
    let (g, matching) = two_petersens_joined();
    let oracle = reducing_triples(&g);
    assert_eq!(oracle, vec![matching]);
    assert_eq!(has_reducing_3cut(&g).unwrap(), Some(matching));
}

#[test]
fn reducing_cut_independent_of_edge_order() {
    let (g, matching) = two_petersens_joined();
    let perm: Vec<usize> = (0..20).rev().collect();
    let h = g.relabeled(&perm);
    let mut found = has_reducing_3cut(&h).unwrap().unwrap();
    found.sort_unstable();
    let mut expected = matching.map(|(u, v)| (perm[u].min(perm[v]), perm[u].max(perm[v])));
    expected.sort_unstable();
    assert_eq!(found, expected);
}

#[test]
fn catalog_has_no_reducing_cut_by_oracle() {
    // the oracle is slow, so sample a few
    for k in [1, 19, 38] {
        let g = SnarkId::new(k).unwrap().graph();
        assert!(reducing_triples(g).is_empty());
        assert_eq!(has_reducing_3cut(g).unwrap(), None);
    }
}

#[test]
fn cycle_has_no_reducing_cut() {
    let c5 = LabeledGraph::new(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
    assert_eq!(has_reducing_3cut(&c5).unwrap(), None);
    let two = LabeledGraph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
    assert!(has_reducing_3cut(&two).is_err());
}

#[test]
fn relabeled_duplicate_is_reported() {
    let mut graphs = catalog().to_vec();
    let perm: Vec<usize> = (0..24).map(|v| (v * 7 + 3) % 24).collect();
    graphs[1] = graphs[0].relabeled(&perm);
    let report = catalog_integrity_of(&graphs);
    assert_eq!(report.failure, Some(IntegrityFailure::Isomorphic { first: "G1".into(), second: "G2".into() }));
}

#[test]
fn missing_edge_is_reported() {
    let mut graphs = catalog().to_vec();
    graphs[0] = graphs[0].without_edges(&[graphs[0].edges()[0]]);
    let report = catalog_integrity_of(&graphs);
    assert_eq!(report.failure, Some(IntegrityFailure::NotASnark { graph: "G1".into(), defect: SnarkDefect::NotCubic }));
}

#[test]
fn short_catalog_is_reported() {
    let report = catalog_integrity_of(&catalog()[..37]);
    assert_eq!(report.failure, Some(IntegrityFailure::WrongCount { expected: 38, found: 37 }));
}

#[test]
fn integrity_is_deterministic() {
    assert_eq!(catalog_integrity(), catalog_integrity());
}

#[test]
fn graph_files_round_trip() {
    let dir = common::data_dir().join("catalog");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let (id, g) = parse_graph(&text).unwrap();
        let emitted = emit_graph(&id, &g);
        assert_eq!(emitted, text, "{}", path.display());
        assert_eq!(parse_graph(&emitted).unwrap(), (id, g));
        count += 1;
    }
    assert_eq!(count, 39);
}

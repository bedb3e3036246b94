//! The thirty-eight non-trivial snarks on 24 vertices, embedded as graph
//! files, and the checks that certify each one.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::formats::parse_graph;
use crate::graph::{Edge, Girth, LabeledGraph};
use crate::iso::are_isomorphic;

pub const SNARK_COUNT: usize = 38;

const CATALOG_TEXT: [&str; SNARK_COUNT] = [
    include_str!("../../../data/catalog/g01.graph"),
    include_str!("../../../data/catalog/g02.graph"),
    include_str!("../../../data/catalog/g03.graph"),
    include_str!("../../../data/catalog/g04.graph"),
    include_str!("../../../data/catalog/g05.graph"),
    include_str!("../../../data/catalog/g06.graph"),
    include_str!("../../../data/catalog/g07.graph"),
    include_str!("../../../data/catalog/g08.graph"),
    include_str!("../../../data/catalog/g09.graph"),
    include_str!("../../../data/catalog/g10.graph"),
    include_str!("../../../data/catalog/g11.graph"),
    include_str!("../../../data/catalog/g12.graph"),
    include_str!("../../../data/catalog/g13.graph"),
    include_str!("../../../data/catalog/g14.graph"),
    include_str!("../../../data/catalog/g15.graph"),
    include_str!("../../../data/catalog/g16.graph"),
    include_str!("../../../data/catalog/g17.graph"),
    include_str!("../../../data/catalog/g18.graph"),
    include_str!("../../../data/catalog/g19.graph"),
    include_str!("../../../data/catalog/g20.graph"),
    include_str!("../../../data/catalog/g21.graph"),
    include_str!("../../../data/catalog/g22.graph"),
    include_str!("../../../data/catalog/g23.graph"),
    include_str!("../../../data/catalog/g24.graph"),
    include_str!("../../../data/catalog/g25.graph"),
    include_str!("../../../data/catalog/g26.graph"),
    include_str!("../../../data/catalog/g27.graph"),
    include_str!("../../../data/catalog/g28.graph"),
    include_str!("../../../data/catalog/g29.graph"),
    include_str!("../../../data/catalog/g30.graph"),
    include_str!("../../../data/catalog/g31.graph"),
    include_str!("../../../data/catalog/g32.graph"),
    include_str!("../../../data/catalog/g33.graph"),
    include_str!("../../../data/catalog/g34.graph"),
    include_str!("../../../data/catalog/g35.graph"),
    include_str!("../../../data/catalog/g36.graph"),
    include_str!("../../../data/catalog/g37.graph"),
    include_str!("../../../data/catalog/g38.graph"),
];

const PETERSEN_TEXT: &str = include_str!("../../../data/catalog/petersen.graph");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown snark id `{0}`")]
    UnknownId(String),
    #[error("graph is not connected")]
    NotConnected,
}

/// Index of a catalog snark, `G1` through `G38`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SnarkId(u8);

impl SnarkId {
    pub fn new(index: usize) -> Result<SnarkId, CatalogError> {
        if (1..=SNARK_COUNT).contains(&index) {
            Ok(SnarkId(index as u8))
        } else {
            Err(CatalogError::UnknownId(format!("G{index}")))
        }
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> impl Iterator<Item = SnarkId> {
        (1..=SNARK_COUNT as u8).map(SnarkId)
    }

    pub fn graph(self) -> &'static LabeledGraph {
        &catalog()[self.index() - 1]
    }
}

impl fmt::Display for SnarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}", self.0)
    }
}

impl FromStr for SnarkId {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<SnarkId, CatalogError> {
        s.strip_prefix('G')
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|_| !s[1..].starts_with('0'))
            .and_then(|k| SnarkId::new(k).ok())
            .ok_or_else(|| CatalogError::UnknownId(s.to_string()))
    }
}

/// The shipped catalog, parsed once. Vertex `k` of the published 1-based
/// labelling is vertex `k - 1` here.
pub fn catalog() -> &'static [LabeledGraph] {
    static CATALOG: OnceLock<Vec<LabeledGraph>> = OnceLock::new();
    CATALOG
        .get_or_init(|| CATALOG_TEXT.iter().map(|text| parse_graph(text).expect("embedded catalog parses").1).collect())
}

pub fn get_graph(id: SnarkId) -> &'static LabeledGraph {
    id.graph()
}

/// The Petersen graph, used as a 10-vertex reference snark.
pub fn petersen() -> LabeledGraph {
    parse_graph(PETERSEN_TEXT).expect("embedded fixture parses").1
}

/// Finds three edges whose deletion leaves at least two components, each of
/// which still contains a cycle.
///
/// Deleting the three edges at a single vertex never qualifies, since the
/// isolated vertex is acyclic.
pub fn has_reducing_3cut(g: &LabeledGraph) -> Result<Option<[Edge; 3]>, CatalogError> {
    if !g.is_connected() {
        return Err(CatalogError::NotConnected);
    }
    let edges = g.edges();
    let m = edges.len();
    let n = g.vertex_count();
    let mut parent = vec![0usize; n];
    let mut comp_vertices = vec![0usize; n];
    let mut comp_edges = vec![0usize; n];
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                for (v, p) in parent.iter_mut().enumerate() {
                    *p = v;
                }
                let mut components = n;
                for (idx, &(u, v)) in edges.iter().enumerate() {
                    if idx == i || idx == j || idx == k {
                        continue;
                    }
                    let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                    if ru != rv {
                        parent[ru] = rv;
                        components -= 1;
                    }
                }
                if components < 2 {
                    continue;
                }
                comp_vertices.fill(0);
                comp_edges.fill(0);
                for v in 0..n {
                    let r = find(&mut parent, v);
                    comp_vertices[r] += 1;
                }
                for (idx, &(u, _)) in edges.iter().enumerate() {
                    if idx != i && idx != j && idx != k {
                        let r = find(&mut parent, u);
                        comp_edges[r] += 1;
                    }
                }
                let all_cyclic = (0..n).filter(|&r| comp_vertices[r] > 0).all(|r| comp_edges[r] >= comp_vertices[r]);
                if all_cyclic {
                    return Ok(Some([edges[i], edges[j], edges[k]]));
                }
            }
        }
    }
    Ok(None)
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// Everything that decides whether a graph is a non-trivial snark.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SnarkReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub cubic: bool,
    pub connected: bool,
    pub bridgeless: bool,
    /// `None` for forests.
    pub girth: Option<usize>,
    /// Only computed when the graph is cubic, connected and bridgeless.
    pub chromatic_index: Option<u8>,
    pub reducing_3cut: Option<[Edge; 3]>,
    pub is_nontrivial_snark: bool,
}

impl SnarkReport {
    /// The first property that stops this graph being a non-trivial snark.
    pub fn defect(&self) -> Option<SnarkDefect> {
        if !self.cubic {
            Some(SnarkDefect::NotCubic)
        } else if !self.connected {
            Some(SnarkDefect::Disconnected)
        } else if !self.bridgeless {
            Some(SnarkDefect::HasBridge)
        } else if self.chromatic_index != Some(4) {
            Some(SnarkDefect::ThreeEdgeColourable)
        } else if self.girth.is_none_or(|g| g < 5) {
            Some(SnarkDefect::GirthBelowFive)
        } else if self.reducing_3cut.is_some() {
            Some(SnarkDefect::ReducingThreeCut)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SnarkDefect {
    NotCubic,
    Disconnected,
    HasBridge,
    ThreeEdgeColourable,
    GirthBelowFive,
    ReducingThreeCut,
}

impl fmt::Display for SnarkDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SnarkDefect::NotCubic => "not 3-regular",
            SnarkDefect::Disconnected => "not connected",
            SnarkDefect::HasBridge => "has a bridge",
            SnarkDefect::ThreeEdgeColourable => "chromatic index is not 4",
            SnarkDefect::GirthBelowFive => "girth below 5",
            SnarkDefect::ReducingThreeCut => "has a reducing 3-edge cut",
        })
    }
}

pub fn snark_report(g: &LabeledGraph) -> SnarkReport {
    let cubic = g.is_regular(3);
    let connected = g.is_connected();
    let bridgeless = g.find_bridges().is_empty();
    let girth = match g.girth() {
        Girth::Cycle(len) => Some(len),
        Girth::Acyclic => None,
    };
    let chromatic_index = g.chromatic_index_cubic().ok();
    let reducing_3cut = if connected { has_reducing_3cut(g).ok().flatten() } else { None };
    let is_nontrivial_snark = cubic
        && connected
        && bridgeless
        && chromatic_index == Some(4)
        && girth.is_some_and(|len| len >= 5)
        && reducing_3cut.is_none();
    SnarkReport {
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        cubic,
        connected,
        bridgeless,
        girth,
        chromatic_index,
        reducing_3cut,
        is_nontrivial_snark,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum IntegrityFailure {
    WrongCount { expected: usize, found: usize },
    NotASnark { graph: String, defect: SnarkDefect },
    WrongSize { graph: String, vertex_count: usize, edge_count: usize },
    Isomorphic { first: String, second: String },
}

impl fmt::Display for IntegrityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntegrityFailure::WrongCount { expected, found } => {
                write!(f, "expected {expected} graphs, found {found}")
            }
            IntegrityFailure::NotASnark { graph, defect } => write!(f, "{graph}: {defect}"),
            IntegrityFailure::WrongSize { graph, vertex_count, edge_count } => {
                write!(f, "{graph}: {vertex_count} vertices and {edge_count} edges, expected 24 and 36")
            }
            IntegrityFailure::Isomorphic { first, second } => {
                write!(f, "{first} and {second} are isomorphic")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegrityReport {
    pub graphs_checked: usize,
    pub pairs_checked: usize,
    pub reports: Vec<SnarkReport>,
    pub failure: Option<IntegrityFailure>,
}

impl IntegrityReport {
    pub fn pass(&self) -> bool {
        self.failure.is_none()
    }
}

/// Certifies the shipped catalog.
pub fn catalog_integrity() -> IntegrityReport {
    catalog_integrity_of(catalog())
}

/// Certifies a list of graphs labelled `G1, G2, ...` in order: each must be
/// a 24-vertex non-trivial snark and no two may be isomorphic. Stops at the
/// first failure.
pub fn catalog_integrity_of(graphs: &[LabeledGraph]) -> IntegrityReport {
    let label = |i: usize| format!("G{}", i + 1);
    let mut report = IntegrityReport { graphs_checked: 0, pairs_checked: 0, reports: Vec::new(), failure: None };
    if graphs.len() != SNARK_COUNT {
        report.failure = Some(IntegrityFailure::WrongCount { expected: SNARK_COUNT, found: graphs.len() });
        return report;
    }
    for (i, g) in graphs.iter().enumerate() {
        let r = snark_report(g);
        report.graphs_checked += 1;
        let defect = r.defect();
        let size_ok = r.vertex_count == 24 && r.edge_count == 36;
        report.reports.push(r);
        if let Some(defect) = defect {
            report.failure = Some(IntegrityFailure::NotASnark { graph: label(i), defect });
            return report;
        }
        if !size_ok {
            report.failure = Some(IntegrityFailure::WrongSize {
                graph: label(i),
                vertex_count: g.vertex_count(),
                edge_count: g.edge_count(),
            });
            return report;
        }
    }
    for i in 0..graphs.len() {
        for j in i + 1..graphs.len() {
            report.pairs_checked += 1;
            if are_isomorphic(&graphs[i], &graphs[j]) {
                report.failure = Some(IntegrityFailure::Isomorphic { first: label(i), second: label(j) });
                return report;
            }
        }
    }
    report
}

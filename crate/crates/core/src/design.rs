//! Orbit development of base blocks under piecewise-modular host
//! automorphisms, and exact-decomposition verification.
//!
//! A base block is a tuple of host vertices: snark vertex `i` sits at tuple
//! position `i`, so snark edge `{i, j}` lands on host edge
//! `{tuple[i], tuple[j]}`. Applying a map `t` times to every coordinate gives
//! the `t`-th developed block. A record passes when the developed blocks of
//! all its base blocks cover every host edge exactly once.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::catalog::SnarkId;
use crate::graph::{Edge, LabeledGraph};
use crate::host::HostGraph;

/// Violation lists in reports stop after this many entries.
pub const VIOLATION_LIMIT: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("vertex {0} is covered by more than one segment or fixed point")]
    SegmentOverlap(usize),
    #[error("vertex {0} is not covered by any segment or fixed point")]
    DomainNotCovered(usize),
    #[error("segment at {0} has zero length")]
    EmptySegment(usize),
    #[error("vertex {vertex} lies outside the domain 0..{domain}")]
    OutOfDomain { vertex: usize, domain: usize },
}

/// `x -> base + ((x - base + step) mod len)` for `x` in `[base, base + len)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapSegment {
    pub base: usize,
    pub len: usize,
    pub step: i64,
}

impl MapSegment {
    pub fn new(base: usize, len: usize, step: i64) -> MapSegment {
        MapSegment { base, len, step }
    }

    fn order(self) -> u64 {
        let len = self.len as u64;
        let step = self.step.rem_euclid(self.len as i64) as u64;
        len / gcd(step, len)
    }
}

/// A host permutation made of cyclic shifts on disjoint segments plus fixed
/// points.
#[derive(Debug, Clone)]
pub struct PiecewiseModularMap {
    segments: Vec<MapSegment>,
    fixed_points: Vec<usize>,
    table: Vec<u32>,
    order: u64,
}

impl PartialEq for PiecewiseModularMap {
    fn eq(&self, other: &Self) -> bool {
        self.segments == other.segments && self.fixed_points == other.fixed_points && self.table == other.table
    }
}

impl Eq for PiecewiseModularMap {}

impl PiecewiseModularMap {
    /// Builds a map on the host's vertex set.
    pub fn new(
        segments: Vec<MapSegment>,
        fixed_points: Vec<usize>,
        host: &HostGraph,
    ) -> Result<PiecewiseModularMap, MapError> {
        Self::on_domain(segments, fixed_points, host.vertex_count())
    }

    pub fn on_domain(
        segments: Vec<MapSegment>,
        fixed_points: Vec<usize>,
        domain: usize,
    ) -> Result<PiecewiseModularMap, MapError> {
        let mut table = vec![u32::MAX; domain];
        for s in &segments {
            if s.len == 0 {
                return Err(MapError::EmptySegment(s.base));
            }
            if s.base + s.len > domain {
                return Err(MapError::OutOfDomain { vertex: s.base + s.len - 1, domain });
            }
            let step = s.step.rem_euclid(s.len as i64) as usize;
            for (offset, slot) in table[s.base..s.base + s.len].iter_mut().enumerate() {
                if *slot != u32::MAX {
                    return Err(MapError::SegmentOverlap(s.base + offset));
                }
                *slot = (s.base + (offset + step) % s.len) as u32;
            }
        }
        for &x in &fixed_points {
            match table.get(x) {
                None => return Err(MapError::OutOfDomain { vertex: x, domain }),
                Some(&t) if t != u32::MAX => return Err(MapError::SegmentOverlap(x)),
                Some(_) => table[x] = x as u32,
            }
        }
        if let Some(x) = table.iter().position(|&t| t == u32::MAX) {
            return Err(MapError::DomainNotCovered(x));
        }
        let order = segments.iter().fold(1, |acc, s| lcm(acc, s.order()));
        Ok(PiecewiseModularMap { segments, fixed_points, table, order })
    }

    /// The shift `x -> x + step (mod n)` on all of `0..n`.
    pub fn cyclic(n: usize, step: i64) -> PiecewiseModularMap {
        Self::on_domain(vec![MapSegment::new(0, n, step)], Vec::new(), n).expect("single segment covers the domain")
    }

    pub fn segments(&self) -> &[MapSegment] {
        &self.segments
    }

    pub fn fixed_points(&self) -> &[usize] {
        &self.fixed_points
    }

    pub fn domain(&self) -> usize {
        self.table.len()
    }

    /// Least `t > 0` with `apply^t` the identity.
    pub fn order(&self) -> u64 {
        self.order
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x] as usize
    }

    pub fn apply_power(&self, mut x: usize, power: u64) -> usize {
        for _ in 0..power % self.order {
            x = self.apply(x);
        }
        x
    }

    pub fn apply_tuple(&self, tuple: &[usize]) -> Vec<usize> {
        tuple.iter().map(|&x| self.apply(x)).collect()
    }
}

/// `true` iff the map is an automorphism of the host. Parts may be permuted.
pub fn validate_automorphism(map: &PiecewiseModularMap, host: &HostGraph) -> bool {
    let n = host.vertex_count();
    if map.domain() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for x in 0..n {
        let y = map.apply(x);
        if hit[y] {
            return false;
        }
        hit[y] = true;
    }
    if host.is_complete() {
        return true;
    }
    (0..n).all(|u| {
        (u + 1..n)
            .all(|v| host.index_unchecked(u, v).is_some() == host.index_unchecked(map.apply(u), map.apply(v)).is_some())
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlacementError {
    #[error("block has {found} vertices, the snark has {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("vertex {0} appears twice in the block")]
    RepeatedVertex(usize),
    #[error("vertex {0} is not in the host")]
    UnknownVertex(usize),
    #[error("{{{0}, {1}}} is not an edge of the host")]
    NotAHostEdge(usize, usize),
}

fn check_tuple(graph: &LabeledGraph, tuple: &[usize], host: &HostGraph) -> Result<(), PlacementError> {
    if tuple.len() != graph.vertex_count() {
        return Err(PlacementError::WrongLength { expected: graph.vertex_count(), found: tuple.len() });
    }
    let mut seen = vec![false; host.vertex_count()];
    for &x in tuple {
        match seen.get_mut(x) {
            None => return Err(PlacementError::UnknownVertex(x)),
            Some(true) => return Err(PlacementError::RepeatedVertex(x)),
            Some(flag) => *flag = true,
        }
    }
    Ok(())
}

/// Maps each snark edge `{i, j}` to the host edge `{tuple[i], tuple[j]}`.
pub fn place_block(graph: &LabeledGraph, tuple: &[usize], host: &HostGraph) -> Result<Vec<Edge>, PlacementError> {
    check_tuple(graph, tuple, host)?;
    graph
        .edges()
        .iter()
        .map(|&(i, j)| {
            let (a, b) = (tuple[i], tuple[j]);
            match host.index_unchecked(a, b) {
                Some(_) => Ok((a.min(b), a.max(b))),
                None => Err(PlacementError::NotAHostEdge(a.min(b), a.max(b))),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DevelopError {
    #[error("map is not an automorphism of the host")]
    NotAnAutomorphism,
    #[error("developed block {power}: {source}")]
    Placement { power: u64, source: PlacementError },
}

/// Places the tuple and each of its `order - 1` images under the map.
pub fn develop_orbit(
    tuple: &[usize],
    map: &PiecewiseModularMap,
    graph: &LabeledGraph,
    host: &HostGraph,
) -> Result<Vec<Vec<Edge>>, DevelopError> {
    if !validate_automorphism(map, host) {
        return Err(DevelopError::NotAnAutomorphism);
    }
    let mut current = tuple.to_vec();
    let mut blocks = Vec::with_capacity(map.order() as usize);
    for power in 0..map.order() {
        let placed = place_block(graph, &current, host).map_err(|source| DevelopError::Placement { power, source })?;
        blocks.push(placed);
        current = map.apply_tuple(&current);
    }
    Ok(blocks)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedMap {
    pub name: String,
    pub map: PiecewiseModularMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseBlock {
    pub tuple: Vec<usize>,
    /// Index into the owning record's `maps`.
    pub map: usize,
}

/// One decomposition: a snark, a host, and base blocks with their actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignRecord {
    pub id: String,
    pub snark: SnarkId,
    pub host: HostGraph,
    pub maps: Vec<NamedMap>,
    pub blocks: Vec<BaseBlock>,
}

impl DesignRecord {
    /// Number of blocks the record develops into, or `None` if a block
    /// references a missing map.
    pub fn developed_block_count(&self) -> Option<u64> {
        self.blocks.iter().map(|b| self.maps.get(b.map).map(|m| m.map.order())).sum()
    }

    pub fn map_of(&self, block: &BaseBlock) -> Option<&PiecewiseModularMap> {
        self.maps.get(block.map).map(|m| &m.map)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub edge: Edge,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub pass: bool,
    pub developed_block_count: u64,
    pub host_edge_count: usize,
    /// multiplicity -> number of host edges covered that many times
    pub coverage_histogram: BTreeMap<u32, usize>,
    /// First [`VIOLATION_LIMIT`] edges with multiplicity other than one.
    pub violations: Vec<Violation>,
    pub violation_total: usize,
    /// Structural problem (balance, map, placement), if any.
    pub failure: Option<String>,
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::formats::write_report_human(f, self)
    }
}

/// Verifies a record against its catalog snark.
pub fn verify_design(record: &DesignRecord) -> VerificationReport {
    verify_design_with(record, record.snark.graph())
}

/// Verifies a record against an explicit graph in place of its catalog snark.
pub fn verify_design_with(record: &DesignRecord, graph: &LabeledGraph) -> VerificationReport {
    let host = &record.host;
    let mut report = VerificationReport {
        id: record.id.clone(),
        pass: false,
        developed_block_count: 0,
        host_edge_count: host.edge_count(),
        coverage_histogram: BTreeMap::new(),
        violations: Vec::new(),
        violation_total: 0,
        failure: None,
    };

    let Some(developed) = record.developed_block_count() else {
        report.failure = Some("block references an undeclared map".into());
        return report;
    };
    let covered = developed * graph.edge_count() as u64;
    if covered != host.edge_count() as u64 {
        report.failure = Some(format!(
            "edge-count balance fails: {developed} blocks x {} edges = {covered}, host has {}",
            graph.edge_count(),
            host.edge_count()
        ));
        return report;
    }
    for named in &record.maps {
        if !validate_automorphism(&named.map, host) {
            report.failure = Some(format!("map `{}` is not an automorphism of the host", named.name));
            return report;
        }
    }

    let mut coverage = vec![0u32; host.edge_count()];
    for (b, block) in record.blocks.iter().enumerate() {
        let map = &record.maps[block.map].map;
        if let Err(e) = check_tuple(graph, &block.tuple, host) {
            report.failure.get_or_insert_with(|| format!("block {}: {e}", b + 1));
            continue;
        }
        let mut current = block.tuple.clone();
        for power in 0..map.order() {
            for &(i, j) in graph.edges() {
                let (x, y) = (current[i], current[j]);
                match host.index_unchecked(x, y) {
                    Some(idx) => coverage[idx] += 1,
                    None => {
                        report.failure.get_or_insert_with(|| {
                            format!(
                                "block {} power {power}: {}",
                                b + 1,
                                PlacementError::NotAHostEdge(x.min(y), x.max(y))
                            )
                        });
                    }
                }
            }
            report.developed_block_count += 1;
            for x in current.iter_mut() {
                *x = map.apply(*x);
            }
        }
    }

    for (idx, &mult) in coverage.iter().enumerate() {
        *report.coverage_histogram.entry(mult).or_default() += 1;
        if mult != 1 {
            report.violation_total += 1;
            if report.violations.len() < VIOLATION_LIMIT {
                report.violations.push(Violation { edge: host.edge_at(idx).expect("dense index"), multiplicity: mult });
            }
        }
    }
    report.pass = report.failure.is_none() && report.violation_total == 0;
    report
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

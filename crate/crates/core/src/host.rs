//! Decomposition hosts: complete graphs (optionally with a point at infinity)
//! and complete multipartite graphs with an explicit part layout.
//!
//! Every host has a dense edge numbering `0..edge_count()` so coverage can be
//! tracked in a flat array.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::Edge;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HostError {
    #[error("malformed layout: {0}")]
    MalformedLayout(String),
    #[error("{{{0}, {1}}} is not an edge of the host")]
    NotAHostEdge(usize, usize),
    #[error("vertex {0} is not in the host")]
    UnknownVertex(usize),
    #[error("unknown layout id `{0}`")]
    UnknownLayout(String),
}

/// How the vertices `0..N` of a multipartite host are split into parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionLayout {
    /// `0..len` split by residue modulo `modulus`.
    ResidueClasses { modulus: usize, len: usize },
    /// `0..prefix_len` split by residue modulo `stripes`, then one extra part
    /// holding the `tail_len` vertices after the prefix.
    StripedPlusTail { stripes: usize, prefix_len: usize, tail_len: usize },
    /// Explicit runs of consecutive vertices.
    Segments(Vec<LayoutSegment>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayoutSegment {
    pub base: usize,
    pub len: usize,
    pub part: usize,
}

/// The five multipartite layouts used by the shipped decompositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LayoutId {
    K12x3,
    K24_24_15,
    K72_72_63,
    K24x4,
    K24x3_21,
}

impl LayoutId {
    pub const ALL: [LayoutId; 5] =
        [LayoutId::K12x3, LayoutId::K24_24_15, LayoutId::K72_72_63, LayoutId::K24x4, LayoutId::K24x3_21];

    pub fn as_str(self) -> &'static str {
        match self {
            LayoutId::K12x3 => "k12x3",
            LayoutId::K24_24_15 => "k24-24-15",
            LayoutId::K72_72_63 => "k72-72-63",
            LayoutId::K24x4 => "k24x4",
            LayoutId::K24x3_21 => "k24x3-21",
        }
    }

    pub fn layout(self) -> PartitionLayout {
        match self {
            LayoutId::K12x3 => PartitionLayout::ResidueClasses { modulus: 3, len: 36 },
            LayoutId::K24_24_15 => PartitionLayout::StripedPlusTail { stripes: 2, prefix_len: 48, tail_len: 15 },
            LayoutId::K72_72_63 => PartitionLayout::StripedPlusTail { stripes: 2, prefix_len: 144, tail_len: 63 },
            LayoutId::K24x4 => PartitionLayout::ResidueClasses { modulus: 4, len: 96 },
            LayoutId::K24x3_21 => PartitionLayout::StripedPlusTail { stripes: 3, prefix_len: 72, tail_len: 21 },
        }
    }

    /// Declared part sizes, in part-index order.
    pub fn signature(self) -> &'static [usize] {
        match self {
            LayoutId::K12x3 => &[12, 12, 12],
            LayoutId::K24_24_15 => &[24, 24, 15],
            LayoutId::K72_72_63 => &[72, 72, 63],
            LayoutId::K24x4 => &[24, 24, 24, 24],
            LayoutId::K24x3_21 => &[24, 24, 24, 21],
        }
    }
}

impl fmt::Display for LayoutId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LayoutId {
    type Err = HostError;

    fn from_str(s: &str) -> Result<Self, HostError> {
        LayoutId::ALL.into_iter().find(|id| id.as_str() == s).ok_or_else(|| HostError::UnknownLayout(s.to_string()))
    }
}

/// How a host was declared; this is what design files record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HostDecl {
    Complete { n: usize, infinity: bool },
    Named(LayoutId),
    Custom(PartitionLayout),
}

impl fmt::Display for HostDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HostDecl::Complete { n, infinity: false } => write!(f, "complete {n}"),
            HostDecl::Complete { n, infinity: true } => write!(f, "complete {n} inf"),
            HostDecl::Named(id) => write!(f, "multipartite {id}"),
            HostDecl::Custom(layout) => {
                f.write_str("multipartite segments ")?;
                let segments = layout_segments(layout);
                for (i, s) in segments.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "({},{},{})", s.base, s.len, s.part)?;
                }
                Ok(())
            }
        }
    }
}

fn layout_segments(layout: &PartitionLayout) -> Vec<LayoutSegment> {
    match layout {
        PartitionLayout::Segments(s) => s.clone(),
        other => {
            let parts = assign_parts(other).unwrap_or_default();
            let mut out: Vec<LayoutSegment> = Vec::new();
            for (v, &p) in parts.iter().enumerate() {
                match out.last_mut() {
                    Some(last) if last.part == p && last.base + last.len == v => last.len += 1,
                    _ => out.push(LayoutSegment { base: v, len: 1, part: p }),
                }
            }
            out
        }
    }
}

fn assign_parts(layout: &PartitionLayout) -> Result<Vec<usize>, HostError> {
    let malformed = |m: &str| Err(HostError::MalformedLayout(m.to_string()));
    match *layout {
        PartitionLayout::ResidueClasses { modulus, len } => {
            if modulus < 2 || len < modulus {
                return malformed("residue layout needs modulus >= 2 and len >= modulus");
            }
            Ok((0..len).map(|v| v % modulus).collect())
        }
        PartitionLayout::StripedPlusTail { stripes, prefix_len, tail_len } => {
            if stripes < 1 || prefix_len < stripes || tail_len == 0 {
                return malformed("striped layout needs stripes >= 1, prefix >= stripes, nonempty tail");
            }
            Ok((0..prefix_len).map(|v| v % stripes).chain((0..tail_len).map(|_| stripes)).collect())
        }
        PartitionLayout::Segments(ref segments) => {
            let total: usize = segments.iter().map(|s| s.len).sum();
            let mut parts = vec![usize::MAX; total];
            for s in segments {
                if s.len == 0 {
                    return malformed("empty segment");
                }
                for v in s.base..s.base + s.len {
                    match parts.get_mut(v) {
                        Some(slot) if *slot == usize::MAX => *slot = s.part,
                        Some(_) => return malformed("segments overlap"),
                        None => return malformed("segments leave a gap"),
                    }
                }
            }
            let part_count = segments.iter().map(|s| s.part).max().map_or(0, |m| m + 1);
            if (0..part_count).any(|p| !parts.contains(&p)) {
                return malformed("part indices must be contiguous from 0");
            }
            Ok(parts)
        }
    }
}

/// A complete or complete multipartite host graph.
#[derive(Debug, Clone)]
pub struct HostGraph {
    decl: HostDecl,
    vertex_count: usize,
    /// Part per vertex; empty for complete hosts.
    part_of: Vec<usize>,
    part_sizes: Vec<usize>,
    edges: Vec<(u32, u32)>,
    /// `vertex_count^2` table for multipartite hosts, `u32::MAX` off the edge set.
    lookup: Vec<u32>,
}

impl PartialEq for HostGraph {
    fn eq(&self, other: &Self) -> bool {
        self.decl == other.decl
    }
}

impl Eq for HostGraph {}

impl HostGraph {
    /// `K_n`; with `infinity` the domain is `Z_{n-1}` plus a point at infinity
    /// stored as vertex `n - 1`.
    pub fn complete(n: usize, infinity: bool) -> Result<HostGraph, HostError> {
        if n == 0 || (infinity && n < 2) {
            return Err(HostError::MalformedLayout(format!("complete host needs n >= {}", 1 + infinity as usize)));
        }
        let mut edges = Vec::with_capacity(n * (n - 1) / 2);
        for v in 1..n as u32 {
            for u in 0..v {
                edges.push((u, v));
            }
        }
        Ok(HostGraph {
            decl: HostDecl::Complete { n, infinity },
            vertex_count: n,
            part_of: Vec::new(),
            part_sizes: vec![1; n],
            edges,
            lookup: Vec::new(),
        })
    }

    pub fn multipartite(layout: PartitionLayout) -> Result<HostGraph, HostError> {
        Self::build_multipartite(HostDecl::Custom(layout.clone()), &layout)
    }

    /// One of the five named layouts; part sizes are checked against its signature.
    pub fn named(id: LayoutId) -> HostGraph {
        let host = Self::build_multipartite(HostDecl::Named(id), &id.layout()).expect("named layouts are well formed");
        assert_eq!(host.part_sizes, id.signature(), "layout {id} signature");
        host
    }

    pub fn from_decl(decl: &HostDecl) -> Result<HostGraph, HostError> {
        match decl {
            HostDecl::Complete { n, infinity } => Self::complete(*n, *infinity),
            HostDecl::Named(id) => Ok(Self::named(*id)),
            HostDecl::Custom(layout) => Self::multipartite(layout.clone()),
        }
    }

    fn build_multipartite(decl: HostDecl, layout: &PartitionLayout) -> Result<HostGraph, HostError> {
        let part_of = assign_parts(layout)?;
        let n = part_of.len();
        let part_count = part_of.iter().max().map_or(0, |m| m + 1);
        if part_count < 2 {
            return Err(HostError::MalformedLayout("need at least two parts".into()));
        }
        let mut part_sizes = vec![0; part_count];
        for &p in &part_of {
            part_sizes[p] += 1;
        }
        let mut edges = Vec::new();
        let mut lookup = vec![u32::MAX; n * n];
        for v in 1..n {
            for u in 0..v {
                if part_of[u] != part_of[v] {
                    let idx = edges.len() as u32;
                    edges.push((u as u32, v as u32));
                    lookup[u * n + v] = idx;
                    lookup[v * n + u] = idx;
                }
            }
        }
        Ok(HostGraph { decl, vertex_count: n, part_of, part_sizes, edges, lookup })
    }

    pub fn decl(&self) -> &HostDecl {
        &self.decl
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_complete(&self) -> bool {
        self.part_of.is_empty()
    }

    /// The vertex standing for infinity, if this host has one.
    pub fn infinity(&self) -> Option<usize> {
        match self.decl {
            HostDecl::Complete { n, infinity: true } => Some(n - 1),
            _ => None,
        }
    }

    pub fn part_sizes(&self) -> &[usize] {
        &self.part_sizes
    }

    pub fn part(&self, v: usize) -> Option<usize> {
        if v >= self.vertex_count {
            None
        } else if self.is_complete() {
            Some(v)
        } else {
            Some(self.part_of[v])
        }
    }

    pub fn contains_edge(&self, u: usize, v: usize) -> Result<bool, HostError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(u != v && (self.is_complete() || self.part_of[u] != self.part_of[v]))
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Result<usize, HostError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.index_unchecked(u, v).ok_or(HostError::NotAHostEdge(u.min(v), u.max(v)))
    }

    /// Edge index for in-range vertices; `None` for non-edges.
    #[inline]
    pub(crate) fn index_unchecked(&self, u: usize, v: usize) -> Option<usize> {
        if u == v {
            return None;
        }
        if self.is_complete() {
            let (lo, hi) = (u.min(v), u.max(v));
            Some(hi * (hi - 1) / 2 + lo)
        } else {
            let idx = self.lookup[u * self.vertex_count + v];
            (idx != u32::MAX).then_some(idx as usize)
        }
    }

    pub fn edge_at(&self, index: usize) -> Option<Edge> {
        self.edges.get(index).map(|&(u, v)| (u as usize, v as usize))
    }

    fn check_vertex(&self, v: usize) -> Result<(), HostError> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(HostError::UnknownVertex(v))
        }
    }

    /// Renders a vertex the way design files write it (`inf` for infinity).
    pub fn vertex_label(&self, v: usize) -> String {
        if Some(v) == self.infinity() {
            "inf".to_string()
        } else {
            v.to_string()
        }
    }
}

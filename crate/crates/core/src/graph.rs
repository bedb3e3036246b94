//! Simple undirected graphs and the structural predicates used to certify
//! snarks: regularity, connectivity, bridges, girth, perfect matchings and
//! the class-1/class-2 decision for cubic graphs.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// An unordered vertex pair, always stored as `(min, max)`.
pub type Edge = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("perfect matchings need an even vertex count, got {0}")]
    OddVertexCount(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
}

/// A simple graph on `0..vertex_count` with a sorted, normalized edge list.
///
/// Immutable once built; adjacency lists are kept sorted.
#[derive(Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LabeledGraph").field("vertex_count", &self.vertex_count).field("edges", &self.edges).finish()
    }
}

/// Outcome of a girth computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Girth {
    Cycle(usize),
    Acyclic,
}

impl Girth {
    pub fn length(self) -> Option<usize> {
        match self {
            Girth::Cycle(len) => Some(len),
            Girth::Acyclic => None,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Cycle(len) => write!(f, "{len}"),
            Girth::Acyclic => f.write_str("acyclic"),
        }
    }
}

impl LabeledGraph {
    /// Builds a graph, normalizing every pair to `(min, max)` and sorting.
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut normalized = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(GraphError::VertexOutOfRange { vertex: w, vertex_count });
                }
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in &normalized {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(LabeledGraph { vertex_count, edges: normalized, adjacency })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn degree_profile(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn is_regular(&self, degree: usize) -> bool {
        self.adjacency.iter().all(|list| list.len() == degree)
    }

    /// Returns a copy with the listed edges removed. Missing edges are ignored.
    pub fn without_edges(&self, removed: &[Edge]) -> LabeledGraph {
        let keep = self.edges.iter().copied().filter(|e| !removed.iter().any(|r| (r.0.min(r.1), r.0.max(r.1)) == *e));
        LabeledGraph::new(self.vertex_count, keep).expect("subgraph of a valid graph")
    }

    /// Relabels vertex `v` as `perm[v]`. `perm` must be a permutation.
    pub fn relabeled(&self, perm: &[usize]) -> LabeledGraph {
        assert_eq!(perm.len(), self.vertex_count, "permutation length");
        LabeledGraph::new(self.vertex_count, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
            .expect("relabeling preserves simplicity")
    }

    /// Component label per vertex (labels are `0..count`) and the count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.vertex_count];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for root in 0..self.vertex_count {
            if label[root] != usize::MAX {
                continue;
            }
            label[root] = count;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adjacency[u] {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.components().1 <= 1
    }

    /// Bridges via Tarjan low-links, iterative so deep paths cannot blow the stack.
    pub fn find_bridges(&self) -> Vec<Edge> {
        let n = self.vertex_count;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut bridges = Vec::new();
        let mut timer = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            // (vertex, parent, next neighbor position)
            let mut stack = vec![(root, usize::MAX, 0usize)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(frame) = stack.last_mut() {
                let (u, parent, pos) = *frame;
                if pos < self.adjacency[u].len() {
                    frame.2 += 1;
                    let w = self.adjacency[u][pos];
                    if w == parent {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, u, 0));
                    } else {
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[u]);
                        if low[u] > disc[parent] {
                            bridges.push((parent.min(u), parent.max(u)));
                        }
                    }
                }
            }
        }
        bridges.sort_unstable();
        bridges
    }

    /// Shortest cycle length by breadth-first search from every root.
    pub fn girth(&self) -> Girth {
        let n = self.vertex_count;
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            dist.fill(usize::MAX);
            dist[root] = 0;
            parent[root] = usize::MAX;
            queue.clear();
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                if 2 * dist[u] >= best {
                    break;
                }
                for &w in &self.adjacency[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        best = best.min(dist[u] + dist[w] + 1);
                    }
                }
            }
        }
        if best == usize::MAX {
            Girth::Acyclic
        } else {
            Girth::Cycle(best)
        }
    }

    /// All-pairs shortest path lengths; `usize::MAX` marks unreachable pairs.
    pub fn distance_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count;
        let mut out = vec![vec![usize::MAX; n]; n];
        let mut queue = VecDeque::new();
        for (root, row) in out.iter_mut().enumerate() {
            row[root] = 0;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adjacency[u] {
                    if row[w] == usize::MAX {
                        row[w] = row[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        out
    }

    /// Lazily enumerates every perfect matching exactly once.
    pub fn perfect_matchings(&self) -> Result<PerfectMatchings<'_>, GraphError> {
        if !self.vertex_count.is_multiple_of(2) {
            return Err(GraphError::OddVertexCount(self.vertex_count));
        }
        Ok(PerfectMatchings::new(self))
    }

    /// Chromatic index of a connected bridgeless cubic graph.
    ///
    /// A cubic graph is 3-edge-colourable exactly when some perfect matching
    /// leaves a 2-factor made only of even cycles; Vizing bounds the answer
    /// to 3 or 4.
    pub fn chromatic_index_cubic(&self) -> Result<u8, GraphError> {
        if !self.is_regular(3) {
            return Err(GraphError::PreconditionViolated("graph is not cubic"));
        }
        if !self.is_connected() {
            return Err(GraphError::PreconditionViolated("graph is not connected"));
        }
        if !self.find_bridges().is_empty() {
            return Err(GraphError::PreconditionViolated("graph has a bridge"));
        }
        for matching in self.perfect_matchings()? {
            if self.complement_has_only_even_cycles(&matching) {
                return Ok(3);
            }
        }
        Ok(4)
    }

    fn complement_has_only_even_cycles(&self, matching: &[Edge]) -> bool {
        let n = self.vertex_count;
        let mut partner = vec![usize::MAX; n];
        for &(u, v) in matching {
            partner[u] = v;
            partner[v] = u;
        }
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut prev = usize::MAX;
            let mut cur = start;
            loop {
                seen[cur] = true;
                len += 1;
                let next = self.adjacency[cur]
                    .iter()
                    .copied()
                    .find(|&w| w != partner[cur] && w != prev)
                    .expect("2-regular remainder");
                prev = cur;
                cur = next;
                if cur == start {
                    break;
                }
            }
            if len % 2 != 0 {
                return false;
            }
        }
        true
    }
}

/// Iterator returned by [`LabeledGraph::perfect_matchings`].
///
/// Backtracks over the lowest-index unmatched vertex, so each matching is
/// produced once. Matchings are returned as sorted edge lists.
pub struct PerfectMatchings<'a> {
    graph: &'a LabeledGraph,
    matched: Vec<bool>,
    frames: Vec<Frame>,
    done: bool,
}

struct Frame {
    vertex: usize,
    next: usize,
    partner: Option<usize>,
}

impl<'a> PerfectMatchings<'a> {
    fn new(graph: &'a LabeledGraph) -> Self {
        let frames =
            if graph.vertex_count == 0 { Vec::new() } else { vec![Frame { vertex: 0, next: 0, partner: None }] };
        PerfectMatchings { graph, matched: vec![false; graph.vertex_count], frames, done: false }
    }

    fn current(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self
            .frames
            .iter()
            .map(|f| {
                let w = f.partner.expect("every frame holds a partner");
                (f.vertex.min(w), f.vertex.max(w))
            })
            .collect();
        out.sort_unstable();
        out
    }
}

impl Iterator for PerfectMatchings<'_> {
    type Item = Vec<Edge>;

    fn next(&mut self) -> Option<Vec<Edge>> {
        if self.done {
            return None;
        }
        if self.graph.vertex_count == 0 {
            self.done = true;
            return Some(Vec::new());
        }
        loop {
            let Some(top) = self.frames.last_mut() else {
                self.done = true;
                return None;
            };
            if let Some(w) = top.partner.take() {
                self.matched[top.vertex] = false;
                self.matched[w] = false;
            }
            let adjacency = &self.graph.adjacency[top.vertex];
            while top.next < adjacency.len() {
                let w = adjacency[top.next];
                top.next += 1;
                if !self.matched[w] {
                    top.partner = Some(w);
                    break;
                }
            }
            let Some(w) = top.partner else {
                self.frames.pop();
                continue;
            };
            let v = top.vertex;
            self.matched[v] = true;
            self.matched[w] = true;
            match (v + 1..self.graph.vertex_count).find(|&u| !self.matched[u]) {
                None => return Some(self.current()),
                Some(u) => self.frames.push(Frame { vertex: u, next: 0, partner: None }),
            }
        }
    }
}

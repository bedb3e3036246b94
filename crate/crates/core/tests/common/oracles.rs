//! Brute-force reference implementations, deliberately naive.

use rand::seq::SliceRandom;
use rand::Rng;
use snark_designs::graph::{Edge, LabeledGraph};

fn adjacency(g: &LabeledGraph) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    adj
}

/// Component count by repeated depth-first search on an adjacency matrix.
pub fn component_count(n: usize, edges: &[Edge]) -> usize {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    count
}

pub fn bridges_by_removal(g: &LabeledGraph) -> Vec<Edge> {
    let n = g.vertex_count();
    let base = component_count(n, g.edges());
    g.edges()
        .iter()
        .filter(|e| {
            let rest: Vec<Edge> = g.edges().iter().copied().filter(|f| f != *e).collect();
            component_count(n, &rest) > base
        })
        .copied()
        .collect()
}

/// Length of a shortest cycle, found by depth-first search for a closed
/// simple walk of each length in turn.
pub fn girth_by_cycle_search(g: &LabeledGraph) -> Option<usize> {
    let n = g.vertex_count();
    let adj = adjacency(g);
    fn walk(adj: &[Vec<bool>], start: usize, at: usize, left: usize, on_path: &mut [bool]) -> bool {
        if left == 1 {
            return adj[at][start];
        }
        for next in 0..adj.len() {
            // cycles are found from their smallest vertex
            if adj[at][next] && !on_path[next] && next > start {
                on_path[next] = true;
                let hit = walk(adj, start, next, left - 1, on_path);
                on_path[next] = false;
                if hit {
                    return true;
                }
            }
        }
        false
    }
    (3..=n).find(|&len| {
        (0..n).any(|s| {
            let mut on_path = vec![false; n];
            on_path[s] = true;
            walk(&adj, s, s, len, &mut on_path)
        })
    })
}

/// Proper 3-edge-colouring by plain backtracking over the edge list.
pub fn three_edge_colourable(g: &LabeledGraph) -> bool {
    let edges = g.edges();
    let mut colour = vec![u8::MAX; edges.len()];
    fn go(edges: &[Edge], colour: &mut [u8], i: usize) -> bool {
        if i == edges.len() {
            return true;
        }
        let (u, v) = edges[i];
        for c in 0..3 {
            let clash = (0..i).any(|j| {
                colour[j] == c && {
                    let (a, b) = edges[j];
                    a == u || a == v || b == u || b == v
                }
            });
            if !clash {
                colour[i] = c;
                if go(edges, colour, i + 1) {
                    return true;
                }
            }
        }
        false
    }
    go(edges, &mut colour, 0)
}

/// Tries every vertex permutation.
pub fn isomorphic_by_permutation(g: &LabeledGraph, h: &LabeledGraph) -> bool {
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    fn next_permutation(p: &mut [usize]) -> bool {
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }
    loop {
        if g.edges().iter().all(|&(u, v)| h.has_edge(perm[u], perm[v])) {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

/// Every 3-edge subset whose removal leaves at least two components, each
/// with at least as many edges as vertices.
pub fn reducing_triples(g: &LabeledGraph) -> Vec<[Edge; 3]> {
    let n = g.vertex_count();
    let edges = g.edges();
    let m = edges.len();
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let rest: Vec<Edge> = (0..m).filter(|&x| x != i && x != j && x != k).map(|x| edges[x]).collect();
                let label = component_labels(n, &rest);
                let parts = label.iter().max().map_or(0, |&l| l + 1);
                if parts < 2 {
                    continue;
                }
                let cyclic = (0..parts).all(|p| {
                    let verts = label.iter().filter(|&&l| l == p).count();
                    let es = rest.iter().filter(|&&(u, _)| label[u] == p).count();
                    es >= verts
                });
                if cyclic {
                    out.push([edges[i], edges[j], edges[k]]);
                }
            }
        }
    }
    out
}

fn component_labels(n: usize, edges: &[Edge]) -> Vec<usize> {
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        let mut changed = true;
        while changed {
            changed = false;
            for &(u, v) in edges {
                if (label[u] == next) != (label[v] == next) {
                    label[u] = next;
                    label[v] = next;
                    changed = true;
                }
            }
        }
        next += 1;
    }
    label
}

/// Random simple cubic graph on `n` vertices from the pairing model, or
/// `None` when the pairing produced a loop or a repeated edge.
pub fn random_cubic<R: Rng>(n: usize, rng: &mut R) -> Option<LabeledGraph> {
    let mut points: Vec<usize> = (0..3 * n).map(|p| p / 3).collect();
    points.shuffle(rng);
    let edges: Vec<Edge> = points.chunks(2).map(|p| (p[0].min(p[1]), p[0].max(p[1]))).collect();
    LabeledGraph::new(n, edges).ok()
}

pub fn random_graph<R: Rng>(n: usize, density: f64, rng: &mut R) -> LabeledGraph {
    let edges: Vec<Edge> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.random_bool(density)).collect();
    LabeledGraph::new(n, edges).unwrap()
}

pub fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

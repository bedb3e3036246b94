//! Graph isomorphism by distance-invariant colour refinement and backtracking.
//!
//! Cubic graphs all share one degree sequence, so vertices are first coloured
//! by their distance profile (how many vertices sit at each distance) and the
//! colouring is refined jointly over both graphs with distance-weighted colour
//! multisets. The surviving classes bound a backtracking search that demands
//! every pairwise distance be preserved.

use std::collections::BTreeMap;

use crate::graph::LabeledGraph;

/// `true` iff an edge-preserving vertex bijection exists.
pub fn are_isomorphic(g: &LabeledGraph, h: &LabeledGraph) -> bool {
    find_isomorphism(g, h).is_some()
}

/// Returns `perm` with `perm[v]` the image in `h` of vertex `v` of `g`.
pub fn find_isomorphism(g: &LabeledGraph, h: &LabeledGraph) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    let mut dg = g.degree_profile();
    let mut dh = h.degree_profile();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return None;
    }

    let dist_g = g.distance_matrix();
    let dist_h = h.distance_matrix();
    let (col_g, col_h) = refine(&dist_g, &dist_h);
    let mut hist_g = col_g.clone();
    let mut hist_h = col_h.clone();
    hist_g.sort_unstable();
    hist_h.sort_unstable();
    if hist_g != hist_h {
        return None;
    }

    let order = search_order(g, &col_g);
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(0, &order, &col_g, &col_h, &dist_g, &dist_h, &mut image, &mut used) {
        Some(image)
    } else {
        None
    }
}

fn refine(dist_g: &[Vec<usize>], dist_h: &[Vec<usize>]) -> (Vec<usize>, Vec<usize>) {
    let n = dist_g.len();
    let profile = |dist: &[Vec<usize>], v: usize| {
        let mut counts = vec![0usize; n + 1];
        for &d in &dist[v] {
            counts[d.min(n)] += 1;
        }
        counts
    };
    let mut palette: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let intern = |key: Vec<usize>, palette: &mut BTreeMap<Vec<usize>, usize>| {
        let next = palette.len();
        *palette.entry(key).or_insert(next)
    };
    let mut col_g: Vec<usize> = (0..n).map(|v| intern(profile(dist_g, v), &mut palette)).collect();
    let mut col_h: Vec<usize> = (0..n).map(|v| intern(profile(dist_h, v), &mut palette)).collect();
    let mut classes = class_count(&col_g, &col_h);

    loop {
        let signature = |dist: &[Vec<usize>], col: &[usize], v: usize| {
            let mut pairs: Vec<(usize, usize)> = (0..n).map(|x| (dist[v][x], col[x])).collect();
            pairs.sort_unstable();
            let mut key = vec![col[v]];
            key.extend(pairs.into_iter().flat_map(|(d, c)| [d, c]));
            key
        };
        let mut next_palette = BTreeMap::new();
        let new_g: Vec<usize> = (0..n).map(|v| intern(signature(dist_g, &col_g, v), &mut next_palette)).collect();
        let new_h: Vec<usize> = (0..n).map(|v| intern(signature(dist_h, &col_h, v), &mut next_palette)).collect();
        let new_classes = class_count(&new_g, &new_h);
        col_g = new_g;
        col_h = new_h;
        if new_classes == classes {
            break;
        }
        classes = new_classes;
    }
    (col_g, col_h)
}

fn class_count(a: &[usize], b: &[usize]) -> usize {
    let mut all: Vec<usize> = a.iter().chain(b).copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

// Start in the rarest colour class, then grow along edges so each new vertex
// is constrained by already-placed neighbours.
fn search_order(g: &LabeledGraph, col: &[usize]) -> Vec<usize> {
    let n = g.vertex_count();
    let mut class_size: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in col {
        *class_size.entry(c).or_default() += 1;
    }
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let pick = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| {
                let attached = g.neighbors(v).iter().filter(|&&w| placed[w]).count();
                (std::cmp::Reverse(attached), class_size[&col[v]], v)
            })
            .expect("unplaced vertex remains");
        placed[pick] = true;
        order.push(pick);
    }
    order
}

#[allow(clippy::too_many_arguments)]
fn extend(
    depth: usize,
    order: &[usize],
    col_g: &[usize],
    col_h: &[usize],
    dist_g: &[Vec<usize>],
    dist_h: &[Vec<usize>],
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for cand in 0..col_h.len() {
        if used[cand] || col_h[cand] != col_g[v] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&x| dist_g[v][x] == dist_h[cand][image[x]]);
        if !consistent {
            continue;
        }
        image[v] = cand;
        used[cand] = true;
        if extend(depth + 1, order, col_g, col_h, dist_g, dist_h, image, used) {
            return true;
        }
        used[cand] = false;
        image[v] = usize::MAX;
    }
    false
}

//! Branching regions from a vertex separator of the target.
//!
//! If removing a vertex set `W` disconnects the vertex graph (two vertices
//! adjacent when some target face contains both), every part touching a
//! face outside `W` stays inside one component. Branching on the faces
//! inside `W` first makes the rest of the search split into independent
//! components early.

use std::collections::{BTreeMap, VecDeque};

use super::Target;
use crate::complex::Vertex;

/// Vertex graphs above this size are not searched for separators.
const MAX_VERTICES: usize = 256;

/// Region of each target face (0 for faces inside the separator, then one
/// region per component), or `None` when no useful separator exists.
pub(crate) fn separator_regions(target: &Target) -> Option<Vec<u32>> {
    let mut ids: BTreeMap<Vertex, usize> = BTreeMap::new();
    for f in target.faces() {
        for &v in f.vertices() {
            let n = ids.len();
            ids.entry(v).or_insert(n);
        }
    }
    let n = ids.len();
    if !(4..=MAX_VERTICES).contains(&n) {
        return None;
    }
    let mut adj = vec![vec![false; n]; n];
    for f in target.faces() {
        for (i, a) in f.vertices().iter().enumerate() {
            for b in &f.vertices()[i + 1..] {
                adj[ids[a]][ids[b]] = true;
                adj[ids[b]][ids[a]] = true;
            }
        }
    }
    let vertex_of_face =
        |f: &crate::complex::Face| -> Vec<usize> { f.vertices().iter().map(|v| ids[v]).collect() };

    let mut best: Option<(usize, usize, Vec<usize>)> = None;
    for s in 0..n {
        for t in s + 1..n {
            if adj[s][t] {
                continue;
            }
            let cut = min_vertex_cut(&adj, s, t);
            let comp = components(&adj, &cut);
            let mut sizes = vec![0usize; n];
            let mut inside = 0;
            for f in target.faces() {
                match vertex_of_face(f).iter().find(|&&v| comp[v] != usize::MAX) {
                    Some(&v) => sizes[comp[v]] += 1,
                    None => inside += 1,
                }
            }
            let largest = sizes.iter().copied().max().unwrap_or(0);
            if sizes.iter().filter(|&&x| x > 0).count() < 2 {
                continue;
            }
            let score = (largest + inside, cut.len());
            if best.as_ref().is_none_or(|(a, b, _)| score < (*a, *b)) {
                best = Some((score.0, score.1, comp));
            }
        }
    }
    let (_, _, comp) = best?;
    Some(
        target
            .faces()
            .iter()
            .map(|f| {
                vertex_of_face(f)
                    .iter()
                    .find(|&&v| comp[v] != usize::MAX)
                    .map_or(0, |&v| comp[v] as u32 + 1)
            })
            .collect(),
    )
}

/// Component index of each vertex outside `cut` (`usize::MAX` on the cut),
/// numbered in order of their smallest vertex.
fn components(adj: &[Vec<bool>], cut: &[usize]) -> Vec<usize> {
    let n = adj.len();
    let mut comp = vec![usize::MAX; n];
    let mut on_cut = vec![false; n];
    for &c in cut {
        on_cut[c] = true;
    }
    let mut next = 0;
    for start in 0..n {
        if on_cut[start] || comp[start] != usize::MAX {
            continue;
        }
        comp[start] = next;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if adj[u][v] && !on_cut[v] && comp[v] == usize::MAX {
                    comp[v] = next;
                    queue.push_back(v);
                }
            }
        }
        next += 1;
    }
    comp
}

/// A minimum set of vertices separating the non-adjacent `s` and `t`, by
/// unit-capacity max flow on the split graph (`v_in = 2v`, `v_out = 2v+1`).
fn min_vertex_cut(adj: &[Vec<bool>], s: usize, t: usize) -> Vec<usize> {
    let n = adj.len();
    let m = 2 * n;
    let mut cap = vec![vec![0i32; m]; m];
    for v in 0..n {
        cap[2 * v][2 * v + 1] = if v == s || v == t { n as i32 } else { 1 };
        for u in 0..n {
            if adj[v][u] {
                cap[2 * v + 1][2 * u] = n as i32;
            }
        }
    }
    let (source, sink) = (2 * s + 1, 2 * t);
    loop {
        let mut prev = vec![usize::MAX; m];
        prev[source] = source;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for v in 0..m {
                if cap[u][v] > 0 && prev[v] == usize::MAX {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[sink] == usize::MAX {
            return (0..n)
                .filter(|&v| prev[2 * v] != usize::MAX && prev[2 * v + 1] == usize::MAX)
                .collect();
        }
        let mut v = sink;
        while v != source {
            let u = prev[v];
            cap[u][v] -= 1;
            cap[v][u] += 1;
            v = u;
        }
    }
}

/// Renumbers regions so that the separator comes last.
pub(crate) fn separator_last(mut regions: Vec<u32>) -> Vec<u32> {
    let last = regions.iter().copied().max().unwrap_or(0) + 1;
    for r in &mut regions {
        if *r == 0 {
            *r = last;
        }
    }
    regions
}

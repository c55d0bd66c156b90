//! Brute-force partition oracle shared by the integration tests.
//!
//! It knows nothing about the exact-cover engine: it takes an uncovered
//! face of least size, which has to be the bottom of its interval, and tries
//! every way of growing it by `k` further vertices.

#![allow(dead_code)]

use std::collections::BTreeSet;

use boolcomplex::{Face, Vertex};
use itertools::Itertools;

/// Whether `faces` splits into rank-`k` intervals, optionally with the
/// minima closed under taking subsets that lie in `faces`.
pub fn partition_exists(faces: &BTreeSet<Face>, k: usize, closed_minima: bool) -> bool {
    let vertices: Vec<Vertex> = faces
        .iter()
        .flat_map(|f| f.vertices().to_vec())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut uncovered = faces.clone();
    let mut minima = Vec::new();
    search(
        faces,
        &vertices,
        k,
        closed_minima,
        &mut uncovered,
        &mut minima,
    )
}

fn search(
    all: &BTreeSet<Face>,
    vertices: &[Vertex],
    k: usize,
    closed: bool,
    uncovered: &mut BTreeSet<Face>,
    minima: &mut Vec<Face>,
) -> bool {
    let Some(bottom) = uncovered
        .iter()
        .min_by_key(|f| (f.len(), (*f).clone()))
        .cloned()
    else {
        return !closed || {
            let set: BTreeSet<&Face> = minima.iter().collect();
            minima
                .iter()
                .all(|m| m.subsets().all(|s| !all.contains(&s) || set.contains(&s)))
        };
    };
    let free: Vec<Vertex> = vertices
        .iter()
        .copied()
        .filter(|v| !bottom.contains(*v))
        .collect();
    for extra in free.into_iter().combinations(k) {
        let top = bottom.union(&Face::new(extra.iter().copied()));
        let part: Vec<Face> = top
            .difference(&bottom)
            .subsets()
            .map(|s| bottom.union(&s))
            .collect();
        if !part.iter().all(|f| uncovered.contains(f)) {
            continue;
        }
        for f in &part {
            uncovered.remove(f);
        }
        minima.push(bottom.clone());
        if search(all, vertices, k, closed, uncovered, minima) {
            return true;
        }
        minima.pop();
        uncovered.extend(part);
    }
    false
}

/// Face sets of the rank-`k` boolean trees rooted at `root` inside `avail`.
fn trees_at(
    root: &Face,
    k: usize,
    avail: &BTreeSet<Face>,
    vertices: &[Vertex],
) -> Vec<BTreeSet<Face>> {
    if !avail.contains(root) {
        return Vec::new();
    }
    if k == 0 {
        return vec![BTreeSet::from([root.clone()])];
    }
    let mut out = BTreeSet::new();
    for lower in trees_at(root, k - 1, avail, vertices) {
        for &v in vertices.iter().filter(|&&v| !root.contains(v)) {
            for upper in trees_at(&root.with(v), k - 1, avail, vertices) {
                if lower.is_disjoint(&upper) {
                    out.insert(lower.union(&upper).cloned().collect::<BTreeSet<Face>>());
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Like [`partition_exists`] for rank-`k` boolean trees.
pub fn tree_partition_exists(faces: &BTreeSet<Face>, k: usize, closed_minima: bool) -> bool {
    let vertices: Vec<Vertex> = faces
        .iter()
        .flat_map(|f| f.vertices().to_vec())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut uncovered = faces.clone();
    let mut minima = Vec::new();
    tree_search(
        faces,
        &vertices,
        k,
        closed_minima,
        &mut uncovered,
        &mut minima,
    )
}

fn tree_search(
    all: &BTreeSet<Face>,
    vertices: &[Vertex],
    k: usize,
    closed: bool,
    uncovered: &mut BTreeSet<Face>,
    minima: &mut Vec<Face>,
) -> bool {
    let Some(root) = uncovered
        .iter()
        .min_by_key(|f| (f.len(), (*f).clone()))
        .cloned()
    else {
        let set: BTreeSet<&Face> = minima.iter().collect();
        return !closed
            || minima
                .iter()
                .all(|m| m.subsets().all(|s| !all.contains(&s) || set.contains(&s)));
    };
    for part in trees_at(&root, k, uncovered, vertices) {
        for f in &part {
            uncovered.remove(f);
        }
        minima.push(root.clone());
        if tree_search(all, vertices, k, closed, uncovered, minima) {
            return true;
        }
        minima.pop();
        uncovered.extend(part);
    }
    false
}

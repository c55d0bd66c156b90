//! Facet-ridge graphs, stacked shellings and the rank-k decompositions of
//! stacked complexes.
//!
//! A shelling `F_1, …, F_j` of a pure d-complex is stacked when each `F_i`
//! (i > 1) meets the complex generated by the earlier facets in a single
//! (d-1)-simplex. Equivalently `F_i` has exactly one vertex `v_i` not seen
//! before and `F_i ∖ {v_i}` is already a face, so the faces added by `F_i`
//! form the interval `[v_i, F_i]`.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Face, SimplicialComplex, Vertex};
use crate::decomp::{
    find_interval_decomposition, verify_certificate, BooleanInterval, Decomposition,
    DecompositionCertificate, ShellingStep, SolverConfig, Target,
};
use crate::homology::{acyclicity_depth, is_k_fold_acyclic, KFoldReport};
use crate::linalg::FieldPrime;

/// Facets as nodes; two facets of equal size are adjacent when they share
/// all but one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetRidgeGraph {
    pub facets: Vec<Face>,
    pub adjacency: Vec<Vec<usize>>,
}

impl FacetRidgeGraph {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, nb) in self.adjacency.iter().enumerate() {
            out.extend(nb.iter().filter(|&&b| a < b).map(|&b| (a, b)));
        }
        out
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.facets.len()];
        let mut count = 0;
        for s in 0..self.facets.len() {
            if !seen[s] {
                count += 1;
                self.bfs(s, &mut seen);
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Breadth-first visiting order from `root`, with each node's parent.
    pub fn bfs_tree(&self, root: usize) -> Vec<(usize, Option<usize>)> {
        let mut seen = vec![false; self.facets.len()];
        self.bfs(root, &mut seen)
    }

    fn bfs(&self, root: usize, seen: &mut [bool]) -> Vec<(usize, Option<usize>)> {
        let mut out = vec![(root, None)];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(a) = queue.pop_front() {
            for &b in &self.adjacency[a] {
                if !seen[b] {
                    seen[b] = true;
                    out.push((b, Some(a)));
                    queue.push_back(b);
                }
            }
        }
        out
    }
}

pub fn facet_ridge_graph(c: &SimplicialComplex) -> FacetRidgeGraph {
    let facets = c.facets();
    let mut adjacency = vec![Vec::new(); facets.len()];
    for a in 0..facets.len() {
        for b in a + 1..facets.len() {
            let (fa, fb) = (&facets[a], &facets[b]);
            if fa.len() == fb.len() && !fa.is_empty() && fa.difference(fb).len() == 1 {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
    }
    FacetRidgeGraph { facets, adjacency }
}

/// A verified stacked shelling order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StackedShelling {
    order: Vec<Face>,
    new_vertices: Vec<Option<Vertex>>,
}

impl StackedShelling {
    /// Checks `order` against the definition; `None` if it is not a stacked
    /// shelling of the complex it generates.
    pub fn from_order(order: Vec<Face>) -> Option<Self> {
        let first = order.first()?;
        let size = first.len();
        let mut seen: BTreeSet<Vertex> = first.vertices().iter().copied().collect();
        let mut faces: HashSet<Face> = first.subsets().collect();
        let mut new_vertices = vec![None];
        for f in &order[1..] {
            if f.len() != size {
                return None;
            }
            let v = new_vertex(f, &seen, &faces)?;
            new_vertices.push(Some(v));
            seen.insert(v);
            faces.extend(f.subsets());
        }
        Some(StackedShelling {
            order,
            new_vertices,
        })
    }

    pub fn order(&self) -> &[Face] {
        &self.order
    }

    /// `None` for the first facet, then `v_2, …, v_j`.
    pub fn new_vertices(&self) -> &[Option<Vertex>] {
        &self.new_vertices
    }

    pub fn dimension(&self) -> isize {
        self.order[0].dim()
    }

    pub fn complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_facets(self.order.iter().cloned())
    }

    /// `[∅, F_1]` followed by `[v_i, F_i]`; any prefix covers exactly the
    /// complex generated by the corresponding facets.
    pub fn intervals(&self) -> Vec<BooleanInterval> {
        self.order
            .iter()
            .zip(&self.new_vertices)
            .map(|(f, v)| {
                let min = v.map_or_else(Face::empty, |v| Face::from([v]));
                BooleanInterval::new(min, f.clone())
            })
            .collect()
    }

    /// Vertices in order of first appearance: `F_1` by id, then `v_2, v_3, …`.
    pub fn vertex_order(&self) -> Vec<Vertex> {
        let mut out = self.order[0].vertices().to_vec();
        out.extend(self.new_vertices.iter().flatten());
        out
    }

    pub fn steps(&self) -> Vec<ShellingStep> {
        self.order
            .iter()
            .zip(&self.new_vertices)
            .map(|(f, v)| ShellingStep {
                facet: f.clone(),
                new_vertex: *v,
            })
            .collect()
    }
}

/// The unique vertex of `f` outside `seen`, provided `f` minus it is already
/// a face.
fn new_vertex(f: &Face, seen: &BTreeSet<Vertex>, faces: &HashSet<Face>) -> Option<Vertex> {
    let mut fresh = f.vertices().iter().filter(|v| !seen.contains(v));
    let v = *fresh.next()?;
    if fresh.next().is_some() || !faces.contains(&f.without(v)) {
        return None;
    }
    Some(v)
}

/// Complete search for a stacked shelling.
pub fn find_stacked_shelling(c: &SimplicialComplex) -> Option<StackedShelling> {
    if c.is_void() || !c.is_pure() {
        return None;
    }
    let facets = c.facets();
    let d = c.dimension();
    // a stacked shelling of j facets has exactly d + j vertices
    if d >= 0 && c.vertices().len() as isize != d + facets.len() as isize {
        return None;
    }
    let mut failed: HashSet<Vec<bool>> = HashSet::new();
    for start in 0..facets.len() {
        let mut used = vec![false; facets.len()];
        used[start] = true;
        let mut order = vec![start];
        let seen: BTreeSet<Vertex> = facets[start].vertices().iter().copied().collect();
        let faces: HashSet<Face> = facets[start].subsets().collect();
        if extend(&facets, &mut used, &mut order, seen, faces, &mut failed) {
            let order = order.into_iter().map(|i| facets[i].clone()).collect();
            return StackedShelling::from_order(order);
        }
    }
    None
}

fn extend(
    facets: &[Face],
    used: &mut Vec<bool>,
    order: &mut Vec<usize>,
    seen: BTreeSet<Vertex>,
    faces: HashSet<Face>,
    failed: &mut HashSet<Vec<bool>>,
) -> bool {
    if order.len() == facets.len() {
        return true;
    }
    if failed.contains(used) {
        return false;
    }
    for i in 0..facets.len() {
        if used[i] {
            continue;
        }
        let Some(v) = new_vertex(&facets[i], &seen, &faces) else {
            continue;
        };
        used[i] = true;
        order.push(i);
        let mut seen2 = seen.clone();
        seen2.insert(v);
        let mut faces2 = faces.clone();
        faces2.extend(facets[i].subsets());
        if extend(facets, used, order, seen2, faces2, failed) {
            return true;
        }
        order.pop();
        used[i] = false;
    }
    failed.insert(used.clone());
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StackedError {
    #[error("not-pure: facets have different dimensions")]
    NotPure,
    #[error("disconnected: the facet-ridge graph has {components} components")]
    Disconnected { components: usize },
    #[error("the void complex has no facets")]
    Void,
    #[error("spanning-tree order fails at position {position}: facet {facet} does not add exactly one new vertex over a ridge")]
    NotStacked { position: usize, facet: Face },
    #[error("rank {k} exceeds the dimension {d}")]
    RankTooLarge { k: usize, d: isize },
    #[error("no rank-{k} decomposition with subcomplex minima exists for a stacked complex")]
    Contradiction { k: usize },
    #[error("fallback search exhausted its budget after {nodes} nodes")]
    Unknown { nodes: u64 },
}

/// Orders the facets breadth-first along a spanning tree of the
/// facet-ridge graph, starting at the lexicographically least facet, and
/// verifies the result is a stacked shelling.
pub fn shelling_from_spanning_tree(c: &SimplicialComplex) -> Result<StackedShelling, StackedError> {
    if c.is_void() {
        return Err(StackedError::Void);
    }
    if !c.is_pure() {
        return Err(StackedError::NotPure);
    }
    let graph = facet_ridge_graph(c);
    let components = graph.component_count();
    if components > 1 {
        return Err(StackedError::Disconnected { components });
    }
    let order: Vec<Face> = graph
        .bfs_tree(0)
        .into_iter()
        .map(|(i, _)| graph.facets[i].clone())
        .collect();
    match StackedShelling::from_order(order.clone()) {
        Some(s) => Ok(s),
        None => {
            let position = (1..order.len())
                .find(|&i| StackedShelling::from_order(order[..=i].to_vec()).is_none())
                .unwrap_or(0);
            log::debug!("spanning-tree order is not stacked at position {position}");
            Err(StackedError::NotStacked {
                position,
                facet: order[position].clone(),
            })
        }
    }
}

#[derive(Debug, Clone)]
pub struct StackedDecomposition {
    pub certificate: DecompositionCertificate,
    /// The vertex-order refinement did not give closed minima and the
    /// certificate came from the exact-cover search instead.
    pub used_fallback: bool,
}

/// Rank-`k` interval decomposition of a stacked complex with minima forming
/// a subcomplex.
///
/// Each interval `[∅, F_1]`, `[v_i, F_i]` of the shelling is split along the
/// `k` latest-appearing vertices of `F_1`, resp. `F_i ∖ {v_i}`. When the
/// resulting minima are not closed, the exact-cover search is used.
pub fn stacked_decomposition(
    shelling: &StackedShelling,
    k: usize,
    config: &SolverConfig,
) -> Result<StackedDecomposition, StackedError> {
    let d = shelling.dimension();
    if k as isize > d {
        return Err(StackedError::RankTooLarge { k, d });
    }
    let appear: std::collections::HashMap<Vertex, usize> = shelling
        .vertex_order()
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let latest = |f: &Face| -> Face {
        let mut vs = f.vertices().to_vec();
        vs.sort_by_key(|v| std::cmp::Reverse(appear[v]));
        Face::new(vs.into_iter().take(k))
    };

    let mut parts = Vec::new();
    for iv in shelling.intervals() {
        let free = iv.max.difference(&iv.min);
        let top = latest(&free);
        for sigma in free.difference(&top).subsets() {
            let lo = iv.min.union(&sigma);
            parts.push(BooleanInterval::new(lo.clone(), lo.union(&top)));
        }
    }

    let complex = shelling.complex();
    let target = Target::from_complex(&complex);
    let mut cert =
        DecompositionCertificate::from_intervals(&target, k, parts, 0, config.seed, None);
    let mut used_fallback = false;
    if !cert.minima_form_subcomplex || !verify_certificate(&cert, &target) {
        log::warn!(
            "stacked refinement at rank {k} gave unclosed minima on a {}-facet complex; using exact cover",
            shelling.order().len()
        );
        used_fallback = true;
        cert = match find_interval_decomposition(&target, k, true, config) {
            Decomposition::Found(c) => c,
            Decomposition::Infeasible(_) => return Err(StackedError::Contradiction { k }),
            Decomposition::Unknown { nodes } => return Err(StackedError::Unknown { nodes }),
        };
    }
    cert.shelling = Some(shelling.steps());
    debug_assert!(verify_certificate(&cert, &target));
    Ok(StackedDecomposition {
        certificate: cert,
        used_fallback,
    })
}

/// Both sides of "d-dimensional and d-fold acyclic ⟺ stacked".
#[derive(Debug, Clone, Serialize)]
pub struct StackedReport {
    pub dimension: isize,
    pub pure: bool,
    pub facet_ridge_connected: bool,
    /// Largest k with the complex k-fold acyclic.
    pub acyclicity_depth: usize,
    pub d_fold: KFoldReport,
    pub stacked: bool,
    pub shelling: Option<Vec<ShellingStep>>,
    /// The two predicates agree (always true for non-pure inputs, where
    /// neither can hold).
    pub consistent: bool,
}

pub fn is_stacked_equiv_dfold(c: &SimplicialComplex, field: FieldPrime) -> StackedReport {
    let d = c.dimension();
    let d_fold = is_k_fold_acyclic(c, d.max(0) as usize, field);
    let shelling = find_stacked_shelling(c);
    let stacked = shelling.is_some();
    let pure = c.is_pure();
    StackedReport {
        dimension: d,
        pure,
        facet_ridge_connected: facet_ridge_graph(c).is_connected(),
        acyclicity_depth: acyclicity_depth(c, field),
        consistent: d_fold.holds == stacked,
        d_fold,
        stacked,
        shelling: shelling.map(|s| s.steps()),
    }
}

use std::cell::Cell;
use std::collections::HashSet;
use std::ops::ControlFlow;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::certificate::{Part, PartKind, SolverStats};
use super::exact::{max_bipartite_matching, BudgetExceeded, Closure, Problem, Search};
use super::interval::run_first;
use super::separator::separator_regions;
use super::{
    BooleanInterval, Decomposition, DecompositionCertificate, Infeasible, SolverConfig, Target,
};
use crate::complex::Face;

/// A boolean tree: a single face (rank 0), or two disjoint trees of equal
/// rank whose roots form a cover relation, rooted at the lower root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BooleanTree {
    root: Face,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    split: Option<Box<(BooleanTree, BooleanTree)>>,
}

impl BooleanTree {
    pub fn leaf(face: Face) -> Self {
        BooleanTree {
            root: face,
            split: None,
        }
    }

    /// Joins `lower` and `upper`; panics unless `root(upper)` covers
    /// `root(lower)` and the ranks agree.
    pub fn join(lower: BooleanTree, upper: BooleanTree) -> Self {
        assert!(
            covers(&upper.root, &lower.root),
            "roots do not form a cover"
        );
        assert_eq!(lower.rank(), upper.rank());
        BooleanTree {
            root: lower.root.clone(),
            split: Some(Box::new((lower, upper))),
        }
    }

    pub fn from_interval(i: &BooleanInterval) -> Self {
        fn build(min: &Face, free: &[u32]) -> BooleanTree {
            match free.split_last() {
                None => BooleanTree::leaf(min.clone()),
                Some((&v, rest)) => BooleanTree::join(build(min, rest), build(&min.with(v), rest)),
            }
        }
        build(&i.min, i.max.difference(&i.min).vertices())
    }

    pub fn root(&self) -> &Face {
        &self.root
    }

    pub fn children(&self) -> Option<(&BooleanTree, &BooleanTree)> {
        self.split.as_deref().map(|(a, b)| (a, b))
    }

    /// Depth of the leftmost branch.
    pub fn rank(&self) -> usize {
        match &self.split {
            None => 0,
            Some(pair) => 1 + pair.0.rank(),
        }
    }

    pub fn faces(&self) -> Vec<Face> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<Face>) {
        match &self.split {
            None => out.push(self.root.clone()),
            Some(pair) => {
                pair.0.collect(out);
                pair.1.collect(out);
            }
        }
    }

    /// Checks the recursive definition: equal ranks, cover relation between
    /// the subtree roots, root inherited from the lower subtree, and all
    /// faces distinct.
    pub fn is_valid_shape(&self) -> bool {
        fn shape(t: &BooleanTree) -> Option<usize> {
            match &t.split {
                None => Some(0),
                Some(pair) => {
                    let (a, b) = (&pair.0, &pair.1);
                    let (ra, rb) = (shape(a)?, shape(b)?);
                    (ra == rb && t.root == a.root && covers(&b.root, &a.root)).then_some(ra + 1)
                }
            }
        }
        if shape(self).is_none() {
            return false;
        }
        let faces = self.faces();
        let distinct: HashSet<&Face> = faces.iter().collect();
        distinct.len() == faces.len()
    }
}

fn covers(upper: &Face, lower: &Face) -> bool {
    upper.len() == lower.len() + 1 && lower.is_subset(upper)
}

struct TreeSearch<'a> {
    target: &'a Target,
    k: usize,
    closure: Option<Closure>,
    /// Apply the closure constraint in every round rather than only the last.
    every_round: bool,
    nodes: Cell<u64>,
    budget: u64,
}

impl TreeSearch<'_> {
    fn round(
        &self,
        level: usize,
        forest: Vec<BooleanTree>,
    ) -> Result<Option<Vec<BooleanTree>>, BudgetExceeded> {
        if level == self.k {
            return Ok(Some(forest));
        }
        let t = self.target;
        let root_idx: Vec<usize> = forest
            .iter()
            .map(|tr| t.index_of(tr.root()).expect("root in target"))
            .collect();
        let mut slot = vec![usize::MAX; t.len()];
        for (pos, &i) in root_idx.iter().enumerate() {
            slot[i] = pos;
        }

        // cover pairs among the current roots, in (lower, upper) order
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for (pos, tr) in forest.iter().enumerate() {
            for v in tr.root().vertices().iter().copied() {
                if let Some(j) = t.index_of(&tr.root().without(v)) {
                    if slot[j] != usize::MAX {
                        pairs.push((slot[j], pos));
                    }
                }
            }
        }
        pairs.sort_by(|a, b| {
            (forest[a.0].root(), forest[a.1].root()).cmp(&(forest[b.0].root(), forest[b.1].root()))
        });
        if !self.has_perfect_matching(&forest, &pairs) {
            return Ok(None);
        }

        let blocks: Vec<Vec<usize>> = pairs
            .iter()
            .map(|&(a, b)| {
                let mut v = vec![root_idx[a], root_idx[b]];
                v.sort_unstable();
                v
            })
            .collect();
        let mins = pairs.iter().map(|&(a, _)| root_idx[a]).collect();
        let grade = t.faces().iter().map(Face::len).collect();
        let problem = Problem::new(t.len(), blocks, mins, grade, 1);
        let mut active = vec![false; t.len()];
        for &i in &root_idx {
            active[i] = true;
        }
        let closure = if self.every_round || level + 1 == self.k {
            self.closure.as_ref()
        } else {
            None
        };

        let mut search = Search::new(&problem, &active, closure, &self.nodes, self.budget);
        let mut outcome: Result<Option<Vec<BooleanTree>>, BudgetExceeded> = Ok(None);
        let _ = search.for_each_solution(|chosen| {
            let mut merged: Vec<(Face, BooleanTree)> = chosen
                .iter()
                .map(|&b| {
                    let (lo, hi) = pairs[b];
                    let tree = BooleanTree::join(forest[lo].clone(), forest[hi].clone());
                    (tree.root().clone(), tree)
                })
                .collect();
            merged.sort_by(|a, b| a.0.cmp(&b.0));
            let next = merged.into_iter().map(|(_, tr)| tr).collect();
            match self.round(level + 1, next) {
                Ok(None) => ControlFlow::Continue(()),
                other => {
                    outcome = other;
                    ControlFlow::Break(())
                }
            }
        })?;
        outcome
    }

    /// Cover pairs join faces of different size parity, so a perfect
    /// matching is a bipartite question.
    fn has_perfect_matching(&self, forest: &[BooleanTree], pairs: &[(usize, usize)]) -> bool {
        if !forest.len().is_multiple_of(2) {
            return false;
        }
        let mut side = vec![usize::MAX; forest.len()];
        let (mut left, mut right) = (0, 0);
        for (pos, tr) in forest.iter().enumerate() {
            if tr.root().len() % 2 == 0 {
                side[pos] = left;
                left += 1;
            } else {
                side[pos] = right;
                right += 1;
            }
        }
        if left != right {
            return false;
        }
        let mut adj = vec![Vec::new(); left];
        for &(a, b) in pairs {
            let (even, odd) = if forest[a].root().len().is_multiple_of(2) {
                (a, b)
            } else {
                (b, a)
            };
            adj[side[even]].push(side[odd]);
        }
        max_bipartite_matching(&adj, right) == left
    }
}

/// Above this many candidate trees the search switches to building trees
/// round by round.
const MAX_CANDIDATES: usize = 1 << 20;

/// Every rank-`k` boolean tree inside the target, one per face set, or
/// `None` once there are more than `limit`.
fn enumerate_trees(target: &Target, k: usize, limit: usize) -> Option<Vec<BooleanTree>> {
    // up[j]: faces covering face j
    let mut up: Vec<Vec<usize>> = vec![Vec::new(); target.len()];
    for (i, f) in target.faces().iter().enumerate() {
        for &v in f.vertices() {
            if let Some(j) = target.index_of(&f.without(v)) {
                up[j].push(i);
            }
        }
    }
    // level[r]: trees rooted at face r, with their sorted face indices
    let mut level: Vec<Vec<(Vec<usize>, BooleanTree)>> = target
        .faces()
        .iter()
        .enumerate()
        .map(|(i, f)| vec![(vec![i], BooleanTree::leaf(f.clone()))])
        .collect();
    let mut total = target.len();
    for _ in 0..k {
        let mut next: Vec<Vec<(Vec<usize>, BooleanTree)>> = vec![Vec::new(); target.len()];
        total = 0;
        for r in 0..target.len() {
            let mut seen: HashSet<Vec<usize>> = HashSet::new();
            for (lower_items, lower) in &level[r] {
                for &s in &up[r] {
                    for (upper_items, upper) in &level[s] {
                        if lower_items
                            .iter()
                            .any(|i| upper_items.binary_search(i).is_ok())
                        {
                            continue;
                        }
                        let mut items: Vec<usize> =
                            lower_items.iter().chain(upper_items).copied().collect();
                        items.sort_unstable();
                        if seen.insert(items.clone()) {
                            next[r].push((items, BooleanTree::join(lower.clone(), upper.clone())));
                            total += 1;
                            if total > limit {
                                return None;
                            }
                        }
                    }
                }
            }
        }
        level = next;
    }
    debug_assert_eq!(total, level.iter().map(Vec::len).sum::<usize>());
    Some(level.into_iter().flatten().map(|(_, t)| t).collect())
}

fn cover_with_trees(
    target: &Target,
    k: usize,
    candidates: &[BooleanTree],
    regions: Option<Vec<u32>>,
    closure: Option<&Closure>,
    config: &SolverConfig,
    nodes: &Cell<u64>,
) -> Result<Option<Vec<BooleanTree>>, BudgetExceeded> {
    let blocks = candidates
        .iter()
        .map(|tr| {
            let mut items: Vec<usize> = tr
                .faces()
                .iter()
                .map(|f| target.index_of(f).unwrap())
                .collect();
            items.sort_unstable();
            items
        })
        .collect();
    let mins = candidates
        .iter()
        .map(|tr| target.index_of(tr.root()).unwrap())
        .collect();
    let grade = target.faces().iter().map(Face::len).collect();
    let mut problem = Problem::new(target.len(), blocks, mins, grade, k);
    problem.region = regions;
    let active = vec![true; target.len()];
    run_first(&problem, &active, closure, config, nodes)
        .map(|sol| sol.map(|bs| bs.into_iter().map(|b| candidates[b].clone()).collect()))
}

/// Decides whether `target` is a disjoint union of rank-`k` boolean trees.
///
/// All rank-`k` trees inside the target are enumerated (one per face set)
/// and handed to the exact-cover search, with the minima constraint
/// propagated during the search when requested. `Infeasible` is a proof of
/// non-existence. When there are too many candidate trees the search
/// instead builds trees in `k` rounds, each round perfectly matching the
/// current roots along cover relations and backtracking over all such
/// matchings.
pub fn find_tree_decomposition(
    target: &Target,
    k: usize,
    require_subcomplex_minima: bool,
    config: &SolverConfig,
) -> Decomposition {
    let start = Instant::now();
    let part_size = 1usize << k;
    if !target.len().is_multiple_of(part_size) {
        return Decomposition::Infeasible(Infeasible::Count {
            faces: target.len(),
            part_size,
        });
    }
    let closure = require_subcomplex_minima.then(|| {
        let (below, above) = target.closure_tables();
        Closure { below, above }
    });
    let nodes = Cell::new(0);
    let result = match enumerate_trees(target, k, MAX_CANDIDATES) {
        Some(candidates) => {
            let regions = separator_regions(target);
            let mut found = Ok(None);
            if let Some(r) = &regions {
                // first try trees that stay inside or outside the separator
                let inner: Vec<BooleanTree> = candidates
                    .iter()
                    .filter(|tr| {
                        let inside = |f: &Face| r[target.index_of(f).unwrap()] == 0;
                        inside(tr.root()) == tr.faces().iter().all(inside)
                    })
                    .cloned()
                    .collect();
                let phase = SolverConfig {
                    node_budget: config.node_budget / 10,
                    ..*config
                };
                found = cover_with_trees(
                    target,
                    k,
                    &inner,
                    regions.clone(),
                    closure.as_ref(),
                    &phase,
                    &nodes,
                );
                log::debug!(
                    "tree search: separator-respecting phase found {:?}",
                    found.as_ref().map(Option::is_some)
                );
            }
            match found {
                Ok(Some(trees)) => Ok(Some(trees)),
                _ => {
                    let rest = SolverConfig {
                        node_budget: config.node_budget.saturating_sub(nodes.get()),
                        ..*config
                    };
                    let local = Cell::new(0);
                    let r = cover_with_trees(
                        target,
                        k,
                        &candidates,
                        regions,
                        closure.as_ref(),
                        &rest,
                        &local,
                    );
                    nodes.set(nodes.get() + local.get());
                    r
                }
            }
        }
        None => {
            log::debug!("tree search: too many candidate trees, building by rounds");
            let leaves: Vec<BooleanTree> = target
                .faces()
                .iter()
                .cloned()
                .map(BooleanTree::leaf)
                .collect();
            let mut search = TreeSearch {
                target,
                k,
                closure,
                every_round: true,
                nodes: Cell::new(0),
                budget: config.node_budget,
            };
            let mut result = search.round(0, leaves.clone());
            if matches!(result, Ok(None)) && require_subcomplex_minima && k > 1 {
                search.every_round = false;
                result = search.round(0, leaves);
            }
            nodes.set(search.nodes.get());
            result
        }
    };
    let nodes = nodes.get();
    match result {
        Err(BudgetExceeded) => Decomposition::Unknown { nodes },
        Ok(None) => Decomposition::Infeasible(Infeasible::Exhausted {
            nodes,
            weighting: None,
        }),
        Ok(Some(trees)) => Decomposition::Found(DecompositionCertificate::build(
            target,
            PartKind::Tree,
            k,
            trees.into_iter().map(Part::Tree).collect(),
            SolverStats {
                nodes,
                seed: config.seed,
                wallclock_ms: config.timing.then(|| start.elapsed().as_millis() as u64),
            },
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{find_interval_decomposition, verify_certificate};
    use super::*;
    use crate::complex::SimplicialComplex;

    fn f(s: &str) -> Face {
        Face::new(s.chars().map(|c| c.to_digit(10).unwrap()))
    }

    fn cx(facets: &[&str]) -> SimplicialComplex {
        SimplicialComplex::from_facets(facets.iter().map(|s| f(s)))
    }

    #[test]
    fn interval_as_tree() {
        let t = BooleanTree::from_interval(&BooleanInterval::new(f("1"), f("123")));
        assert_eq!(t.rank(), 2);
        assert!(t.is_valid_shape());
        let mut faces = t.faces();
        faces.sort();
        assert_eq!(faces, vec![f("1"), f("12"), f("123"), f("13")]);
        assert_eq!(t.root(), &f("1"));
    }

    #[test]
    fn non_interval_tree() {
        let a = BooleanTree::join(BooleanTree::leaf(f("1")), BooleanTree::leaf(f("12")));
        let b = BooleanTree::join(BooleanTree::leaf(f("13")), BooleanTree::leaf(f("134")));
        let t = BooleanTree::join(a, b);
        assert!(t.is_valid_shape());
        let mut faces = t.faces();
        faces.sort();
        // not an interval: 123 is missing
        assert_eq!(faces, vec![f("1"), f("12"), f("13"), f("134")]);
    }

    #[test]
    fn json_shape() {
        let t = BooleanTree::join(BooleanTree::leaf(f("")), BooleanTree::leaf(f("1")));
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"root":[],"split":[{"root":[]},{"root":[1]}]}"#);
        assert_eq!(serde_json::from_str::<BooleanTree>(&s).unwrap(), t);
    }

    #[test]
    fn rank_zero_is_every_face() {
        let t = Target::from_complex(&cx(&["1"]));
        let cert = find_tree_decomposition(&t, 0, true, &SolverConfig::default())
            .into_certificate()
            .unwrap();
        assert_eq!(cert.parts.len(), 2);
        assert!(verify_certificate(&cert, &t));
    }

    #[test]
    fn trees_exist_where_intervals_do() {
        let c = cx(&["1234", "1235", "2345", "2456", "3456"]);
        let t = Target::from_complex(&c);
        for k in 1..=2 {
            assert!(find_interval_decomposition(&t, k, true, &SolverConfig::default()).is_found());
            let cert = find_tree_decomposition(&t, k, true, &SolverConfig::default())
                .into_certificate()
                .unwrap();
            assert!(verify_certificate(&cert, &t));
            assert!(cert.minima_form_subcomplex);
        }
    }

    #[test]
    fn rank_one_trees_on_small_graphs() {
        // 7 faces, so no pairs cover it
        let t = Target::from_complex(&cx(&["12", "13", "23"]));
        assert!(find_tree_decomposition(&t, 1, false, &SolverConfig::default()).is_infeasible());
        let path = Target::from_complex(&cx(&["12", "23"]));
        assert!(find_tree_decomposition(&path, 1, true, &SolverConfig::default()).is_found());
        let two = Target::from_complex(&cx(&["12", "34", "5"]));
        let d = find_tree_decomposition(&two, 1, true, &SolverConfig::default());
        assert!(d.is_infeasible(), "{d:?}");
    }

    #[test]
    fn tiny_budget_is_unknown() {
        let c = cx(&["1234", "1235", "2345", "2456", "3456"]);
        let cfg = SolverConfig {
            node_budget: 3,
            ..Default::default()
        };
        assert!(find_tree_decomposition(&Target::from_complex(&c), 2, true, &cfg).is_unknown());
    }
}
